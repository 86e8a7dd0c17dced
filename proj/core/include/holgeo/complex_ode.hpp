#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "holgeo/complex_path.hpp"
#include "holgeo/result.hpp"

namespace holgeo {

/// Right-hand side of w' = F(w, z). Writes dw/dz into `dw`; a returned
/// error terminates the integration with a field_failure.
using OdeRhs =
    std::function<Result<void>(std::span<const Cx> w, Cx z, std::span<Cx> dw)>;

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.0;  // arc length; 0 resolves to path length / 8
  double min_step = 0.0;  // arc length; 0 resolves to 1e-12 * path length
  double blowup_threshold = 1e8;

  /// Materialize the automatic step bounds for a concrete path length.
  IntegratorConfig resolved(double path_length) const;
};

enum class TerminationReason { completed, singularity, step_collapse, field_failure };
enum class SingularityKind { none, pole, suspected_branch_point };

struct Termination {
  TerminationReason reason = TerminationReason::completed;
  SingularityKind kind = SingularityKind::none;
  Cx z{0.0, 0.0};  // estimated location for non-completed terminations
  std::string detail;
};

struct TrajectorySample {
  double s;  // arc length along the path
  Cx z;
  std::vector<Cx> w;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  Termination termination;

  bool completed() const { return termination.reason == TerminationReason::completed; }
  const std::vector<Cx>& final_state() const { return samples.back().w; }
  Cx final_z() const { return samples.back().z; }
};

/// Adaptive embedded Runge-Kutta 5(4) integration of w' = F(w, z) along a
/// piecewise path, stepping segment by segment so the path tangent stays
/// smooth within every step. Blow-up beyond config.blowup_threshold is
/// reported as a pole; a step-size collapse with bounded state as a
/// suspected branch point.
Trajectory integrate_along(const OdeRhs& field, std::span<const Cx> w0,
                           const ComplexPath& path, const IntegratorConfig& config = {});

struct LoopResult {
  std::vector<Cx> w_final;
  Trajectory trajectory;
};

/// Continuation of w0 around a closed loop; w_final may differ from w0
/// when the monodromy is nontrivial.
Result<LoopResult> integrate_loop(const OdeRhs& field, std::span<const Cx> w0,
                                  const ComplexPath& loop,
                                  const IntegratorConfig& config = {});

/// CSV columns: s, Re(z), Im(z), Re(w_1), Im(w_1), ..., Re(w_M), Im(w_M).
void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out);

const char* termination_reason_name(TerminationReason reason);
const char* singularity_kind_name(SingularityKind kind);

}  // namespace holgeo
