#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "holgeo/complex_ode.hpp"
#include "holgeo/expr.hpp"
#include "holgeo/result.hpp"

namespace holgeo {

/// Scalar right-hand side w' = F(w, z) for ODE-defined germs.
using ScalarRhs = std::function<Result<Cx>(Cx w, Cx z)>;

/// Unwrapped argument of the operand of every sqrt/log node, indexed by
/// the node's pre-order ordinal. Carrying these phases along a path is
/// what keeps a multi-valued closed form on one branch: phases are
/// unwrapped continuously and never re-principalized mid-path.
struct BranchState {
  std::vector<double> phase;
};

struct BranchEval {
  Cx value{0.0, 0.0};
  BranchState state;          // phases updated at the evaluation point
  double max_phase_step = 0.0;   // largest |unwrap delta| among branch nodes
  double min_critical_mag = 1e300;  // smallest denominator / branch operand seen
};

/// Branch state with every phase set to the principal argument at `point`.
Result<BranchState> principal_branch_state(const Expr& expr, Cx point);

/// Evaluate a one-variable expression at `point`, choosing for every
/// sqrt/log node the branch continuous with `state`.
Result<BranchEval> eval_branched(const Expr& expr, Cx point, const BranchState& state);

struct BranchDual {
  Cx value{0.0, 0.0};
  Cx derivative{0.0, 0.0};
};

/// Value and d/du at `point` on the branch pinned by `state` (held, not
/// updated).
Result<BranchDual> eval_branched_dual(const Expr& expr, Cx point, const BranchState& state);

/// A function germ: closed-form expression with branch bookkeeping, or an
/// ODE-defined value. Immutable; continuation produces new germs.
class Germ {
public:
  static Result<Germ> closed_form(Expr expr, Cx base_point);
  static Result<Germ> closed_form(Expr expr, Cx base_point, BranchState state);
  static Result<Germ> ode_defined(ScalarRhs rhs, Cx base_point, Cx value);

  Cx base_point() const { return base_; }
  Cx value() const { return value_; }
  bool is_closed_form() const { return expr_.has_value(); }

  const Expr& expression() const { return *expr_; }
  const BranchState& branch_state() const { return state_; }
  const ScalarRhs& rhs() const { return rhs_; }

private:
  Germ() = default;
  Cx base_{0.0, 0.0};
  Cx value_{0.0, 0.0};
  std::optional<Expr> expr_;
  BranchState state_;
  ScalarRhs rhs_;
};

struct ContinuationOptions {
  double return_tol = 1e-10;      // value-return tolerance in monodromy
  double convergence_tol = 1e-6;  // Cauchy-tail tolerance for L-singularity
  IntegratorConfig ode_config{};  // used for ODE-defined germs
};

/// Continue a germ along a path starting at its base point. Fails with
/// hit_singularity when the path passes within numerical reach of a pole
/// or branch point of the representation.
Result<Germ> continue_germ(const Germ& germ, const ComplexPath& path,
                           const ContinuationOptions& options = {});

enum class MonodromyClass { trivial, finite_order, non_returning, logarithmic_suspected };

struct MonodromyResult {
  Germ germ_out;               // germ after one loop traversal
  MonodromyClass classification;
  int order = 0;               // finite_order: smallest returning k; otherwise turns probed
  Cx limit{0.0, 0.0};          // logarithmic_suspected: observed limit point
  std::vector<Cx> loop_values;  // germ value after each traversal
};

/// Classify the monodromy of a germ around a closed loop through its base
/// point, probing at most max_turns traversals. Values converging toward
/// a finite point without ever returning are flagged logarithmic_suspected;
/// this is a bounded heuristic, not a proof.
Result<MonodromyResult> monodromy(const Germ& germ, const ComplexPath& loop,
                                  int max_turns, const ContinuationOptions& options = {});

struct CoveragePoint {
  double t;
  Cx value;
};

struct RealCoverage {
  std::vector<CoveragePoint> reached;  // sorted by t
  std::vector<double> obstructions;    // singular abscissae met during the sweep
};

/// Sample which real abscissae in [t0, t1] the germ reaches by
/// continuation along real segments, flanking detected singularities with
/// semicircular detours (upper half-plane first, then lower).
RealCoverage real_coverage(const Germ& germ, double detour_radius, double t0, double t1,
                           int samples, const ContinuationOptions& options = {});

}  // namespace holgeo
