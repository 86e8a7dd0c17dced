#pragma once

#include <optional>
#include <vector>

#include "holgeo/complex_ode.hpp"
#include "holgeo/metric.hpp"

namespace holgeo {

/// Initial data of a geodesic: complex time, positions, velocities.
struct GeodesicGerm {
  Cx z0{0.0, 0.0};
  std::vector<Cx> position;
  std::vector<Cx> velocity;
};

/// First-order field over the 2N state (u, u') with
/// (u, u') |-> (u', -Gamma^k_ij(u) u'^i u'^j).
OdeRhs geodesic_field(const MetricSpec& metric);
/// Same system through the closed-form warped Christoffel symbols.
OdeRhs geodesic_field(const WarpedSpec& warped);

enum class FirstIntegralMode { u1_nonconstant, u1_constant };

/// Conserved quantities of the warped geodesic flow. In the nonconstant
/// mode, a[k-1] = (u'^k)^2 f_k a_k^2 for k >= 2 and
/// a[0] = b1 (u'^1)^2 + sum_l a[l-1]/a_l. With u'^1 = 0 the fibre
/// integrals reduce to (u'^k)^2 f_k and a[0] records the frozen u^1.
struct FirstIntegralSet {
  std::vector<Cx> a;
  FirstIntegralMode mode;
};

Result<FirstIntegralSet> first_integrals(const WarpedSpec& warped, const GeodesicGerm& germ);

/// Evaluate the same integrals on a trajectory sample (state layout u, u').
Result<FirstIntegralSet> first_integrals_at(const WarpedSpec& warped,
                                            std::span<const Cx> state);

/// Integrate the geodesic with the germ's initial data along a path in
/// complex time; the path must start at germ.z0.
Trajectory shoot(const MetricSpec& metric, const GeodesicGerm& germ,
                 const ComplexPath& path, const IntegratorConfig& config = {});
Trajectory shoot(const WarpedSpec& warped, const GeodesicGerm& germ,
                 const ComplexPath& path, const IntegratorConfig& config = {});

/// Largest deviation of any warped first integral along a trajectory,
/// relative to the integral scale at the initial sample.
Result<double> first_integral_max_drift(const WarpedSpec& warped, const Trajectory& traj);

enum class ProbeVerdict { complete_probed, incomplete_probed, unknown };

struct DetourAttempt {
  double radius;
  int half_plane;       // +1 upper, -1 lower
  bool integrated;      // detour path completed
  bool returned_real;   // post-detour positions satisfied the real-slice test
  bool escaped;         // integration blew past the threshold during the detour
};

struct Obstruction {
  double t;
  SingularityKind kind;
  bool flanked;
  std::vector<DetourAttempt> attempts;
};

struct RealInterval {
  double lo, hi;
};

struct CompletenessEvidence {
  ProbeVerdict verdict;
  std::vector<RealInterval> covered;     // disjoint, sorted
  std::vector<Obstruction> obstructions;
};

struct ProbeOptions {
  std::vector<double> detour_radii{0.05, 0.1, 0.2};  // scaled by max(1, |t*|)
  double real_slice_tol = 1e-6;
};

/// March the geodesic along the real time axis over [t0, t1]; flank each
/// detected singularity with semicircular detours in both half-planes.
/// complete_probed means full coverage up to finitely many flanked points;
/// incomplete_probed means some obstruction resisted every detour while
/// the state escaped or failed to come back near the real slice.
CompletenessEvidence probe_real_completeness(const MetricSpec& metric,
                                             const GeodesicGerm& germ, double t0, double t1,
                                             const ProbeOptions& options = {},
                                             const IntegratorConfig& config = {});

const char* probe_verdict_name(ProbeVerdict verdict);

}  // namespace holgeo
