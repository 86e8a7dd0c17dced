#pragma once

#include <optional>
#include <vector>

#include "holgeo/geodesic.hpp"
#include "holgeo/metric.hpp"

namespace holgeo::clifton_pohl {

/// The complexified Clifton-Pohl metric du (x) dv / (u^2 + v^2) on
/// C^2 minus the two null lines u = +/- i v.
MetricSpec metric();

/// Hand-coded geodesic system u'' = 2u/(u^2+v^2) u'^2,
/// v'' = 2v/(u^2+v^2) v'^2 over the state (u, v, u', v').
OdeRhs geodesic_system();

/// Initial data (position, velocity) of a real geodesic.
struct CPInitial {
  double alpha, beta;  // position, != (0,0)
  double x, y;         // velocity; nonnull analysis needs x != 0 and y != 0
};

struct CPConstants {
  double a;  // u'v' = A (u^2+v^2)
  double b;  // u/u' + v/v' = B
  double p;  // impulse P = A B^2
};

Result<CPConstants> invariants(const CPInitial& c);

/// The impulse P = A B^2 with A = xy/(alpha^2+beta^2), B = alpha/x + beta/y.
Result<double> impulse(const CPInitial& c);

enum class CPVerdict { complete, incomplete };

struct CPClassification {
  CPVerdict verdict;
  double p;
  std::optional<double> phi_zero;   // turning point: cosh(phi_zero) = 2/P (complete only)
  std::optional<double> asymptote;  // sigma: finite limit of the time integral (incomplete)
};

/// Complete if and only if 0 < P <= 2 (boundary inclusive). Complete
/// verdicts carry the turning point acosh(2/P); incomplete ones carry the
/// numerically integrated asymptotic time sigma.
Result<CPClassification> classify(const CPInitial& c);

/// Closed-form null geodesics with v identically constant:
/// u(t) = 1/(C - B t) for v == 0, u(t) = tan(A_v t + B) otherwise.
struct NullGeodesic {
  double a_v, b, c;
  Cx u(Cx t) const;
  std::vector<double> poles_in(double t0, double t1) const;
};

NullGeodesic null_geodesic(double a_v, double b, double c);

/// phi' = 2 A cosh(phi) sqrt(B^2 - 2/(A cosh phi)), with the branch sign
/// tracked explicitly by the caller through `branch`.
struct PhiRhs {
  double a, b;
  int branch = +1;
  Result<double> operator()(double phi) const;
};

PhiRhs phi_rhs(double a, double b);

/// Logarithmic coordinates u = s_u e^omega, v = s_v e^eta with octant
/// signs chosen so real nonzero u, v get real logs.
struct CPLogState {
  Cx omega, eta;
  int s_u, s_v;
};

Result<CPLogState> to_log_coords(Cx u, Cx v);
std::pair<Cx, Cx> from_log_coords(const CPLogState& s);

struct AxisCrossing {
  double t;
  int axis;  // 0: u = 0 crossed, 1: v = 0 crossed
};

struct ContinuedTrajectory {
  Trajectory trajectory;  // the continuation only
  std::vector<AxisCrossing> crossings;
  int s_u, s_v;  // octant signs after the continuation
};

/// Continue a geodesic approaching a coordinate axis across it, staying in
/// (u, v) coordinates where the crossing is regular, and track the octant
/// sign flips. Fails with singular_crossing when the transversal velocity
/// degenerates at a crossing.
Result<ContinuedTrajectory> axis_crossing_continue(const Trajectory& approach,
                                                   double extra_time,
                                                   const IntegratorConfig& config = {});

}  // namespace holgeo::clifton_pohl
