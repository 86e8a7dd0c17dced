#include "holgeo/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace holgeo {

namespace {

std::vector<Cx> pack_state(const GeodesicGerm& germ) {
  std::vector<Cx> w;
  w.reserve(germ.position.size() * 2);
  w.insert(w.end(), germ.position.begin(), germ.position.end());
  w.insert(w.end(), germ.velocity.begin(), germ.velocity.end());
  return w;
}

}  // namespace

OdeRhs geodesic_field(const MetricSpec& metric) {
  const int n = metric.dimension();
  return [metric, n](std::span<const Cx> w, Cx, std::span<Cx> dw) -> Result<void> {
    auto u = w.first(n);
    auto v = w.subspan(n);
    auto gamma = christoffel_general(metric, u);
    if (!gamma) return gamma.error();
    for (int k = 0; k < n; ++k) {
      dw[k] = v[k];
      Cx acc{0.0, 0.0};
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc += gamma.value().gamma(k, i, j) * v[i] * v[j];
      dw[n + k] = -acc;
    }
    return ok_result();
  };
}

OdeRhs geodesic_field(const WarpedSpec& warped) {
  const int n = warped.dimension();
  return [warped, n](std::span<const Cx> w, Cx, std::span<Cx> dw) -> Result<void> {
    auto u = w.first(n);
    auto v = w.subspan(n);
    auto gamma = christoffel_warped(warped, u);
    if (!gamma) return gamma.error();
    // Only the warped sparsity pattern contributes.
    for (int k = 0; k < n; ++k) dw[k] = v[k];
    Cx acc1 = gamma.value().gamma(0, 0, 0) * v[0] * v[0];
    for (int k = 2; k <= n; ++k) {
      int ki = k - 1;
      acc1 += gamma.value().gamma(0, ki, ki) * v[ki] * v[ki];
    }
    dw[n] = -acc1;
    for (int k = 2; k <= n; ++k) {
      int ki = k - 1;
      Cx acc = gamma.value().gamma(ki, ki, ki) * v[ki] * v[ki] +
               2.0 * gamma.value().gamma(ki, 0, ki) * v[0] * v[ki];
      dw[n + ki] = -acc;
    }
    return ok_result();
  };
}

namespace {

Result<FirstIntegralSet> first_integrals_for_mode(const WarpedSpec& warped,
                                                  std::span<const Cx> state,
                                                  FirstIntegralMode mode) {
  const int n = warped.dimension();
  auto u = state.first(n);
  auto v = state.subspan(n);

  FirstIntegralSet out;
  out.mode = mode;
  out.a.assign(n, Cx{});

  Cx u1(u[0]);
  std::vector<Cx> a_vals(n + 1), f_vals(n + 1);
  for (int k = 2; k <= n; ++k) {
    auto av = eval(warped.a(k), u);
    if (!av) return Error{errc::coefficient_pole, av.error().message};
    auto fv = eval(warped.f(k), u);
    if (!fv) return Error{errc::coefficient_pole, fv.error().message};
    a_vals[k] = av.value();
    f_vals[k] = fv.value();
  }

  if (mode == FirstIntegralMode::u1_constant) {
    // (u'^k)^2 f_k = A_k; the base integral reduces to the warped sum.
    Cx acc{0.0, 0.0};
    for (int k = 2; k <= n; ++k) {
      out.a[k - 1] = v[k - 1] * v[k - 1] * f_vals[k];
      if (std::abs(a_vals[k]) < 1e-300)
        return Error{errc::coefficient_pole, "warping function vanishes"};
      acc += out.a[k - 1] / a_vals[k];
    }
    out.a[0] = acc;
    return out;
  }

  auto b1 = eval(warped.b1(), u);
  if (!b1) return Error{errc::coefficient_pole, b1.error().message};
  Cx acc = b1.value() * v[0] * v[0];
  for (int k = 2; k <= n; ++k) {
    out.a[k - 1] = v[k - 1] * v[k - 1] * f_vals[k] * a_vals[k] * a_vals[k];
    if (std::abs(a_vals[k]) < 1e-300)
      return Error{errc::coefficient_pole, "warping function vanishes"};
    acc += out.a[k - 1] / a_vals[k];
  }
  out.a[0] = acc;
  (void)u1;
  return out;
}

}  // namespace

Result<FirstIntegralSet> first_integrals(const WarpedSpec& warped, const GeodesicGerm& germ) {
  std::vector<Cx> state = pack_state(germ);
  FirstIntegralMode mode = germ.velocity[0] == Cx{0.0, 0.0}
                               ? FirstIntegralMode::u1_constant
                               : FirstIntegralMode::u1_nonconstant;
  return first_integrals_for_mode(warped, state, mode);
}

Result<FirstIntegralSet> first_integrals_at(const WarpedSpec& warped,
                                            std::span<const Cx> state) {
  FirstIntegralMode mode = state[warped.dimension()] == Cx{0.0, 0.0}
                               ? FirstIntegralMode::u1_constant
                               : FirstIntegralMode::u1_nonconstant;
  return first_integrals_for_mode(warped, state, mode);
}

namespace {

Trajectory shoot_impl(const OdeRhs& field, const GeodesicGerm& germ,
                      const ComplexPath& path, const IntegratorConfig& config) {
  double scale = std::max(1.0, std::abs(germ.z0));
  if (std::abs(path.start() - germ.z0) > 1e-12 * scale)
    throw std::invalid_argument("shoot: path does not start at germ.z0");
  std::vector<Cx> w0 = pack_state(germ);
  return integrate_along(field, w0, path, config);
}

}  // namespace

Trajectory shoot(const MetricSpec& metric, const GeodesicGerm& germ,
                 const ComplexPath& path, const IntegratorConfig& config) {
  return shoot_impl(geodesic_field(metric), germ, path, config);
}

Trajectory shoot(const WarpedSpec& warped, const GeodesicGerm& germ,
                 const ComplexPath& path, const IntegratorConfig& config) {
  return shoot_impl(geodesic_field(warped), germ, path, config);
}

Result<double> first_integral_max_drift(const WarpedSpec& warped, const Trajectory& traj) {
  if (traj.samples.empty()) return Error{errc::invalid_argument, "empty trajectory"};
  const int n = warped.dimension();
  FirstIntegralMode mode = traj.samples[0].w[n] == Cx{0.0, 0.0}
                               ? FirstIntegralMode::u1_constant
                               : FirstIntegralMode::u1_nonconstant;
  auto ref = first_integrals_for_mode(warped, traj.samples[0].w, mode);
  if (!ref) return ref.error();

  double drift = 0.0;
  for (const auto& sample : traj.samples) {
    auto cur = first_integrals_for_mode(warped, sample.w, mode);
    if (!cur) return cur.error();
    for (int k = 0; k < n; ++k) {
      double scale = std::max(1.0, std::abs(ref.value().a[k]));
      drift = std::max(drift, std::abs(cur.value().a[k] - ref.value().a[k]) / scale);
    }
  }
  return drift;
}

// ---------------------------------------------------------------------------
// Real-completeness probing

const char* probe_verdict_name(ProbeVerdict verdict) {
  switch (verdict) {
    case ProbeVerdict::complete_probed: return "complete_probed";
    case ProbeVerdict::incomplete_probed: return "incomplete_probed";
    case ProbeVerdict::unknown: return "unknown";
  }
  return "unknown";
}

namespace {

bool positions_near_real(std::span<const Cx> state, int n, double tol) {
  for (int k = 0; k < n; ++k)
    if (std::abs(state[k].imag()) > tol * (1.0 + std::abs(state[k]))) return false;
  return true;
}

struct SweepOutcome {
  bool reached_end = false;
  std::vector<RealInterval> covered;
  std::vector<Obstruction> obstructions;
  bool inconclusive = false;  // iteration cap or infeasible flank geometry
};

SweepOutcome sweep(const OdeRhs& field, int n, std::vector<Cx> state, double t_start,
                   double t_end, const ProbeOptions& options,
                   const IntegratorConfig& config) {
  SweepOutcome out;
  const int dir = t_end >= t_start ? +1 : -1;
  double cur = t_start;

  auto push_covered = [&](double a, double b) {
    if (std::abs(b - a) < 1e-15) return;
    out.covered.push_back({std::min(a, b), std::max(a, b)});
  };

  double covered_from = cur;
  for (int iter = 0; iter < 64; ++iter) {
    if (dir * (t_end - cur) <= 1e-12) {
      push_covered(covered_from, t_end);
      out.reached_end = true;
      return out;
    }

    Trajectory traj = integrate_along(field, state, ComplexPath::line(Cx{cur, 0.0}, Cx{t_end, 0.0}),
                                      config);
    if (traj.completed()) {
      push_covered(covered_from, t_end);
      out.reached_end = true;
      return out;
    }

    const double t_sing = traj.termination.z.real();
    SingularityKind kind = traj.termination.kind == SingularityKind::none
                               ? SingularityKind::pole
                               : traj.termination.kind;
    const double scale = std::max(1.0, std::abs(t_sing));
    const double r_min = options.detour_radii.empty() ? 0.05 * scale
                                                      : options.detour_radii.front() * scale;

    // An obstruction within the smallest detour radius of the horizon end
    // counts as a covered boundary, not an obstruction.
    if (dir * (t_end - t_sing) <= r_min) {
      push_covered(covered_from, t_sing);
      out.reached_end = true;
      return out;
    }

    Obstruction obstruction{t_sing, kind, false, {}};
    bool resumed = false;

    for (double radius : options.detour_radii) {
      if (resumed) break;
      const double r = radius * scale;
      const double back_t = t_sing - dir * r;
      if (dir * (back_t - cur) <= 1e-12) continue;  // cannot back off this far

      // Restart from the last stored sample at or before the back-off point.
      const TrajectorySample* restart = nullptr;
      for (const auto& sample : traj.samples) {
        if (dir * (sample.z.real() - back_t) <= 1e-12) restart = &sample;
        else break;
      }
      if (restart == nullptr) continue;

      for (int hp : {+1, -1}) {
        ComplexPath detour = ComplexPath::semicircle_detour(t_sing, r, hp);
        if (dir < 0) detour = detour.reversed();
        ComplexPath path = [&]() {
          double gap = std::abs(back_t - restart->z.real());
          if (gap > 1e-13 * scale) {
            ComplexPath p = ComplexPath::line(restart->z, Cx{back_t, 0.0});
            p.append(detour);
            return p;
          }
          return detour;
        }();

        Trajectory dtraj = integrate_along(field, restart->w, path, config);
        DetourAttempt attempt{r, hp, dtraj.completed(), false, false};
        attempt.escaped =
            dtraj.termination.reason == TerminationReason::singularity ||
            [&] {
              double m = 0.0;
              for (const Cx& v : dtraj.final_state()) m = std::max(m, std::abs(v));
              return m > config.blowup_threshold * 1e-2;
            }();
        if (dtraj.completed()) {
          attempt.returned_real =
              positions_near_real(dtraj.final_state(), n, options.real_slice_tol);
          if (attempt.returned_real) {
            obstruction.flanked = true;
            obstruction.attempts.push_back(attempt);
            push_covered(covered_from, back_t);
            covered_from = t_sing + dir * r;
            cur = covered_from;
            state = dtraj.final_state();
            resumed = true;
            break;
          }
        }
        obstruction.attempts.push_back(attempt);
      }
    }

    out.obstructions.push_back(obstruction);
    if (!resumed) {
      // Covered up to the last real-axis sample before the obstruction.
      push_covered(covered_from, traj.samples.back().z.real());
      if (obstruction.attempts.empty()) out.inconclusive = true;
      return out;
    }
  }

  out.inconclusive = true;
  return out;
}

}  // namespace

CompletenessEvidence probe_real_completeness(const MetricSpec& metric,
                                             const GeodesicGerm& germ, double t0, double t1,
                                             const ProbeOptions& options,
                                             const IntegratorConfig& config) {
  if (std::abs(germ.z0.imag()) > 1e-12)
    throw std::invalid_argument("probe_real_completeness: germ.z0 must be real");
  const double start = germ.z0.real();
  if (start < t0 - 1e-12 || start > t1 + 1e-12)
    throw std::invalid_argument("probe_real_completeness: germ.z0 outside horizon");

  OdeRhs field = geodesic_field(metric);
  const int n = metric.dimension();
  std::vector<Cx> state = pack_state(germ);

  CompletenessEvidence evidence;
  bool reached_both = true;
  bool inconclusive = false;

  for (double t_end : {t1, t0}) {
    if (std::abs(t_end - start) < 1e-15) continue;
    SweepOutcome o = sweep(field, n, state, start, t_end, options, config);
    reached_both = reached_both && o.reached_end;
    inconclusive = inconclusive || o.inconclusive;
    evidence.covered.insert(evidence.covered.end(), o.covered.begin(), o.covered.end());
    evidence.obstructions.insert(evidence.obstructions.end(), o.obstructions.begin(),
                                 o.obstructions.end());
  }

  std::sort(evidence.covered.begin(), evidence.covered.end(),
            [](const RealInterval& a, const RealInterval& b) { return a.lo < b.lo; });
  std::sort(evidence.obstructions.begin(), evidence.obstructions.end(),
            [](const Obstruction& a, const Obstruction& b) { return a.t < b.t; });

  bool all_flanked = true;
  bool hard_blocked = false;
  for (const auto& o : evidence.obstructions) {
    if (o.flanked) continue;
    all_flanked = false;
    if (!o.attempts.empty()) {
      bool all_hard = true;
      for (const auto& a : o.attempts) {
        bool hard = a.escaped || (a.integrated && !a.returned_real);
        all_hard = all_hard && hard;
      }
      if (all_hard) hard_blocked = true;
    }
  }

  if (reached_both && all_flanked && !inconclusive) {
    evidence.verdict = ProbeVerdict::complete_probed;
  } else if (hard_blocked) {
    evidence.verdict = ProbeVerdict::incomplete_probed;
  } else {
    evidence.verdict = ProbeVerdict::unknown;
  }
  return evidence;
}

}  // namespace holgeo
