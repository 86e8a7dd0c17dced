#include "holgeo/complex_ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace holgeo {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b_hat (error weights), with the FSAL 7th stage.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

double max_abs(std::span<const Cx> w) {
  double m = 0.0;
  for (Cx v : w) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

IntegratorConfig IntegratorConfig::resolved(double path_length) const {
  IntegratorConfig c = *this;
  if (c.max_step <= 0.0) c.max_step = path_length / 8.0;
  if (c.min_step <= 0.0) c.min_step = 1e-12 * path_length;
  c.max_step = std::min(c.max_step, path_length);
  return c;
}

const char* termination_reason_name(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::completed: return "completed";
    case TerminationReason::singularity: return "singularity";
    case TerminationReason::step_collapse: return "step_collapse";
    case TerminationReason::field_failure: return "field_failure";
  }
  return "unknown";
}

const char* singularity_kind_name(SingularityKind kind) {
  switch (kind) {
    case SingularityKind::none: return "none";
    case SingularityKind::pole: return "pole";
    case SingularityKind::suspected_branch_point: return "suspected_branch_point";
  }
  return "unknown";
}

Trajectory integrate_along(const OdeRhs& field, std::span<const Cx> w0,
                           const ComplexPath& path, const IntegratorConfig& config_in) {
  const size_t m = w0.size();
  const IntegratorConfig config = config_in.resolved(path.length());

  Trajectory traj;
  std::vector<Cx> w(w0.begin(), w0.end());
  double s_global = 0.0;
  traj.samples.push_back({0.0, path.start(), w});

  // Stage storage reused across steps.
  std::vector<Cx> k1(m), k2(m), k3(m), k4(m), k5(m), k6(m), k7(m), wt(m), wn(m), dw(m);

  auto eval_rhs = [&](std::span<const Cx> wv, double seg_s, size_t seg_idx,
                      const ComplexPath::Segment& seg, std::span<Cx> out) -> Result<void> {
    Cx z = segment_point(seg, seg_s);
    auto r = field(wv, z, dw);
    if (!r) return r;
    Cx tangent = segment_tangent(seg, seg_s);
    for (size_t j = 0; j < m; ++j) out[j] = dw[j] * tangent;
    (void)seg_idx;
    return ok_result();
  };

  double err_prev = 1.0;  // PI controller memory
  double h = std::min(config.max_step, std::max(config.min_step * 1e3,
                                                config.max_step / 16.0));

  for (size_t seg_idx = 0; seg_idx < path.segment_count(); ++seg_idx) {
    const auto& seg = path.segment(seg_idx);
    const double seg_len = path.segment_length(seg_idx);
    double s = 0.0;
    bool fsal_valid = false;

    while (s < seg_len) {
      h = std::min(h, config.max_step);
      bool clipped = false;
      double h_try = h;
      if (s + h_try >= seg_len) {
        h_try = seg_len - s;
        clipped = true;
      }

      // Stages.
      Result<void> rc = ok_result();
      if (!fsal_valid) {
        rc = eval_rhs(w, s, seg_idx, seg, k1);
        if (!rc) {
          traj.termination = {TerminationReason::field_failure, SingularityKind::none,
                              segment_point(seg, s), rc.error().message};
          return traj;
        }
      }
      fsal_valid = false;

      auto stage = [&](std::span<Cx> kout, double c,
                       std::initializer_list<std::pair<const std::vector<Cx>*, double>>
                           terms) -> bool {
        for (size_t j = 0; j < m; ++j) {
          Cx acc{0.0, 0.0};
          for (const auto& [kv, coef] : terms) acc += (*kv)[j] * coef;
          wt[j] = w[j] + h_try * acc;
        }
        auto r = eval_rhs(wt, s + c * h_try, seg_idx, seg, kout);
        return r.ok();
      };

      bool stages_ok = stage(k2, c2, {{&k1, a21}}) &&
                       stage(k3, c3, {{&k1, a31}, {&k2, a32}}) &&
                       stage(k4, c4, {{&k1, a41}, {&k2, a42}, {&k3, a43}}) &&
                       stage(k5, c5, {{&k1, a51}, {&k2, a52}, {&k3, a53}, {&k4, a54}}) &&
                       stage(k6, 1.0,
                             {{&k1, a61}, {&k2, a62}, {&k3, a63}, {&k4, a64}, {&k5, a65}});

      bool step_ok = false;
      double err = 2.0;
      if (stages_ok) {
        for (size_t j = 0; j < m; ++j) {
          wn[j] = w[j] + h_try * (b1 * k1[j] + b3 * k3[j] + b4 * k4[j] + b5 * k5[j] +
                                  b6 * k6[j]);
        }
        auto r7 = eval_rhs(wn, s + h_try, seg_idx, seg, k7);
        if (r7.ok()) {
          double err_sq = 0.0;
          for (size_t j = 0; j < m; ++j) {
            Cx e = h_try * (e1 * k1[j] + e3 * k3[j] + e4 * k4[j] + e5 * k5[j] +
                            e6 * k6[j] + e7 * k7[j]);
            double sc = config.abs_tol +
                        config.rel_tol * std::max(std::abs(w[j]), std::abs(wn[j]));
            double q = std::abs(e) / sc;
            err_sq += q * q;
          }
          err = std::sqrt(err_sq / static_cast<double>(m));
          step_ok = err <= 1.0;
        }
      }

      if (step_ok) {
        w = wn;
        s += h_try;
        s_global = path.segment_offset(seg_idx) + s;
        traj.samples.push_back({s_global, segment_point(seg, s), w});

        if (max_abs(w) > config.blowup_threshold) {
          traj.termination = {TerminationReason::singularity, SingularityKind::pole,
                              segment_point(seg, s), "state magnitude exceeded threshold"};
          return traj;
        }

        // PI step control (Hairer-Norsett-Wanner style).
        double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) *
                     std::pow(err_prev, 0.4 / 5.0);
        fac = std::clamp(fac, 0.2, 5.0);
        err_prev = std::max(err, 1e-10);
        h = h_try * fac;
        if (!clipped) {
          k1.swap(k7);  // FSAL: reuse the last stage
          fsal_valid = true;
        }
      } else {
        double fac = stages_ok ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.5) : 0.25;
        h = h_try * fac;
        if (h < config.min_step) {
          Cx z_here = segment_point(seg, s);
          if (max_abs(w) > config.blowup_threshold * 1e-2) {
            traj.termination = {TerminationReason::singularity, SingularityKind::pole,
                                z_here, "step collapse with growing state"};
          } else {
            traj.termination = {TerminationReason::step_collapse,
                                SingularityKind::suspected_branch_point, z_here,
                                "step below minimum without blow-up"};
          }
          return traj;
        }
      }
    }
  }

  traj.termination = {TerminationReason::completed, SingularityKind::none, path.end(), ""};
  return traj;
}

Result<LoopResult> integrate_loop(const OdeRhs& field, std::span<const Cx> w0,
                                  const ComplexPath& loop, const IntegratorConfig& config) {
  if (!loop.is_closed())
    return Error{errc::invalid_argument, "integrate_loop: path is not closed"};
  Trajectory traj = integrate_along(field, w0, loop, config);
  if (!traj.completed())
    return Error::at(errc::hit_singularity,
                     std::string("loop integration terminated: ") +
                         termination_reason_name(traj.termination.reason),
                     traj.termination.z);
  LoopResult out{traj.final_state(), std::move(traj)};
  return out;
}

void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out) {
  const size_t m = trajectory.samples.empty() ? 0 : trajectory.samples[0].w.size();
  out << "s,Re(z),Im(z)";
  for (size_t j = 1; j <= m; ++j) out << ",Re(w_" << j << "),Im(w_" << j << ")";
  out << "\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (const auto& sample : trajectory.samples) {
    put(sample.s);
    out << ',';
    put(sample.z.real());
    out << ',';
    put(sample.z.imag());
    for (const Cx& wv : sample.w) {
      out << ',';
      put(wv.real());
      out << ',';
      put(wv.imag());
    }
    out << "\n";
  }
}

}  // namespace holgeo
