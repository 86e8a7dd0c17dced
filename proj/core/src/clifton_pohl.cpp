#include "holgeo/clifton_pohl.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace holgeo::clifton_pohl {

MetricSpec metric() {
  // g_12 = g_21 = 1/(u^2 + v^2); Christoffel symbols are scale-free, so
  // the symmetric-product normalization drops out.
  int dim = 2;
  MetricSpec m(dim);
  auto parsed = parse_expression("1/(u1^2 + u2^2)", dim);
  m.set_coefficient(0, 1, parsed.value());
  return m;
}

OdeRhs geodesic_system() {
  return [](std::span<const Cx> w, Cx, std::span<Cx> dw) -> Result<void> {
    Cx u = w[0], v = w[1], du = w[2], dv = w[3];
    Cx denom = u * u + v * v;
    double scale = std::norm(u) + std::norm(v) + 1e-300;
    if (std::abs(denom) < 1e-12 * scale)
      return Error::at(errc::not_ordinary, "metric pole u^2+v^2 = 0", u);
    Cx factor = 2.0 / denom;
    dw[0] = du;
    dw[1] = dv;
    dw[2] = factor * u * du * du;
    dw[3] = factor * v * dv * dv;
    return ok_result();
  };
}

Result<CPConstants> invariants(const CPInitial& c) {
  if (c.alpha == 0.0 && c.beta == 0.0)
    return Error{errc::invalid_argument, "(alpha, beta) = (0, 0) is outside the manifold"};
  if (c.x == 0.0 || c.y == 0.0)
    return Error{errc::null_vector, "x*y = 0 makes the velocity null"};
  double r2 = c.alpha * c.alpha + c.beta * c.beta;
  double a = c.x * c.y / r2;
  double b = c.alpha / c.x + c.beta / c.y;
  return CPConstants{a, b, a * b * b};
}

Result<double> impulse(const CPInitial& c) {
  auto inv = invariants(c);
  if (!inv) return inv.error();
  return inv.value().p;
}

namespace {

// Adaptive Simpson on [lo, hi].
double simpson(const std::function<double(double)>& f, double lo, double hi, double f_lo,
               double f_mid, double f_hi, double tol, int depth) {
  double mid = 0.5 * (lo + hi);
  double lm = 0.5 * (lo + mid), mh = 0.5 * (mid + hi);
  double f_lm = f(lm), f_mh = f(mh);
  double whole = (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi);
  double left = (mid - lo) / 6.0 * (f_lo + 4.0 * f_lm + f_mid);
  double right = (hi - mid) / 6.0 * (f_mid + 4.0 * f_mh + f_hi);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) return left + right;
  return simpson(f, lo, mid, f_lo, f_lm, f_mid, tol / 2.0, depth - 1) +
         simpson(f, mid, hi, f_mid, f_mh, f_hi, tol / 2.0, depth - 1);
}

double integrate_decaying(const std::function<double(double)>& f, double from, double dir) {
  // 1/F decays like e^{-|nu|}; march unit windows until the integrand is
  // numerically dead.
  double total = 0.0;
  double lo = from;
  for (int window = 0; window < 80; ++window) {
    double hi = lo + dir;
    double f_lo = f(lo), f_hi = f(hi), f_mid = f(0.5 * (lo + hi));
    total += simpson(f, std::min(lo, hi), std::max(lo, hi),
                     dir > 0 ? f_lo : f_hi, f_mid, dir > 0 ? f_hi : f_lo, 1e-13, 40) *
             (dir > 0 ? 1.0 : -1.0);
    if (std::abs(f_hi) < 1e-14 && window > 2) break;
    lo = hi;
  }
  return total;
}

}  // namespace

Result<CPClassification> classify(const CPInitial& c) {
  auto inv = invariants(c);
  if (!inv) return inv.error();
  const auto [a, b, p] = inv.value();

  CPClassification out;
  out.p = p;
  if (p > 0.0 && p <= 2.0) {
    out.verdict = CPVerdict::complete;
    out.phi_zero = std::acosh(2.0 / p);
    return out;
  }

  out.verdict = CPVerdict::incomplete;
  // F never vanishes here; phi escapes monotonically in the direction of
  // sign(A) and the total affine time stays finite:
  // sigma = int_{phi_init}^{sign(A) inf} d nu / F(nu).
  double phi_init = 0.0;
  if (c.alpha != 0.0 && c.beta != 0.0)
    phi_init = std::log(std::abs(c.alpha)) - std::log(std::abs(c.beta));
  auto inv_f = [a, b](double nu) {
    double radicand = b * b - 2.0 / (a * std::cosh(nu));
    double f = 2.0 * a * std::cosh(nu) * std::sqrt(radicand);
    return 1.0 / f;
  };
  double dir = a > 0.0 ? 1.0 : -1.0;
  out.asymptote = integrate_decaying(inv_f, phi_init, dir);
  return out;
}

NullGeodesic null_geodesic(double a_v, double b, double c) { return {a_v, b, c}; }

Cx NullGeodesic::u(Cx t) const {
  if (a_v == 0.0) return Cx{1.0, 0.0} / (Cx{c, 0.0} - b * t);
  return std::tan(a_v * t + Cx{b, 0.0});
}

std::vector<double> NullGeodesic::poles_in(double t0, double t1) const {
  std::vector<double> poles;
  if (a_v == 0.0) {
    if (b != 0.0) {
      double t = c / b;
      if (t >= t0 && t <= t1) poles.push_back(t);
    }
    return poles;
  }
  // tan(a_v t + b) poles at a_v t + b = pi/2 + k pi
  double lo = std::min(a_v * t0 + b, a_v * t1 + b);
  double hi = std::max(a_v * t0 + b, a_v * t1 + b);
  int k_lo = static_cast<int>(std::ceil((lo - M_PI_2) / M_PI));
  int k_hi = static_cast<int>(std::floor((hi - M_PI_2) / M_PI));
  for (int k = k_lo; k <= k_hi; ++k) {
    double t = (M_PI_2 + k * M_PI - b) / a_v;
    if (t >= t0 - 1e-15 && t <= t1 + 1e-15) poles.push_back(t);
  }
  std::sort(poles.begin(), poles.end());
  return poles;
}

PhiRhs phi_rhs(double a, double b) { return {a, b, +1}; }

Result<double> PhiRhs::operator()(double phi) const {
  double radicand = b * b - 2.0 / (a * std::cosh(phi));
  if (radicand == 0.0)
    return Error{errc::branch_undefined, "turning point B^2 = 2/(A cosh phi)"};
  if (radicand < 0.0)
    return Error{errc::branch_undefined, "square root negative on the real branch"};
  return 2.0 * a * std::cosh(phi) * static_cast<double>(branch) * std::sqrt(radicand);
}

Result<CPLogState> to_log_coords(Cx u, Cx v) {
  if (std::abs(u) < 1e-300 || std::abs(v) < 1e-300)
    return Error{errc::on_axis, "log coordinates degenerate on the axes"};
  int s_u = u.real() >= 0.0 ? +1 : -1;
  int s_v = v.real() >= 0.0 ? +1 : -1;
  CPLogState s;
  s.s_u = s_u;
  s.s_v = s_v;
  s.omega = std::log(static_cast<double>(s_u) * u);
  s.eta = std::log(static_cast<double>(s_v) * v);
  return s;
}

std::pair<Cx, Cx> from_log_coords(const CPLogState& s) {
  return {static_cast<double>(s.s_u) * std::exp(s.omega),
          static_cast<double>(s.s_v) * std::exp(s.eta)};
}

Result<ContinuedTrajectory> axis_crossing_continue(const Trajectory& approach,
                                                   double extra_time,
                                                   const IntegratorConfig& config) {
  if (approach.samples.empty())
    return Error{errc::invalid_argument, "empty approach trajectory"};
  const auto& last = approach.samples.back();
  if (last.w.size() != 4)
    return Error{errc::invalid_argument, "expected a (u, v, u', v') state"};

  double vel_mag = std::max(std::abs(last.w[2]), std::abs(last.w[3]));
  if (vel_mag < 1e-12)
    return Error{errc::singular_crossing, "velocity vanishes at the axis approach"};

  ContinuedTrajectory out;
  out.s_u = last.w[0].real() >= 0.0 ? +1 : -1;
  out.s_v = last.w[1].real() >= 0.0 ? +1 : -1;

  Cx z0 = last.z;
  ComplexPath path = ComplexPath::line(z0, z0 + Cx{extra_time, 0.0});
  out.trajectory = integrate_along(geodesic_system(), last.w, path, config);

  // Transversal crossings show up as strict sign changes between samples.
  const auto& samples = out.trajectory.samples;
  for (size_t i = 1; i < samples.size(); ++i) {
    for (int axis = 0; axis < 2; ++axis) {
      double prev = samples[i - 1].w[axis].real();
      double curr = samples[i].w[axis].real();
      if (prev == 0.0 || prev * curr >= 0.0) continue;
      double frac = prev / (prev - curr);
      double t_cross = samples[i - 1].z.real() +
                       frac * (samples[i].z.real() - samples[i - 1].z.real());
      double v_normal = std::abs(samples[i - 1].w[2 + axis] +
                                 frac * (samples[i].w[2 + axis] - samples[i - 1].w[2 + axis]));
      double scale = std::max({1.0, std::abs(samples[i].w[2]), std::abs(samples[i].w[3])});
      if (v_normal < 1e-10 * scale)
        return Error{errc::singular_crossing,
                     "transversal velocity degenerates at the axis"};
      out.crossings.push_back({t_cross, axis});
      if (axis == 0) out.s_u = -out.s_u;
      else out.s_v = -out.s_v;
    }
  }
  return out;
}

}  // namespace holgeo::clifton_pohl
