#include "holgeo/continuation.hpp"

#include <algorithm>
#include <cmath>

namespace holgeo {

namespace {

constexpr double kTiny = 1e-300;

// Branch-aware evaluation of a one-variable expression. `ordinal` walks
// the sqrt/log nodes in pre-order; phases are unwrapped continuously
// against the incoming state.
struct BranchCtx {
  Cx point;
  const BranchState* prev;
  BranchState next;
  double max_phase_step = 0.0;
  double min_critical = 1e300;
  int ordinal = 0;
};

double unwrap(double raw_arg, double prev_phase) {
  double two_pi = 2.0 * M_PI;
  double k = std::round((prev_phase - raw_arg) / two_pi);
  return raw_arg + two_pi * k;
}

Result<Cx> branch_eval_node(const Expr::Node& n, BranchCtx& ctx) {
  using Op = Expr::Op;
  switch (n.op) {
    case Op::constant: return n.value;
    case Op::variable:
      if (n.var_index != 0)
        return Error{errc::invalid_argument, "germ expressions are one-variable (u1)"};
      return ctx.point;
    default: break;
  }

  auto a = branch_eval_node(*n.lhs, ctx);
  if (!a) return a;
  Cx va = a.value();

  switch (n.op) {
    case Op::neg: return -va;
    case Op::exp_fn: {
      Cx r = std::exp(va);
      if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
        return Error::at(errc::pole, "exp overflow", va);
      return r;
    }
    case Op::sin_fn: return std::sin(va);
    case Op::cos_fn: return std::cos(va);
    case Op::cosh_fn: return std::cosh(va);
    case Op::sinh_fn: return std::sinh(va);
    case Op::tan_fn: {
      Cx c = std::cos(va);
      ctx.min_critical = std::min(ctx.min_critical, std::abs(c));
      if (std::abs(c) < kTiny) return Error::at(errc::pole, "tan at cosine zero", va);
      return std::sin(va) / c;
    }
    case Op::log_fn:
    case Op::sqrt_fn: {
      int ord = ctx.ordinal++;
      double mag = std::abs(va);
      ctx.min_critical = std::min(ctx.min_critical, mag);
      if (mag < kTiny)
        return Error::at(errc::branch_ambiguous, "branch node operand is 0", va);
      double prev_phase = ctx.prev->phase[ord];
      double theta = unwrap(std::arg(va), prev_phase);
      ctx.max_phase_step = std::max(ctx.max_phase_step, std::abs(theta - prev_phase));
      ctx.next.phase[ord] = theta;
      if (n.op == Op::log_fn) return Cx{std::log(mag), theta};
      return std::sqrt(mag) * std::polar(1.0, theta / 2.0);
    }
    case Op::pow_int: {
      if (n.exponent < 0) {
        ctx.min_critical = std::min(ctx.min_critical, std::abs(va));
        if (std::abs(va) < kTiny)
          return Error::at(errc::pole, "negative power of 0", va);
      }
      Cx r{1.0, 0.0};
      int e = n.exponent >= 0 ? n.exponent : -n.exponent;
      Cx b = va;
      while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
      }
      if (n.exponent < 0) r = Cx{1.0, 0.0} / r;
      if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
        return Error::at(errc::pole, "power overflow", va);
      return r;
    }
    default: break;
  }

  auto b = branch_eval_node(*n.rhs, ctx);
  if (!b) return b;
  Cx vb = b.value();
  switch (n.op) {
    case Op::add: return va + vb;
    case Op::sub: return va - vb;
    case Op::mul: {
      Cx r = va * vb;
      if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
        return Error::at(errc::pole, "product overflow", va);
      return r;
    }
    case Op::div: {
      ctx.min_critical = std::min(ctx.min_critical, std::abs(vb));
      if (std::abs(vb) < kTiny) return Error::at(errc::pole, "division by 0", vb);
      Cx r = va / vb;
      if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
        return Error::at(errc::pole, "division overflow", vb);
      return r;
    }
    default: return Error{errc::invalid_argument, "malformed expression node"};
  }
}

struct BranchDualCtx {
  Cx point;
  const BranchState* state;
  int ordinal = 0;
};

struct VD {
  Cx v, d;
};

Result<VD> branch_dual_node(const Expr::Node& n, BranchDualCtx& ctx) {
  using Op = Expr::Op;
  switch (n.op) {
    case Op::constant: return VD{n.value, Cx{}};
    case Op::variable:
      if (n.var_index != 0)
        return Error{errc::invalid_argument, "germ expressions are one-variable (u1)"};
      return VD{ctx.point, Cx{1.0, 0.0}};
    default: break;
  }

  auto ar = branch_dual_node(*n.lhs, ctx);
  if (!ar) return ar.error();
  VD a = ar.value();

  switch (n.op) {
    case Op::neg: return VD{-a.v, -a.d};
    case Op::exp_fn: {
      Cx e = std::exp(a.v);
      return VD{e, e * a.d};
    }
    case Op::sin_fn: return VD{std::sin(a.v), std::cos(a.v) * a.d};
    case Op::cos_fn: return VD{std::cos(a.v), -std::sin(a.v) * a.d};
    case Op::cosh_fn: return VD{std::cosh(a.v), std::sinh(a.v) * a.d};
    case Op::sinh_fn: return VD{std::sinh(a.v), std::cosh(a.v) * a.d};
    case Op::tan_fn: {
      Cx c = std::cos(a.v);
      if (std::abs(c) < kTiny) return Error::at(errc::pole, "tan at cosine zero", a.v);
      return VD{std::sin(a.v) / c, a.d / (c * c)};
    }
    case Op::log_fn:
    case Op::sqrt_fn: {
      int ord = ctx.ordinal++;
      double mag = std::abs(a.v);
      if (mag < kTiny)
        return Error::at(errc::branch_ambiguous, "branch node operand is 0", a.v);
      double theta = unwrap(std::arg(a.v), ctx.state->phase[ord]);
      if (n.op == Op::log_fn) {
        // d log = a'/a, independent of branch
        return VD{Cx{std::log(mag), theta}, a.d / a.v};
      }
      Cx s = std::sqrt(mag) * std::polar(1.0, theta / 2.0);
      return VD{s, a.d * Cx{0.5, 0.0} / s};
    }
    case Op::pow_int: {
      if (n.exponent == 0) return VD{Cx{1.0, 0.0}, Cx{}};
      if (n.exponent < 0 && std::abs(a.v) < kTiny)
        return Error::at(errc::pole, "negative power of 0", a.v);
      auto ip = [](Cx base, int e) {
        Cx r{1.0, 0.0};
        bool inv = e < 0;
        unsigned n2 = inv ? -e : e;
        Cx b = base;
        while (n2 > 0) {
          if (n2 & 1u) r *= b;
          b *= b;
          n2 >>= 1u;
        }
        return inv ? Cx{1.0, 0.0} / r : r;
      };
      Cx v = ip(a.v, n.exponent);
      Cx f = Cx(static_cast<double>(n.exponent), 0.0) * ip(a.v, n.exponent - 1);
      return VD{v, f * a.d};
    }
    default: break;
  }

  auto br = branch_dual_node(*n.rhs, ctx);
  if (!br) return br.error();
  VD b = br.value();
  switch (n.op) {
    case Op::add: return VD{a.v + b.v, a.d + b.d};
    case Op::sub: return VD{a.v - b.v, a.d - b.d};
    case Op::mul: return VD{a.v * b.v, a.d * b.v + a.v * b.d};
    case Op::div: {
      if (std::abs(b.v) < kTiny) return Error::at(errc::pole, "division by 0", b.v);
      return VD{a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
    }
    default: return Error{errc::invalid_argument, "malformed expression node"};
  }
}

}  // namespace

Result<BranchState> principal_branch_state(const Expr& expr, Cx point) {
  BranchState zero;
  zero.phase.assign(expr.multivalued_node_count(), 0.0);
  // Evaluate once with all phases at 0; unwrap snaps each phase to the
  // representative nearest 0, i.e. the principal argument in (-pi, pi].
  BranchCtx ctx{point, &zero, zero, 0.0, 1e300, 0};
  auto r = branch_eval_node(expr.root(), ctx);
  if (!r) return r.error();
  return ctx.next;
}

Result<BranchEval> eval_branched(const Expr& expr, Cx point, const BranchState& state) {
  if (static_cast<int>(state.phase.size()) != expr.multivalued_node_count())
    return Error{errc::invalid_argument, "branch state size mismatch"};
  BranchCtx ctx{point, &state, state, 0.0, 1e300, 0};
  auto r = branch_eval_node(expr.root(), ctx);
  if (!r) return r.error();
  BranchEval out;
  out.value = r.value();
  out.state = std::move(ctx.next);
  out.max_phase_step = ctx.max_phase_step;
  out.min_critical_mag = ctx.min_critical;
  return out;
}

Result<BranchDual> eval_branched_dual(const Expr& expr, Cx point, const BranchState& state) {
  if (static_cast<int>(state.phase.size()) != expr.multivalued_node_count())
    return Error{errc::invalid_argument, "branch state size mismatch"};
  BranchDualCtx ctx{point, &state, 0};
  auto r = branch_dual_node(expr.root(), ctx);
  if (!r) return r.error();
  return BranchDual{r.value().v, r.value().d};
}

// ---------------------------------------------------------------------------
// Germ

Result<Germ> Germ::closed_form(Expr expr, Cx base_point) {
  auto state = principal_branch_state(expr, base_point);
  if (!state) return state.error();
  return closed_form(std::move(expr), base_point, std::move(state).value());
}

Result<Germ> Germ::closed_form(Expr expr, Cx base_point, BranchState state) {
  auto v = eval_branched(expr, base_point, state);
  if (!v) return v.error();
  Germ g;
  g.base_ = base_point;
  g.value_ = v.value().value;
  g.expr_ = std::move(expr);
  g.state_ = std::move(v).value().state;
  return g;
}

Result<Germ> Germ::ode_defined(ScalarRhs rhs, Cx base_point, Cx value) {
  auto probe = rhs(value, base_point);
  if (!probe)
    return Error{errc::invalid_argument,
                 "ode germ RHS not evaluable at base point: " + probe.error().message};
  Germ g;
  g.base_ = base_point;
  g.value_ = value;
  g.rhs_ = std::move(rhs);
  return g;
}

// ---------------------------------------------------------------------------
// Continuation

namespace {

Result<Germ> continue_closed_form(const Germ& germ, const ComplexPath& path,
                                  const ContinuationOptions&) {
  const Expr& expr = germ.expression();
  const double len = path.length();
  const double ds_min = 1e-10 * len;

  double s = 0.0;
  BranchState state = germ.branch_state();
  Cx value = germ.value();
  double ds = len / 64.0;

  auto advance = [&](double target_ds) -> Result<void> {
    // Commit via a midpoint so narrow poles between samples are seen.
    Cx z_mid = path.point(s + 0.5 * target_ds);
    Cx z_new = path.point(s + target_ds);

    auto guard = [&](const BranchEval& ev, Cx prev_value) -> bool {
      if (ev.max_phase_step > 1.2) return false;
      double jump = std::abs(ev.value - prev_value);
      if (jump > 0.5 * (1.0 + std::max(std::abs(ev.value), std::abs(prev_value))))
        return false;
      if (ev.min_critical_mag < 1e-12) return false;
      return true;
    };

    auto mid = eval_branched(expr, z_mid, state);
    if (!mid || !guard(mid.value(), value))
      return Error{errc::hit_singularity, "step rejected"};
    auto end = eval_branched(expr, z_new, mid.value().state);
    if (!end || !guard(end.value(), mid.value().value))
      return Error{errc::hit_singularity, "step rejected"};

    state = end.value().state;
    value = end.value().value;
    s += target_ds;
    return ok_result();
  };

  while (s < len) {
    double step = std::min(ds, len - s);
    if (advance(step).ok()) {
      ds = std::min(ds * 1.4, len / 16.0);
    } else {
      ds = step / 2.0;
      if (ds < ds_min)
        return Error::at(errc::hit_singularity,
                         "continuation stalled near a singular point", path.point(s));
    }
  }

  return Germ::closed_form(expr, path.end(), std::move(state));
}

Result<Germ> continue_ode(const Germ& germ, const ComplexPath& path,
                          const ContinuationOptions& options) {
  const ScalarRhs& rhs = germ.rhs();
  OdeRhs field = [rhs](std::span<const Cx> w, Cx z, std::span<Cx> dw) -> Result<void> {
    auto r = rhs(w[0], z);
    if (!r) return r.error();
    dw[0] = r.value();
    return ok_result();
  };
  Cx w0 = germ.value();
  Trajectory traj = integrate_along(field, std::span<const Cx>(&w0, 1), path,
                                    options.ode_config);
  if (!traj.completed())
    return Error::at(errc::hit_singularity,
                     std::string("ode germ continuation terminated: ") +
                         termination_reason_name(traj.termination.reason),
                     traj.termination.z);
  return Germ::ode_defined(rhs, path.end(), traj.final_state()[0]);
}

}  // namespace

Result<Germ> continue_germ(const Germ& germ, const ComplexPath& path,
                           const ContinuationOptions& options) {
  double scale = std::max(1.0, std::abs(germ.base_point()));
  if (std::abs(path.start() - germ.base_point()) > 1e-12 * scale)
    return Error{errc::invalid_argument, "path does not start at the germ base point"};
  if (germ.is_closed_form()) return continue_closed_form(germ, path, options);
  return continue_ode(germ, path, options);
}

Result<MonodromyResult> monodromy(const Germ& germ, const ComplexPath& loop,
                                  int max_turns, const ContinuationOptions& options) {
  if (!loop.is_closed())
    return Error{errc::invalid_argument, "monodromy: loop is not closed"};
  if (max_turns < 1)
    return Error{errc::invalid_argument, "monodromy: max_turns must be >= 1"};

  MonodromyResult out{germ, MonodromyClass::non_returning, max_turns, Cx{}, {}};
  const Cx v0 = germ.value();
  Germ current = germ;

  for (int k = 1; k <= max_turns; ++k) {
    auto next = continue_germ(current, loop, options);
    if (!next) return next.error();
    current = std::move(next).value();
    if (k == 1) out.germ_out = current;
    out.loop_values.push_back(current.value());

    if (std::abs(current.value() - v0) <= options.return_tol * (1.0 + std::abs(v0))) {
      out.classification = k == 1 ? MonodromyClass::trivial : MonodromyClass::finite_order;
      out.order = k;
      return out;
    }
  }

  // Cauchy tail over the last three traversals: values settling toward a
  // finite limit without returning is the numerical face of an
  // L-singularity.
  const auto& vs = out.loop_values;
  if (vs.size() >= 4) {
    double tol = options.convergence_tol * (1.0 + std::abs(vs.back()));
    size_t n = vs.size();
    bool settled = std::abs(vs[n - 1] - vs[n - 2]) <= tol &&
                   std::abs(vs[n - 2] - vs[n - 3]) <= tol &&
                   std::abs(vs[n - 3] - vs[n - 4]) <= tol;
    if (settled) {
      out.classification = MonodromyClass::logarithmic_suspected;
      out.order = max_turns;
      out.limit = vs.back();
      return out;
    }
  }

  out.classification = MonodromyClass::non_returning;
  out.order = max_turns;
  return out;
}

RealCoverage real_coverage(const Germ& germ, double detour_radius, double t0, double t1,
                           int samples, const ContinuationOptions& options) {
  if (samples < 2) throw std::invalid_argument("real_coverage: samples must be >= 2");
  if (std::abs(germ.base_point().imag()) > 1e-12)
    throw std::invalid_argument("real_coverage: germ base point must be real");
  double base = germ.base_point().real();
  if (base < t0 - 1e-12 || base > t1 + 1e-12)
    throw std::invalid_argument("real_coverage: germ base point outside interval");

  RealCoverage out;
  const double dt = (t1 - t0) / (samples - 1);
  auto grid = [&](int j) { return t0 + dt * j; };

  auto sweep = [&](int dir) {
    Germ cursor = germ;
    double cur = base;
    // First grid index strictly ahead of the base in this direction.
    int j = dir > 0 ? static_cast<int>(std::ceil((base - t0) / dt - 1e-9))
                    : static_cast<int>(std::floor((base - t0) / dt + 1e-9));

    while (j >= 0 && j < samples) {
      double target = grid(j);
      if (std::abs(target - cur) < 1e-15) {
        out.reached.push_back({target, cursor.value()});
        j += dir;
        continue;
      }
      auto moved = continue_germ(cursor, ComplexPath::line(Cx{cur, 0.0}, Cx{target, 0.0}),
                                 options);
      if (moved) {
        cursor = std::move(moved).value();
        cur = target;
        out.reached.push_back({target, cursor.value()});
        j += dir;
        continue;
      }

      double t_sing = moved.error().has_where ? moved.error().where.real()
                                              : 0.5 * (cur + target);
      out.obstructions.push_back(t_sing);

      // Flank t_sing with a semicircle; back off to distance r first.
      double back = t_sing - dir * detour_radius;
      bool flanked = false;
      if ((dir > 0 && back > cur + 1e-12) || (dir < 0 && back < cur - 1e-12)) {
        auto to_back = continue_germ(
            cursor, ComplexPath::line(Cx{cur, 0.0}, Cx{back, 0.0}), options);
        if (to_back) {
          for (int hp : {+1, -1}) {
            ComplexPath detour = ComplexPath::semicircle_detour(t_sing, detour_radius,
                                                                dir > 0 ? hp : -hp);
            if (dir < 0) detour = detour.reversed();
            auto past = continue_germ(to_back.value(), detour, options);
            if (past) {
              cursor = std::move(past).value();
              cur = t_sing + dir * detour_radius;
              flanked = true;
              break;
            }
          }
        }
      }
      if (!flanked) return;  // remaining points in this direction unreachable

      // Skip grid points swallowed by the detour disc.
      while (j >= 0 && j < samples &&
             ((dir > 0 && grid(j) <= cur + 1e-15) || (dir < 0 && grid(j) >= cur - 1e-15)))
        j += dir;
    }
  };

  sweep(+1);
  sweep(-1);

  std::sort(out.reached.begin(), out.reached.end(),
            [](const CoveragePoint& a, const CoveragePoint& b) { return a.t < b.t; });
  out.reached.erase(std::unique(out.reached.begin(), out.reached.end(),
                                [](const CoveragePoint& a, const CoveragePoint& b) {
                                  return std::abs(a.t - b.t) < 1e-15;
                                }),
                    out.reached.end());
  std::sort(out.obstructions.begin(), out.obstructions.end());
  return out;
}

}  // namespace holgeo
