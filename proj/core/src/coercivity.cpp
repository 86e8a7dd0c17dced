#include "holgeo/coercivity.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace holgeo {

const char* catalog_case_name(CatalogCase c) {
  switch (c) {
    case CatalogCase::A: return "A";
    case CatalogCase::B: return "B";
    case CatalogCase::C: return "C";
    case CatalogCase::D: return "D";
  }
  return "?";
}

const char* coercivity_verdict_name(CoercivityVerdictKind kind) {
  switch (kind) {
    case CoercivityVerdictKind::coercive: return "coercive";
    case CoercivityVerdictKind::not_coercive: return "not_coercive";
    case CoercivityVerdictKind::out_of_class: return "out_of_class";
  }
  return "?";
}

ClosedFormPrimitive primitive_reciprocal_sqrt_quadratic(const QuadraticPolynomial& p) {
  const Cx zero{0.0, 0.0};
  if (p.a == zero && p.b == zero && p.c == zero)
    throw std::invalid_argument("quadratic coefficients are all zero");

  Expr eta = Expr::variable(0);

  if (p.a != zero) {
    Cx inv_sqrt_a = Cx{1.0, 0.0} / std::sqrt(p.a);
    Cx delta = p.b * p.b - 4.0 * p.a * p.c;
    if (delta != zero) {
      // (1/sqrt a) log(eta + b/2a + sqrt(eta^2 + (b/a) eta + c/a))
      Expr radicand = pow(eta, 2) + Expr::constant(p.b / p.a) * eta + Expr::constant(p.c / p.a);
      Expr inner = eta + Expr::constant(p.b / (2.0 * p.a)) + sqrt(radicand);
      return {CatalogCase::A, Expr::constant(inv_sqrt_a) * log(inner),
              "same branch of sqrt, any branch of log"};
    }
    Expr inner = eta + Expr::constant(p.b / (2.0 * p.a));
    return {CatalogCase::B, Expr::constant(inv_sqrt_a) * log(inner), "any branch of log"};
  }

  if (p.b != zero) {
    Expr inner = Expr::constant(p.b) * eta + Expr::constant(p.c);
    return {CatalogCase::C, Expr::constant(2.0 / p.b) * sqrt(inner), "same branch of sqrt"};
  }

  Cx inv_sqrt_c = Cx{1.0, 0.0} / std::sqrt(p.c);
  return {CatalogCase::D, Expr::constant(inv_sqrt_c) * eta, "same branch of sqrt"};
}

// ---------------------------------------------------------------------------
// Surjectivity sampling

namespace {

constexpr double kNewtonResidual = 1e-8;
constexpr int kNewtonIters = 40;

bool newton_closed_form(const Expr& expr, Cx target, Cx start,
                        const BranchState& seed_state, Cx base_hint) {
  Cx u = start;
  BranchState state = seed_state;
  (void)base_hint;
  for (int it = 0; it < kNewtonIters; ++it) {
    auto moved = eval_branched(expr, u, state);
    if (!moved) return false;
    state = moved.value().state;
    auto d = eval_branched_dual(expr, u, state);
    if (!d) return false;
    Cx residual = d.value().value - target;
    if (std::abs(residual) <= kNewtonResidual) return true;
    if (std::abs(d.value().derivative) < 1e-14) return false;
    Cx step = residual / d.value().derivative;
    // Damp wild steps so the branch phases can track the motion.
    double cap = 2.0;
    if (std::abs(step) > cap) step *= cap / std::abs(step);
    u -= step;
    if (!std::isfinite(u.real()) || !std::isfinite(u.imag())) return false;
  }
  return false;
}

bool newton_ode(const Germ& germ, Cx target, Cx start,
                const ContinuationOptions& options) {
  Cx u = start;
  Germ cursor = germ;
  for (int it = 0; it < kNewtonIters; ++it) {
    if (std::abs(u - cursor.base_point()) > 1e-14) {
      auto moved =
          continue_germ(cursor, ComplexPath::line(cursor.base_point(), u), options);
      if (!moved) return false;
      cursor = std::move(moved).value();
    }
    Cx value = cursor.value();
    Cx residual = value - target;
    if (std::abs(residual) <= kNewtonResidual) return true;
    auto deriv = cursor.rhs()(value, u);  // value' = F(value, z) along the germ
    if (!deriv || std::abs(deriv.value()) < 1e-14) return false;
    Cx step = residual / deriv.value();
    double cap = 2.0;
    if (std::abs(step) > cap) step *= cap / std::abs(step);
    u -= step;
    if (!std::isfinite(u.real()) || !std::isfinite(u.imag())) return false;
  }
  return false;
}

}  // namespace

SurjectivityStats surjectivity_sample(const Germ& germ, std::span<const Cx> targets,
                                      int newton_starts, std::uint64_t seed) {
  SurjectivityStats stats;
  stats.targets = static_cast<int>(targets.size());
  stats.seed = seed;
  if (targets.empty()) return stats;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radial(0.0, 4.0);
  std::uniform_real_distribution<double> angular(0.0, 2.0 * M_PI);
  std::uniform_int_distribution<int> winding(-2, 2);

  const int branch_nodes =
      germ.is_closed_form() ? germ.expression().multivalued_node_count() : 0;

  for (Cx target : targets) {
    bool hit = false;
    for (int s = 0; s < newton_starts && !hit; ++s) {
      Cx start = germ.base_point() + std::polar(radial(rng), angular(rng));
      if (germ.is_closed_form()) {
        BranchState state = germ.branch_state();
        for (int j = 0; j < branch_nodes; ++j)
          state.phase[j] += 2.0 * M_PI * winding(rng);
        hit = newton_closed_form(germ.expression(), target, start, state,
                                 germ.base_point());
      } else {
        hit = newton_ode(germ, target, start, ContinuationOptions{});
      }
    }
    if (hit) ++stats.hits;
  }
  stats.hit_rate = static_cast<double>(stats.hits) / static_cast<double>(stats.targets);
  return stats;
}

BoundedImageReport bounded_image_sampling(const Germ& germ,
                                          const BoundedImageOptions& options) {
  BoundedImageReport report;
  bool all_settled = true;

  for (int ray = 0; ray < options.rays; ++ray) {
    double theta = 2.0 * M_PI * ray / options.rays;
    Cx dir = std::polar(1.0, theta);
    Germ cursor = germ;
    std::vector<double> tail;

    double step = options.ray_length / options.steps_per_ray;
    bool aborted = false;
    for (int k = 1; k <= options.steps_per_ray; ++k) {
      Cx from = cursor.base_point();
      Cx to = germ.base_point() + dir * (step * k);
      auto moved = continue_germ(cursor, ComplexPath::line(from, to));
      if (!moved) {
        aborted = true;
        break;
      }
      cursor = std::move(moved).value();
      double mag = std::abs(cursor.value());
      report.max_abs = std::max(report.max_abs, mag);
      tail.push_back(mag);
      if (mag > options.bound) {
        report.bounded_converged = false;
        return report;
      }
    }

    // A settled ray ends with a flat Cauchy tail; an aborted ray whose
    // values were still moving is inconclusive.
    if (tail.size() < 4) {
      all_settled = false;
      continue;
    }
    size_t n = tail.size();
    double span = std::abs(tail[n - 1] - tail[n - 2]) + std::abs(tail[n - 2] - tail[n - 3]);
    bool settled = span <= options.tail_tol * (1.0 + std::abs(tail[n - 1]));
    if (aborted || !settled) all_settled = false;
  }

  report.bounded_converged = all_settled && report.max_abs <= options.bound;
  return report;
}

// ---------------------------------------------------------------------------
// Example-class classifier

namespace {

bool nonzero_by_sampling(const Expr& e, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-1.5, 1.5);
  int dim = std::max(1, e.max_variable() + 1);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<Cx> p(dim);
    for (auto& x : p) x = Cx{coord(rng), coord(rng)};
    auto v = eval(e, p);
    if (v && std::abs(v.value()) > 1e-12) return true;
  }
  return false;
}

}  // namespace

CoercivityVerdict classify_example_class(const Expr& h, std::span<const Expr> f,
                                         std::span<const QuadraticPolynomial> p,
                                         const ClassifyOptions& options) {
  CoercivityVerdict verdict;
  verdict.verdict = CoercivityVerdictKind::out_of_class;

  if (f.size() != p.size())
    throw std::invalid_argument("classify_example_class: need one P_k per f_k");
  if (f.empty()) throw std::invalid_argument("classify_example_class: no fibre factors");

  if (options.domain == WarpedDomain::unit_disc_asserted) {
    verdict.reason =
        "disc domain accepted on caller assertion; growth condition not checked";
  }

  // Recognized subset: globally meromorphic h and f_k, nonconstant h,
  // no identically-zero factor.
  bool in_subset = h.is_meromorphic_form() && h.max_variable() >= 0;
  for (const Expr& fk : f) in_subset = in_subset && fk.is_meromorphic_form();
  if (in_subset) {
    if (!nonzero_by_sampling(h, options.seed ^ 0x9e3779b97f4a7c15ull)) in_subset = false;
    for (const Expr& fk : f)
      if (!nonzero_by_sampling(fk, options.seed ^ 0xc2b2ae3d27d4eb4full)) in_subset = false;
  }

  if (in_subset) {
    verdict.verdict = CoercivityVerdictKind::coercive;
    verdict.reason = "h and all f_k are globally meromorphic; primitives reduce to the "
                     "closed-form catalog through h";
    for (const auto& pk : p)
      verdict.factor_cases.push_back(primitive_reciprocal_sqrt_quadratic(pk).case_tag);

    if (options.with_sampling_evidence) {
      // Sample the first-factor primitive composed with h, with the
      // A-weights picking out P_k alone.
      std::mt19937_64 rng(options.seed);
      std::uniform_real_distribution<double> radial(0.0, options.target_radius);
      std::uniform_real_distribution<double> angular(0.0, 2.0 * M_PI);
      std::vector<Cx> targets(options.sample_targets);
      for (auto& t : targets) t = std::polar(radial(rng), angular(rng));

      SurjectivityStats worst;
      worst.hit_rate = 2.0;
      for (const auto& pk : p) {
        Expr composed = substitute(primitive_reciprocal_sqrt_quadratic(pk).expression, 0, h);
        auto germ = Germ::closed_form(composed, Cx{0.0, 0.0});
        if (!germ) {
          // Base point sits on a singular locus of the composition; shift it.
          germ = Germ::closed_form(composed, Cx{0.37, 0.11});
        }
        if (!germ) continue;
        auto stats = surjectivity_sample(germ.value(), targets, options.newton_starts,
                                         options.seed);
        if (stats.hit_rate < worst.hit_rate) worst = stats;
      }
      if (worst.hit_rate <= 1.0) verdict.evidence = worst;
    }
    return verdict;
  }

  // Outside the recognized subset: only a confidently bounded primitive
  // image is reported as the converse construction.
  for (size_t k = 0; k < f.size(); ++k) {
    const Expr& fk = f[k];
    if (fk.is_meromorphic_form()) continue;
    int var = std::max(0, fk.max_variable());
    Expr fk_one = var == 0 ? fk : substitute(fk, var, Expr::variable(0));
    ScalarRhs rhs = [fk_one](Cx, Cx z) -> Result<Cx> {
      std::vector<Cx> point{z};
      auto v = eval(fk_one, point);
      if (!v) return v.error();
      return std::sqrt(v.value());  // principal branch; detector is a heuristic
    };
    auto germ = Germ::ode_defined(rhs, Cx{0.0, 0.0}, Cx{0.0, 0.0});
    if (!germ) continue;
    auto report = bounded_image_sampling(germ.value());
    if (report.bounded_converged) {
      verdict.verdict = CoercivityVerdictKind::not_coercive;
      verdict.reason = "fibre primitive sampled as bounded with settled tails (factor " +
                       std::to_string(k + 2) + ")";
      return verdict;
    }
  }

  verdict.verdict = CoercivityVerdictKind::out_of_class;
  if (verdict.reason.empty())
    verdict.reason = "inputs leave the recognized globally-meromorphic subset";
  return verdict;
}

}  // namespace holgeo
