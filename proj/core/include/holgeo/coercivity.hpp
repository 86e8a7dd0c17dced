#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "holgeo/continuation.hpp"
#include "holgeo/expr.hpp"

namespace holgeo {

/// a eta^2 + b eta + c; at least one coefficient nonzero.
struct QuadraticPolynomial {
  Cx a{0.0, 0.0}, b{0.0, 0.0}, c{0.0, 0.0};
};

enum class CatalogCase { A, B, C, D };

/// A closed-form primitive of 1/sqrt(a eta^2 + b eta + c), selected by
/// exactly one of the four mutually exclusive coefficient cases:
///   A: a != 0, b^2-4ac != 0    B: a != 0, b^2-4ac == 0
///   C: a == 0, b != 0          D: a == b == 0.
struct ClosedFormPrimitive {
  CatalogCase case_tag;
  Expr expression;           // in eta = u1
  std::string branch_policy;
};

ClosedFormPrimitive primitive_reciprocal_sqrt_quadratic(const QuadraticPolynomial& p);

const char* catalog_case_name(CatalogCase c);

struct SurjectivityStats {
  double hit_rate = 0.0;
  int hits = 0;
  int targets = 0;
  std::uint64_t seed = 0;
};

/// Fraction of targets w for which Newton iteration on germ(u) - w from
/// random starts (with random branch re-seeding of sqrt/log nodes)
/// converges to residual <= 1e-8.
SurjectivityStats surjectivity_sample(const Germ& germ, std::span<const Cx> targets,
                                      int newton_starts, std::uint64_t seed);

struct BoundedImageOptions {
  int rays = 12;
  double ray_length = 30.0;
  int steps_per_ray = 24;
  double bound = 50.0;
  double tail_tol = 1e-3;
};

struct BoundedImageReport {
  bool bounded_converged = false;  // all rays settled toward finite limits under the bound
  double max_abs = 0.0;
};

/// Conservative detector for germs whose continuation takes a bounded set
/// of values: samples the germ along rays from its base and requires a
/// settled Cauchy tail on every ray. Growth or non-convergence anywhere
/// returns bounded_converged = false.
BoundedImageReport bounded_image_sampling(const Germ& germ,
                                          const BoundedImageOptions& options = {});

enum class CoercivityVerdictKind { coercive, not_coercive, out_of_class };

const char* coercivity_verdict_name(CoercivityVerdictKind kind);

struct CoercivityVerdict {
  CoercivityVerdictKind verdict;
  std::vector<CatalogCase> factor_cases;  // catalog case used per fibre factor (k = 2..N)
  std::optional<SurjectivityStats> evidence;
  std::string reason;
};

enum class WarpedDomain {
  complex_plane,
  unit_disc_asserted,  // caller vouches for the disc-domain growth condition
};

struct ClassifyOptions {
  WarpedDomain domain = WarpedDomain::complex_plane;
  bool with_sampling_evidence = true;
  int sample_targets = 100;
  double target_radius = 3.0;
  int newton_starts = 8;
  std::uint64_t seed = 0;
};

/// Classifier for metrics of the shape
///   [h'(u1)]^2 du1 (x) du1 + sum_k [f_k(u^k)]^2 / P_k(h(u1)) du^k (x) du^k
/// with P_k of degree <= 2. When h and every f_k are globally meromorphic
/// (no sqrt/log in the recognized grammar), the metric is coercive and the
/// per-factor catalog cases are reported. Inputs outside that subset are
/// `out_of_class` unless bounded-image sampling confidently exhibits the
/// converse construction, which yields `not_coercive`.
CoercivityVerdict classify_example_class(const Expr& h, std::span<const Expr> f,
                                         std::span<const QuadraticPolynomial> p,
                                         const ClassifyOptions& options = {});

}  // namespace holgeo
