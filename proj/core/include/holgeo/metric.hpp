#pragma once

#include <span>
#include <vector>

#include "holgeo/detail/linalg.hpp"
#include "holgeo/expr.hpp"
#include "holgeo/result.hpp"

namespace holgeo {

/// Symmetric N x N matrix of coefficient expressions; only i <= j is
/// stored, so symmetry holds by construction.
class MetricSpec {
public:
  explicit MetricSpec(int dimension);
  static MetricSpec diagonal(std::vector<Expr> entries);

  int dimension() const { return dim_; }
  const Expr& coefficient(int i, int j) const;
  void set_coefficient(int i, int j, Expr e);

  /// Evaluate the coefficient matrix at a point.
  Result<detail::CMatrix> evaluate(std::span<const Cx> point) const;

private:
  int dim_;
  std::vector<Expr> upper_;  // packed i <= j
  size_t index(int i, int j) const;
};

/// Diagonal warped-product metric diag(b1(u1), a_2(u1) f_2(u2), ...,
/// a_N(u1) f_N(uN)). b1 and the a_k depend only on u1; each f_k only on
/// its own u^k. The constructor enforces those variable constraints.
class WarpedSpec {
public:
  WarpedSpec(int dimension, Expr b1, std::vector<Expr> a, std::vector<Expr> f);

  int dimension() const { return dim_; }
  const Expr& b1() const { return b1_; }
  const Expr& a(int k) const { return a_[k - 2]; }  // k in [2, N]
  const Expr& f(int k) const { return f_[k - 2]; }

  MetricSpec to_metric() const;

private:
  int dim_;
  Expr b1_;
  std::vector<Expr> a_, f_;
};

/// Christoffel symbols at a point; symmetric in the lower index pair.
class ChristoffelTensor {
public:
  explicit ChristoffelTensor(int dimension);
  int dimension() const { return dim_; }
  Cx gamma(int k, int i, int j) const;
  void set_gamma(int k, int i, int j, Cx value);  // writes both (i,j) and (j,i)

private:
  int dim_;
  std::vector<Cx> v_;
};

/// True iff every coefficient evaluates finitely at p and the determinant
/// clears the relative degeneracy threshold |det| > 1e-12 * (max |g_ij|)^N.
bool is_metrically_ordinary(const MetricSpec& metric, std::span<const Cx> point);

/// Coordinate formula route: Gamma^k_ij = 1/2 sum_m g^{km} (-g_{ij,m} +
/// g_{im,j} + g_{jm,i}), with the inverse metric from LU and the partials
/// from the forward-derivative evaluator.
Result<ChristoffelTensor> christoffel_general(const MetricSpec& metric,
                                              std::span<const Cx> point);

/// Closed-form route for warped products:
///   2 Gamma^1_11 = b1'/b1,   2 Gamma^1_ii = -a_i' f_i / b1   (i >= 2),
///   2 Gamma^k_kk = f_k'/f_k, 2 Gamma^k_1k = a_k'/a_k         (k >= 2),
/// all other symbols zero.
Result<ChristoffelTensor> christoffel_warped(const WarpedSpec& warped,
                                             std::span<const Cx> point);

}  // namespace holgeo
