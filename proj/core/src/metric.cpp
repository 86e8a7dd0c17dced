#include "holgeo/metric.hpp"

#include <cmath>
#include <stdexcept>

namespace holgeo {

MetricSpec::MetricSpec(int dimension) : dim_(dimension) {
  if (dimension < 1) throw std::invalid_argument("MetricSpec: dimension must be >= 1");
  upper_.assign(static_cast<size_t>(dimension) * (dimension + 1) / 2,
                Expr::constant(Cx{0.0, 0.0}));
}

size_t MetricSpec::index(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= dim_) throw std::out_of_range("MetricSpec: index");
  // row-packed upper triangle
  return static_cast<size_t>(i) * dim_ - static_cast<size_t>(i) * (i - 1) / 2 + (j - i);
}

const Expr& MetricSpec::coefficient(int i, int j) const { return upper_[index(i, j)]; }

void MetricSpec::set_coefficient(int i, int j, Expr e) { upper_[index(i, j)] = std::move(e); }

MetricSpec MetricSpec::diagonal(std::vector<Expr> entries) {
  MetricSpec m(static_cast<int>(entries.size()));
  for (int i = 0; i < m.dim_; ++i) m.set_coefficient(i, i, std::move(entries[i]));
  return m;
}

Result<detail::CMatrix> MetricSpec::evaluate(std::span<const Cx> point) const {
  if (static_cast<int>(point.size()) != dim_)
    return Error{errc::invalid_argument, "point dimension mismatch"};
  detail::CMatrix g(dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = i; j < dim_; ++j) {
      auto v = eval(coefficient(i, j), point);
      if (!v) return v.error();
      g.at(i, j) = v.value();
      g.at(j, i) = v.value();
    }
  }
  return g;
}

WarpedSpec::WarpedSpec(int dimension, Expr b1, std::vector<Expr> a, std::vector<Expr> f)
    : dim_(dimension), b1_(std::move(b1)), a_(std::move(a)), f_(std::move(f)) {
  if (dimension < 2) throw std::invalid_argument("WarpedSpec: dimension must be >= 2");
  if (static_cast<int>(a_.size()) != dimension - 1 ||
      static_cast<int>(f_.size()) != dimension - 1)
    throw std::invalid_argument("WarpedSpec: need N-1 warping and N-1 fibre coefficients");
  auto check_only_var = [](const Expr& e, int var, const char* what) {
    for (int v = 0; v <= e.max_variable(); ++v)
      if (v != var && e.references_variable(v))
        throw std::invalid_argument(std::string("WarpedSpec: ") + what +
                                    " may only reference u" + std::to_string(var + 1));
  };
  if (b1_.is_zero_constant()) throw std::invalid_argument("WarpedSpec: b1 is zero");
  check_only_var(b1_, 0, "b1");
  for (int k = 2; k <= dimension; ++k) {
    if (a_[k - 2].is_zero_constant() || f_[k - 2].is_zero_constant())
      throw std::invalid_argument("WarpedSpec: zero coefficient");
    check_only_var(a_[k - 2], 0, "a_k");
    check_only_var(f_[k - 2], k - 1, "f_k");
  }
}

MetricSpec WarpedSpec::to_metric() const {
  std::vector<Expr> diag;
  diag.reserve(dim_);
  diag.push_back(b1_);
  for (int k = 2; k <= dim_; ++k) diag.push_back(a(k) * f(k));
  return MetricSpec::diagonal(std::move(diag));
}

ChristoffelTensor::ChristoffelTensor(int dimension)
    : dim_(dimension),
      v_(static_cast<size_t>(dimension) * dimension * dimension, Cx{}) {}

Cx ChristoffelTensor::gamma(int k, int i, int j) const {
  return v_[(static_cast<size_t>(k) * dim_ + i) * dim_ + j];
}

void ChristoffelTensor::set_gamma(int k, int i, int j, Cx value) {
  v_[(static_cast<size_t>(k) * dim_ + i) * dim_ + j] = value;
  v_[(static_cast<size_t>(k) * dim_ + j) * dim_ + i] = value;
}

bool is_metrically_ordinary(const MetricSpec& metric, std::span<const Cx> point) {
  auto g = metric.evaluate(point);
  if (!g) return false;
  double scale = 0.0;
  for (const Cx& v : g.value().a) scale = std::max(scale, std::abs(v));
  auto det = detail::determinant(g.value());
  if (!det) return false;
  double threshold = 1e-12 * std::pow(scale, metric.dimension());
  return std::abs(det.value()) > threshold;
}

Result<ChristoffelTensor> christoffel_general(const MetricSpec& metric,
                                              std::span<const Cx> point) {
  const int n = metric.dimension();
  if (static_cast<int>(point.size()) != n)
    return Error{errc::invalid_argument, "point dimension mismatch"};

  // g_ij and g_ij,m in one pass.
  detail::CMatrix g(n);
  std::vector<std::vector<Cx>> dg(static_cast<size_t>(n) * n);  // [i*n+j] -> partials
  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      auto d = eval_with_partials(metric.coefficient(i, j), point);
      if (!d) return Error{errc::not_ordinary,
                           "metric coefficient not evaluable: " + d.error().message};
      g.at(i, j) = d.value().value;
      g.at(j, i) = d.value().value;
      dg[static_cast<size_t>(i) * n + j] = d.value().partials;
      dg[static_cast<size_t>(j) * n + i] = d.value().partials;
      scale = std::max(scale, std::abs(d.value().value));
    }
  }

  auto lu = detail::invert(g);
  if (!lu) return Error{errc::not_ordinary, "metric is degenerate at the point"};
  if (std::abs(lu->det) <= 1e-12 * std::pow(scale, n))
    return Error{errc::not_ordinary, "metric determinant below degeneracy threshold"};

  auto partial = [&](int i, int j, int m) { return dg[static_cast<size_t>(i) * n + j][m]; };

  ChristoffelTensor gamma(n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        Cx acc{0.0, 0.0};
        for (int m = 0; m < n; ++m) {
          acc += lu->inverse.at(k, m) *
                 (-partial(i, j, m) + partial(i, m, j) + partial(j, m, i));
        }
        gamma.set_gamma(k, i, j, 0.5 * acc);
      }
    }
  }
  return gamma;
}

Result<ChristoffelTensor> christoffel_warped(const WarpedSpec& warped,
                                             std::span<const Cx> point) {
  const int n = warped.dimension();
  if (static_cast<int>(point.size()) != n)
    return Error{errc::invalid_argument, "point dimension mismatch"};
  if (!is_metrically_ordinary(warped.to_metric(), point))
    return Error{errc::not_ordinary, "warped metric not ordinary at the point"};

  // All coefficients are single-variable; value and derivative come from
  // the forward evaluator.
  auto value_and_deriv = [&](const Expr& e, int var) -> Result<std::pair<Cx, Cx>> {
    auto d = eval_with_partials(e, point);
    if (!d) return Error{errc::coefficient_pole, d.error().message};
    return std::make_pair(d.value().value, d.value().partials[var]);
  };

  auto b1 = value_and_deriv(warped.b1(), 0);
  if (!b1) return b1.error();
  auto [b1v, b1d] = b1.value();
  if (std::abs(b1v) < 1e-300)
    return Error{errc::coefficient_pole, "b1 vanishes at the point"};

  ChristoffelTensor gamma(n);
  gamma.set_gamma(0, 0, 0, 0.5 * b1d / b1v);

  for (int k = 2; k <= n; ++k) {
    auto ak = value_and_deriv(warped.a(k), 0);
    if (!ak) return ak.error();
    auto fk = value_and_deriv(warped.f(k), k - 1);
    if (!fk) return fk.error();
    auto [akv, akd] = ak.value();
    auto [fkv, fkd] = fk.value();
    if (std::abs(akv) < 1e-300 || std::abs(fkv) < 1e-300)
      return Error{errc::coefficient_pole, "warping coefficient vanishes at the point"};

    int ki = k - 1;  // 0-based index of coordinate u^k
    gamma.set_gamma(0, ki, ki, -0.5 * akd * fkv / b1v);
    gamma.set_gamma(ki, ki, ki, 0.5 * fkd / fkv);
    gamma.set_gamma(ki, 0, ki, 0.5 * akd / akv);
  }
  return gamma;
}

}  // namespace holgeo
