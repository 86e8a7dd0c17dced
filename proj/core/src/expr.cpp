#include "holgeo/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace holgeo {

namespace {

constexpr double kPoleFloor = 1e-300;  // overflow-safe "is zero" sentinel

bool finite(Cx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

Cx ipow(Cx base, int exponent) {
  if (exponent == 0) return Cx{1.0, 0.0};
  bool invert = exponent < 0;
  unsigned long n = invert ? -static_cast<long>(exponent) : exponent;
  Cx acc{1.0, 0.0};
  Cx b = base;
  while (n > 0) {
    if (n & 1u) acc *= b;
    b *= b;
    n >>= 1u;
  }
  return invert ? Cx{1.0, 0.0} / acc : acc;
}

}  // namespace

const char* errc_name(errc code) {
  switch (code) {
    case errc::pole: return "pole";
    case errc::branch_ambiguous: return "branch_ambiguous";
    case errc::not_ordinary: return "not_ordinary";
    case errc::coefficient_pole: return "coefficient_pole";
    case errc::null_vector: return "null_vector";
    case errc::on_axis: return "on_axis";
    case errc::singular_crossing: return "singular_crossing";
    case errc::hit_singularity: return "hit_singularity";
    case errc::field_failure: return "field_failure";
    case errc::branch_undefined: return "branch_undefined";
    case errc::parse_error: return "parse_error";
    case errc::invalid_argument: return "invalid_argument";
  }
  return "unknown";
}

Expr Expr::make(Node node) {
  return Expr(std::make_shared<const Node>(std::move(node)));
}

Expr Expr::constant(Cx value) {
  Node n;
  n.op = Op::constant;
  n.value = value;
  return make(std::move(n));
}

Expr Expr::variable(int index) {
  if (index < 0) throw std::invalid_argument("Expr::variable: negative index");
  Node n;
  n.op = Op::variable;
  n.var_index = index;
  return make(std::move(n));
}

// The friend builders need access to the private factory, so they are
// written out through macros rather than a shared helper.
#define HOLGEO_BINARY(name, opval)                        \
  Expr name(const Expr& a, const Expr& b) {               \
    Expr::Node n;                                         \
    n.op = Expr::Op::opval;                               \
    n.lhs = a.root_ptr();                                 \
    n.rhs = b.root_ptr();                                 \
    return Expr::make(std::move(n));                      \
  }

#define HOLGEO_UNARY(name, opval)                         \
  Expr name(const Expr& a) {                              \
    Expr::Node n;                                         \
    n.op = Expr::Op::opval;                               \
    n.lhs = a.root_ptr();                                 \
    return Expr::make(std::move(n));                      \
  }

HOLGEO_BINARY(operator+, add)
HOLGEO_BINARY(operator-, sub)
HOLGEO_BINARY(operator*, mul)
HOLGEO_BINARY(operator/, div)
HOLGEO_UNARY(operator-, neg)
HOLGEO_UNARY(exp, exp_fn)
HOLGEO_UNARY(log, log_fn)
HOLGEO_UNARY(sin, sin_fn)
HOLGEO_UNARY(cos, cos_fn)
HOLGEO_UNARY(tan, tan_fn)
HOLGEO_UNARY(cosh, cosh_fn)
HOLGEO_UNARY(sinh, sinh_fn)
HOLGEO_UNARY(sqrt, sqrt_fn)

#undef HOLGEO_BINARY
#undef HOLGEO_UNARY

Expr pow(const Expr& base, int exponent) {
  Expr::Node n;
  n.op = Expr::Op::pow_int;
  n.exponent = exponent;
  n.lhs = base.root_ptr();
  return Expr::make(std::move(n));
}

namespace {

void walk(const Expr::Node& n, int& max_var, int& multivalued, bool& has_multivalued) {
  switch (n.op) {
    case Expr::Op::variable:
      if (n.var_index > max_var) max_var = n.var_index;
      break;
    case Expr::Op::sqrt_fn:
    case Expr::Op::log_fn:
      ++multivalued;
      has_multivalued = true;
      break;
    default:
      break;
  }
  if (n.lhs) walk(*n.lhs, max_var, multivalued, has_multivalued);
  if (n.rhs) walk(*n.rhs, max_var, multivalued, has_multivalued);
}

bool references(const Expr::Node& n, int index) {
  if (n.op == Expr::Op::variable) return n.var_index == index;
  if (n.lhs && references(*n.lhs, index)) return true;
  if (n.rhs && references(*n.rhs, index)) return true;
  return false;
}

}  // namespace

int Expr::max_variable() const {
  int max_var = -1, mv = 0;
  bool has = false;
  walk(*root_, max_var, mv, has);
  return max_var;
}

bool Expr::references_variable(int index) const { return references(*root_, index); }

int Expr::multivalued_node_count() const {
  int max_var = -1, mv = 0;
  bool has = false;
  walk(*root_, max_var, mv, has);
  return mv;
}

bool Expr::is_zero_constant() const {
  return root_->op == Op::constant && root_->value == Cx{0.0, 0.0};
}

bool Expr::is_meromorphic_form() const {
  int max_var = -1, mv = 0;
  bool has = false;
  walk(*root_, max_var, mv, has);
  return !has;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

Result<Cx> eval_node(const Expr::Node& n, std::span<const Cx> point) {
  using Op = Expr::Op;
  switch (n.op) {
    case Op::constant:
      return n.value;
    case Op::variable:
      if (n.var_index >= static_cast<int>(point.size()))
        return Error{errc::invalid_argument,
                     "variable u" + std::to_string(n.var_index + 1) +
                         " outside point dimension " + std::to_string(point.size())};
      return point[n.var_index];
    default:
      break;
  }

  auto a = eval_node(*n.lhs, point);
  if (!a) return a;
  Cx va = a.value();

  switch (n.op) {
    case Op::neg: return -va;
    case Op::exp_fn: {
      Cx r = std::exp(va);
      if (!finite(r)) return Error::at(errc::pole, "exp overflow", va);
      return r;
    }
    case Op::log_fn:
      if (std::abs(va) < kPoleFloor)
        return Error::at(errc::branch_ambiguous, "log of 0", va);
      return std::log(va);
    case Op::sin_fn: {
      Cx r = std::sin(va);
      if (!finite(r)) return Error::at(errc::pole, "sin overflow", va);
      return r;
    }
    case Op::cos_fn: {
      Cx r = std::cos(va);
      if (!finite(r)) return Error::at(errc::pole, "cos overflow", va);
      return r;
    }
    case Op::tan_fn: {
      Cx c = std::cos(va);
      Cx s = std::sin(va);
      if (std::abs(c) < kPoleFloor || std::abs(c) * 1e300 < std::abs(s))
        return Error::at(errc::pole, "tan at cosine zero", va);
      Cx r = s / c;
      if (!finite(r)) return Error::at(errc::pole, "tan overflow", va);
      return r;
    }
    case Op::cosh_fn: {
      Cx r = std::cosh(va);
      if (!finite(r)) return Error::at(errc::pole, "cosh overflow", va);
      return r;
    }
    case Op::sinh_fn: {
      Cx r = std::sinh(va);
      if (!finite(r)) return Error::at(errc::pole, "sinh overflow", va);
      return r;
    }
    case Op::sqrt_fn:
      if (std::abs(va) < kPoleFloor)
        return Error::at(errc::branch_ambiguous, "sqrt of 0", va);
      return std::sqrt(va);
    case Op::pow_int: {
      if (n.exponent < 0 && std::abs(va) < kPoleFloor)
        return Error::at(errc::pole, "negative power of 0", va);
      Cx r = ipow(va, n.exponent);
      if (!finite(r)) return Error::at(errc::pole, "power overflow", va);
      return r;
    }
    default:
      break;
  }

  auto b = eval_node(*n.rhs, point);
  if (!b) return b;
  Cx vb = b.value();

  switch (n.op) {
    case Op::add: return va + vb;
    case Op::sub: return va - vb;
    case Op::mul: {
      Cx r = va * vb;
      if (!finite(r)) return Error::at(errc::pole, "product overflow", va);
      return r;
    }
    case Op::div: {
      if (std::abs(vb) < kPoleFloor)
        return Error::at(errc::pole, "division by 0", vb);
      Cx r = va / vb;
      if (!finite(r)) return Error::at(errc::pole, "division overflow", vb);
      return r;
    }
    default:
      return Error{errc::invalid_argument, "malformed expression node"};
  }
}

struct Dual {
  Cx v;
  std::vector<Cx> d;
};

Result<Dual> dual_node(const Expr::Node& n, std::span<const Cx> point) {
  using Op = Expr::Op;
  const size_t dim = point.size();
  switch (n.op) {
    case Op::constant:
      return Dual{n.value, std::vector<Cx>(dim, Cx{})};
    case Op::variable: {
      if (n.var_index >= static_cast<int>(dim))
        return Error{errc::invalid_argument,
                     "variable u" + std::to_string(n.var_index + 1) +
                         " outside point dimension " + std::to_string(dim)};
      Dual r{point[n.var_index], std::vector<Cx>(dim, Cx{})};
      r.d[n.var_index] = Cx{1.0, 0.0};
      return r;
    }
    default:
      break;
  }

  auto ar = dual_node(*n.lhs, point);
  if (!ar) return ar.error();
  Dual a = std::move(ar).value();

  auto chain = [&](Cx value, Cx factor) -> Result<Dual> {
    if (!finite(value) || !finite(factor))
      return Error::at(errc::pole, "derivative overflow", a.v);
    Dual r{value, std::move(a.d)};
    for (auto& p : r.d) p *= factor;
    return r;
  };

  switch (n.op) {
    case Op::neg: return chain(-a.v, Cx{-1.0, 0.0});
    case Op::exp_fn: {
      Cx e = std::exp(a.v);
      if (!finite(e)) return Error::at(errc::pole, "exp overflow", a.v);
      return chain(e, e);
    }
    case Op::log_fn:
      if (std::abs(a.v) < kPoleFloor)
        return Error::at(errc::branch_ambiguous, "log of 0", a.v);
      return chain(std::log(a.v), Cx{1.0, 0.0} / a.v);
    case Op::sin_fn: return chain(std::sin(a.v), std::cos(a.v));
    case Op::cos_fn: return chain(std::cos(a.v), -std::sin(a.v));
    case Op::tan_fn: {
      Cx c = std::cos(a.v);
      if (std::abs(c) < kPoleFloor || std::abs(c) * 1e300 < std::abs(std::sin(a.v)))
        return Error::at(errc::pole, "tan at cosine zero", a.v);
      Cx t = std::sin(a.v) / c;
      return chain(t, Cx{1.0, 0.0} / (c * c));
    }
    case Op::cosh_fn: return chain(std::cosh(a.v), std::sinh(a.v));
    case Op::sinh_fn: return chain(std::sinh(a.v), std::cosh(a.v));
    case Op::sqrt_fn: {
      if (std::abs(a.v) < kPoleFloor)
        return Error::at(errc::branch_ambiguous, "sqrt of 0", a.v);
      Cx s = std::sqrt(a.v);
      return chain(s, Cx{0.5, 0.0} / s);
    }
    case Op::pow_int: {
      if (n.exponent == 0) return Dual{Cx{1.0, 0.0}, std::vector<Cx>(dim, Cx{})};
      if (n.exponent < 0 && std::abs(a.v) < kPoleFloor)
        return Error::at(errc::pole, "negative power of 0", a.v);
      Cx value = ipow(a.v, n.exponent);
      Cx factor = Cx(static_cast<double>(n.exponent), 0.0) * ipow(a.v, n.exponent - 1);
      return chain(value, factor);
    }
    default:
      break;
  }

  auto br = dual_node(*n.rhs, point);
  if (!br) return br.error();
  Dual b = std::move(br).value();

  switch (n.op) {
    case Op::add: {
      Dual r{a.v + b.v, std::move(a.d)};
      for (size_t j = 0; j < dim; ++j) r.d[j] += b.d[j];
      return r;
    }
    case Op::sub: {
      Dual r{a.v - b.v, std::move(a.d)};
      for (size_t j = 0; j < dim; ++j) r.d[j] -= b.d[j];
      return r;
    }
    case Op::mul: {
      Cx v = a.v * b.v;
      if (!finite(v)) return Error::at(errc::pole, "product overflow", a.v);
      Dual r{v, std::vector<Cx>(dim)};
      for (size_t j = 0; j < dim; ++j) r.d[j] = a.d[j] * b.v + a.v * b.d[j];
      return r;
    }
    case Op::div: {
      if (std::abs(b.v) < kPoleFloor)
        return Error::at(errc::pole, "division by 0", b.v);
      Cx v = a.v / b.v;
      if (!finite(v)) return Error::at(errc::pole, "division overflow", b.v);
      Dual r{v, std::vector<Cx>(dim)};
      Cx inv2 = Cx{1.0, 0.0} / (b.v * b.v);
      for (size_t j = 0; j < dim; ++j)
        r.d[j] = (a.d[j] * b.v - a.v * b.d[j]) * inv2;
      return r;
    }
    default:
      return Error{errc::invalid_argument, "malformed expression node"};
  }
}

}  // namespace

Result<Cx> eval(const Expr& expr, std::span<const Cx> point) {
  return eval_node(expr.root(), point);
}

Result<DualValue> eval_with_partials(const Expr& expr, std::span<const Cx> point) {
  auto r = dual_node(expr.root(), point);
  if (!r) return r.error();
  DualValue out;
  out.value = r.value().v;
  out.partials = std::move(r).value().d;
  return out;
}

// ---------------------------------------------------------------------------
// Symbolic differentiation

namespace {

bool is_const_value(const Expr& e, Cx v) {
  return e.root().op == Expr::Op::constant && e.root().value == v;
}

Expr simp_add(const Expr& a, const Expr& b) {
  if (is_const_value(a, Cx{0.0, 0.0})) return b;
  if (is_const_value(b, Cx{0.0, 0.0})) return a;
  return a + b;
}

Expr simp_sub(const Expr& a, const Expr& b) {
  if (is_const_value(b, Cx{0.0, 0.0})) return a;
  if (is_const_value(a, Cx{0.0, 0.0})) return -b;
  return a - b;
}

Expr simp_mul(const Expr& a, const Expr& b) {
  if (is_const_value(a, Cx{0.0, 0.0}) || is_const_value(b, Cx{0.0, 0.0}))
    return Expr::constant(Cx{0.0, 0.0});
  if (is_const_value(a, Cx{1.0, 0.0})) return b;
  if (is_const_value(b, Cx{1.0, 0.0})) return a;
  return a * b;
}

Expr diff_node(const Expr& e, int var) {
  using Op = Expr::Op;
  const Expr::Node& n = e.root();
  auto sub = [&](const std::shared_ptr<const Expr::Node>& p) { return Expr::from_root(p); };

  switch (n.op) {
    case Op::constant: return Expr::constant(Cx{0.0, 0.0});
    case Op::variable:
      return Expr::constant(n.var_index == var ? Cx{1.0, 0.0} : Cx{0.0, 0.0});
    case Op::neg: return -diff_node(sub(n.lhs), var);
    case Op::add: return simp_add(diff_node(sub(n.lhs), var), diff_node(sub(n.rhs), var));
    case Op::sub: return simp_sub(diff_node(sub(n.lhs), var), diff_node(sub(n.rhs), var));
    case Op::mul: {
      Expr a = sub(n.lhs), b = sub(n.rhs);
      return simp_add(simp_mul(diff_node(a, var), b), simp_mul(a, diff_node(b, var)));
    }
    case Op::div: {
      Expr a = sub(n.lhs), b = sub(n.rhs);
      Expr num = simp_sub(simp_mul(diff_node(a, var), b), simp_mul(a, diff_node(b, var)));
      if (is_const_value(num, Cx{0.0, 0.0})) return num;
      return num / pow(b, 2);
    }
    case Op::pow_int: {
      Expr a = sub(n.lhs);
      Expr da = diff_node(a, var);
      if (n.exponent == 0 || is_const_value(da, Cx{0.0, 0.0}))
        return Expr::constant(Cx{0.0, 0.0});
      Expr factor = simp_mul(Expr::constant(Cx(static_cast<double>(n.exponent), 0.0)),
                             pow(a, n.exponent - 1));
      return simp_mul(factor, da);
    }
    case Op::exp_fn: {
      Expr a = sub(n.lhs);
      return simp_mul(exp(a), diff_node(a, var));
    }
    case Op::log_fn: {
      Expr a = sub(n.lhs);
      Expr da = diff_node(a, var);
      if (is_const_value(da, Cx{0.0, 0.0})) return da;
      return da / a;
    }
    case Op::sin_fn: {
      Expr a = sub(n.lhs);
      return simp_mul(cos(a), diff_node(a, var));
    }
    case Op::cos_fn: {
      Expr a = sub(n.lhs);
      return simp_mul(-sin(a), diff_node(a, var));
    }
    case Op::tan_fn: {
      Expr a = sub(n.lhs);
      Expr da = diff_node(a, var);
      if (is_const_value(da, Cx{0.0, 0.0})) return da;
      return da / pow(cos(a), 2);
    }
    case Op::cosh_fn: {
      Expr a = sub(n.lhs);
      return simp_mul(sinh(a), diff_node(a, var));
    }
    case Op::sinh_fn: {
      Expr a = sub(n.lhs);
      return simp_mul(cosh(a), diff_node(a, var));
    }
    case Op::sqrt_fn: {
      Expr a = sub(n.lhs);
      Expr da = diff_node(a, var);
      if (is_const_value(da, Cx{0.0, 0.0})) return da;
      return da / simp_mul(Expr::constant(Cx{2.0, 0.0}), sqrt(a));
    }
  }
  throw std::logic_error("diff_node: unhandled op");
}

}  // namespace

Expr differentiate(const Expr& expr, int var_index) {
  return diff_node(expr, var_index);
}

namespace {

std::shared_ptr<const Expr::Node> subst_node(const std::shared_ptr<const Expr::Node>& n,
                                             int var, const Expr& replacement) {
  if (n->op == Expr::Op::variable)
    return n->var_index == var ? replacement.root_ptr() : n;
  if (!n->lhs) return n;
  auto lhs = subst_node(n->lhs, var, replacement);
  auto rhs = n->rhs ? subst_node(n->rhs, var, replacement) : nullptr;
  if (lhs == n->lhs && rhs == n->rhs) return n;
  Expr::Node copy = *n;
  copy.lhs = std::move(lhs);
  copy.rhs = std::move(rhs);
  return std::make_shared<const Expr::Node>(std::move(copy));
}

}  // namespace

Expr substitute(const Expr& expr, int var_index, const Expr& replacement) {
  return Expr::from_root(subst_node(expr.root_ptr(), var_index, replacement));
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Parser {
  std::string_view text;
  size_t pos = 0;
  int dimension;
  std::optional<Error> err;

  void fail(std::string message, size_t at) {
    if (!err) {
      Error e{errc::parse_error,
              "position " + std::to_string(at) + ": " + std::move(message)};
      e.position = static_cast<int>(at);
      err = std::move(e);
    }
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool consume(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    while (!err) {
      skip_ws();
      if (consume('+')) lhs = lhs + parse_term();
      else if (consume('-')) lhs = lhs - parse_term();
      else break;
    }
    return lhs;
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    while (!err) {
      skip_ws();
      if (consume('*')) lhs = lhs * parse_unary();
      else if (consume('/')) lhs = lhs / parse_unary();
      else break;
    }
    return lhs;
  }

  Expr parse_unary() {
    skip_ws();
    if (consume('-')) return -parse_unary();
    if (consume('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (err) return base;
    skip_ws();
    if (consume('^')) {
      auto e = parse_int_exponent();
      if (err) return base;
      return pow(base, e);
    }
    return base;
  }

  int parse_int_exponent() {
    skip_ws();
    size_t start = pos;
    bool parens = consume('(');
    skip_ws();
    bool negative = consume('-');
    skip_ws();
    size_t digits_start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == digits_start) {
      fail("expected integer exponent after '^'", start);
      return 0;
    }
    if (pos < text.size() && (text[pos] == '.' || text[pos] == 'e' || text[pos] == 'E')) {
      fail("exponent must be an integer", pos);
      return 0;
    }
    long v = 0;
    for (size_t k = digits_start; k < pos; ++k) {
      v = v * 10 + (text[k] - '0');
      if (v > 1000000) {
        fail("exponent out of range", digits_start);
        return 0;
      }
    }
    if (parens && !consume(')')) {
      fail("expected ')' closing exponent", pos);
      return 0;
    }
    return negative ? static_cast<int>(-v) : static_cast<int>(v);
  }

  Expr parse_atom() {
    skip_ws();
    if (pos >= text.size()) {
      fail("unexpected end of input", pos);
      return Expr::constant(Cx{});
    }
    char c = text[pos];
    if (c == '(') {
      ++pos;
      Expr inner = parse_expr();
      if (!err && !consume(')')) fail("expected ')'", pos);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    fail(std::string("unexpected character '") + c + "'", pos);
    return Expr::constant(Cx{});
  }

  Expr parse_number() {
    size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
      size_t mark = pos;
      ++pos;
      if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
      if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      } else {
        pos = mark;  // the 'e' begins an identifier, e.g. "2e" is not allowed anyway
      }
    }
    double v = 0.0;
    try {
      v = std::stod(std::string(text.substr(start, pos - start)));
    } catch (const std::exception&) {
      fail("malformed number", start);
    }
    return Expr::constant(Cx{v, 0.0});
  }

  Expr parse_ident() {
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    std::string_view name = text.substr(start, pos - start);

    if (name == "i") return Expr::constant(Cx{0.0, 1.0});

    if (name.size() >= 2 && name[0] == 'u') {
      bool all_digits = true;
      for (size_t k = 1; k < name.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(name[k]))) all_digits = false;
      if (all_digits) {
        int idx = 0;
        for (size_t k = 1; k < name.size(); ++k) idx = idx * 10 + (name[k] - '0');
        if (idx < 1 || idx > dimension) {
          fail("variable u" + std::to_string(idx) + " outside dimension " +
                   std::to_string(dimension),
               start);
          return Expr::constant(Cx{});
        }
        return Expr::variable(idx - 1);
      }
    }

    static const std::pair<std::string_view, Expr (*)(const Expr&)> fns[] = {
        {"exp", exp},   {"log", log},   {"sin", sin},   {"cos", cos},
        {"tan", tan},   {"cosh", cosh}, {"sinh", sinh}, {"sqrt", sqrt},
    };
    for (const auto& [fname, fn] : fns) {
      if (name == fname) {
        if (!consume('(')) {
          fail("expected '(' after function " + std::string(fname), pos);
          return Expr::constant(Cx{});
        }
        Expr arg = parse_expr();
        if (!err && !consume(')')) fail("expected ')'", pos);
        return fn(arg);
      }
    }
    fail("unknown identifier '" + std::string(name) + "'", start);
    return Expr::constant(Cx{});
  }
};

}  // namespace

Result<Expr> parse_expression(std::string_view text, int dimension) {
  Parser p{text, 0, dimension, std::nullopt};
  Expr e = p.parse_expr();
  if (!p.err && !p.at_end()) p.fail("trailing input", p.pos);
  if (p.err) return *p.err;
  return e;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void print_node(const Expr::Node& n, std::ostringstream& out) {
  using Op = Expr::Op;
  auto fn = [&](const char* name) {
    out << name << '(';
    print_node(*n.lhs, out);
    out << ')';
  };
  switch (n.op) {
    case Op::constant: {
      if (n.value.imag() == 0.0) {
        out << n.value.real();
      } else if (n.value.real() == 0.0 && n.value.imag() == 1.0) {
        out << 'i';
      } else {
        out << '(' << n.value.real() << '+' << n.value.imag() << "*i)";
      }
      return;
    }
    case Op::variable: out << 'u' << (n.var_index + 1); return;
    case Op::neg:
      out << "(-";
      print_node(*n.lhs, out);
      out << ')';
      return;
    case Op::exp_fn: fn("exp"); return;
    case Op::log_fn: fn("log"); return;
    case Op::sin_fn: fn("sin"); return;
    case Op::cos_fn: fn("cos"); return;
    case Op::tan_fn: fn("tan"); return;
    case Op::cosh_fn: fn("cosh"); return;
    case Op::sinh_fn: fn("sinh"); return;
    case Op::sqrt_fn: fn("sqrt"); return;
    case Op::pow_int:
      out << '(';
      print_node(*n.lhs, out);
      out << ")^";
      if (n.exponent < 0) out << '(' << n.exponent << ')';
      else out << n.exponent;
      return;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div: {
      char sym = n.op == Op::add ? '+' : n.op == Op::sub ? '-' : n.op == Op::mul ? '*' : '/';
      out << '(';
      print_node(*n.lhs, out);
      out << sym;
      print_node(*n.rhs, out);
      out << ')';
      return;
    }
  }
}

}  // namespace

std::string Expr::to_string() const {
  std::ostringstream out;
  print_node(*root_, out);
  return out.str();
}

}  // namespace holgeo
