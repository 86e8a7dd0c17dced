#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "holgeo/result.hpp"

namespace holgeo {

/// Closed expression language over complex scalars: rational operations,
/// exp/log, trigonometric and hyperbolic functions, sqrt, and integer
/// powers. Trees are immutable and share structure; copying an Expr is a
/// pointer copy.
///
/// sqrt and log evaluate on the principal branch. Multi-branch behaviour
/// along paths is handled by the continuation machinery, which tracks an
/// unwrapped phase per sqrt/log node (see continuation.hpp).
class Expr {
public:
  enum class Op {
    constant,
    variable,
    neg,
    exp_fn,
    log_fn,
    sin_fn,
    cos_fn,
    tan_fn,
    cosh_fn,
    sinh_fn,
    sqrt_fn,
    add,
    sub,
    mul,
    div,
    pow_int,
  };

  struct Node {
    Op op;
    Cx value{0.0, 0.0};           // constant
    int var_index = -1;           // variable (0-based)
    int exponent = 0;             // pow_int
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  Expr() : Expr(constant(Cx{0.0, 0.0})) {}

  static Expr constant(Cx value);
  static Expr variable(int index);  // 0-based; u1 in the text grammar is index 0
  /// Adopt an existing (immutable) subtree as an expression.
  static Expr from_root(std::shared_ptr<const Node> root) { return Expr(std::move(root)); }

  const Node& root() const { return *root_; }
  std::shared_ptr<const Node> root_ptr() const { return root_; }

  /// Largest variable index referenced, or -1 for constant expressions.
  int max_variable() const;
  bool references_variable(int index) const;
  /// Number of sqrt/log nodes in pre-order; the ordinal of each such node
  /// indexes BranchState in the continuation module.
  int multivalued_node_count() const;
  /// True when the tree is the literal constant 0.
  bool is_zero_constant() const;
  /// True when the expression contains no sqrt or log node, i.e. it
  /// defines a globally meromorphic function of its variables.
  bool is_meromorphic_form() const;

  std::string to_string() const;

private:
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  static Expr make(Node node);

  std::shared_ptr<const Node> root_;

  friend Expr operator+(const Expr&, const Expr&);
  friend Expr operator-(const Expr&, const Expr&);
  friend Expr operator*(const Expr&, const Expr&);
  friend Expr operator/(const Expr&, const Expr&);
  friend Expr operator-(const Expr&);
  friend Expr exp(const Expr&);
  friend Expr log(const Expr&);
  friend Expr sin(const Expr&);
  friend Expr cos(const Expr&);
  friend Expr tan(const Expr&);
  friend Expr cosh(const Expr&);
  friend Expr sinh(const Expr&);
  friend Expr sqrt(const Expr&);
  friend Expr pow(const Expr&, int);
};

Expr operator+(const Expr&, const Expr&);
Expr operator-(const Expr&, const Expr&);
Expr operator*(const Expr&, const Expr&);
Expr operator/(const Expr&, const Expr&);
Expr operator-(const Expr&);
Expr exp(const Expr&);
Expr log(const Expr&);
Expr sin(const Expr&);
Expr cos(const Expr&);
Expr tan(const Expr&);
Expr cosh(const Expr&);
Expr sinh(const Expr&);
Expr sqrt(const Expr&);
Expr pow(const Expr& base, int exponent);

/// Value plus exact forward derivatives with respect to every variable.
struct DualValue {
  Cx value{0.0, 0.0};
  std::vector<Cx> partials;  // length = dimension passed to eval_with_partials
};

/// Evaluate at a point. Fails with `pole` on division by (numerically)
/// zero, tan at a cosine zero, or negative powers of zero, and with
/// `branch_ambiguous` for sqrt/log exactly at 0.
Result<Cx> eval(const Expr& expr, std::span<const Cx> point);

/// Evaluate together with all partial derivatives; the value component
/// equals eval() exactly, partials follow the product/chain rules.
Result<DualValue> eval_with_partials(const Expr& expr, std::span<const Cx> point);

/// Exact symbolic derivative with respect to one variable.
Expr differentiate(const Expr& expr, int var_index);

/// Replace every occurrence of a variable by another expression.
Expr substitute(const Expr& expr, int var_index, const Expr& replacement);

/// Parse the infix grammar used by scenario files: variables u1..uN, the
/// imaginary unit `i`, decimal literals, functions exp/log/sin/cos/tan/
/// cosh/sinh/sqrt, operators + - * / and ^ with an integer exponent.
/// Errors carry the byte position of the offending token.
Result<Expr> parse_expression(std::string_view text, int dimension);

}  // namespace holgeo
