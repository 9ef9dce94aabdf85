#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "nlfi/sampling.hpp"

namespace nlfi {

/// Syntax error in an expression string. `offset` is the byte offset of the
/// offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset, std::string expected);
  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

class UnknownIdentifierError : public ParseError {
 public:
  UnknownIdentifierError(const std::string& name, std::size_t offset);
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// A function was evaluated outside its real domain.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonDifferentiableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Monotone inversion precondition failures.
class InversionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Var { x, y, eps };

struct Bindings {
  double x = 0.0;
  double y = 0.0;
  double eps = 0.0;
};

enum class Func { sin, cos, tan, arcsin, sqrt, exp, log, abs, floor };

/// Immutable expression tree over the variables x, y and the parameter eps.
class Expression {
 public:
  enum class Kind { constant, variable, negate, add, sub, mul, div, pow, call };

  struct Node {
    Kind kind;
    double value = 0.0;
    Var var = Var::x;
    Func func = Func::sin;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };
  using NodePtr = std::shared_ptr<const Node>;

  Expression();  // the constant 0
  explicit Expression(NodePtr root);

  static Expression parse(std::string_view text);
  static Expression constant(double v);
  static Expression variable(Var v);
  static Expression call(Func f, const Expression& arg);

  double eval(const Bindings& b) const;
  double eval(double x, double eps = 0.0) const { return eval(Bindings{x, 0.0, eps}); }

  /// Exact symbolic derivative. Throws NonDifferentiableError when the tree
  /// contains floor or abs anywhere.
  Expression differentiate(Var v) const;
  bool is_differentiable() const;

  Expression substitute(Var v, const Expression& replacement) const;
  Expression bind(Var v, double value) const { return substitute(v, constant(value)); }

  bool depends_on(Var v) const;
  bool contains(Func f) const;
  bool is_constant() const;
  bool structurally_equal(const Expression& other) const;

  /// Fully parenthesised text that parses back to an identical tree.
  std::string to_string() const;

  const Node& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }

 private:
  NodePtr root_;
};

Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression operator-(const Expression& a);
Expression pow(const Expression& base, const Expression& exponent);

std::string_view func_name(Func f);
std::string_view var_name(Var v);

enum class Monotonicity { increasing, decreasing, none };

/// Heuristic strict-monotonicity test on [lo, hi] using 257 Chebyshev nodes:
/// derivative signs when differentiable, strict ordering of sampled values always.
Monotonicity check_monotone(const Expression& e, Interval iv, double eps = 0.0);

/// Solves e(x) = y on `iv` for a strictly monotone e. Bisection bracket with
/// Newton steps when the derivative is available. The result lies in `iv` and
/// satisfies |e(x) - y| <= tol.
double invert_monotone(const Expression& e, double y, Interval iv, double eps = 0.0,
                       double tol = 1e-12);

/// Same as invert_monotone without the monotonicity scan; `derivative` may be
/// empty. Used on hot paths where monotonicity was established once.
double invert_bracketed(const Expression& e, const std::optional<Expression>& derivative,
                        double y, Interval iv, bool increasing, double eps, double tol);

}  // namespace nlfi
