#include "nlfi/expr.hpp"

#include <cctype>
#include <cfloat>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

namespace nlfi {

ParseError::ParseError(const std::string& message, std::size_t offset, std::string expected)
    : std::runtime_error(message + " at offset " + std::to_string(offset) +
                         (expected.empty() ? std::string() : " (expected " + expected + ")")),
      offset_(offset),
      expected_(std::move(expected)) {}

UnknownIdentifierError::UnknownIdentifierError(const std::string& name, std::size_t offset)
    : ParseError("unknown identifier '" + name + "'", offset,
                 "x, y, eps, pi or a function name"),
      name_(name) {}

namespace {

using Node = Expression::Node;
using NodePtr = Expression::NodePtr;
using Kind = Expression::Kind;

// Arguments this close to the boundary of sqrt/arcsin domains are clamped.
constexpr double kDomainSlack = 1e-14;

NodePtr make_constant(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::constant;
  n->value = v;
  return n;
}

NodePtr make_variable(Var v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::variable;
  n->var = v;
  return n;
}

NodePtr make_unary(Kind k, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->lhs = std::move(a);
  return n;
}

NodePtr make_binary(Kind k, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

NodePtr make_call(Func f, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::call;
  n->func = f;
  n->lhs = std::move(a);
  return n;
}

bool is_const(const NodePtr& n, double v) { return n->kind == Kind::constant && n->value == v; }
bool is_const(const NodePtr& n) { return n->kind == Kind::constant; }

// Simplifying constructors used for programmatic trees (derivatives, substitution).
NodePtr s_neg(NodePtr a) {
  if (is_const(a)) return make_constant(-a->value);
  if (a->kind == Kind::negate) return a->lhs;
  return make_unary(Kind::negate, std::move(a));
}

NodePtr s_add(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) return make_constant(a->value + b->value);
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  return make_binary(Kind::add, std::move(a), std::move(b));
}

NodePtr s_sub(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) return make_constant(a->value - b->value);
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return s_neg(std::move(b));
  return make_binary(Kind::sub, std::move(a), std::move(b));
}

NodePtr s_mul(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) return make_constant(a->value * b->value);
  if (is_const(a, 0.0) || is_const(b, 0.0)) return make_constant(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (is_const(a, -1.0)) return s_neg(std::move(b));
  if (is_const(b, -1.0)) return s_neg(std::move(a));
  return make_binary(Kind::mul, std::move(a), std::move(b));
}

NodePtr s_div(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0)) return make_constant(0.0);
  if (is_const(b, 1.0)) return a;
  if (is_const(a) && is_const(b) && b->value != 0.0) return make_constant(a->value / b->value);
  return make_binary(Kind::div, std::move(a), std::move(b));
}

NodePtr s_pow(NodePtr a, NodePtr b) {
  if (is_const(b, 1.0)) return a;
  if (is_const(b, 0.0)) return make_constant(1.0);
  if (is_const(a) && is_const(b)) return make_constant(std::pow(a->value, b->value));
  return make_binary(Kind::pow, std::move(a), std::move(b));
}

bool tree_depends_on(const Node& n, Var v) {
  switch (n.kind) {
    case Kind::constant: return false;
    case Kind::variable: return n.var == v;
    default:
      return (n.lhs && tree_depends_on(*n.lhs, v)) || (n.rhs && tree_depends_on(*n.rhs, v));
  }
}

bool tree_contains(const Node& n, Func f) {
  if (n.kind == Kind::call && n.func == f) return true;
  return (n.lhs && tree_contains(*n.lhs, f)) || (n.rhs && tree_contains(*n.rhs, f));
}

std::string node_text(const Node& n);

[[noreturn]] void throw_domain(const Node& n, std::string_view what, double arg, const Bindings& b) {
  std::ostringstream os;
  os << what << ": argument " << format_double(arg) << " outside the real domain in '"
     << node_text(n) << "' at x=" << format_double(b.x) << ", y=" << format_double(b.y)
     << ", eps=" << format_double(b.eps);
  throw DomainError(os.str());
}

double eval_node(const Node& n, const Bindings& b) {
  switch (n.kind) {
    case Kind::constant: return n.value;
    case Kind::variable:
      switch (n.var) {
        case Var::x: return b.x;
        case Var::y: return b.y;
        case Var::eps: return b.eps;
      }
      break;
    case Kind::negate: return -eval_node(*n.lhs, b);
    case Kind::add: return eval_node(*n.lhs, b) + eval_node(*n.rhs, b);
    case Kind::sub: return eval_node(*n.lhs, b) - eval_node(*n.rhs, b);
    case Kind::mul: return eval_node(*n.lhs, b) * eval_node(*n.rhs, b);
    case Kind::div: {
      const double num = eval_node(*n.lhs, b);
      const double den = eval_node(*n.rhs, b);
      if (den == 0.0) throw_domain(n, "division", den, b);
      return num / den;
    }
    case Kind::pow: {
      const double base = eval_node(*n.lhs, b);
      const double ex = eval_node(*n.rhs, b);
      const double r = std::pow(base, ex);
      if (std::isnan(r) || (base == 0.0 && ex < 0.0)) throw_domain(n, "power", base, b);
      return r;
    }
    case Kind::call: {
      double a = eval_node(*n.lhs, b);
      switch (n.func) {
        case Func::sin: return std::sin(a);
        case Func::cos: return std::cos(a);
        case Func::tan: return std::tan(a);
        case Func::arcsin:
          if (std::abs(a) > 1.0) {
            if (std::abs(a) > 1.0 + kDomainSlack) throw_domain(n, "arcsin", a, b);
            a = a > 0.0 ? 1.0 : -1.0;
          }
          return std::asin(a);
        case Func::sqrt:
          if (a < 0.0) {
            if (a < -kDomainSlack) throw_domain(n, "sqrt", a, b);
            a = 0.0;
          }
          return std::sqrt(a);
        case Func::exp: return std::exp(a);
        case Func::log:
          if (!(a > 0.0)) throw_domain(n, "log", a, b);
          return std::log(a);
        case Func::abs: return std::abs(a);
        case Func::floor: return std::floor(a);
      }
      break;
    }
  }
  return 0.0;
}

NodePtr diff_node(const NodePtr& np, Var v) {
  const Node& n = *np;
  switch (n.kind) {
    case Kind::constant: return make_constant(0.0);
    case Kind::variable: return make_constant(n.var == v ? 1.0 : 0.0);
    case Kind::negate: return s_neg(diff_node(n.lhs, v));
    case Kind::add: return s_add(diff_node(n.lhs, v), diff_node(n.rhs, v));
    case Kind::sub: return s_sub(diff_node(n.lhs, v), diff_node(n.rhs, v));
    case Kind::mul:
      return s_add(s_mul(diff_node(n.lhs, v), n.rhs), s_mul(n.lhs, diff_node(n.rhs, v)));
    case Kind::div: {
      auto da = diff_node(n.lhs, v);
      if (!tree_depends_on(*n.rhs, v)) return s_div(da, n.rhs);
      auto db = diff_node(n.rhs, v);
      return s_div(s_sub(s_mul(da, n.rhs), s_mul(n.lhs, db)), s_pow(n.rhs, make_constant(2.0)));
    }
    case Kind::pow: {
      auto da = diff_node(n.lhs, v);
      if (!tree_depends_on(*n.rhs, v)) {
        NodePtr reduced = is_const(n.rhs) ? make_constant(n.rhs->value - 1.0)
                                          : s_sub(n.rhs, make_constant(1.0));
        return s_mul(s_mul(n.rhs, s_pow(n.lhs, reduced)), da);
      }
      auto db = diff_node(n.rhs, v);
      auto inner = s_add(s_mul(db, make_call(Func::log, n.lhs)), s_div(s_mul(n.rhs, da), n.lhs));
      return s_mul(np, inner);
    }
    case Kind::call: {
      auto da = diff_node(n.lhs, v);
      if (is_const(da, 0.0)) return make_constant(0.0);
      const NodePtr& a = n.lhs;
      switch (n.func) {
        case Func::sin: return s_mul(make_call(Func::cos, a), da);
        case Func::cos: return s_mul(s_neg(make_call(Func::sin, a)), da);
        case Func::tan:
          return s_div(da, s_pow(make_call(Func::cos, a), make_constant(2.0)));
        case Func::arcsin:
          return s_div(da, make_call(Func::sqrt, s_sub(make_constant(1.0),
                                                       s_pow(a, make_constant(2.0)))));
        case Func::sqrt: return s_div(da, s_mul(make_constant(2.0), np));
        case Func::exp: return s_mul(np, da);
        case Func::log: return s_div(da, a);
        case Func::abs:
        case Func::floor:
          throw NonDifferentiableError("cannot differentiate '" + node_text(n) + "'");
      }
    }
  }
  return make_constant(0.0);
}

NodePtr subst_node(const NodePtr& np, Var v, const NodePtr& repl) {
  const Node& n = *np;
  switch (n.kind) {
    case Kind::constant: return np;
    case Kind::variable: return n.var == v ? repl : np;
    case Kind::negate: return s_neg(subst_node(n.lhs, v, repl));
    case Kind::add: return s_add(subst_node(n.lhs, v, repl), subst_node(n.rhs, v, repl));
    case Kind::sub: return s_sub(subst_node(n.lhs, v, repl), subst_node(n.rhs, v, repl));
    case Kind::mul: return s_mul(subst_node(n.lhs, v, repl), subst_node(n.rhs, v, repl));
    case Kind::div: return s_div(subst_node(n.lhs, v, repl), subst_node(n.rhs, v, repl));
    case Kind::pow: return s_pow(subst_node(n.lhs, v, repl), subst_node(n.rhs, v, repl));
    case Kind::call: {
      auto a = subst_node(n.lhs, v, repl);
      return a == n.lhs ? np : make_call(n.func, a);
    }
  }
  return np;
}

bool nodes_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::constant: return a.value == b.value || (std::isnan(a.value) && std::isnan(b.value));
    case Kind::variable: return a.var == b.var;
    case Kind::call: return a.func == b.func && nodes_equal(*a.lhs, *b.lhs);
    case Kind::negate: return nodes_equal(*a.lhs, *b.lhs);
    default: return nodes_equal(*a.lhs, *b.lhs) && nodes_equal(*a.rhs, *b.rhs);
  }
}

std::string_view op_text(Kind k) {
  switch (k) {
    case Kind::add: return "+";
    case Kind::sub: return "-";
    case Kind::mul: return "*";
    case Kind::div: return "/";
    case Kind::pow: return "^";
    default: return "?";
  }
}

std::string node_text(const Node& n) {
  switch (n.kind) {
    case Kind::constant: {
      std::string s = format_double(n.value);
      return n.value < 0.0 || std::signbit(n.value) ? "(" + s + ")" : s;
    }
    case Kind::variable: return std::string(var_name(n.var));
    case Kind::negate: return "(-" + node_text(*n.lhs) + ")";
    case Kind::call: return std::string(func_name(n.func)) + "(" + node_text(*n.lhs) + ")";
    default:
      return "(" + node_text(*n.lhs) + std::string(op_text(n.kind)) + node_text(*n.rhs) + ")";
  }
}

// Recursive-descent parser. Precedence, loosest first: + -, * /, unary -, ^ (right-assoc).
class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("empty expression", pos_, "an expression");
    auto root = parse_sum();
    skip_ws();
    if (pos_ < text_.size()) {
      throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_,
                       "an operator or end of input");
    }
    return root;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_sum() {
    auto lhs = parse_product();
    for (;;) {
      if (accept('+')) lhs = make_binary(Kind::add, lhs, parse_product());
      else if (accept('-')) lhs = make_binary(Kind::sub, lhs, parse_product());
      else return lhs;
    }
  }

  NodePtr parse_product() {
    auto lhs = parse_unary();
    for (;;) {
      if (accept('*')) lhs = make_binary(Kind::mul, lhs, parse_unary());
      else if (accept('/')) lhs = make_binary(Kind::div, lhs, parse_unary());
      else return lhs;
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) {
      auto operand = parse_unary();
      // Negative literals are stored as constants so printing round-trips.
      if (operand->kind == Kind::constant) return make_constant(-operand->value);
      return make_unary(Kind::negate, operand);
    }
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    auto base = parse_primary();
    if (accept('^')) return make_binary(Kind::pow, base, parse_unary());
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_, "an operand");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto inner = parse_sum();
      if (!accept(')')) throw ParseError("unbalanced parenthesis", pos_, "')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_, "an operand");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t count = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      count += digits();
    }
    if (count == 0) throw ParseError("malformed number", start, "a digit");
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;
    }
    const std::string literal(text_.substr(start, pos_ - start));
    return make_constant(std::strtod(literal.c_str(), nullptr));
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") return make_variable(Var::x);
    if (name == "y") return make_variable(Var::y);
    if (name == "eps") return make_variable(Var::eps);
    if (name == "pi") return make_constant(std::numbers::pi);
    static constexpr Func kFuncs[] = {Func::sin,  Func::cos, Func::tan, Func::arcsin, Func::sqrt,
                                      Func::exp,  Func::log, Func::abs, Func::floor};
    for (Func f : kFuncs) {
      if (name == func_name(f)) {
        if (!accept('(')) throw ParseError("function call needs an argument", pos_, "'('");
        auto arg = parse_sum();
        if (!accept(')')) throw ParseError("unbalanced parenthesis", pos_, "')'");
        return make_call(f, arg);
      }
    }
    throw UnknownIdentifierError(std::string(name), start);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view func_name(Func f) {
  switch (f) {
    case Func::sin: return "sin";
    case Func::cos: return "cos";
    case Func::tan: return "tan";
    case Func::arcsin: return "arcsin";
    case Func::sqrt: return "sqrt";
    case Func::exp: return "exp";
    case Func::log: return "log";
    case Func::abs: return "abs";
    case Func::floor: return "floor";
  }
  return "?";
}

std::string_view var_name(Var v) {
  switch (v) {
    case Var::x: return "x";
    case Var::y: return "y";
    case Var::eps: return "eps";
  }
  return "?";
}

Expression::Expression() : root_(make_constant(0.0)) {}
Expression::Expression(NodePtr root) : root_(std::move(root)) {}

Expression Expression::parse(std::string_view text) { return Expression(Parser(text).parse()); }
Expression Expression::constant(double v) { return Expression(make_constant(v)); }
Expression Expression::variable(Var v) { return Expression(make_variable(v)); }
Expression Expression::call(Func f, const Expression& arg) {
  return Expression(make_call(f, arg.root_));
}

double Expression::eval(const Bindings& b) const { return eval_node(*root_, b); }

bool Expression::is_differentiable() const {
  return !contains(Func::floor) && !contains(Func::abs);
}

Expression Expression::differentiate(Var v) const {
  for (Func f : {Func::floor, Func::abs}) {
    if (contains(f)) {
      throw NonDifferentiableError("expression '" + to_string() + "' contains " +
                                   std::string(func_name(f)) + " and is not differentiable");
    }
  }
  return Expression(diff_node(root_, v));
}

Expression Expression::substitute(Var v, const Expression& replacement) const {
  return Expression(subst_node(root_, v, replacement.root_));
}

bool Expression::depends_on(Var v) const { return tree_depends_on(*root_, v); }
bool Expression::contains(Func f) const { return tree_contains(*root_, f); }
bool Expression::is_constant() const { return root_->kind == Kind::constant; }
bool Expression::structurally_equal(const Expression& other) const {
  return nodes_equal(*root_, *other.root_);
}
std::string Expression::to_string() const { return node_text(*root_); }

Expression operator+(const Expression& a, const Expression& b) {
  return Expression(s_add(a.root_ptr(), b.root_ptr()));
}
Expression operator-(const Expression& a, const Expression& b) {
  return Expression(s_sub(a.root_ptr(), b.root_ptr()));
}
Expression operator*(const Expression& a, const Expression& b) {
  return Expression(s_mul(a.root_ptr(), b.root_ptr()));
}
Expression operator/(const Expression& a, const Expression& b) {
  return Expression(s_div(a.root_ptr(), b.root_ptr()));
}
Expression operator-(const Expression& a) { return Expression(s_neg(a.root_ptr())); }
Expression pow(const Expression& base, const Expression& exponent) {
  return Expression(s_pow(base.root_ptr(), exponent.root_ptr()));
}

Monotonicity check_monotone(const Expression& e, Interval iv, double eps) {
  const auto nodes = chebyshev_nodes(iv, 257);
  std::vector<double> values(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) values[k] = e.eval(nodes[k], eps);

  bool inc = true;
  bool dec = true;
  for (std::size_t k = 1; k < values.size(); ++k) {
    inc = inc && values[k] > values[k - 1];
    dec = dec && values[k] < values[k - 1];
  }
  if (e.is_differentiable() && (inc || dec)) {
    const Expression d = e.differentiate(Var::x);
    double scale = 0.0;
    std::vector<double> slopes(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      slopes[k] = d.eval(nodes[k], eps);
      scale = std::max(scale, std::abs(slopes[k]));
    }
    // isolated zeros of the derivative (e.g. x^2 at 0) are allowed
    const double slack = 1e-12 * scale;
    for (double s : slopes) {
      if (inc && s < -slack) inc = false;
      if (dec && s > slack) dec = false;
    }
  }
  if (inc) return Monotonicity::increasing;
  if (dec) return Monotonicity::decreasing;
  return Monotonicity::none;
}

double invert_bracketed(const Expression& e, const std::optional<Expression>& derivative,
                        double y, Interval iv, bool increasing, double eps, double tol) {
  const double sign = increasing ? 1.0 : -1.0;
  auto g = [&](double x) { return sign * (e.eval(x, eps) - y); };

  double lo = iv.lo;
  double hi = iv.hi;
  const double glo = g(lo);
  const double ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if (glo > tol || ghi < -tol) {
    throw InversionError("value " + format_double(y) + " outside the range of '" +
                         e.to_string() + "' on [" + format_double(iv.lo) + ", " +
                         format_double(iv.hi) + "]");
  }
  if (glo > 0.0) return lo;
  if (ghi < 0.0) return hi;

  double x = lo - glo * (hi - lo) / (ghi - glo);
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
  double prev_abs = std::max(std::abs(glo), std::abs(ghi));

  for (int it = 0; it < 400; ++it) {
    const double gx = g(x);
    if (gx == 0.0) return x;
    if (gx < 0.0) lo = x;
    else hi = x;
    const double floor_width = 4.0 * DBL_EPSILON * std::max(1.0, std::abs(x));
    if (hi - lo <= floor_width) break;

    double next = std::numeric_limits<double>::quiet_NaN();
    if (derivative && std::abs(gx) <= 0.5 * prev_abs) {
      const double slope = sign * derivative->eval(x, eps);
      if (slope != 0.0 && std::isfinite(slope)) {
        const double candidate = x - gx / slope;
        if (candidate > lo && candidate < hi) {
          if (std::abs(candidate - x) <= floor_width) {
            x = candidate;
            break;
          }
          next = candidate;
        }
      }
    } else if (!derivative && std::abs(gx) <= 0.5 * prev_abs) {
      // secant-style regula falsi on the current bracket
      const double gl = g(lo);
      const double gh = g(hi);
      const double candidate = lo - gl * (hi - lo) / (gh - gl);
      if (candidate > lo && candidate < hi) next = candidate;
    }
    prev_abs = std::abs(gx);
    x = std::isnan(next) ? 0.5 * (lo + hi) : next;
  }

  double best = x;
  double best_abs = std::abs(g(x));
  for (double cand : {lo, hi}) {
    const double a = std::abs(g(cand));
    if (a < best_abs) {
      best = cand;
      best_abs = a;
    }
  }
  if (best_abs > tol) {
    throw InversionError("could not reach tolerance " + format_double(tol) + " inverting '" +
                         e.to_string() + "' at " + format_double(y) + " (residual " +
                         format_double(best_abs) + ")");
  }
  return iv.clamp(best);
}

double invert_monotone(const Expression& e, double y, Interval iv, double eps, double tol) {
  if (!(iv.lo < iv.hi)) throw InversionError("empty inversion interval");
  const Monotonicity m = check_monotone(e, iv, eps);
  if (m == Monotonicity::none) {
    throw InversionError("'" + e.to_string() + "' is not strictly monotone on [" +
                         format_double(iv.lo) + ", " + format_double(iv.hi) + "]");
  }
  std::optional<Expression> d;
  if (e.is_differentiable()) d = e.differentiate(Var::x);
  return invert_bracketed(e, d, y, iv, m == Monotonicity::increasing, eps, tol);
}

}  // namespace nlfi
