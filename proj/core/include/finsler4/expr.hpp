#pragma once

// Scalar expression language for fundamental functions L(x, y) and conformal
// factors sigma(x). Grammar (see docs/grammar.md):
//
//   expr     := term (('+' | '-') term)*
//   term     := unary (('*' | '/') unary)*
//   unary    := '-' unary | power
//   power    := primary ('^' exponent)?
//   exponent := ('-' | '+')? primary ('^' exponent)?      constant only
//   primary  := number | variable | func '(' expr ')' | '(' expr ')'
//
// Variables are x1..x4 and y1..y4; functions are sqrt, exp, log, sin, cos.
// Exponents must be constant and are folded to a literal at parse time.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "finsler4/error.hpp"
#include "finsler4/jet.hpp"
#include "finsler4/ring.hpp"

namespace finsler4 {

enum class Func { Sqrt, Exp, Log, Sin, Cos };

std::string_view func_name(Func f) noexcept;

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum class Kind { Literal, Variable, Neg, Binary, Call };

  Kind kind = Kind::Literal;
  double value = 0.0;  ///< Literal value, or the exponent of a '^' node
  int slot = -1;       ///< Variable slot (0..3 = x, 4..7 = y)
  char op = 0;         ///< Binary operator: + - * / ^
  Func func = Func::Sqrt;
  ExprPtr lhs;  ///< operand of Neg/Call, left operand of Binary
  ExprPtr rhs;  ///< right operand of Binary (null for '^')
};

/// Immutable, shareable expression tree.
class Expr {
 public:
  Expr();  // the literal 0
  explicit Expr(ExprPtr root);

  const ExprNode& root() const { return *root_; }
  const ExprPtr& root_ptr() const { return root_; }

  /// Bit s set when variable slot s occurs anywhere in the tree.
  std::uint8_t variable_mask() const { return mask_; }
  bool uses_x() const { return (mask_ & 0x0F) != 0; }
  bool uses_y() const { return (mask_ & 0xF0) != 0; }
  bool is_constant() const { return mask_ == 0; }

  /// Fully parenthesised rendering that re-parses to the same tree.
  std::string to_string() const;

  static Expr literal(double v);

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  ExprPtr root_;
  std::uint8_t mask_ = 0;
};

Expr parse_expr(std::string_view text);

std::string_view slot_name(int slot);

template <class T>
using Bindings = std::array<std::optional<T>, kNumVars>;

namespace detail {

template <class T>
T eval_node(const ExprNode& n, const Bindings<T>& env, const T& like) {
  switch (n.kind) {
    case ExprNode::Kind::Literal:
      return ring::constant_like(n.value, like);
    case ExprNode::Kind::Variable: {
      const auto& v = env[static_cast<std::size_t>(n.slot)];
      if (!v) {
        throw Error(ErrorKind::UnboundVariable,
                    "variable " + std::string(slot_name(n.slot)) + " is not bound");
      }
      return *v;
    }
    case ExprNode::Kind::Neg:
      return -eval_node(*n.lhs, env, like);
    case ExprNode::Kind::Call: {
      T a = eval_node(*n.lhs, env, like);
      switch (n.func) {
        case Func::Sqrt: return ring::sqrt(a);
        case Func::Exp: return ring::exp(a);
        case Func::Log: return ring::log(a);
        case Func::Sin: return ring::sin(a);
        case Func::Cos: return ring::cos(a);
      }
      break;
    }
    case ExprNode::Kind::Binary: {
      T a = eval_node(*n.lhs, env, like);
      if (n.op == '^') return ring::pow_const(a, n.value);
      T b = eval_node(*n.rhs, env, like);
      switch (n.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return ring::div(a, b);
      }
      break;
    }
  }
  throw Error(ErrorKind::SyntaxError, "malformed expression tree");
}

}  // namespace detail

/// Evaluate bottom-up in the ring of the bound values. Unbound variables
/// that occur in the tree raise UnboundVariable.
template <class T>
T eval_expr(const Expr& e, const Bindings<T>& env) {
  T like{};
  for (const auto& v : env) {
    if (v) {
      like = *v;
      break;
    }
  }
  return detail::eval_node(e.root(), env, like);
}

template <class T>
T eval_expr(const Expr& e, const std::array<T, kNumVars>& env) {
  Bindings<T> b;
  for (int s = 0; s < kNumVars; ++s) b[s] = env[s];
  return eval_expr(e, b);
}

}  // namespace finsler4
