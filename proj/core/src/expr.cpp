#include "finsler4/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <system_error>

namespace finsler4 {

namespace {

std::uint8_t mask_of(const ExprNode& n) {
  switch (n.kind) {
    case ExprNode::Kind::Literal: return 0;
    case ExprNode::Kind::Variable: return static_cast<std::uint8_t>(1u << n.slot);
    case ExprNode::Kind::Neg:
    case ExprNode::Kind::Call: return mask_of(*n.lhs);
    case ExprNode::Kind::Binary:
      return static_cast<std::uint8_t>(mask_of(*n.lhs) | (n.rhs ? mask_of(*n.rhs) : 0));
  }
  return 0;
}

ExprPtr make_literal(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Literal;
  n->value = v;
  return n;
}

ExprPtr make_variable(int slot) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Variable;
  n->slot = slot;
  return n;
}

ExprPtr make_unary(ExprNode::Kind kind, ExprPtr arg, Func f = Func::Sqrt) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->func = f;
  n->lhs = std::move(arg);
  return n;
}

ExprPtr make_binary(char op, ExprPtr a, ExprPtr b) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Binary;
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

ExprPtr make_power(ExprPtr base, double exponent) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Binary;
  n->op = '^';
  n->value = exponent;
  n->lhs = std::move(base);
  return n;
}

std::optional<Func> lookup_func(std::string_view name) {
  if (name == "sqrt") return Func::Sqrt;
  if (name == "exp") return Func::Exp;
  if (name == "log") return Func::Log;
  if (name == "sin") return Func::Sin;
  if (name == "cos") return Func::Cos;
  return std::nullopt;
}

int lookup_variable(std::string_view name) {
  if (name.size() != 2 || name[1] < '1' || name[1] > '4') return -1;
  const int i = name[1] - '1';
  if (name[0] == 'x') return x_slot(i);
  if (name[0] == 'y') return y_slot(i);
  return -1;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    throw Error(ErrorKind::SyntaxError, "syntax error at offset " + std::to_string(at) + ": " + msg,
                at);
  }
  [[noreturn]] void fail(const std::string& msg) const { fail(msg, pos_); }

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

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' before end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make_binary('+', lhs, term());
      else if (accept('-'))
        lhs = make_binary('-', lhs, term());
      else
        return lhs;
    }
  }

  ExprPtr term() {
    ExprPtr lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = make_binary('*', lhs, unary());
      else if (accept('/'))
        lhs = make_binary('/', lhs, unary());
      else
        return lhs;
    }
  }

  ExprPtr unary() {
    if (accept('-')) return make_unary(ExprNode::Kind::Neg, unary());
    return power();
  }

  ExprPtr power() {
    ExprPtr base = primary();
    if (accept('^')) return make_power(base, exponent());
    return base;
  }

  double exponent() {
    skip_ws();
    const std::size_t start = pos_;
    bool negate = false;
    if (accept('-'))
      negate = true;
    else
      accept('+');
    ExprPtr e = primary();
    if (accept('^')) e = make_power(e, exponent());
    Expr folded(e);
    if (!folded.is_constant()) {
      throw Error(ErrorKind::NonConstantExponent,
                  "exponent at offset " + std::to_string(start) + " must be a numeric constant",
                  start);
    }
    const double v = eval_expr(folded, Bindings<double>{});
    return negate ? -v : v;
  }

  ExprPtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  ExprPtr number() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    auto digits = [&] {
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    };
    digits();
    if (end < text_.size() && text_[end] == '.') {
      ++end;
      digits();
    }
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t e = end + 1;
      if (e < text_.size() && (text_[e] == '+' || text_[e] == '-')) ++e;
      if (e < text_.size() && std::isdigit(static_cast<unsigned char>(text_[e]))) {
        end = e;
        digits();
      }
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + end, v);
    if (ec != std::errc() || ptr != text_.data() + end) fail("malformed number", start);
    pos_ = end;
    return make_literal(v);
  }

  ExprPtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (auto f = lookup_func(name)) {
      expect('(');
      ExprPtr arg = expr();
      expect(')');
      return make_unary(ExprNode::Kind::Call, arg, *f);
    }
    const int slot = lookup_variable(name);
    if (slot < 0) {
      throw Error(ErrorKind::UnknownIdentifier,
                  "unknown identifier '" + std::string(name) + "' at offset " + std::to_string(start),
                  start);
    }
    return make_variable(slot);
  }
};

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void render(const ExprNode& n, std::string& out) {
  switch (n.kind) {
    case ExprNode::Kind::Literal:
      if (n.value < 0 || std::signbit(n.value)) {
        out += "(-" + format_number(-n.value) + ")";
      } else {
        out += format_number(n.value);
      }
      return;
    case ExprNode::Kind::Variable:
      out += slot_name(n.slot);
      return;
    case ExprNode::Kind::Neg:
      out += "(-(";
      render(*n.lhs, out);
      out += "))";
      return;
    case ExprNode::Kind::Call:
      out += func_name(n.func);
      out += "(";
      render(*n.lhs, out);
      out += ")";
      return;
    case ExprNode::Kind::Binary:
      out += "(";
      render(*n.lhs, out);
      if (n.op == '^') {
        out += "^";
        if (std::signbit(n.value))
          out += "(-" + format_number(-n.value) + ")";
        else
          out += format_number(n.value);
      } else {
        out += ' ';
        out += n.op;
        out += ' ';
        render(*n.rhs, out);
      }
      out += ")";
      return;
  }
}

bool same_tree(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprNode::Kind::Literal: return a.value == b.value;
    case ExprNode::Kind::Variable: return a.slot == b.slot;
    case ExprNode::Kind::Neg: return same_tree(*a.lhs, *b.lhs);
    case ExprNode::Kind::Call: return a.func == b.func && same_tree(*a.lhs, *b.lhs);
    case ExprNode::Kind::Binary:
      if (a.op != b.op) return false;
      if (a.op == '^') return a.value == b.value && same_tree(*a.lhs, *b.lhs);
      return same_tree(*a.lhs, *b.lhs) && same_tree(*a.rhs, *b.rhs);
  }
  return false;
}

}  // namespace

std::string_view func_name(Func f) noexcept {
  switch (f) {
    case Func::Sqrt: return "sqrt";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
  }
  return "?";
}

std::string_view slot_name(int slot) {
  static constexpr std::string_view names[kNumVars] = {"x1", "x2", "x3", "x4",
                                                       "y1", "y2", "y3", "y4"};
  if (slot < 0 || slot >= kNumVars) return "?";
  return names[slot];
}

Expr::Expr() : Expr(make_literal(0.0)) {}

Expr::Expr(ExprPtr root) : root_(std::move(root)), mask_(mask_of(*root_)) {}

Expr Expr::literal(double v) { return Expr(make_literal(v)); }

std::string Expr::to_string() const {
  std::string out;
  render(*root_, out);
  return out;
}

bool operator==(const Expr& a, const Expr& b) { return same_tree(a.root(), b.root()); }

Expr parse_expr(std::string_view text) { return Expr(Parser(text).parse()); }

}  // namespace finsler4
