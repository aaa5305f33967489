#pragma once

// Small expression language for coefficient and boundary-data fields.
//
// Grammar (recursive descent):
//   expr   := term  {('+'|'-') term}
//   term   := unary {('*'|'/') unary}
//   unary  := '-' unary | power
//   power  := atom ['^' unary]          (right associative)
//   atom   := number | ident | ident '(' expr {',' expr} ')' | '(' expr ')'
//
// Variables: x, y, z, r, theta (r/theta are derived from the point), pi.
// Functions: sin cos exp log sqrt abs sign atan2.
// Unknown identifiers and syntax errors are reported with a character offset.

#include "ucplab/core.hpp"

#include <cctype>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace ucplab {

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : Error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

struct EvalPoint {
  double x = 0.0, y = 0.0, z = 0.0;
  static EvalPoint from(const Vec2& p) { return {p.x(), p.y(), 0.0}; }
  static EvalPoint from(const Vec3& p) { return {p.x(), p.y(), p.z()}; }
};

namespace detail {

enum class Op { add, sub, mul, div, pow };
enum class Fn { sin, cos, exp, log, sqrt, abs, sign, atan2 };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Kind { num, var, neg, bin, call } kind;
  double value = 0.0;      // num
  std::string name;        // var
  Op op = Op::add;         // bin
  Fn fn = Fn::sin;         // call
  NodePtr a, b;            // children
};

inline NodePtr make_num(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::num;
  n->value = v;
  return n;
}
inline NodePtr make_var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::var;
  n->name = std::move(name);
  return n;
}
inline NodePtr make_neg(NodePtr a) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::neg;
  n->a = std::move(a);
  return n;
}
inline NodePtr make_bin(Op op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::bin;
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}
inline NodePtr make_call(Fn fn, NodePtr a, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::call;
  n->fn = fn;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr run() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("empty expression", 0);
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ < src_.size())
      throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool peek_is(char c) {
    skip_ws();
    return pos_ < src_.size() && src_[pos_] == c;
  }
  bool accept(char c) {
    if (peek_is(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) lhs = make_bin(Op::add, lhs, parse_term());
      else if (accept('-')) lhs = make_bin(Op::sub, lhs, parse_term());
      else return lhs;
    }
  }
  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) lhs = make_bin(Op::mul, lhs, parse_unary());
      else if (accept('/')) lhs = make_bin(Op::div, lhs, parse_unary());
      else return lhs;
    }
  }
  NodePtr parse_unary() {
    if (accept('-')) return make_neg(parse_unary());
    return parse_power();
  }
  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (accept('^')) return make_bin(Op::pow, base, parse_unary());
    return base;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  NodePtr parse_number() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
      ++pos_;
    // exponent part
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // not an exponent, e.g. "2*exp(x)"
      }
    }
    std::string text(src_.substr(start, pos_ - start));
    try {
      std::size_t used = 0;
      double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return make_num(v);
    } catch (const std::exception&) {
      throw ParseError("bad number '" + text + "'", start);
    }
  }

  NodePtr parse_ident() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    std::string name(src_.substr(start, pos_ - start));
    if (peek_is('(')) {
      ++pos_;
      std::vector<NodePtr> args;
      args.push_back(parse_expr());
      while (accept(',')) args.push_back(parse_expr());
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return make_fn(name, args, start);
    }
    if (name == "x" || name == "y" || name == "z" || name == "r" || name == "theta")
      return make_var(name);
    if (name == "pi") return make_num(kPi);
    throw ParseError("unknown identifier '" + name + "'", start);
  }

  NodePtr make_fn(const std::string& name, const std::vector<NodePtr>& args, std::size_t at) {
    auto unary = [&](Fn fn) {
      if (args.size() != 1)
        throw ParseError("'" + name + "' takes one argument", at);
      return make_call(fn, args[0]);
    };
    if (name == "sin") return unary(Fn::sin);
    if (name == "cos") return unary(Fn::cos);
    if (name == "exp") return unary(Fn::exp);
    if (name == "log") return unary(Fn::log);
    if (name == "sqrt") return unary(Fn::sqrt);
    if (name == "abs") return unary(Fn::abs);
    if (name == "sign") return unary(Fn::sign);
    if (name == "atan2") {
      if (args.size() != 2) throw ParseError("'atan2' takes two arguments", at);
      return make_call(Fn::atan2, args[0], args[1]);
    }
    throw ParseError("unknown function '" + name + "'", at);
  }
};

inline double eval_node(const Node& n, const EvalPoint& p) {
  switch (n.kind) {
    case Node::Kind::num:
      return n.value;
    case Node::Kind::var: {
      if (n.name == "x") return p.x;
      if (n.name == "y") return p.y;
      if (n.name == "z") return p.z;
      if (n.name == "r") return std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
      return std::atan2(p.y, p.x);  // theta
    }
    case Node::Kind::neg:
      return -eval_node(*n.a, p);
    case Node::Kind::bin: {
      double a = eval_node(*n.a, p);
      double b = eval_node(*n.b, p);
      switch (n.op) {
        case Op::add: return a + b;
        case Op::sub: return a - b;
        case Op::mul: return a * b;
        case Op::div: return a / b;
        case Op::pow: return std::pow(a, b);
      }
      return 0.0;
    }
    case Node::Kind::call: {
      double a = eval_node(*n.a, p);
      switch (n.fn) {
        case Fn::sin: return std::sin(a);
        case Fn::cos: return std::cos(a);
        case Fn::exp: return std::exp(a);
        case Fn::log: return std::log(a);
        case Fn::sqrt: return std::sqrt(a);
        case Fn::abs: return std::abs(a);
        case Fn::sign: return a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0);
        case Fn::atan2: return std::atan2(a, eval_node(*n.b, p));
      }
      return 0.0;
    }
  }
  return 0.0;
}

inline void print_node(const Node& n, std::ostream& os) {
  switch (n.kind) {
    case Node::Kind::num: {
      std::ostringstream tmp;
      tmp.precision(17);
      tmp << n.value;
      os << tmp.str();
      return;
    }
    case Node::Kind::var:
      os << n.name;
      return;
    case Node::Kind::neg:
      os << "(-";
      print_node(*n.a, os);
      os << ")";
      return;
    case Node::Kind::bin: {
      const char* sym = n.op == Op::add ? "+" : n.op == Op::sub ? "-"
                        : n.op == Op::mul ? "*" : n.op == Op::div ? "/" : "^";
      os << "(";
      print_node(*n.a, os);
      os << sym;
      print_node(*n.b, os);
      os << ")";
      return;
    }
    case Node::Kind::call: {
      const char* name = nullptr;
      switch (n.fn) {
        case Fn::sin: name = "sin"; break;
        case Fn::cos: name = "cos"; break;
        case Fn::exp: name = "exp"; break;
        case Fn::log: name = "log"; break;
        case Fn::sqrt: name = "sqrt"; break;
        case Fn::abs: name = "abs"; break;
        case Fn::sign: name = "sign"; break;
        case Fn::atan2: name = "atan2"; break;
      }
      os << name << "(";
      print_node(*n.a, os);
      if (n.b) {
        os << ",";
        print_node(*n.b, os);
      }
      os << ")";
      return;
    }
  }
}

// d/dvar. r and theta are rewritten through their x/y derivatives, so the
// result is again a plain expression tree. No simplification beyond dropping
// the obvious zero/one cases; these trees stay small in practice.
inline NodePtr diff_node(const NodePtr& n, const std::string& var);

inline bool is_zero(const NodePtr& n) {
  return n->kind == Node::Kind::num && n->value == 0.0;
}
inline bool is_one(const NodePtr& n) {
  return n->kind == Node::Kind::num && n->value == 1.0;
}
inline NodePtr simp_add(NodePtr a, NodePtr b) {
  if (is_zero(a)) return b;
  if (is_zero(b)) return a;
  return make_bin(Op::add, std::move(a), std::move(b));
}
inline NodePtr simp_sub(NodePtr a, NodePtr b) {
  if (is_zero(b)) return a;
  if (is_zero(a)) return make_neg(std::move(b));
  return make_bin(Op::sub, std::move(a), std::move(b));
}
inline NodePtr simp_mul(NodePtr a, NodePtr b) {
  if (is_zero(a) || is_zero(b)) return make_num(0.0);
  if (is_one(a)) return b;
  if (is_one(b)) return a;
  return make_bin(Op::mul, std::move(a), std::move(b));
}
inline NodePtr simp_div(NodePtr a, NodePtr b) {
  if (is_zero(a)) return make_num(0.0);
  if (is_one(b)) return a;
  return make_bin(Op::div, std::move(a), std::move(b));
}

inline NodePtr diff_var(const std::string& name, const std::string& var) {
  if (name == var) return make_num(1.0);
  if (name == "x" || name == "y" || name == "z") return make_num(0.0);
  if (name == "r") {
    // dr/dvar = var / r
    return simp_div(make_var(var), make_var("r"));
  }
  // theta = atan2(y, x): d/dx = -y/(x^2+y^2), d/dy = x/(x^2+y^2)
  NodePtr rr = make_bin(Op::add, make_bin(Op::mul, make_var("x"), make_var("x")),
                        make_bin(Op::mul, make_var("y"), make_var("y")));
  if (var == "x") return simp_div(make_neg(make_var("y")), rr);
  if (var == "y") return simp_div(make_var("x"), rr);
  return make_num(0.0);  // d theta / dz
}

inline NodePtr diff_node(const NodePtr& n, const std::string& var) {
  switch (n->kind) {
    case Node::Kind::num:
      return make_num(0.0);
    case Node::Kind::var:
      return diff_var(n->name, var);
    case Node::Kind::neg:
      return make_neg(diff_node(n->a, var));
    case Node::Kind::bin: {
      NodePtr da = diff_node(n->a, var);
      NodePtr db = diff_node(n->b, var);
      switch (n->op) {
        case Op::add: return simp_add(da, db);
        case Op::sub: return simp_sub(da, db);
        case Op::mul:
          return simp_add(simp_mul(da, n->b), simp_mul(n->a, db));
        case Op::div:
          return simp_div(simp_sub(simp_mul(da, n->b), simp_mul(n->a, db)),
                          make_bin(Op::mul, n->b, n->b));
        case Op::pow: {
          if (n->b->kind == Node::Kind::num) {
            double c = n->b->value;
            if (c == 0.0) return make_num(0.0);
            // c * u^(c-1) * u'
            return simp_mul(make_num(c),
                            simp_mul(make_bin(Op::pow, n->a, make_num(c - 1.0)), da));
          }
          // u^v * (v' log u + v u'/u)
          NodePtr term = simp_add(simp_mul(db, make_call(Fn::log, n->a)),
                                  simp_mul(n->b, simp_div(da, n->a)));
          return simp_mul(make_bin(Op::pow, n->a, n->b), term);
        }
      }
      return make_num(0.0);
    }
    case Node::Kind::call: {
      NodePtr da = diff_node(n->a, var);
      switch (n->fn) {
        case Fn::sin: return simp_mul(make_call(Fn::cos, n->a), da);
        case Fn::cos: return make_neg(simp_mul(make_call(Fn::sin, n->a), da));
        case Fn::exp: return simp_mul(make_call(Fn::exp, n->a), da);
        case Fn::log: return simp_div(da, n->a);
        case Fn::sqrt:
          return simp_div(da, make_bin(Op::mul, make_num(2.0), make_call(Fn::sqrt, n->a)));
        case Fn::abs: return simp_mul(make_call(Fn::sign, n->a), da);
        case Fn::sign: return make_num(0.0);
        case Fn::atan2: {
          // atan2(u,v): (u'v - uv') / (u^2 + v^2)
          NodePtr db = diff_node(n->b, var);
          NodePtr num = simp_sub(simp_mul(da, n->b), simp_mul(n->a, db));
          NodePtr den = make_bin(Op::add, make_bin(Op::mul, n->a, n->a),
                                 make_bin(Op::mul, n->b, n->b));
          return simp_div(num, den);
        }
      }
      return make_num(0.0);
    }
  }
  return make_num(0.0);
}

}  // namespace detail

class Expr {
 public:
  Expr() : node_(detail::make_num(0.0)) {}

  static Expr parse(std::string_view src) {
    detail::Parser p(src);
    return Expr(p.run());
  }

  double eval(const EvalPoint& p) const { return detail::eval_node(*node_, p); }
  double operator()(const Vec2& p) const { return eval(EvalPoint::from(p)); }
  double operator()(const Vec3& p) const { return eval(EvalPoint::from(p)); }
  double operator()(double x, double y, double z = 0.0) const { return eval({x, y, z}); }

  Expr derivative(const std::string& var) const {
    if (var != "x" && var != "y" && var != "z")
      throw Error("Expr::derivative: variable must be x, y or z");
    return Expr(detail::diff_node(node_, var));
  }

  std::string to_string() const {
    std::ostringstream os;
    detail::print_node(*node_, os);
    return os.str();
  }

 private:
  explicit Expr(detail::NodePtr n) : node_(std::move(n)) {}
  detail::NodePtr node_;
};

}  // namespace ucplab
