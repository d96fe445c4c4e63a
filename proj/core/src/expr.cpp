#include "vh/expr.hpp"

#include "vh/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace vh {

struct Expression::Node {
  enum class Op { kConst, kVar, kAdd, kSub, kMul, kDiv, kNeg, kSin, kCos };
  Op op;
  double value = 0.0;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

using Node = Expression::Node;
using Ptr = std::shared_ptr<const Node>;
using Op = Node::Op;

Ptr make(Op op, Ptr a = nullptr, Ptr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

Ptr constant(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::kConst;
  n->value = v;
  return n;
}

bool is_const(const Ptr& p, double v) { return p->op == Op::kConst && p->value == v; }

// Constructors that fold trivial identities so derivatives stay small.
Ptr add(Ptr a, Ptr b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  if (a->op == Op::kConst && b->op == Op::kConst) return constant(a->value + b->value);
  return make(Op::kAdd, std::move(a), std::move(b));
}
Ptr sub(Ptr a, Ptr b) {
  if (is_const(b, 0.0)) return a;
  if (a->op == Op::kConst && b->op == Op::kConst) return constant(a->value - b->value);
  return make(Op::kSub, std::move(a), std::move(b));
}
Ptr mul(Ptr a, Ptr b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return constant(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (a->op == Op::kConst && b->op == Op::kConst) return constant(a->value * b->value);
  return make(Op::kMul, std::move(a), std::move(b));
}
Ptr divide(Ptr a, Ptr b) {
  if (is_const(a, 0.0)) return constant(0.0);
  if (is_const(b, 1.0)) return a;
  return make(Op::kDiv, std::move(a), std::move(b));
}
Ptr neg(Ptr a) {
  if (a->op == Op::kConst) return constant(-a->value);
  return make(Op::kNeg, std::move(a));
}

double eval(const Node& n, double t) {
  switch (n.op) {
    case Op::kConst: return n.value;
    case Op::kVar: return t;
    case Op::kAdd: return eval(*n.a, t) + eval(*n.b, t);
    case Op::kSub: return eval(*n.a, t) - eval(*n.b, t);
    case Op::kMul: return eval(*n.a, t) * eval(*n.b, t);
    case Op::kDiv: return eval(*n.a, t) / eval(*n.b, t);
    case Op::kNeg: return -eval(*n.a, t);
    case Op::kSin: return std::sin(eval(*n.a, t));
    case Op::kCos: return std::cos(eval(*n.a, t));
  }
  return 0.0;
}

Ptr derive(const Ptr& n) {
  switch (n->op) {
    case Op::kConst: return constant(0.0);
    case Op::kVar: return constant(1.0);
    case Op::kAdd: return add(derive(n->a), derive(n->b));
    case Op::kSub: return sub(derive(n->a), derive(n->b));
    case Op::kMul: return add(mul(derive(n->a), n->b), mul(n->a, derive(n->b)));
    case Op::kDiv:
      return divide(sub(mul(derive(n->a), n->b), mul(n->a, derive(n->b))), mul(n->b, n->b));
    case Op::kNeg: return neg(derive(n->a));
    case Op::kSin: return mul(make(Op::kCos, n->a), derive(n->a));
    case Op::kCos: return neg(mul(make(Op::kSin, n->a), derive(n->a)));
  }
  return constant(0.0);
}

void print(const Node& n, std::ostringstream& out) {
  switch (n.op) {
    case Op::kConst: out << n.value; return;
    case Op::kVar: out << 't'; return;
    case Op::kNeg: out << "(-"; print(*n.a, out); out << ')'; return;
    case Op::kSin: out << "sin("; print(*n.a, out); out << ')'; return;
    case Op::kCos: out << "cos("; print(*n.a, out); out << ')'; return;
    default: break;
  }
  const char sym = n.op == Op::kAdd ? '+' : n.op == Op::kSub ? '-' : n.op == Op::kMul ? '*' : '/';
  out << '(';
  print(*n.a, out);
  out << sym;
  print(*n.b, out);
  out << ')';
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Ptr parse() {
    Ptr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("expression '" + s_ + "': " + what + " at position " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool starts_primary() {
    skip();
    if (pos_ >= s_.size()) return false;
    const char c = s_[pos_];
    return std::isalpha(static_cast<unsigned char>(c)) || c == '(' || std::isdigit(static_cast<unsigned char>(c)) ||
           c == '.';
  }
  Ptr expr() {
    Ptr e = term();
    while (true) {
      if (peek('+')) {
        ++pos_;
        e = add(e, term());
      } else if (peek('-')) {
        ++pos_;
        e = sub(e, term());
      } else {
        return e;
      }
    }
  }
  Ptr term() {
    Ptr e = unary();
    while (true) {
      if (peek('*')) {
        ++pos_;
        e = mul(e, unary());
      } else if (peek('/')) {
        ++pos_;
        e = divide(e, unary());
      } else if (starts_primary()) {
        e = mul(e, primary());
      } else {
        return e;
      }
    }
  }
  Ptr unary() {
    if (peek('-')) {
      ++pos_;
      return neg(unary());
    }
    if (peek('+')) {
      ++pos_;
      return unary();
    }
    return primary();
  }
  Ptr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Ptr e = expr();
      if (!peek(')')) fail("missing ')'");
      ++pos_;
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      return constant(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "t") return make(Op::kVar);
      if (name == "pi") return constant(3.14159265358979323846);
      if (name == "sin" || name == "cos") {
        if (!peek('(')) fail("expected '(' after " + name);
        ++pos_;
        Ptr arg = expr();
        if (!peek(')')) fail("missing ')'");
        ++pos_;
        return make(name == "sin" ? Op::kSin : Op::kCos, arg);
      }
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    fail("unexpected character");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text) { return Expression(Parser(text).parse()); }

double Expression::operator()(double t) const { return eval(*root_, t); }

Expression Expression::derivative() const { return Expression(derive(root_)); }

std::string Expression::to_string() const {
  std::ostringstream out;
  out.precision(17);
  print(*root_, out);
  return out.str();
}

}  // namespace vh
