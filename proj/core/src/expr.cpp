#include "hessiso/expr.hpp"

#include "hessiso/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace hessiso {

class ExprParser {
 public:
  explicit ExprParser(std::string_view src) : src_(src) {}

  Expr parse_all() {
    auto n = parse_node();
    skip_ws();
    if (pos_ != src_.size()) fail("trailing input");
    return Expr(std::move(n));
  }

 private:
  using NodePtr = std::shared_ptr<const Expr::Node>;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::ParseError, msg + " at offset " + std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  std::string_view token() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '(' || c == ')' || std::isspace(static_cast<unsigned char>(c))) break;
      ++pos_;
    }
    if (start == pos_) fail("expected token");
    return src_.substr(start, pos_ - start);
  }

  static std::shared_ptr<Expr::Node> make(Expr::Op op) {
    auto n = std::make_shared<Expr::Node>();
    n->op = op;
    return n;
  }

  NodePtr parse_node() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of expression");
    if (src_[pos_] == ')') fail("unexpected ')'");
    if (src_[pos_] != '(') return parse_atom(token());

    ++pos_;
    const std::string_view head = token();
    std::vector<NodePtr> args;
    for (;;) {
      skip_ws();
      if (pos_ >= src_.size()) fail("unterminated list");
      if (src_[pos_] == ')') {
        ++pos_;
        break;
      }
      args.push_back(parse_node());
    }

    auto need = [&](std::size_t lo, std::size_t hi) {
      if (args.size() < lo || args.size() > hi) fail("wrong argument count for '" + std::string(head) + "'");
    };

    std::shared_ptr<Expr::Node> n;
    if (head == "+") {
      need(1, SIZE_MAX);
      n = make(Expr::Op::Add);
    } else if (head == "-" || head == "\xE2\x88\x92") {
      need(1, 2);
      n = make(args.size() == 1 ? Expr::Op::Neg : Expr::Op::Sub);
    } else if (head == "*" || head == "\xC3\x97") {
      need(1, SIZE_MAX);
      n = make(Expr::Op::Mul);
    } else if (head == "/" || head == "\xC3\xB7") {
      need(2, 2);
      n = make(Expr::Op::Div);
    } else if (head == "pow") {
      need(2, 2);
      if (args[1]->op != Expr::Op::Constant) fail("pow exponent must be a numeric literal");
      n = make(Expr::Op::Pow);
    } else if (head == "sqrt") {
      need(1, 1);
      n = make(Expr::Op::Sqrt);
    } else {
      fail("unknown operator '" + std::string(head) + "'");
    }
    n->args = std::move(args);
    return n;
  }

  NodePtr parse_atom(std::string_view tok) {
    if (tok.size() >= 2 && (tok[0] == 'x' || tok[0] == 'X')) {
      int idx = 0;
      auto [p, ec] = std::from_chars(tok.data() + 1, tok.data() + tok.size(), idx);
      if (ec != std::errc() || p != tok.data() + tok.size() || idx < 1) fail("bad variable '" + std::string(tok) + "'");
      auto n = make(Expr::Op::Variable);
      n->index = idx - 1;
      return n;
    }
    // strtod handles exponents portably; from_chars<double> is missing on older toolchains.
    std::string s(tok);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) fail("bad number '" + s + "'");
    auto n = make(Expr::Op::Constant);
    n->value = v;
    return n;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

Expr Expr::parse(std::string_view text) { return ExprParser(text).parse_all(); }

Expr Expr::constant(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Constant;
  n->value = v;
  return Expr(std::move(n));
}

Expr Expr::variable(int index) {
  auto n = std::make_shared<Node>();
  n->op = Op::Variable;
  n->index = index;
  return Expr(std::move(n));
}

int Expr::max_index(const Node& n) {
  int m = n.op == Op::Variable ? n.index + 1 : 0;
  for (const auto& a : n.args) m = std::max(m, max_index(*a));
  return m;
}

int Expr::arity() const { return max_index(*node_); }

double Expr::eval_node(const Node& n, std::span<const double> x) {
  switch (n.op) {
    case Op::Constant: return n.value;
    case Op::Variable: return x[n.index];
    case Op::Add: {
      double s = 0.0;
      for (const auto& a : n.args) s += eval_node(*a, x);
      return s;
    }
    case Op::Sub: return eval_node(*n.args[0], x) - eval_node(*n.args[1], x);
    case Op::Neg: return -eval_node(*n.args[0], x);
    case Op::Mul: {
      double p = 1.0;
      for (const auto& a : n.args) p *= eval_node(*a, x);
      return p;
    }
    case Op::Div: return eval_node(*n.args[0], x) / eval_node(*n.args[1], x);
    case Op::Pow: return std::pow(eval_node(*n.args[0], x), n.args[1]->value);
    case Op::Sqrt: {
      const double v = eval_node(*n.args[0], x);
      if (v < 0.0) throw Error(ErrorCode::NonSmoothPoint, "sqrt of negative value");
      return std::sqrt(v);
    }
  }
  return 0.0;
}

Jet3 Expr::eval_node_jet(const Node& n, std::span<const double> x, int dim) {
  switch (n.op) {
    case Op::Constant: return Jet3(dim, n.value);
    case Op::Variable: return Jet3::variable(dim, n.index, x[n.index]);
    case Op::Add: {
      Jet3 s = eval_node_jet(*n.args[0], x, dim);
      for (std::size_t i = 1; i < n.args.size(); ++i) s += eval_node_jet(*n.args[i], x, dim);
      return s;
    }
    case Op::Sub: return eval_node_jet(*n.args[0], x, dim) - eval_node_jet(*n.args[1], x, dim);
    case Op::Neg: return -eval_node_jet(*n.args[0], x, dim);
    case Op::Mul: {
      Jet3 p = eval_node_jet(*n.args[0], x, dim);
      for (std::size_t i = 1; i < n.args.size(); ++i) {
        const Node& a = *n.args[i];
        if (a.op == Op::Constant)
          p *= a.value;
        else
          p = p * eval_node_jet(a, x, dim);
      }
      return p;
    }
    case Op::Div: {
      const Node& den = *n.args[1];
      if (den.op == Op::Constant) return eval_node_jet(*n.args[0], x, dim) * (1.0 / den.value);
      return eval_node_jet(*n.args[0], x, dim) / eval_node_jet(den, x, dim);
    }
    case Op::Pow: return pow(eval_node_jet(*n.args[0], x, dim), n.args[1]->value);
    case Op::Sqrt: return sqrt(eval_node_jet(*n.args[0], x, dim));
  }
  return Jet3(dim);
}

double Expr::eval(std::span<const double> x) const { return eval_node(*node_, x); }

Jet3 Expr::eval_jet(std::span<const double> x) const {
  return eval_node_jet(*node_, x, static_cast<int>(x.size()));
}

void Expr::print(const Node& n, std::string& out) {
  auto list = [&](const char* head) {
    out += '(';
    out += head;
    for (const auto& a : n.args) {
      out += ' ';
      print(*a, out);
    }
    out += ')';
  };
  switch (n.op) {
    case Op::Constant: {
      std::ostringstream os;
      os.precision(17);
      os << n.value;
      out += os.str();
      break;
    }
    case Op::Variable: out += "x" + std::to_string(n.index + 1); break;
    case Op::Add: list("+"); break;
    case Op::Sub: list("-"); break;
    case Op::Neg: list("-"); break;
    case Op::Mul: list("*"); break;
    case Op::Div: list("/"); break;
    case Op::Pow: list("pow"); break;
    case Op::Sqrt: list("sqrt"); break;
  }
}

std::string Expr::to_string() const {
  std::string s;
  print(*node_, s);
  return s;
}

}  // namespace hessiso
