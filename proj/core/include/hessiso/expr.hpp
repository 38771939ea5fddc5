#pragma once

#include "hessiso/jet.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace hessiso {

/// Expression tree over x1..xn built from a prefix s-expression, e.g.
///   (* 0.5 (+ (pow x1 2) (pow x2 2) (* 0.1 (sqrt (+ (pow x1 4) (pow x2 4))))))
/// Operators: + - * / pow sqrt (the Unicode forms − × ÷ are accepted too).
class Expr {
 public:
  enum class Op { Constant, Variable, Add, Sub, Neg, Mul, Div, Pow, Sqrt };

  static Expr parse(std::string_view text);
  static Expr constant(double v);
  static Expr variable(int index);

  Op op() const noexcept { return node_->op; }
  /// 1 + largest variable index referenced (0 for constant expressions).
  int arity() const;

  double eval(std::span<const double> x) const;
  Jet3 eval_jet(std::span<const double> x) const;

  /// Canonical prefix form (round-trips through parse).
  std::string to_string() const;

 private:
  struct Node {
    Op op = Op::Constant;
    double value = 0.0;
    int index = 0;
    std::vector<std::shared_ptr<const Node>> args;
  };

  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static double eval_node(const Node& n, std::span<const double> x);
  static Jet3 eval_node_jet(const Node& n, std::span<const double> x, int dim);
  static void print(const Node& n, std::string& out);
  static int max_index(const Node& n);

  friend class ExprParser;

  std::shared_ptr<const Node> node_;
};

}  // namespace hessiso
