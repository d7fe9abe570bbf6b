#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsp {

class ExpressionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Tiny arithmetic language over the coordinates of a point:
///   x1 .. xN, |x| (Euclidean norm), numbers, pi, e,
///   + - * / ^, unary minus, parentheses, |expr|,
///   exp log sqrt abs sin cos tanh.
/// Compiled once to a postfix program; evaluation is reentrant.
class Expression {
 public:
  Expression() = default;
  Expression(const std::string& text, int dim);

  double operator()(std::span<const double> x) const;
  const std::string& text() const { return text_; }
  int dim() const { return dim_; }

  enum class Op : unsigned char { num, var, norm, add, sub, mul, div, pow, neg, fn };
  enum class Fn : unsigned char { exp, log, sqrt, abs, sin, cos, tanh };
  struct Instr {
    Op op;
    Fn fn = Fn::exp;
    int index = 0;
    double value = 0;
  };

 private:
  std::string text_;
  int dim_ = 0;
  std::vector<Instr> code_;
  int max_depth_ = 0;
};

}  // namespace hsp
