#include "hsp/expression.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace hsp {

namespace {

using Instr = Expression::Instr;
using Op = Expression::Op;
using Fn = Expression::Fn;

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

class Parser {
 public:
  Parser(const std::string& s, int dim) : s_(s), dim_(dim) {}

  std::vector<Instr> run() {
    expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return std::move(code_);
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ExpressionError("expression \"" + s_ + "\": " + why + " at offset " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void emit(Op op) { code_.push_back({op}); }

  void expr() {
    term();
    for (;;) {
      if (eat('+')) {
        term();
        emit(Op::add);
      } else if (eat('-')) {
        term();
        emit(Op::sub);
      } else {
        return;
      }
    }
  }
  void term() {
    unary();
    for (;;) {
      if (eat('*')) {
        unary();
        emit(Op::mul);
      } else if (eat('/')) {
        unary();
        emit(Op::div);
      } else {
        return;
      }
    }
  }
  void unary() {
    if (eat('-')) {
      unary();
      emit(Op::neg);
    } else if (eat('+')) {
      unary();
    } else {
      power();
    }
  }
  void power() {
    atom();
    if (eat('^')) {
      unary();  // right associative, binds tighter than unary minus on the left
      emit(Op::pow);
    }
  }
  void atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      expr();
      if (!eat(')')) fail("missing ')'");
      return;
    }
    if (c == '|') {
      ++pos_;
      skip();
      // |x| is the Euclidean norm of the point
      const std::size_t save = pos_;
      if (pos_ < s_.size() && s_[pos_] == 'x') {
        ++pos_;
        if (eat('|')) {
          emit(Op::norm);
          return;
        }
        pos_ = save;
      }
      expr();
      if (!eat('|')) fail("missing closing '|'");
      code_.push_back({Op::fn, Fn::abs});
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      code_.push_back({Op::num, Fn::exp, 0, v});
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t b = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string id = s_.substr(b, pos_ - b);
      if (id == "pi") {
        code_.push_back({Op::num, Fn::exp, 0, std::numbers::pi});
        return;
      }
      if (id == "e") {
        code_.push_back({Op::num, Fn::exp, 0, std::numbers::e});
        return;
      }
      if (id.size() >= 2 && id[0] == 'x' && all_digits(id.substr(1))) {
        const int k = std::stoi(id.substr(1));
        if (k < 1 || k > dim_) fail("coordinate " + id + " outside dimension " + std::to_string(dim_));
        code_.push_back({Op::var, Fn::exp, k - 1});
        return;
      }
      static const std::pair<const char*, Fn> fns[] = {{"exp", Fn::exp}, {"log", Fn::log},   {"sqrt", Fn::sqrt},
                                                       {"abs", Fn::abs}, {"sin", Fn::sin},   {"cos", Fn::cos},
                                                       {"tanh", Fn::tanh}};
      for (const auto& [name, fn] : fns) {
        if (id == name) {
          if (!eat('(')) fail("expected '(' after " + id);
          expr();
          if (!eat(')')) fail("missing ')'");
          code_.push_back({Op::fn, fn});
          return;
        }
      }
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  int dim_;
  std::size_t pos_ = 0;
  std::vector<Instr> code_;
};

}  // namespace

Expression::Expression(const std::string& text, int dim) : text_(text), dim_(dim) {
  code_ = Parser(text_, dim).run();
  int depth = 0;
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::num:
      case Op::var:
      case Op::norm:
        ++depth;
        break;
      case Op::add:
      case Op::sub:
      case Op::mul:
      case Op::div:
      case Op::pow:
        --depth;
        break;
      case Op::neg:
      case Op::fn:
        break;
    }
    max_depth_ = std::max(max_depth_, depth);
  }
  if (depth != 1) throw ExpressionError("expression \"" + text + "\" is malformed");
  if (max_depth_ > 64) throw ExpressionError("expression \"" + text + "\" nests too deeply");
}

double Expression::operator()(std::span<const double> x) const {
  if (code_.empty()) throw ExpressionError("empty expression");
  double st[64];
  int top = -1;
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::num:
        st[++top] = in.value;
        break;
      case Op::var:
        st[++top] = x[in.index];
        break;
      case Op::norm: {
        double s = 0;
        for (double v : x) s += v * v;
        st[++top] = std::sqrt(s);
        break;
      }
      case Op::add:
        st[top - 1] += st[top];
        --top;
        break;
      case Op::sub:
        st[top - 1] -= st[top];
        --top;
        break;
      case Op::mul:
        st[top - 1] *= st[top];
        --top;
        break;
      case Op::div:
        st[top - 1] /= st[top];
        --top;
        break;
      case Op::pow:
        st[top - 1] = std::pow(st[top - 1], st[top]);
        --top;
        break;
      case Op::neg:
        st[top] = -st[top];
        break;
      case Op::fn: {
        double& v = st[top];
        switch (in.fn) {
          case Fn::exp: v = std::exp(v); break;
          case Fn::log: v = std::log(v); break;
          case Fn::sqrt: v = std::sqrt(v); break;
          case Fn::abs: v = std::abs(v); break;
          case Fn::sin: v = std::sin(v); break;
          case Fn::cos: v = std::cos(v); break;
          case Fn::tanh: v = std::tanh(v); break;
        }
        break;
      }
    }
  }
  return st[0];
}

}  // namespace hsp
