#include "gaplab/expression.hpp"

#include <cctype>
#include <cmath>
#include <memory>
#include <numbers>

#include "gaplab/error.hpp"

namespace gaplab {

namespace {

using Fn = std::function<double(double)>;

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  Fn parse() {
    Fn f = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::InvalidArgument, "expression: " + what + " at position " + std::to_string(pos_));
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

  Fn sum() {
    Fn lhs = product();
    while (true) {
      if (eat('+')) {
        Fn rhs = product();
        lhs = [lhs, rhs](double t) { return lhs(t) + rhs(t); };
      } else if (eat('-')) {
        Fn rhs = product();
        lhs = [lhs, rhs](double t) { return lhs(t) - rhs(t); };
      } else {
        return lhs;
      }
    }
  }

  Fn product() {
    Fn lhs = unary();
    while (true) {
      if (eat('*')) {
        Fn rhs = unary();
        lhs = [lhs, rhs](double t) { return lhs(t) * rhs(t); };
      } else if (eat('/')) {
        Fn rhs = unary();
        lhs = [lhs, rhs](double t) { return lhs(t) / rhs(t); };
      } else {
        return lhs;
      }
    }
  }

  Fn unary() {
    if (eat('-')) {
      Fn f = unary();
      return [f](double t) { return -f(t); };
    }
    if (eat('+')) return unary();
    return power();
  }

  Fn power() {
    Fn base = atom();
    if (eat('^')) {
      Fn ex = unary();  // right associative
      return [base, ex](double t) { return std::pow(base(t), ex(t)); };
    }
    return base;
  }

  Fn atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (eat('(')) {
      Fn f = sum();
      if (!eat(')')) fail("missing ')'");
      return f;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v;
      try {
        v = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      return [v](double) { return v; };
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "theta" || name == "t" || name == "x") return [](double t) { return t; };
      if (name == "pi") return [](double) { return std::numbers::pi; };
      if (name == "e") return [](double) { return std::numbers::e; };
      double (*fn)(double) = nullptr;
      if (name == "sin") fn = [](double v) { return std::sin(v); };
      else if (name == "cos") fn = [](double v) { return std::cos(v); };
      else if (name == "tan") fn = [](double v) { return std::tan(v); };
      else if (name == "exp") fn = [](double v) { return std::exp(v); };
      else if (name == "log") fn = [](double v) { return std::log(v); };
      else if (name == "sqrt") fn = [](double v) { return std::sqrt(v); };
      else if (name == "abs") fn = [](double v) { return std::abs(v); };
      else fail("unknown name '" + name + "'");
      if (!eat('(')) fail("expected '(' after " + name);
      Fn arg = sum();
      if (!eat(')')) fail("missing ')'");
      return [fn, arg](double t) { return fn(arg(t)); };
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::function<double(double)> parse_expression(const std::string& text) { return Parser(text).parse(); }

}  // namespace gaplab
