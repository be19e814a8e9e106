#pragma once

#include <cmath>
#include <map>
#include <span>
#include <vector>

#include "gaplab/error.hpp"

namespace gaplab {

using Exponents = std::vector<int>;

inline int total_degree(const Exponents& e) {
  int d = 0;
  for (int v : e) d += v;
  return d;
}

/// Sparse multivariate polynomial in a fixed number of variables.
template <class Scalar>
class Polynomial {
 public:
  using Terms = std::map<Exponents, Scalar>;

  explicit Polynomial(int variables = 0) : vars_(variables) {}

  static Polynomial constant(int variables, const Scalar& c) {
    Polynomial p(variables);
    p.add_term(Exponents(static_cast<std::size_t>(variables), 0), c);
    return p;
  }
  static Polynomial monomial(const Exponents& e, const Scalar& c = Scalar(1)) {
    Polynomial p(static_cast<int>(e.size()));
    p.add_term(e, c);
    return p;
  }

  int variables() const noexcept { return vars_; }
  const Terms& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  void add_term(const Exponents& e, const Scalar& c) {
    if (static_cast<int>(e.size()) != vars_) throw Error(ErrorKind::ShapeError, "monomial arity mismatch");
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) it->second += c;
  }

  Scalar coefficient(const Exponents& e) const {
    const auto it = terms_.find(e);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  int degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_)
      if (c != Scalar(0)) d = std::max(d, total_degree(e));
    return d;
  }

  Polynomial& operator+=(const Polynomial& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  Polynomial& operator*=(const Scalar& s) {
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Scalar& s) { return a *= s; }
  friend Polynomial operator*(const Scalar& s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check(b);
    Polynomial out(a.vars_);
    Exponents e(static_cast<std::size_t>(a.vars_));
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
        out.add_term(e, ca * cb);
      }
    return out;
  }

  Polynomial pow(int n) const {
    Polynomial out = constant(vars_, Scalar(1));
    for (int i = 0; i < n; ++i) out = out * *this;
    return out;
  }

  /// Drop terms with |coefficient| <= tol (exact zeros for exact scalars).
  Polynomial& prune(double tol = 0.0) {
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (std::abs(static_cast<double>(it->second)) <= tol) {
        it = terms_.erase(it);
      } else {
        ++it;
      }
    }
    return *this;
  }

  double max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [e, c] : terms_) m = std::max(m, std::abs(static_cast<double>(c)));
    return m;
  }

  Scalar evaluate(std::span<const Scalar> x) const {
    if (static_cast<int>(x.size()) != vars_) throw Error(ErrorKind::ShapeError, "evaluation point arity mismatch");
    Scalar total(0);
    for (const auto& [e, c] : terms_) {
      Scalar t = c;
      for (std::size_t k = 0; k < e.size(); ++k)
        for (int p = 0; p < e[k]; ++p) t *= x[k];
      total += t;
    }
    return total;
  }

  /// Replace variable `var` by the polynomial `value` (same variable set).
  Polynomial substitute(int var, const Polynomial& value) const {
    check(value);
    Polynomial out(vars_);
    for (const auto& [e, c] : terms_) {
      Exponents rest = e;
      const int p = rest[static_cast<std::size_t>(var)];
      rest[static_cast<std::size_t>(var)] = 0;
      out += monomial(rest, c) * value.pow(p);
    }
    return out;
  }

 private:
  void check(const Polynomial& o) const {
    if (o.vars_ != vars_) throw Error(ErrorKind::ShapeError, "polynomial variable count mismatch");
  }

  int vars_;
  Terms terms_;
};

/// Binomial coefficient as a Scalar.
template <class Scalar>
Scalar binomial(int n, int k) {
  if (k < 0 || k > n) return Scalar(0);
  Scalar r(1);
  for (int i = 1; i <= k; ++i) r = r * Scalar(n - k + i) / Scalar(i);
  return r;
}

}  // namespace gaplab
