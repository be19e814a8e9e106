#include "gaplab/moments.hpp"

#include <vector>

namespace gaplab {

double rho_trig_moment(const RhoSpec& rho, int p, int q) {
  if (p < 0 || q < 0) throw Error(ErrorKind::InvalidArgument, "negative trigonometric exponent");
  if (rho.is_uniform()) return trig_moment<double>(p, q);
  const int order = p + q;
  if (order > rho.order())
    throw Error(ErrorKind::OrderError, "need rho_hat up to order " + std::to_string(order));
  // cos = (z + 1/z)/2, sin = (z - 1/z)/(2i) with z = e^{i theta}; coefficient
  // index n + order holds the z^n term.
  using C = std::complex<double>;
  std::vector<C> poly(static_cast<std::size_t>(2 * order + 1), C(0.0));
  poly[static_cast<std::size_t>(order)] = 1.0;
  auto multiply = [&](C up, C down) {
    std::vector<C> next(poly.size(), C(0.0));
    for (std::size_t i = 0; i < poly.size(); ++i) {
      if (poly[i] == C(0.0)) continue;
      if (i + 1 < poly.size()) next[i + 1] += poly[i] * up;
      if (i >= 1) next[i - 1] += poly[i] * down;
    }
    poly.swap(next);
  };
  for (int i = 0; i < p; ++i) multiply(0.5, 0.5);
  for (int i = 0; i < q; ++i) multiply(C(0.0, -0.5), C(0.0, 0.5));
  C total(0.0);
  for (int n = -order; n <= order; ++n) total += poly[static_cast<std::size_t>(n + order)] * rho.coefficient(n);
  return total.real();
}

double MomentOracle::operator()(const Exponents& k) const {
  {
    std::lock_guard lock(mutex_);
    const auto it = cache_.find(k);
    if (it != cache_.end()) return it->second;
  }
  const double v = kind_ == Kind::Sphere ? sphere_moment<double>(k, N_, omega_)
                                         : simplex_moment<double>(k, N_, gamma_, omega_);
  std::lock_guard lock(mutex_);
  cache_.emplace(k, v);
  return v;
}

double MomentOracle::expectation(const Polynomial<double>& p) const {
  double total = 0.0;
  for (const auto& [e, c] : p.terms()) total += c * (*this)(e);
  return total;
}

}  // namespace gaplab
