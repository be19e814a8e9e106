#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <span>

#include "gaplab/model.hpp"
#include "gaplab/polynomial.hpp"
#include "gaplab/special.hpp"

namespace gaplab {

/// E[prod eta_i^{k_i}] under the uniform law on {sum eta_i^2 = omega} in R^N.
/// Zero when any exponent is odd; otherwise
/// omega^M prod (2m_i - 1)!! / (N (N+2) ... (N + 2M - 2)) with k_i = 2 m_i.
template <class Scalar>
Scalar sphere_moment(std::span<const int> k, int N, const Scalar& omega) {
  int M = 0;
  Scalar num(1);
  for (int e : k) {
    if (e % 2 != 0) return Scalar(0);
    for (int t = e - 1; t > 0; t -= 2) num *= Scalar(t);
    M += e / 2;
  }
  Scalar den(1);
  for (int t = 0; t < M; ++t) den *= Scalar(N + 2 * t);
  Scalar scale(1);
  for (int t = 0; t < M; ++t) scale *= omega;
  return scale * num / den;
}

/// E[prod eta_i^{k_i}] under Dirichlet(gamma, ..., gamma) scaled to total
/// omega: omega^K Gamma(N g)/Gamma(N g + K) prod Gamma(g + k_i)/Gamma(g).
template <class Scalar>
Scalar simplex_moment(std::span<const int> k, int N, const Scalar& gamma, const Scalar& omega) {
  int K = 0;
  Scalar num(1);
  for (int e : k) {
    for (int t = 0; t < e; ++t) num *= gamma + Scalar(t);
    K += e;
  }
  Scalar den(1);
  const Scalar base = Scalar(N) * gamma;
  for (int t = 0; t < K; ++t) den *= base + Scalar(t);
  Scalar scale(1);
  for (int t = 0; t < K; ++t) scale *= omega;
  return scale * num / den;
}

/// (1/2pi) int cos^p sin^q d theta = (p-1)!! (q-1)!! / (p+q)!! for even p, q.
template <class Scalar>
Scalar trig_moment(int p, int q) {
  if (p < 0 || q < 0) throw Error(ErrorKind::InvalidArgument, "negative trigonometric exponent");
  if (p % 2 != 0 || q % 2 != 0) return Scalar(0);
  Scalar num(1);
  for (int t = p - 1; t > 0; t -= 2) num *= Scalar(t);
  for (int t = q - 1; t > 0; t -= 2) num *= Scalar(t);
  Scalar den(1);
  for (int t = p + q; t > 0; t -= 2) den *= Scalar(t);
  return num / den;
}

/// int cos^p sin^q rho(theta) d theta from the Fourier coefficients of rho;
/// needs rho_hat up to order p + q.
double rho_trig_moment(const RhoSpec& rho, int p, int q);

/// Memoized moment functional for the polynomial sectors.
class MomentOracle {
 public:
  enum class Kind { Sphere, SimplexDirichlet };

  static MomentOracle sphere(int N, double omega) { return MomentOracle(Kind::Sphere, N, 0.0, omega); }
  static MomentOracle simplex(int N, double gamma, double omega) {
    return MomentOracle(Kind::SimplexDirichlet, N, gamma, omega);
  }

  MomentOracle(const MomentOracle& o) : kind_(o.kind_), N_(o.N_), gamma_(o.gamma_), omega_(o.omega_) {}

  Kind kind() const noexcept { return kind_; }
  int N() const noexcept { return N_; }
  double omega() const noexcept { return omega_; }
  double gamma() const noexcept { return gamma_; }

  double operator()(const Exponents& k) const;
  /// nu(p) for a polynomial p.
  double expectation(const Polynomial<double>& p) const;

 private:
  MomentOracle(Kind kind, int N, double gamma, double omega) : kind_(kind), N_(N), gamma_(gamma), omega_(omega) {}

  Kind kind_;
  int N_;
  double gamma_;
  double omega_;
  mutable std::map<Exponents, double> cache_;
  mutable std::mutex mutex_;
};

}  // namespace gaplab
