#include "gaplab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gaplab {

double theorem_nn_bound(double lambda_star, int d, int N) {
  if (d < 1 || N < 1) throw Error(ErrorKind::InvalidArgument, "need d >= 1 and N >= 1");
  if (lambda_star < 0.0) throw Error(ErrorKind::DomainError, "lambda_star must be nonnegative");
  return lambda_star / (96.0 * d * N * N);
}

LocalConstants kac_local_constants(int d, int N, std::optional<double> lambda2) {
  if (d < 1 || N < 1) throw Error(ErrorKind::InvalidArgument, "need d >= 1 and N >= 1");
  LocalConstants c;
  c.d = d;
  c.N = N;
  c.kac_bound = 1.0 / (384.0 * d * N * N);
  if (lambda2) {
    c.lambda2 = *lambda2;
    c.lambda2_bound = *lambda2 / (192.0 * d * N * N);
  }
  return c;
}

Interval sandwich(double lambda2, double kappa, double lambda_star) {
  if (lambda2 < 0.0 || lambda_star < 0.0) throw Error(ErrorKind::InconsistentInput, "negative gap input");
  if (lambda2 > kappa * (1.0 + 1e-12))
    throw Error(ErrorKind::InconsistentInput, "lambda(2) exceeds kappa");
  return {2.0 * lambda2 * lambda_star, 2.0 * kappa * lambda_star};
}

namespace {

std::string exact_of(const Rational& r) { return r.str(); }
std::string exact_of(double) { return {}; }
double value_of(const Rational& r) { return r.to_double(); }
double value_of(double x) { return x; }

template <class S>
BoundChain build_certificate(const S& lambda3, const S& lambda2, int d) {
  if (d < 1) throw Error(ErrorKind::InvalidDimension, "d must be at least 1");
  if (!(S(1) < S(3) * lambda3)) throw Error(ErrorKind::HypothesisFailed, "λ*(3) > 1/3");
  if (!(S(0) < lambda2)) throw Error(ErrorKind::HypothesisFailed, "λ(2) > 0");

  BoundChain chain;
  chain.grid = "N >= 3 (complete graph), N >= 2 (lattice side), all omega > 0";
  chain.inputs.push_back({"lambda3", value_of(lambda3), exact_of(lambda3), "three-site complete-graph gap inf over omega"});
  chain.inputs.push_back({"lambda2", value_of(lambda2), exact_of(lambda2), "two-site gap inf over omega"});
  chain.inputs.push_back({"d", static_cast<double>(d), std::to_string(d), "lattice dimension"});

  const S c_linear = S(3) * lambda3 - S(1);
  const S c1 = c_linear < lambda3 ? c_linear : lambda3;
  chain.steps.push_back({"caputo-recursion",
                         "λ*(N) ≥ (3λ*(3)−1)(1−2/N)+1/N ≥ min{λ*(3), 3λ*(3)−1} =: c₁ for all N ≥ 3",
                         value_of(c1), exact_of(c1)});
  const S c2 = c1 / S(96 * d);
  chain.steps.push_back({"lattice-comparison", "λ^{*,loc}(N,ω) ≥ λ*(|Λ_N|,ω)/(96dN²) ≥ c₂/N², c₂ = c₁/(96d)",
                         value_of(c2), exact_of(c2)});
  const S c3 = S(2) * lambda2 * c2;
  chain.steps.push_back({"two-site-sandwich", "λ^{loc}(N,ω) ≥ 2λ(2)λ^{*,loc}(N,ω) ≥ c₃/N², c₃ = 2λ(2)c₂",
                         value_of(c3), exact_of(c3)});
  chain.interval = {value_of(c3), INFINITY};
  return chain;
}

}  // namespace

BoundChain certificate(const Rational& lambda3, const Rational& lambda2, int d) {
  return build_certificate(lambda3, lambda2, d);
}

BoundChain certificate(double lambda3, double lambda2, int d) {
  if (!std::isfinite(lambda3) || !std::isfinite(lambda2)) throw Error(ErrorKind::DomainError, "non-finite gap input");
  return build_certificate(lambda3, lambda2, d);
}

ScalingTable lambda_s_scaling(const std::function<double(double)>& lambda_s, double lambda21,
                              const std::vector<double>& grid) {
  if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty omega grid");
  if (lambda21 < 0.0) throw Error(ErrorKind::DomainError, "lambda(2,1) must be nonnegative");
  auto rate = [&](double s) {
    const double v = lambda_s(s);
    if (!(v > 0.0) || !std::isfinite(v))
      throw Error(ErrorKind::InvalidRate, "Lambda_s(" + std::to_string(s) + ") is not positive");
    return v;
  };
  const double ref = rate(1.0);
  ScalingTable t;
  t.inf = INFINITY;
  for (double w : grid) {
    if (!(w > 0.0)) throw Error(ErrorKind::DomainError, "omega grid must be positive");
    const double v = rate(w) / ref * lambda21;
    t.rows.push_back({w, v});
    if (v < t.inf) {
      t.inf = v;
      t.argmin = w;
    }
  }
  // probe well outside the grid for decay towards 0
  const auto [lo, hi] = std::minmax_element(grid.begin(), grid.end());
  for (double probe : {*lo * 1e-6, *hi * 1e6}) {
    const double v = lambda_s(probe);
    if (std::isfinite(v) && v < 1e-3 * ref) {
      t.degenerate = true;
      std::ostringstream msg;
      msg << "Lambda_s(" << probe << ") = " << v << ": the infimum over all omega > 0 is likely 0";
      t.warning = msg.str();
      break;
    }
  }
  return t;
}

}  // namespace gaplab
