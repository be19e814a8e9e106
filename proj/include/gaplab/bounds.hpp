#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gaplab/rational.hpp"

namespace gaplab {

/// (3 l3 - 1)(1 - 2/N) + 1/N
template <class Scalar>
Scalar caputo_bound(const Scalar& lambda3, int N) {
  if (N < 2) throw Error(ErrorKind::InvalidSize, "N must be at least 2");
  return (Scalar(3) * lambda3 - Scalar(1)) * (Scalar(1) - Scalar(2) / Scalar(N)) + Scalar(1) / Scalar(N);
}

/// lambda_star / (96 d N^2)
double theorem_nn_bound(double lambda_star, int d, int N);

struct LocalConstants {
  int d = 0;
  int N = 0;
  double kac_bound = 0.0;                  // 1 / (384 d N^2)
  std::optional<double> lambda2;
  std::optional<double> lambda2_bound;     // lambda2 / (192 d N^2)
};

LocalConstants kac_local_constants(int d, int N, std::optional<double> lambda2 = std::nullopt);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
};

/// [2 l2 l*, 2 kappa l*]
Interval sandwich(double lambda2, double kappa, double lambda_star);

struct BoundInput {
  std::string name;
  double value = 0.0;
  std::string exact;  // rational form when the input was exact
  std::string source;
};

struct BoundStep {
  std::string rule;
  std::string inequality;
  double value = 0.0;
  std::string exact;
};

struct BoundChain {
  std::vector<BoundInput> inputs;
  std::vector<BoundStep> steps;
  Interval interval;        // certified range for N^2 * lambda^loc(N, omega)
  std::string grid;         // index set the infima were taken over
};

/// Uniform lattice constants from a three-site complete-graph gap and a
/// two-site gap. Refused (hypothesis-failed) unless lambda3 > 1/3 and
/// lambda2 > 0.
BoundChain certificate(const Rational& lambda3, const Rational& lambda2, int d);
BoundChain certificate(double lambda3, double lambda2, int d);

struct ScalingRow {
  double omega = 0.0;
  double lambda2 = 0.0;
};

struct ScalingTable {
  std::vector<ScalingRow> rows;
  double inf = 0.0;
  double argmin = 0.0;
  bool degenerate = false;  // Lambda_s decays towards 0 beyond the grid
  std::string warning;
};

/// lambda(2, omega) = Lambda_s(omega) / Lambda_s(1) * lambda(2, 1) on a grid.
ScalingTable lambda_s_scaling(const std::function<double(double)>& lambda_s, double lambda21,
                              const std::vector<double>& grid);

}  // namespace gaplab
