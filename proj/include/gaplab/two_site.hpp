#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gaplab/generator.hpp"
#include "gaplab/model.hpp"

namespace gaplab {

struct TwoSiteRow {
  int omega = 0;
  double gap = infinite_gap;     // lambda(2, omega)
  double kappa = infinite_gap;   // top of the spectrum of -L at N = 2
  Eigen::Index dimension = 0;
};

struct TwoSiteTable {
  std::vector<TwoSiteRow> rows;
  double inf_gap = infinite_gap;   // over non-Dirac rows
  double sup_kappa = 0.0;          // over non-Dirac rows
  /// Sign of the gap trend over the tested range: -1 decreasing, +1
  /// increasing, 0 flat (within 1e-9), 2 mixed.
  int gap_trend = 0;
};

/// Exact two-site spectra of -L, L = (1/2) L_0, for a discrete model over
/// the supplied totals. Reports only what the tested range shows.
TwoSiteTable two_site_spectrum(const ModelSpec& model, const std::vector<int>& omegas);

/// Running supremum of kappa over totals 1..omega (what a pair inside an
/// N-site system can see).
double kappa_up_to(const TwoSiteTable& table, int omega);

struct KernelMatrix {
  int n = 0;
  Eigen::MatrixXd entries;
  Eigen::VectorXd spectrum;   // ascending, real
  Eigen::VectorXd stationary; // left Perron vector, normalized
};

/// The n x n one-site conditional kernel of the zero-range triple:
/// K_ij = [1/(g(n-j)! g(i-1-(n-j))!)] / sum_{l<i} 1/(g(l)! g(i-1-l)!) for i > n - j.
KernelMatrix kernel_matrix(const RateFunction& g, int n);

struct KernelExtremes {
  double mu1 = 0.0;  // smallest eigenvalue excluding the Perron root
  double mu2 = 0.0;  // largest eigenvalue excluding the Perron root
  struct Row {
    int n;
    double min;
    double max;
    double max_imaginary;
  };
  std::vector<Row> table;
  /// mu2(n) - mu2(n-1) over the last step; a shrinking value indicates
  /// convergence of the running supremum.
  double last_increment = 0.0;
};

KernelExtremes kernel_spectrum_extremes(const RateFunction& g, int n_max);

struct LsvReport {
  int k_max = 0;
  double increment_sup = 0.0;        // sup_{k < k_max} |g(k+1) - g(k)|
  std::vector<double> gap_by_k0;     // [k0 - 1] = min g(k) - g(j) over k >= j + k0
  int best_k0 = 0;                   // 0 when no k0 gives a positive constant
  double best_c = 0.0;
  bool holds_on_range = false;
  static constexpr const char* caveat = "finite-range scan; not a proof of the asymptotic conditions";
};

/// Scan of the two sufficient conditions for a positive two-site gap in the
/// zero-range family. The best pair maximizes C / k0 (ties to the smallest k0).
LsvReport lsv_condition_check(const RateFunction& g, int k_max, int k0_max);

}  // namespace gaplab
