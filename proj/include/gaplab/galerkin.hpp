#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gaplab/model.hpp"
#include "gaplab/moments.hpp"
#include "gaplab/polynomial.hpp"

namespace gaplab {

enum class BasisMode { Full, Symmetric };

/// Monomials (full) or permutation-orbit sums of monomials (symmetric) of
/// total degree <= max_degree, ordered by degree and then lexicographically.
struct MultiIndexBasis {
  int N = 0;
  int max_degree = 0;
  BasisMode mode = BasisMode::Full;
  bool even_only = false;
  std::vector<Exponents> labels;              // representative multi-index per function
  std::vector<Polynomial<double>> functions;

  std::size_t size() const noexcept { return functions.size(); }
};

MultiIndexBasis make_basis(int N, int max_degree, BasisMode mode, bool even_only = false);

/// Conditional average of eta_i^a eta_j^b over one collision, as a polynomial
/// in (eta_i, eta_j):
///   kac:   T(a, b) (eta_i^2 + eta_j^2)^{(a+b)/2}
///   gamma: E[beta^a (1-beta)^b] (eta_i + eta_j)^{a+b}, beta ~ Beta(g, g).
Polynomial<double> pair_average_action(const ModelSpec& model, int a, int b);

/// Average of (eta_i cos t - eta_j sin t)^a (eta_i sin t + eta_j cos t)^b over
/// the symmetrized angle law (rho(t) + rho(-t)) / 2.
Polynomial<double> rho_pair_action(const RhoSpec& rho, int a, int b);

/// L applied to a polynomial for one of the continuous catalog models on the
/// given graph (pair terms scaled by graph.pair_scaling).
Polynomial<double> apply_generator(const ModelSpec& model, const InteractionGraph& graph, const Polynomial<double>& f);

/// Moment functional of the reversible measure for the model on N sites.
MomentOracle model_moments(const ModelSpec& model, int N, double omega);

struct GalerkinPair {
  Eigen::MatrixXd A;  // nu(phi_i (-L) phi_j)
  Eigen::MatrixXd B;  // nu(phi_i phi_j)
  MultiIndexBasis basis;
  double asymmetry = 0.0;         // max |A - A^T|
  double out_of_sector = 0.0;     // coefficient mass of L phi above the sector degree
  double constant_residual = 0.0; // max coefficient of L 1
};

GalerkinPair assemble_galerkin(const ModelSpec& model, const InteractionGraph& graph, double omega, int degree,
                               BasisMode mode = BasisMode::Full, bool even_only = false);

struct GalerkinResult {
  double gap = 0.0;               // smallest generalized eigenvalue above the zero threshold
  int deflated_dimension = 0;
  double gram_condition = 0.0;
  Eigen::VectorXd spectrum;       // all sector eigenvalues, ascending
  Eigen::VectorXd eigenfunction;  // basis coefficients of the gap mode
};

/// Exact gap of L restricted to the invariant polynomial sector.
GalerkinResult galerkin_gap(const GalerkinPair& pair, double zero_threshold = 1e-8, double deflation = 1e-10);

struct KOperatorCheck {
  double gamma = 0.0;
  int degree = 0;
  Eigen::VectorXd computed;     // eigenvalues, ordered by degree n = 0..D
  Eigen::VectorXd closed_form;  // (-1)^n Gamma(2g)Gamma(n+g)/(Gamma(g)Gamma(n+2g))
  double max_residual = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double three_site_bound = 0.0;      // (1/3) min{2 + mu1, 2 - 2 mu2}
  double eigenfunction_residual = 0.0; // K(eta - 1/3) + (1/2)(eta - 1/3)
  double self_adjoint_residual = 0.0;  // Gram route: nu(phi K psi) - nu(psi K phi)
  double gram_condition = 0.0;
};

/// Matrix of K phi(eta_1) = nu[phi(eta_2) | eta_1] for N = 3, omega = 1 on the
/// monomials 1, eta, ..., eta^D, with its spectrum against the closed form.
KOperatorCheck k_operator_check(double gamma, int degree);

struct QuadraticIdentity {
  double gamma = 0.0;
  double lambda = 0.0;                // (1 + 3g) / (3 (1 + 2g))
  double residual = 0.0;              // L f + lambda f - const on the simplex
  double conditional_residual = 0.0;  // nu[eta_1^2 | eta_2] identity, tested against moments
};

/// Checks that f = eta_1^2 + eta_2^2 + eta_3^2 is an eigenfunction of the
/// three-site Gamma simple-average generator.
QuadraticIdentity quadratic_eigen_identity(double gamma);

struct FourierGap {
  double lambda2 = 0.0;
  double kappa = 0.0;
  int n_max = 0;
  std::vector<double> modes;  // modes[n-1] = (1/2)(1 - Re rho_hat(n))
  static constexpr const char* caveat = "extremes over the truncated mode range 1..n_max";
};

/// Two-site spectrum of the generalized Kac walk by angular Fourier modes.
FourierGap two_site_fourier_gap(const RhoSpec& rho, int n_max);

}  // namespace gaplab
