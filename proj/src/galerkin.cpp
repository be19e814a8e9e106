#include "gaplab/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>

#include <Eigen/Eigenvalues>

#include "gaplab/linalg.hpp"
#include "gaplab/special.hpp"

namespace gaplab {

namespace {

void exponents_of_degree(int N, int degree, Exponents& cur, int pos, std::vector<Exponents>& out) {
  if (pos == N - 1) {
    cur[static_cast<std::size_t>(pos)] = degree;
    out.push_back(cur);
    return;
  }
  // larger leading exponents first gives descending lexicographic order;
  // reversed below so the output is ascending
  for (int v = 0; v <= degree; ++v) {
    cur[static_cast<std::size_t>(pos)] = v;
    exponents_of_degree(N, degree - v, cur, pos + 1, out);
  }
}

void partitions(int remaining, int max_part, int slots, Exponents& cur, std::vector<Exponents>& out) {
  if (remaining == 0) {
    out.push_back(cur);
    return;
  }
  if (slots == 0) return;
  const int idx = static_cast<int>(cur.size()) - slots;
  for (int v = std::min(remaining, max_part); v >= 1; --v) {
    cur[static_cast<std::size_t>(idx)] = v;
    partitions(remaining - v, v, slots - 1, cur, out);
    cur[static_cast<std::size_t>(idx)] = 0;
  }
}

bool gamma_simple_average(const ModelSpec& model) {
  if (model.family == Family::SimpleAverage && model.site.kind == SiteKind::GammaHalfLine) return true;
  if (model.family != Family::GammaExchange || !model.exchange || !model.exchange->is_simple_average()) return false;
  const auto& ex = *model.exchange;
  for (double x : {0.1, 0.5, 1.0, 3.0})
    if (ex.lambda_s(x) != 1.0) return false;
  for (double b : {0.1, 0.5, 0.9})
    if (ex.lambda_r(b) != 1.0) return false;
  return true;
}

}  // namespace

MultiIndexBasis make_basis(int N, int max_degree, BasisMode mode, bool even_only) {
  if (N < 1 || max_degree < 0) throw Error(ErrorKind::InvalidArgument, "basis needs N >= 1 and degree >= 0");
  MultiIndexBasis basis;
  basis.N = N;
  basis.max_degree = max_degree;
  basis.mode = mode;
  basis.even_only = even_only;
  for (int t = 0; t <= max_degree; ++t) {
    if (even_only && t % 2 != 0) continue;
    std::vector<Exponents> labels;
    if (mode == BasisMode::Full) {
      Exponents cur(static_cast<std::size_t>(N), 0);
      exponents_of_degree(N, t, cur, 0, labels);
      for (const auto& e : labels) {
        basis.labels.push_back(e);
        basis.functions.push_back(Polynomial<double>::monomial(e));
      }
    } else {
      Exponents cur(static_cast<std::size_t>(N), 0);
      partitions(t, t, N, cur, labels);
      for (const auto& e : labels) {
        Exponents perm = e;
        std::sort(perm.begin(), perm.end());
        Polynomial<double> orbit(N);
        do {
          orbit.add_term(perm, 1.0);
        } while (std::next_permutation(perm.begin(), perm.end()));
        basis.labels.push_back(e);
        basis.functions.push_back(std::move(orbit));
      }
    }
  }
  return basis;
}

Polynomial<double> pair_average_action(const ModelSpec& model, int a, int b) {
  if (a < 0 || b < 0) throw Error(ErrorKind::InvalidArgument, "negative exponent");
  Polynomial<double> out(2);
  if (model.family == Family::KacUniform || (model.family == Family::KacRho && model.rho && model.rho->is_uniform())) {
    const double t = trig_moment<double>(a, b);
    if (t == 0.0) return out;
    const int m = (a + b) / 2;
    for (int k = 0; k <= m; ++k) out.add_term({2 * k, 2 * (m - k)}, t * binomial<double>(m, k));
    return out;
  }
  if (model.family == Family::KacRho) return rho_pair_action(*model.rho, a, b);
  if (gamma_simple_average(model)) {
    const double c = beta_moment<double>(a, b, model.gamma_shape());
    const int n = a + b;
    for (int k = 0; k <= n; ++k) out.add_term({k, n - k}, c * binomial<double>(n, k));
    return out;
  }
  throw Error(ErrorKind::InvalidArgument,
              "no closed pair average for model '" + std::string(model.id()) + "' (needs kac, kac-rho or the Gamma simple-average kernel)");
}

Polynomial<double> rho_pair_action(const RhoSpec& rho, int a, int b) {
  if (a < 0 || b < 0) throw Error(ErrorKind::InvalidArgument, "negative exponent");
  Polynomial<double> out(2);
  for (int u = 0; u <= a; ++u) {
    for (int v = 0; v <= b; ++v) {
      const int p = (a - u) + v;  // cos power
      const int q = u + (b - v);  // sin power
      if (q % 2 != 0) continue;   // odd in theta: vanishes under symmetrization
      const double coef = binomial<double>(a, u) * binomial<double>(b, v) * ((u % 2 == 0) ? 1.0 : -1.0);
      const double m = rho_trig_moment(rho, p, q);
      if (m == 0.0) continue;
      out.add_term({(a - u) + (b - v), u + v}, coef * m);
    }
  }
  return out.prune(1e-15);
}

Polynomial<double> apply_generator(const ModelSpec& model, const InteractionGraph& graph, const Polynomial<double>& f) {
  if (f.variables() != graph.vertex_count) throw Error(ErrorKind::ShapeError, "polynomial arity differs from the graph");
  std::map<std::pair<int, int>, Polynomial<double>> actions;
  auto action = [&](int a, int b) -> const Polynomial<double>& {
    auto it = actions.find({a, b});
    if (it == actions.end()) it = actions.emplace(std::make_pair(a, b), pair_average_action(model, a, b)).first;
    return it->second;
  };
  Polynomial<double> out(f.variables());
  for (const auto& [e, c] : f.terms()) {
    for (const auto& [x, y] : graph.edges) {
      const auto& avg = action(e[static_cast<std::size_t>(x)], e[static_cast<std::size_t>(y)]);
      Exponents img = e;
      for (const auto& [pq, w] : avg.terms()) {
        img[static_cast<std::size_t>(x)] = pq[0];
        img[static_cast<std::size_t>(y)] = pq[1];
        out.add_term(img, graph.pair_scaling * c * w);
      }
      out.add_term(e, -graph.pair_scaling * c);
    }
  }
  return out.prune(0.0);
}

MomentOracle model_moments(const ModelSpec& model, int N, double omega) {
  if (!(omega > 0.0)) throw Error(ErrorKind::DomainError, "polynomial sectors need a positive total");
  if (model.family == Family::KacUniform || model.family == Family::KacRho) return MomentOracle::sphere(N, omega);
  if (model.site.kind == SiteKind::GammaHalfLine) return MomentOracle::simplex(N, model.gamma_shape(), omega);
  throw Error(ErrorKind::InvalidArgument, "model '" + std::string(model.id()) + "' has no polynomial moment oracle");
}

GalerkinPair assemble_galerkin(const ModelSpec& model, const InteractionGraph& graph, double omega, int degree,
                               BasisMode mode, bool even_only) {
  if (degree < 2) throw Error(ErrorKind::InvalidArgument, "sector degree must be at least 2");
  if (mode == BasisMode::Symmetric && graph.kind != GraphKind::Complete)
    throw Error(ErrorKind::InvalidArgument, "symmetric orbits are invariant only on the complete graph");
  const int N = graph.vertex_count;
  const auto nu = model_moments(model, N, omega);

  GalerkinPair pair;
  pair.basis = make_basis(N, degree, mode, even_only);
  const auto n = static_cast<Eigen::Index>(pair.basis.size());
  pair.A.resize(n, n);
  pair.B.resize(n, n);

  std::vector<Polynomial<double>> images;
  images.reserve(pair.basis.size());
  for (const auto& phi : pair.basis.functions) {
    auto img = apply_generator(model, graph, phi);
    for (const auto& [e, c] : img.terms())
      if (total_degree(e) > degree) pair.out_of_sector = std::max(pair.out_of_sector, std::abs(c));
    images.push_back(std::move(img));
  }
  pair.constant_residual = apply_generator(model, graph, Polynomial<double>::constant(N, 1.0)).max_abs_coefficient();

  Exponents sum(static_cast<std::size_t>(N));
  auto pairing = [&](const Polynomial<double>& p, const Polynomial<double>& q) {
    double total = 0.0;
    for (const auto& [ep, cp] : p.terms())
      for (const auto& [eq, cq] : q.terms()) {
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] = ep[k] + eq[k];
        total += cp * cq * nu(sum);
      }
    return total;
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& phi = pair.basis.functions[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < n; ++j) {
      pair.A(i, j) = -pairing(phi, images[static_cast<std::size_t>(j)]);
      if (j >= i) {
        pair.B(i, j) = pairing(phi, pair.basis.functions[static_cast<std::size_t>(j)]);
        pair.B(j, i) = pair.B(i, j);
      }
    }
  }
  pair.asymmetry = (pair.A - pair.A.transpose()).cwiseAbs().maxCoeff();
  return pair;
}

GalerkinResult galerkin_gap(const GalerkinPair& pair, double zero_threshold, double deflation) {
  const auto eig = deflated_generalized_eigen(pair.A, pair.B, deflation);
  GalerkinResult out;
  out.deflated_dimension = eig.deflated_dimension;
  out.gram_condition = eig.condition;
  out.spectrum = eig.values;
  out.gap = INFINITY;
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    if (eig.values(k) > zero_threshold) {
      out.gap = eig.values(k);
      out.eigenfunction = eig.vectors.col(k);
      break;
    }
  }
  if (eig.values.size() > 0 && eig.values(0) < -1e-7)
    throw Error(ErrorKind::NotNegativeSemidefinite, "sector Dirichlet form has a negative direction");
  return out;
}

KOperatorCheck k_operator_check(double gamma, int degree) {
  if (degree < 1) throw Error(ErrorKind::InvalidArgument, "degree must be at least 1");
  if (!(gamma > 0.0)) throw Error(ErrorKind::DomainError, "gamma must be positive");
  const int n = degree + 1;
  KOperatorCheck out;
  out.gamma = gamma;
  out.degree = degree;

  // Given eta_1, eta_2 = (1 - eta_1) beta with beta ~ Beta(g, g), so
  // K eta^m = E[beta^m] (1 - eta)^m. Column m holds its monomial coefficients.
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  for (int m = 0; m < n; ++m) {
    const double em = beta_moment<double>(m, 0, gamma);
    for (int k = 0; k <= m; ++k) K(k, m) = em * binomial<double>(m, k) * ((k % 2 == 0) ? 1.0 : -1.0);
  }

  Eigen::EigenSolver<Eigen::MatrixXd> es(K, false);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::NumericError, "K eigen solve failed");
  Eigen::VectorXd computed = es.eigenvalues().real();
  out.closed_form.resize(n);
  for (int k = 0; k < n; ++k) out.closed_form(k) = k_operator_eigenvalue(k, gamma);

  // pair eigenvalues with the closed form by rank (all mu_n are distinct)
  std::vector<int> rank_closed(static_cast<std::size_t>(n));
  std::iota(rank_closed.begin(), rank_closed.end(), 0);
  std::sort(rank_closed.begin(), rank_closed.end(),
            [&](int a, int b) { return out.closed_form(a) < out.closed_form(b); });
  std::sort(computed.data(), computed.data() + n);
  out.computed.resize(n);
  for (int r = 0; r < n; ++r) out.computed(rank_closed[static_cast<std::size_t>(r)]) = computed(r);
  out.max_residual = (out.computed - out.closed_form).cwiseAbs().maxCoeff();

  out.mu1 = INFINITY;
  out.mu2 = -INFINITY;
  for (int k = 1; k < n; ++k) {
    out.mu1 = std::min(out.mu1, out.computed(k));
    out.mu2 = std::max(out.mu2, out.computed(k));
  }
  out.three_site_bound = std::min(2.0 + out.mu1, 2.0 - 2.0 * out.mu2) / 3.0;

  Eigen::VectorXd phi = Eigen::VectorXd::Zero(n);
  phi(0) = -1.0 / 3.0;
  phi(1) = 1.0;
  out.eigenfunction_residual = (K * phi + 0.5 * phi).cwiseAbs().maxCoeff();

  // Gram route on L^2 of the eta_1 marginal: nu(eta^i K eta^j) must be symmetric.
  std::vector<double> marginal(static_cast<std::size_t>(2 * n));
  for (int a = 0; a < 2 * n; ++a) {
    const int e[3] = {a, 0, 0};
    marginal[static_cast<std::size_t>(a)] = simplex_moment<double>(e, 3, gamma, 1.0);
  }
  Eigen::MatrixXd gram(n, n);
  Eigen::MatrixXd form(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      gram(i, j) = marginal[static_cast<std::size_t>(i + j)];
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += K(k, j) * marginal[static_cast<std::size_t>(i + k)];
      form(i, j) = s;
    }
  out.self_adjoint_residual = (form - form.transpose()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gs(gram, Eigen::EigenvaluesOnly);
  out.gram_condition = gs.eigenvalues().maxCoeff() / gs.eigenvalues().minCoeff();
  if (!(gs.eigenvalues().minCoeff() > 0.0) || !std::isfinite(out.gram_condition))
    throw Error(ErrorKind::NumericError, "marginal Gram matrix is singular (condition " + std::to_string(out.gram_condition) + ")");
  return out;
}

QuadraticIdentity quadratic_eigen_identity(double gamma) {
  QuadraticIdentity out;
  out.gamma = gamma;
  out.lambda = (1.0 + 3.0 * gamma) / (3.0 * (1.0 + 2.0 * gamma));
  const auto model = ModelSpec::simple_average_gamma(gamma);
  const auto graph = build_graph(GraphKind::Complete, 1, 3);
  Polynomial<double> f(3);
  f.add_term({2, 0, 0}, 1.0);
  f.add_term({0, 2, 0}, 1.0);
  f.add_term({0, 0, 2}, 1.0);
  auto residual = apply_generator(model, graph, f) + out.lambda * f;
  // restrict to the simplex eta_3 = 1 - eta_1 - eta_2
  Polynomial<double> eta3(3);
  eta3.add_term({0, 0, 0}, 1.0);
  eta3.add_term({1, 0, 0}, -1.0);
  eta3.add_term({0, 1, 0}, -1.0);
  auto on_simplex = residual.substitute(2, eta3);
  double worst = 0.0;
  for (const auto& [e, c] : on_simplex.terms())
    if (total_degree(e) > 0) worst = std::max(worst, std::abs(c));
  out.residual = worst;

  // nu[eta_1^2 | eta_2] = c (eta_2 - 1)^2  <=>  nu(eta_1^2 eta_2^m) = c nu((eta_2 - 1)^2 eta_2^m) for all m
  const double c = (1.0 + gamma) / (2.0 * (1.0 + 2.0 * gamma));
  const auto nu = MomentOracle::simplex(3, gamma, 1.0);
  for (int m = 0; m <= 6; ++m) {
    const double lhs = nu({2, m, 0});
    const double rhs = c * (nu({0, m + 2, 0}) - 2.0 * nu({0, m + 1, 0}) + nu({0, m, 0}));
    out.conditional_residual = std::max(out.conditional_residual, std::abs(lhs - rhs));
  }
  return out;
}

FourierGap two_site_fourier_gap(const RhoSpec& rho, int n_max) {
  if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "need at least one Fourier mode");
  FourierGap out;
  out.n_max = n_max;
  out.lambda2 = INFINITY;
  out.kappa = -INFINITY;
  for (int n = 1; n <= n_max; ++n) {
    const double v = 0.5 * (1.0 - rho.coefficient(n).real());
    out.modes.push_back(v);
    out.lambda2 = std::min(out.lambda2, v);
    out.kappa = std::max(out.kappa, v);
  }
  if (out.kappa > 1.0 + 1e-12)
    throw Error(ErrorKind::InvalidArgument, "two-site spectrum exceeds 1; rho is not a probability density");
  return out;
}

}  // namespace gaplab
