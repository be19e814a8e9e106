#include "gaplab/audit.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Sparse>

#include "gaplab/error.hpp"
#include "gaplab/linalg.hpp"
#include "gaplab/parallel.hpp"
#include "gaplab/paths.hpp"
#include "gaplab/states.hpp"

namespace gaplab {

namespace {

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct Context {
  const InteractionGraph& graph;
  StateSet states;
  Eigen::VectorXd w;
  int V;
  // indexed by x * V + y, x != y
  std::vector<SpMat> D;                       // E_xy - Id
  std::vector<std::vector<std::int64_t>> P;   // pi_xy as an index map
  std::vector<std::vector<int>> paths;        // lattice canonical paths

  Context(const InteractionGraph& g, const RateFunction& rate, int omega)
      : graph(g), states(g.vertex_count, omega), w(stationary_weights(rate, states).weights), V(g.vertex_count) {
    const auto laws = pair_conditional_laws(rate, omega);
    const auto n = static_cast<Eigen::Index>(states.size());
    D.resize(static_cast<std::size_t>(V * V));
    P.resize(static_cast<std::size_t>(V * V));
    std::vector<int> cfg(static_cast<std::size_t>(V));
    for (int x = 0; x < V; ++x) {
      for (int y = 0; y < V; ++y) {
        if (x == y) continue;
        std::vector<Eigen::Triplet<double>> trip;
        auto& perm = P[static_cast<std::size_t>(x * V + y)];
        perm.resize(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) {
          const auto s = states[i];
          std::copy(s.begin(), s.end(), cfg.begin());
          const int total = s[static_cast<std::size_t>(x)] + s[static_cast<std::size_t>(y)];
          for (int k = 0; k <= total; ++k) {
            cfg[static_cast<std::size_t>(x)] = k;
            cfg[static_cast<std::size_t>(y)] = total - k;
            trip.emplace_back(i, states.index_of(cfg), laws[static_cast<std::size_t>(total)][static_cast<std::size_t>(k)]);
          }
          trip.emplace_back(i, i, -1.0);
          perm[static_cast<std::size_t>(i)] = states.index_of(apply_exchange(s, x, y));
        }
        SpMat m(n, n);
        m.setFromTriplets(trip.begin(), trip.end());
        D[static_cast<std::size_t>(x * V + y)] = std::move(m);
      }
    }
    if (graph.kind == GraphKind::Lattice) {
      paths.resize(static_cast<std::size_t>(V * V));
      for (int x = 0; x < V; ++x)
        for (int y = 0; y < V; ++y)
          if (x != y) paths[static_cast<std::size_t>(x * V + y)] = canonical_vertex_path(graph, x, y);
    }
  }

  const SpMat& d(int x, int y) const { return D[static_cast<std::size_t>(x * V + y)]; }
  const std::vector<std::int64_t>& p(int x, int y) const { return P[static_cast<std::size_t>(x * V + y)]; }

  Eigen::MatrixXd exchange_dense(int x, int y) const {
    const auto n = w.size();
    Eigen::MatrixXd m = -Eigen::MatrixXd::Identity(n, n);
    const auto& perm = p(x, y);
    for (Eigen::Index i = 0; i < n; ++i) m(i, perm[static_cast<std::size_t>(i)]) += 1.0;
    return m;
  }
  Eigen::MatrixXd form(const Eigen::MatrixXd& op) const { return op.transpose() * w.asDiagonal() * op; }
};

struct DrawResult {
  std::int64_t triple = 0, pair = 0, path = 0;
  std::int64_t v3 = 0, vx = 0, vp = 0;
  double r3 = 0.0, rx = 0.0, rp = 0.0;
  std::string rule;
};

DrawResult check_function(const Context& c, const Eigen::VectorXd& f, double tol) {
  const int V = c.V;
  std::vector<double> dsq(static_cast<std::size_t>(V * V), 0.0);
  std::vector<double> psq(static_cast<std::size_t>(V * V), 0.0);
  for (int x = 0; x < V; ++x)
    for (int y = 0; y < V; ++y) {
      if (x == y) continue;
      const Eigen::VectorXd df = c.d(x, y) * f;
      dsq[static_cast<std::size_t>(x * V + y)] = c.w.dot(df.cwiseAbs2());
      const auto& perm = c.p(x, y);
      double acc = 0.0;
      for (Eigen::Index i = 0; i < f.size(); ++i) {
        const double diff = f(perm[static_cast<std::size_t>(i)]) - f(i);
        acc += c.w(i) * diff * diff;
      }
      psq[static_cast<std::size_t>(x * V + y)] = acc;
    }
  auto D2 = [&](int x, int y) { return dsq[static_cast<std::size_t>(x * V + y)]; };
  auto P2 = [&](int x, int y) { return psq[static_cast<std::size_t>(x * V + y)]; };
  // forms below this floor are rounding noise of a (locally) constant f
  const double floor = 1e-24 * std::max(1.0, c.w.dot(f.cwiseAbs2()));
  auto ratio = [floor](double lhs, double rhs) {
    if (lhs <= floor) return 0.0;
    return rhs > floor ? lhs / rhs : INFINITY;
  };
  auto exceeds = [&](double lhs, double rhs) { return lhs > rhs * (1.0 + tol) + 1e-14; };

  DrawResult r;
  for (int x = 0; x < V; ++x)
    for (int y = 0; y < V; ++y)
      for (int z = 0; z < V; ++z) {
        if (y == z) continue;
        ++r.triple;
        const double lhs = D2(x, y);
        const double rhs = 6.0 * P2(x, z) + 3.0 * D2(z, y);
        r.r3 = std::max(r.r3, ratio(lhs, rhs));
        if (exceeds(lhs, rhs)) {
          ++r.v3;
          if (r.rule.empty()) r.rule = "three-point";
        }
      }
  for (int x = 0; x < V; ++x)
    for (int y = 0; y < V; ++y) {
      if (x == y) continue;
      ++r.pair;
      r.rx = std::max(r.rx, ratio(P2(x, y), D2(x, y)));
      if (exceeds(P2(x, y), 4.0 * D2(x, y))) {
        ++r.vx;
        if (r.rule.empty()) r.rule = "exchange";
      }
    }
  if (!c.paths.empty()) {
    for (int x = 0; x < V; ++x)
      for (int y = 0; y < V; ++y) {
        if (x == y) continue;
        const auto& path = c.paths[static_cast<std::size_t>(x * V + y)];
        const double n = static_cast<double>(path.size() - 1);
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) sum += D2(path[i], path[i + 1]);
        ++r.path;
        r.rp = std::max(r.rp, ratio(D2(x, y), n * sum));
        if (exceeds(D2(x, y), 96.0 * n * sum)) {
          ++r.vp;
          if (r.rule.empty()) r.rule = "path";
        }
      }
  }
  return r;
}

double worst_ratio(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  const auto eig = deflated_generalized_eigen(A, B, 1e-10);
  return eig.values.size() > 0 ? eig.values.maxCoeff() : 0.0;
}

AuditReport base_report(const Context& c) {
  AuditReport rep;
  rep.label = std::string(to_string(c.graph.kind)) + " V=" + std::to_string(c.V) + " omega=" +
              std::to_string(c.states.total());
  rep.states = c.states.size();
  return rep;
}

void merge(AuditReport& rep, const DrawResult& r) {
  rep.triple_checks += r.triple;
  rep.pair_checks += r.pair;
  rep.path_checks += r.path;
  rep.three_point_violations += r.v3;
  rep.exchange_violations += r.vx;
  rep.path_violations += r.vp;
  rep.max_three_point_ratio = std::max(rep.max_three_point_ratio, r.r3);
  rep.max_exchange_ratio = std::max(rep.max_exchange_ratio, r.rx);
  rep.max_path_ratio = std::max(rep.max_path_ratio, r.rp);
}

}  // namespace

AuditReport lemma_audit(const InteractionGraph& graph, const RateFunction& g, int omega, const AuditOptions& options) {
  if (options.draws < 0) throw Error(ErrorKind::InvalidArgument, "negative number of draws");
  const Context c(graph, g, omega);
  auto rep = base_report(c);
  rep.draws = options.draws;
  const auto n = static_cast<Eigen::Index>(c.states.size());

  std::vector<Eigen::VectorXd> draws(static_cast<std::size_t>(options.draws));
  std::vector<DrawResult> results(static_cast<std::size_t>(options.draws));
  parallel_for(options.draws, [&](std::int64_t k) {
    std::mt19937_64 rng(derive_seed(options.seed, static_cast<std::uint64_t>(k)));
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd f(n);
    for (Eigen::Index i = 0; i < n; ++i) f(i) = normal(rng);
    f.array() -= c.w.dot(f) / c.w.sum();
    results[static_cast<std::size_t>(k)] = check_function(c, f, options.tolerance);
    draws[static_cast<std::size_t>(k)] = std::move(f);
  });
  for (std::size_t k = 0; k < results.size(); ++k) {
    merge(rep, results[k]);
    if (rep.witness_rule.empty() && !results[k].rule.empty()) {
      rep.witness_rule = results[k].rule;
      rep.witness = draws[k];
    }
  }

  if (options.exhaustive && c.V >= 2 && n > 1) {
    // the product measure is exchangeable, so one representative pair and
    // triple of distinct sites covers every site choice
    const Eigen::MatrixXd D01 = Eigen::MatrixXd(c.d(0, 1));
    rep.exhaustive_exchange = worst_ratio(c.form(c.exchange_dense(0, 1)), c.form(D01));
    if (c.V >= 3) {
      const Eigen::MatrixXd D21 = Eigen::MatrixXd(c.d(2, 1));
      rep.exhaustive_three_point =
          worst_ratio(c.form(D01), 6.0 * c.form(c.exchange_dense(0, 2)) + 3.0 * c.form(D21));
    }
    if (!c.paths.empty()) {
      // longest canonical path: opposite corners
      const int far = c.V - 1;
      const auto& path = c.paths[static_cast<std::size_t>(far)];
      Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
      for (std::size_t i = 0; i + 1 < path.size(); ++i) B += c.form(Eigen::MatrixXd(c.d(path[i], path[i + 1])));
      B *= static_cast<double>(path.size() - 1);
      rep.exhaustive_path = worst_ratio(c.form(Eigen::MatrixXd(c.d(0, far))), B);
    }
  }
  return rep;
}

AuditReport lemma_audit_function(const InteractionGraph& graph, const RateFunction& g, int omega,
                                 const Eigen::VectorXd& f) {
  const Context c(graph, g, omega);
  if (f.size() != static_cast<Eigen::Index>(c.states.size()))
    throw Error(ErrorKind::ShapeError, "function length differs from the state count");
  auto rep = base_report(c);
  rep.draws = 1;
  const auto r = check_function(c, f, 1e-10);
  merge(rep, r);
  if (!r.rule.empty()) {
    rep.witness_rule = r.rule;
    rep.witness = f;
  }
  return rep;
}

}  // namespace gaplab
