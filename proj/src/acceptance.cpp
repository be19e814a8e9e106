#include "gaplab/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>

#include "gaplab/audit.hpp"
#include "gaplab/bounds.hpp"
#include "gaplab/galerkin.hpp"
#include "gaplab/generator.hpp"
#include "gaplab/simulator.hpp"
#include "gaplab/two_site.hpp"

namespace gaplab {

namespace {

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

double kac_exact(int N) { return (N + 2.0) / (4.0 * N); }
double gamma_exact(double g, int N) { return (g * N + 1.0) / (N * (2.0 * g + 1.0)); }

CriterionResult kac_exact_gap() {
  CriterionResult r{1, "kac-exact-gap", true, "", 0.0};
  double worst = 0.0;
  for (int N = 3; N <= 6; ++N) {
    const auto pair = assemble_galerkin(ModelSpec::kac(), build_graph(GraphKind::Complete, 1, N), 1.0, 4);
    worst = std::max(worst, std::abs(galerkin_gap(pair).gap - kac_exact(N)));
  }
  r.passed = worst < 1e-8;
  r.detail = "max |gap - (N+2)/(4N)| over N=3..6 = " + fmt("%.2e", worst);
  return r;
}

CriterionResult caputo_identity() {
  CriterionResult r{2, "caputo-identity", true, "", 0.0};
  int bad = 0;
  for (int N = 2; N <= 64; ++N)
    if (!(caputo_bound(Rational(5, 12), N) == Rational(N + 2, 4 * N))) ++bad;
  r.passed = bad == 0;
  r.detail = std::to_string(63 - bad) + "/63 exact rational matches for N=2..64";
  return r;
}

CriterionResult gamma_exact_gap() {
  CriterionResult r{3, "gamma-exact-gap", true, "", 0.0};
  double worst = 0.0;
  double identity = 0.0;
  for (double g : {0.5, 1.0, 2.0}) {
    for (int N = 3; N <= 5; ++N) {
      const auto pair = assemble_galerkin(ModelSpec::simple_average_gamma(g), build_graph(GraphKind::Complete, 1, N), 1.0, 4);
      worst = std::max(worst, std::abs(galerkin_gap(pair).gap - gamma_exact(g, N)));
    }
    identity = std::max(identity, quadratic_eigen_identity(g).residual);
  }
  r.passed = worst < 1e-8 && identity < 1e-12;
  r.detail = "max gap error " + fmt("%.2e", worst) + ", eigen-identity residual " + fmt("%.2e", identity);
  return r;
}

CriterionResult k_operator_spectrum() {
  CriterionResult r{4, "k-operator-spectrum", true, "", 0.0};
  double worst = 0.0;
  double mu = 0.0;
  for (double g : {0.5, 1.0, 2.0, 5.0}) {
    const auto k = k_operator_check(g, 6);
    worst = std::max(worst, k.max_residual);
    mu = std::max({mu, std::abs(k.mu1 + 0.5), std::abs(k.mu2 - (1.0 + g) / (2.0 * (1.0 + 2.0 * g)))});
  }
  r.passed = worst < 1e-9 && mu < 1e-9;
  r.detail = "max eigenvalue error " + fmt("%.2e", worst) + ", mu1/mu2 error " + fmt("%.2e", mu);
  return r;
}

CriterionResult zero_range_kernels() {
  CriterionResult r{5, "zero-range-kernels", true, "", 0.0};
  std::ostringstream d;
  bool ok = true;
  for (const auto& [g, target] : {std::pair{RateFunction::constant_one(), 1.0 / 3.0}, std::pair{RateFunction::identity(), 0.25}}) {
    KernelExtremes k;
    try {
      k = kernel_spectrum_extremes(g, 40);
    } catch (const Error& e) {
      ok = false;
      d << g.name() << ": " << e.what() << "; ";
      continue;
    }
    double lowest = INFINITY;
    for (const auto& row : k.table) lowest = std::min(lowest, row.min);
    const bool pass = std::abs(k.mu2 - target) < 1e-4 && std::abs(k.mu1 + 0.5) < 1e-9 && lowest > -1.0;
    ok = ok && pass;
    d << g.name() << ": mu2 " << fmt("%.6f", k.mu2) << ", mu1 " << fmt("%.9f", k.mu1) << "; ";
  }
  r.passed = ok;
  r.detail = d.str();
  if (r.detail.size() >= 2) r.detail.resize(r.detail.size() - 2);
  return r;
}

CriterionResult lattice_comparison() {
  CriterionResult r{6, "lattice-comparison", true, "", 0.0};
  int cells = 0;
  int violations = 0;
  double min_ratio = INFINITY;
  struct Shape {
    int d;
    int N_max;
  };
  for (const auto& g : {RateFunction::constant_one(), RateFunction::identity()}) {
    const auto model = ModelSpec::simple_average(g);
    for (const Shape s : {Shape{1, 6}, Shape{2, 3}}) {
      for (int N = 2; N <= s.N_max; ++N) {
        const auto lattice = build_graph(GraphKind::Lattice, s.d, N);
        const auto complete = build_graph(GraphKind::Complete, 1, lattice.vertex_count);
        for (int omega = 1; omega <= 5; ++omega) {
          const StateSet states(lattice.vertex_count, omega);
          const double local = spectral_gap(build_generator(model, lattice, states));
          const double mean_field = spectral_gap(build_generator(model, complete, states));
          const double bound = theorem_nn_bound(mean_field, s.d, N);
          ++cells;
          if (local < bound * (1.0 - 1e-12)) ++violations;
          min_ratio = std::min(min_ratio, local / bound);
        }
      }
    }
  }
  r.passed = violations == 0;
  r.detail = std::to_string(cells - violations) + "/" + std::to_string(cells) + " cells hold; min exact/bound ratio " +
             fmt("%.2f", min_ratio);
  return r;
}

CriterionResult sandwich_check() {
  CriterionResult r{7, "two-site-sandwich", true, "", 0.0};
  const auto g = RateFunction::identity();
  std::vector<int> omegas;
  for (int w = 0; w <= 8; ++w) omegas.push_back(w);
  const auto table = two_site_spectrum(ModelSpec::zero_range(g), omegas);
  const double lambda2 = table.inf_gap;
  int cells = 0;
  int violations = 0;
  for (auto kind : {GraphKind::Complete, GraphKind::Lattice}) {
    for (int N : {3, 4}) {
      const auto graph = build_graph(kind, 1, N);
      for (int omega = 1; omega <= 8; ++omega) {
        const StateSet states(N, omega);
        const double full = spectral_gap(build_generator(ModelSpec::zero_range(g), graph, states));
        const double avg = spectral_gap(build_generator(ModelSpec::simple_average(g), graph, states));
        const auto iv = sandwich(lambda2, kappa_up_to(table, omega), avg);
        ++cells;
        if (!iv.contains(full, 1e-9)) ++violations;
      }
    }
  }
  r.passed = violations == 0 && std::abs(lambda2 - 1.0) < 1e-9;
  r.detail = "lambda(2) = " + fmt("%.12g", lambda2) + ", " + std::to_string(violations) + " violations in " +
             std::to_string(cells) + " cells";
  return r;
}

CriterionResult uniform_collapse() {
  CriterionResult r{8, "uniform-rho-collapse", true, "", 0.0};
  const auto f = two_site_fourier_gap(RhoSpec::uniform(), 32);
  bool ok = f.lambda2 == 0.5 && f.kappa == 0.5;
  double worst = 0.0;
  for (int N = 3; N <= 6; ++N) {
    const double star =
        galerkin_gap(assemble_galerkin(ModelSpec::kac(), build_graph(GraphKind::Complete, 1, N), 1.0, 4)).gap;
    const auto iv = sandwich(f.lambda2, f.kappa, star);
    worst = std::max({worst, std::abs(iv.lo - kac_exact(N)), std::abs(iv.hi - kac_exact(N))});
  }
  ok = ok && worst < 1e-8;
  r.passed = ok;
  r.detail = "lambda(2) = " + fmt("%.17g", f.lambda2) + ", kappa = " + fmt("%.17g", f.kappa) +
             ", interval error " + fmt("%.2e", worst);
  return r;
}

CriterionResult lemma_audits() {
  CriterionResult r{9, "comparison-audits", true, "", 0.0};
  struct Instance {
    GraphKind kind;
    int d;
    int N;
    int omega;
    bool identity;
  };
  const Instance instances[] = {
      {GraphKind::Complete, 1, 3, 2, false}, {GraphKind::Complete, 1, 4, 3, true},
      {GraphKind::Lattice, 1, 4, 3, false},  {GraphKind::Lattice, 1, 5, 3, true},
      {GraphKind::Lattice, 2, 2, 3, false},  {GraphKind::Lattice, 2, 3, 2, true},
  };
  std::int64_t violations = 0;
  double r3 = 0.0, rx = 0.0, rp = 0.0;
  int passed = 0;
  for (const auto& in : instances) {
    const auto rep = lemma_audit(build_graph(in.kind, in.d, in.N),
                                 in.identity ? RateFunction::identity() : RateFunction::constant_one(), in.omega);
    violations += rep.three_point_violations + rep.exchange_violations + rep.path_violations;
    r3 = std::max(r3, rep.max_three_point_ratio);
    rx = std::max(rx, rep.max_exchange_ratio);
    rp = std::max(rp, rep.max_path_ratio);
    if (rep.passed()) ++passed;
  }
  r.passed = violations == 0 && passed == 6;
  r.detail = std::to_string(passed) + "/6 instances clean; max ratios three-point " + fmt("%.3f", r3) + " (<= 1), exchange " +
             fmt("%.3f", rx) + " (<= 4), path " + fmt("%.3f", rp) + " (<= 96)";
  return r;
}

CriterionResult mc_agreement() {
  CriterionResult r{10, "mc-oracle-agreement", true, "", 0.0};
  struct Discrete {
    Family family;
    bool identity;
    GraphKind kind;
    int d;
    int N;
    int omega;
  };
  const Discrete discrete[] = {
      {Family::ZeroRange, true, GraphKind::Complete, 1, 3, 4},
      {Family::ZeroRange, false, GraphKind::Complete, 1, 3, 4},
      {Family::SimpleAverage, false, GraphKind::Complete, 1, 3, 3},
      {Family::SimpleAverage, true, GraphKind::Complete, 1, 4, 3},
      {Family::ZeroRange, true, GraphKind::Lattice, 1, 4, 3},
      {Family::ZeroRange, false, GraphKind::Lattice, 1, 4, 3},
      {Family::SimpleAverage, false, GraphKind::Lattice, 1, 5, 2},
      {Family::SimpleAverage, true, GraphKind::Lattice, 1, 4, 4},
      {Family::ZeroRange, true, GraphKind::Complete, 1, 4, 5},
      {Family::SimpleAverage, false, GraphKind::Lattice, 2, 2, 3},
  };
  const int reps = 20;
  // shorter horizons bias the log-linear fit and drop per-instance coverage below 18/20
  const double horizon = 2e4;
  std::ostringstream d;
  int total_cover = 0;
  int total_runs = 0;
  int failing = 0;
  auto run = [&](const std::string& label, const ModelSpec& model, const InteractionGraph& graph, const Observable& f,
                 double omega, double exact, int index) {
    int cover = 0;
    for (int k = 0; k < reps; ++k) {
      EstimatorOptions o;
      o.horizon = horizon;
      o.omega = omega;
      o.seed = 7919ULL * static_cast<std::uint64_t>(index + 1) + static_cast<std::uint64_t>(k);
      try {
        if (autocorr_gap_estimate(model, graph, f, o).covers(exact)) ++cover;
      } catch (const Error&) {
        // a failed fit counts as a miss
      }
    }
    total_cover += cover;
    total_runs += reps;
    if (cover * 10 < reps * 9) {
      ++failing;
      d << label << " " << cover << "/" << reps << "; ";
    }
  };
  int index = 0;
  for (const auto& in : discrete) {
    const auto g = in.identity ? RateFunction::identity() : RateFunction::constant_one();
    const auto model = in.family == Family::ZeroRange ? ModelSpec::zero_range(g) : ModelSpec::simple_average(g);
    const auto graph = build_graph(in.kind, in.d, in.N);
    const auto states = std::make_shared<StateSet>(graph.vertex_count, in.omega);
    const auto gap = spectral_analysis(build_generator(model, graph, *states));
    const Eigen::VectorXd mode = gap.eigenvector;
    Observable f = [states, mode](const Configuration& c) { return mode(states->index_of(c.count)); };
    std::string label = std::string(model.id()) + "/" + g.name() + "/" + std::string(to_string(in.kind)) + " d=" +
                        std::to_string(in.d) + " N=" + std::to_string(in.N) + " omega=" + std::to_string(in.omega);
    run(label, model, graph, f, in.omega, gap.gap, index++);
  }
  const auto g3 = build_graph(GraphKind::Complete, 1, 3);
  run("kac N=3", ModelSpec::kac(), g3,
      [](const Configuration& c) {
        double s = 0.0;
        for (double v : c.real) s += v * v * v * v;
        return s;
      },
      1.0, kac_exact(3), index++);
  run("gamma g=1 N=3", ModelSpec::simple_average_gamma(1.0), g3,
      [](const Configuration& c) {
        double s = 0.0;
        for (double v : c.real) s += v * v;
        return s;
      },
      1.0, gamma_exact(1.0, 3), index++);
  r.passed = failing == 0;
  r.detail = "covered " + std::to_string(total_cover) + "/" + std::to_string(total_runs) + " overall (" +
             fmt("%.1f", 100.0 * total_cover / total_runs) + "%); instances below 18/20: " + std::to_string(failing) +
             (failing ? " [" + d.str() + "]" : std::string());
  return r;
}

CriterionResult certificate_chain() {
  CriterionResult r{11, "certificate-chain", true, "", 0.0};
  bool ok = true;
  auto constants = [](const BoundChain& c) {
    std::vector<std::string> v;
    for (const auto& s : c.steps) v.push_back(s.exact);
    return v;
  };
  auto rules_ok = [](const BoundChain& c) {
    return c.steps.size() == 3 && c.steps[0].rule == "caputo-recursion" && c.steps[1].rule == "lattice-comparison" &&
           c.steps[2].rule == "two-site-sandwich" && !c.steps[0].inequality.empty();
  };
  const auto kac = certificate(Rational(5, 12), Rational(1, 2), 1);
  const auto gam = certificate(Rational(4, 9), Rational(1), 1);
  ok = ok && rules_ok(kac) && rules_ok(gam);
  ok = ok && constants(kac) == std::vector<std::string>{"1/4", "1/384", "1/384"};
  ok = ok && constants(gam) == std::vector<std::string>{"1/3", "1/288", "1/144"};
  std::string refusal;
  try {
    certificate(Rational(1, 3), Rational(1, 2), 1);
    ok = false;
  } catch (const Error& e) {
    refusal = e.what();
    ok = ok && e.kind() == ErrorKind::HypothesisFailed && refusal.find("λ*(3) > 1/3") != std::string::npos;
  }
  r.passed = ok;
  r.detail = "kac chain c2 = " + kac.steps[1].exact + ", c3 = " + kac.steps[2].exact + "; gamma chain c2 = " +
             gam.steps[1].exact + ", c3 = " + gam.steps[2].exact + "; refusal: " + refusal;
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& report) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 11; ++id) {
    if (!options.only.empty() && !options.only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      switch (id) {
        case 1: r = kac_exact_gap(); break;
        case 2: r = caputo_identity(); break;
        case 3: r = gamma_exact_gap(); break;
        case 4: r = k_operator_spectrum(); break;
        case 5: r = zero_range_kernels(); break;
        case 6: r = lattice_comparison(); break;
        case 7: r = sandwich_check(); break;
        case 8: r = uniform_collapse(); break;
        case 9: r = lemma_audits(); break;
        case 10: r = mc_agreement(); break;
        default: r = certificate_chain(); break;
      }
    } catch (const std::exception& e) {
      r = CriterionResult{id, "criterion-" + std::to_string(id), false, std::string("error: ") + e.what(), 0.0};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    // wall-clock budgets
    const double budget = id == 1 ? 10.0 : id == 5 ? 5.0 : id == 9 ? 60.0 : id == 10 ? 900.0 : INFINITY;
    if (r.seconds > budget) {
      r.passed = false;
      r.detail += "; over time budget " + fmt("%.0f", budget) + " s";
    }
    if (report) report(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "criterion %2d  %-22s %s  (%.2f s)  ", r.id, r.name.c_str(), r.passed ? "PASS" : "FAIL",
                r.seconds);
  return head + r.detail;
}

}  // namespace gaplab
