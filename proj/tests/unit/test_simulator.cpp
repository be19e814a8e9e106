#include <cmath>
#include <map>
#include <memory>
#include <sstream>
#include <vector>

#include "doctest.h"

#include "gaplab/error.hpp"
#include "gaplab/expression.hpp"
#include "gaplab/generator.hpp"
#include "gaplab/parallel.hpp"
#include "gaplab/simulator.hpp"
#include "gaplab/states.hpp"

using namespace gaplab;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidArgument;
}

double square_sum(const Configuration& c) {
  double s = 0.0;
  for (double v : c.real) s += v * v;
  return s;
}

}  // namespace

TEST_CASE("expression parser") {
  CHECK(parse_expression("1 + 2 * 3")(0.0) == doctest::Approx(7.0));
  CHECK(parse_expression("2^3^2")(0.0) == doctest::Approx(512.0));
  CHECK(parse_expression("-x^2")(3.0) == doctest::Approx(-9.0));
  CHECK(parse_expression("(1 + cos(theta)) / (2*pi)")(0.0) == doctest::Approx(1.0 / std::acos(-1.0)));
  CHECK(parse_expression("sqrt(abs(t)) + exp(0) + log(e)")(-4.0) == doctest::Approx(4.0));
  CHECK(parse_expression("1 + x*x")(2.0) == doctest::Approx(5.0));
  CHECK(kind_of([] { parse_expression("1 +"); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { parse_expression("foo(x)"); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { parse_expression("(x"); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("seed derivation and parallel loop") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(9, 4) == derive_seed(9, 4));
  std::vector<int> hit(100, 0);
  parallel_for(100, [&](std::int64_t i) { hit[static_cast<std::size_t>(i)] += 1; });
  for (int h : hit) CHECK(h == 1);
  CHECK_THROWS(parallel_for(10, [](std::int64_t i) {
    if (i == 3) throw Error(ErrorKind::NumericError, "boom");
  }));
  CHECK(thread_budget() >= 1);
}

TEST_CASE("conservation") {
  const auto graph = build_graph(GraphKind::Complete, 1, 4);
  for (const auto& m : {ModelSpec::kac(), ModelSpec::gamma_exchange(GammaExchangeSpec::simple_average(0.7)),
                        ModelSpec::simple_average_gamma(2.0)}) {
    Simulator sim(m, graph, default_initial(m, 4, 1.0), 42);
    for (int i = 0; i < 1000000; ++i) sim.step();
    CHECK(sim.conservation_error() < 1e-8);
    CHECK(sim.max_drift() < 1e-8);
  }
  const auto zr = ModelSpec::zero_range(RateFunction::identity());
  Simulator sim(zr, build_graph(GraphKind::Lattice, 2, 3), default_initial(zr, 9, 7.0), 3);
  for (int i = 0; i < 100000; ++i) sim.step();
  CHECK(sim.conservation_error() == 0.0);
}

TEST_CASE("collision maps conserve the pair total") {
  const auto m = ModelSpec::gamma_exchange(GammaExchangeSpec::simple_average(1.0));
  const auto graph = build_graph(GraphKind::Complete, 1, 2);
  Simulator sim(m, graph, default_initial(m, 2, 1.0), 5);
  std::mt19937_64 rng(11);
  Configuration c{{0.3, 1.1}, {}};
  for (int i = 0; i < 1000; ++i) {
    sim.collide(0, 1, c, rng);
    CHECK(c.real[0] + c.real[1] == doctest::Approx(1.4).epsilon(1e-14));
    CHECK(c.real[0] >= 0.0);
  }
}

TEST_CASE("reproducibility") {
  const auto m = ModelSpec::gamma_exchange(GammaExchangeSpec::simple_average(1.0));
  const auto graph = build_graph(GraphKind::Lattice, 1, 5);
  SimulateOptions o;
  o.horizon = 200.0;
  o.seed = 77;
  const auto a = simulate(m, graph, default_initial(m, 5, 1.0), {square_sum}, o);
  const auto b = simulate(m, graph, default_initial(m, 5, 1.0), {square_sum}, o);
  CHECK(a.events == b.events);
  CHECK(a.samples.values == b.samples.values);
  o.seed = 78;
  const auto c = simulate(m, graph, default_initial(m, 5, 1.0), {square_sum}, o);
  CHECK_FALSE(c.samples.values == a.samples.values);
}

TEST_CASE("zero-range occupation converges to the stationary law") {
  const auto m = ModelSpec::zero_range(RateFunction::identity());
  const auto graph = build_graph(GraphKind::Complete, 1, 3);
  const StateSet states(3, 3);
  const auto pi = stationary_weights(RateFunction::identity(), states).weights;
  Simulator sim(m, graph, default_initial(m, 3, 3.0), 2024);
  sim.advance_to(20.0);
  Eigen::VectorXd occupation = Eigen::VectorXd::Zero(states.size());
  // time-weighted occupation over [20, 20 + 1e4]
  double t = sim.state().time;
  const double end = t + 1e4;
  while (true) {
    const auto index = states.index_of(sim.state().config.count);
    const double before = sim.state().time;
    sim.step();
    const double after = std::min(sim.state().time, end);
    occupation(index) += after - before;
    if (sim.state().time >= end) break;
  }
  occupation /= occupation.sum();
  const double tv = 0.5 * (occupation - pi).cwiseAbs().sum();
  CHECK(tv < 0.01);
}

TEST_CASE("detailed balance of empirical fluxes") {
  const auto m = ModelSpec::simple_average(RateFunction::constant_one());
  const auto graph = build_graph(GraphKind::Complete, 1, 3);
  const StateSet states(3, 2);
  Simulator sim(m, graph, default_initial(m, 3, 2.0), 99);
  std::map<std::pair<std::int64_t, std::int64_t>, double> flux;
  auto current = states.index_of(sim.state().config.count);
  for (int i = 0; i < 400000; ++i) {
    sim.step();
    const auto next = states.index_of(sim.state().config.count);
    if (next != current) flux[{current, next}] += 1.0;
    current = next;
  }
  for (const auto& [key, n] : flux) {
    const double back = flux[{key.second, key.first}];
    const double se = std::sqrt(n + back);
    CHECK(std::abs(n - back) < 3.0 * se + 1.0);
  }
}

TEST_CASE("Kac two-site Fourier decay") {
  // on two sites E[cos(angle_t)] decays at rate (1/2)(1 - Re rho_hat(2)) for the doubled angle
  const auto m = ModelSpec::kac();
  const auto graph = build_graph(GraphKind::Complete, 1, 2);
  Observable angle = [](const Configuration& c) { return c.real[0] * c.real[0] - c.real[1] * c.real[1]; };
  EstimatorOptions o;
  o.horizon = 4e3;
  o.seed = 5;
  const auto r = autocorr_gap_estimate(m, graph, angle, o);
  CHECK(r.covers(0.5));
}

TEST_CASE("autocorrelation estimates") {
  SUBCASE("zero-range first coordinate") {
    const auto m = ModelSpec::zero_range(RateFunction::identity());
    const auto graph = build_graph(GraphKind::Complete, 1, 3);
    const StateSet states(3, 4);
    const double gap = spectral_gap(build_generator(m, graph, states));
    Observable first = [](const Configuration& c) { return static_cast<double>(c.count[0]); };
    int covered = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      EstimatorOptions o;
      o.horizon = 4e3;
      o.omega = 4.0;
      o.seed = seed;
      const auto r = autocorr_gap_estimate(m, graph, first, o);
      CHECK(r.ess > 100.0);
      covered += r.covers(gap) ? 1 : 0;
    }
    CHECK(covered >= 8);
  }
  SUBCASE("gamma exchange square sum") {
    const auto m = ModelSpec::gamma_exchange(GammaExchangeSpec::simple_average(1.0));
    const auto graph = build_graph(GraphKind::Complete, 1, 3);
    // a 95% interval: require coverage in at least 8 of 10 independent seeds
    int covered = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      EstimatorOptions o;
      o.horizon = 1e4;
      o.seed = seed;
      covered += autocorr_gap_estimate(m, graph, square_sum, o).covers(4.0 / 9.0) ? 1 : 0;
    }
    CHECK(covered >= 8);
  }
  SUBCASE("constant observable has no decay") {
    const auto m = ModelSpec::kac();
    const auto graph = build_graph(GraphKind::Complete, 1, 3);
    EstimatorOptions o;
    o.horizon = 200.0;
    CHECK(kind_of([&] { autocorr_gap_estimate(m, graph, [](const Configuration&) { return 1.0; }, o); }) ==
          ErrorKind::DegenerateObservable);
  }
}

TEST_CASE("Rayleigh quotients") {
  const auto graph = build_graph(GraphKind::Complete, 1, 3);
  EstimatorOptions o;
  o.horizon = 2e3;
  o.seed = 12;
  SUBCASE("first coordinate on the Kac sphere") {
    Observable first = [](const Configuration& c) { return c.real[0]; };
    const auto r = rayleigh_upper_bound(ModelSpec::kac(), graph, first, o);
    CHECK(r.ci_hi >= 5.0 / 12.0);
  }
  SUBCASE("square sum for gamma exchange") {
    const auto r =
        rayleigh_upper_bound(ModelSpec::gamma_exchange(GammaExchangeSpec::simple_average(1.0)), graph, square_sum, o);
    CHECK(r.covers(4.0 / 9.0));
    CHECK(r.ci_hi - r.ci_lo < 0.1);
  }
  SUBCASE("constant observable") {
    CHECK(kind_of([&] {
            rayleigh_upper_bound(ModelSpec::kac(), graph, [](const Configuration&) { return 3.0; }, o);
          }) == ErrorKind::DegenerateObservable);
  }
  SUBCASE("exact for discrete models") {
    const auto m = ModelSpec::zero_range(RateFunction::identity());
    const StateSet states(3, 3);
    const auto gen = build_generator(m, graph, states);
    const auto gap = spectral_analysis(gen);
    auto st = std::make_shared<StateSet>(3, 3);
    const Eigen::VectorXd mode = gap.eigenvector;
    Observable f = [st, mode](const Configuration& c) { return mode(st->index_of(c.count)); };
    o.omega = 3.0;
    const auto r = rayleigh_upper_bound(m, graph, f, o);
    CHECK(r.covers(gap.gap));
  }
}

TEST_CASE("sample file round trip") {
  SampleStream s;
  s.times = {0.0, 0.5, 1.0};
  s.values.resize(3, 2);
  s.values << 1.0, -2.0, 3.5, 1e-300, -0.0, 7.25;
  std::stringstream buffer;
  write_samples(buffer, R"({"columns":2,"model":"kac"})", s);
  std::string header;
  const auto back = read_samples(buffer, &header);
  CHECK(header.find("\"model\":\"kac\"") != std::string::npos);
  CHECK(back.times == s.times);
  CHECK(back.values == s.values);

  std::stringstream no_columns;
  no_columns << R"({"model":"kac"})" << '\n';
  CHECK_THROWS_AS(read_samples(no_columns), Error);
}

TEST_CASE("invalid rates abort the run") {
  auto spec = GammaExchangeSpec::simple_average(1.0);
  spec.lambda_s = [](double s) { return s > 0.9 ? std::nan("") : 1.0; };
  const auto m = ModelSpec::gamma_exchange(spec);
  const auto graph = build_graph(GraphKind::Complete, 1, 3);
  Configuration start{{0.95, 0.03, 0.02}, {}};
  CHECK_THROWS_AS(Simulator(m, graph, start, 1).advance_to(10.0), Error);
}
