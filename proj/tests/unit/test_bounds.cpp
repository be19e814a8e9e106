#include <cmath>
#include <vector>

#include "doctest.h"

#include "gaplab/audit.hpp"
#include "gaplab/bounds.hpp"
#include "gaplab/error.hpp"
#include "gaplab/paths.hpp"
#include "gaplab/rational.hpp"
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

}  // namespace

TEST_CASE("canonical paths") {
  const std::vector<int> x{1, 1}, y{3, 3};
  const auto p = canonical_path(x, y, 2, 3);
  CHECK(p.length == 4);
  const std::vector<std::vector<int>> expected{{1, 1}, {2, 1}, {3, 1}, {3, 2}, {3, 3}};
  CHECK(p.vertices == expected);
  CHECK(canonical_path(x, x, 2, 3).length == 0);
  const std::vector<int> a{5}, b{2};
  const auto q = canonical_path(a, b, 1, 6);
  CHECK(q.length == 3);
  CHECK(q.vertices == std::vector<std::vector<int>>{{5}, {4}, {3}, {2}});
  const std::vector<int> out{4, 1};
  CHECK(kind_of([&] { canonical_path(out, y, 2, 3); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("path census") {
  CHECK(path_census(1, 4).max_length == 3);
  CHECK(path_census(2, 3).max_length == 4);
  const auto c13 = path_census(1, 3);
  // exhaustive enumeration in tests/oracles/derive.py: congestion 4 on every edge
  for (const auto& e : c13.edges) CHECK(e.congestion == 4);
  const auto c24 = path_census(2, 4);
  CHECK(c24.max_length == 6);
  CHECK(c24.max_congestion == 32);
  CHECK(c24.max_weighted == 112);
  CHECK(c24.bound_holds);
  const auto c23 = path_census(2, 3);
  CHECK(c23.max_congestion == 12);
  CHECK(c23.max_weighted == 30);
  for (int d = 1; d <= 3; ++d)
    for (int N = 2; N <= 4; ++N) CHECK(path_census(d, N).bound_holds);
}

TEST_CASE("moving-particle words") {
  const auto g = build_graph(GraphKind::Lattice, 1, 5);
  const std::vector<int> two{1, 2};
  CHECK(moving_particle_decomposition(g, two).size() == 1);

  const std::vector<int> z{0, 1, 2};
  const auto word = moving_particle_decomposition(g, z);
  REQUIRE(word.size() == 3);
  const std::vector<int> config{7, 1, 4, 2, 9};
  auto direct = config;
  std::swap(direct[0], direct[2]);
  CHECK(apply_word(config, word) == direct);

  const std::vector<int> long_path{0, 1, 2, 3, 4};
  CHECK(moving_particle_decomposition(g, long_path).size() == 7);
  auto far = config;
  std::swap(far[0], far[4]);
  CHECK(apply_word(config, moving_particle_decomposition(g, long_path)) == far);

  const std::vector<int> broken{0, 2};
  CHECK(kind_of([&] { moving_particle_decomposition(g, broken); }) == ErrorKind::InvalidPath);
}

TEST_CASE("canonical vertex paths follow lattice edges") {
  const auto g = build_graph(GraphKind::Lattice, 2, 4);
  for (int x = 0; x < g.vertex_count; x += 3)
    for (int y = 0; y < g.vertex_count; y += 5) {
      const auto p = canonical_vertex_path(g, x, y);
      CHECK(p.front() == x);
      CHECK(p.back() == y);
      for (std::size_t i = 0; i + 1 < p.size(); ++i) CHECK(g.adjacent(p[i], p[i + 1]));
    }
}

TEST_CASE("comparison audits") {
  const auto complete = lemma_audit(build_graph(GraphKind::Complete, 1, 3), RateFunction::constant_one(), 2);
  CHECK(complete.passed());
  CHECK(complete.max_exchange_ratio <= 4.0 + 1e-9);
  CHECK(complete.exhaustive_exchange <= 4.0 + 1e-9);

  AuditOptions quick;
  quick.draws = 40;
  for (const auto& g : {build_graph(GraphKind::Lattice, 1, 4), build_graph(GraphKind::Lattice, 2, 2)}) {
    const auto r = lemma_audit(g, RateFunction::identity(), 3, quick);
    CHECK(r.passed());
    CHECK(r.three_point_violations == 0);
    CHECK(r.path_violations == 0);
  }
}

TEST_CASE("audit of a constant function") {
  const auto g = build_graph(GraphKind::Complete, 1, 3);
  const auto n = StateSet(3, 2).size();
  const auto r = lemma_audit_function(g, RateFunction::constant_one(), 2, Eigen::VectorXd::Constant(n, 2.0));
  CHECK(r.passed());
  CHECK(r.max_three_point_ratio == 0.0);
  CHECK(r.max_exchange_ratio == 0.0);
  CHECK(r.max_path_ratio == 0.0);
}

TEST_CASE("recursion bound") {
  CHECK(caputo_bound(Rational(5, 12), 4) == Rational(3, 8));
  CHECK(caputo_bound(Rational(5, 12), 3) == Rational(5, 12));
  for (int N = 2; N <= 30; ++N) CHECK(caputo_bound(Rational(1, 3), N) == Rational(1, N));
  for (int N = 3; N <= 64; ++N) CHECK(caputo_bound(Rational(5, 12), N) == Rational(N + 2, 4 * N));
  CHECK_THROWS_AS(caputo_bound(Rational(1, 2), 1), Error);
}

TEST_CASE("lattice bound arithmetic") {
  CHECK(theorem_nn_bound(0.25, 1, 10) == doctest::Approx(1.0 / 38400.0));
  CHECK(theorem_nn_bound(0.25, 2, 10) == doctest::Approx(1.0 / 76800.0));
  const auto lc = kac_local_constants(1, 10, 0.5);
  CHECK(lc.kac_bound == doctest::Approx(1.0 / 38400.0));
  REQUIRE(lc.lambda2_bound.has_value());
  CHECK(*lc.lambda2_bound == doctest::Approx(1.0 / 38400.0));
}

TEST_CASE("two-site sandwich") {
  for (int N = 3; N <= 6; ++N) {
    const double l = (N + 2.0) / (4.0 * N);
    const auto iv = sandwich(0.5, 0.5, l);
    CHECK(iv.lo == doctest::Approx(l));
    CHECK(iv.hi == doctest::Approx(l));
  }
  const auto vac = sandwich(0.0, 1.0, 0.3);
  CHECK(vac.lo == 0.0);
  CHECK(vac.hi == doctest::Approx(0.6));
  const auto mid = sandwich(0.25, 0.5, 5.0 / 12.0);
  CHECK(mid.lo == doctest::Approx(5.0 / 24.0));
  CHECK(mid.hi == doctest::Approx(5.0 / 12.0));
  CHECK(kind_of([] { sandwich(0.6, 0.5, 0.3); }) == ErrorKind::InconsistentInput);
}

TEST_CASE("certificate chains") {
  const auto kac = certificate(Rational(5, 12), Rational(1, 2), 1);
  REQUIRE(kac.steps.size() == 3);
  CHECK(kac.steps[0].exact == "1/4");
  CHECK(kac.steps[1].exact == "1/384");
  CHECK(kac.steps[2].exact == "1/384");
  CHECK(kac.interval.lo == doctest::Approx(1.0 / 384.0));
  CHECK(std::isinf(kac.interval.hi));

  const auto gamma = certificate(Rational(4, 9), Rational(1), 1);
  CHECK(gamma.steps[0].exact == "1/3");
  CHECK(gamma.steps[1].exact == "1/288");
  CHECK(gamma.steps[2].exact == "1/144");

  const auto approx = certificate(0.444444, 1.0, 1);
  CHECK(approx.steps[2].value == doctest::Approx(1.0 / 144.0).epsilon(1e-5));
  CHECK(approx.steps[2].exact.empty());

  try {
    certificate(Rational(1, 3), Rational(1), 2);
    FAIL("expected a refusal");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::HypothesisFailed);
    CHECK(std::string(e.what()).find("λ*(3) > 1/3") != std::string::npos);
  }
  CHECK(kind_of([] { certificate(Rational(1, 2), Rational(0), 1); }) == ErrorKind::HypothesisFailed);
}

TEST_CASE("first constant is the infimum of the recursion") {
  for (const auto& l3 : {Rational(4, 9), Rational(5, 12), Rational(2, 5), Rational(7, 10), Rational(1)}) {
    const auto chain = certificate(l3, Rational(1), 1);
    Rational lowest = caputo_bound(l3, 3);
    for (int N = 4; N <= 400; ++N) lowest = std::min(lowest, caputo_bound(l3, N));
    const Rational c1 = std::min(l3, Rational(3) * l3 - Rational(1));
    CHECK(chain.steps[0].exact == c1.str());
    CHECK(c1 <= lowest);
  }
}

TEST_CASE("rate scaling tables") {
  const std::vector<double> grid{0.1, 0.5, 1.0, 2.0, 5.0, 10.0};
  const auto flat = lambda_s_scaling([](double) { return 1.0; }, 0.7, grid);
  for (const auto& row : flat.rows) CHECK(row.lambda2 == doctest::Approx(0.7));
  CHECK_FALSE(flat.degenerate);

  const auto linear = lambda_s_scaling([](double s) { return s; }, 1.0, grid);
  CHECK(linear.argmin == doctest::Approx(0.1));
  CHECK(linear.degenerate);
  CHECK_FALSE(linear.warning.empty());

  const auto quad = lambda_s_scaling([](double s) { return 1.0 + s * s; }, 1.0, grid);
  CHECK(quad.argmin == doctest::Approx(0.1));
  CHECK_FALSE(quad.degenerate);

  CHECK(kind_of([&] { lambda_s_scaling([](double s) { return s - 1.0; }, 1.0, grid); }) == ErrorKind::InvalidRate);
}
