#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "gaplab/error.hpp"
#include "gaplab/galerkin.hpp"
#include "gaplab/moments.hpp"
#include "gaplab/rational.hpp"

using namespace gaplab;

namespace {

double kac_exact(int N) { return (N + 2.0) / (4.0 * N); }
double gamma_exact(double g, int N) { return (g * N + 1.0) / (N * (2.0 * g + 1.0)); }

double galerkin(const ModelSpec& m, int N, int degree, BasisMode mode = BasisMode::Full) {
  return galerkin_gap(assemble_galerkin(m, build_graph(GraphKind::Complete, 1, N), 1.0, degree, mode)).gap;
}

}  // namespace

TEST_CASE("sphere moments") {
  const std::vector<int> k200{2, 0, 0};
  CHECK(sphere_moment<Rational>(k200, 3, Rational(1)) == Rational(1, 3));
  const std::vector<int> k4{4};
  CHECK(sphere_moment<Rational>(k4, 3, Rational(1)) == Rational(1, 5));  // 3/(N(N+2)), sampled in the oracle script
  const std::vector<int> k11{1, 1};
  for (int N = 2; N <= 6; ++N) CHECK(sphere_moment<Rational>(k11, N, Rational(3)) == Rational(0));
  // sum of eta_i^2 equals omega
  for (int N = 2; N <= 6; ++N) {
    MomentOracle nu = MomentOracle::sphere(N, 2.5);
    Exponents e(static_cast<std::size_t>(N), 0);
    e[0] = 2;
    CHECK(N * nu(e) == doctest::Approx(2.5));
  }
}

TEST_CASE("simplex moments") {
  const std::vector<int> k1{1, 0, 0};
  const std::vector<int> k2{2, 0, 0};
  CHECK(simplex_moment<Rational>(k1, 3, Rational(1), Rational(1)) == Rational(1, 3));
  CHECK(simplex_moment<Rational>(k2, 3, Rational(1), Rational(1)) == Rational(1, 6));
  CHECK(simplex_moment<Rational>(k2, 3, Rational(1), Rational(2)) == Rational(2, 3));
}

TEST_CASE("trigonometric moments") {
  CHECK(trig_moment<Rational>(2, 0) == Rational(1, 2));
  CHECK(trig_moment<Rational>(2, 2) == Rational(1, 8));
  CHECK(trig_moment<Rational>(1, 0) == Rational(0));
  CHECK(rho_trig_moment(RhoSpec::uniform(), 4, 2) == doctest::Approx(trig_moment<double>(4, 2)));
  CHECK_THROWS_AS(trig_moment<double>(-1, 0), Error);
}

TEST_CASE("pair-average actions") {
  const auto kac = pair_average_action(ModelSpec::kac(), 2, 0);
  CHECK(kac.coefficient({2, 0}) == doctest::Approx(0.5));
  CHECK(kac.coefficient({0, 2}) == doctest::Approx(0.5));
  CHECK(std::abs(kac.coefficient({1, 1})) < 1e-15);

  const auto g1 = ModelSpec::gamma_exchange(GammaExchangeSpec::simple_average(1.0));
  const auto lin = pair_average_action(g1, 1, 0);
  CHECK(lin.coefficient({1, 0}) == doctest::Approx(0.5));
  CHECK(lin.coefficient({0, 1}) == doctest::Approx(0.5));
  const auto sq = pair_average_action(g1, 2, 0);  // (1/3)(u + v)^2
  CHECK(sq.coefficient({2, 0}) == doctest::Approx(1.0 / 3.0));
  CHECK(sq.coefficient({1, 1}) == doctest::Approx(2.0 / 3.0));
  CHECK(sq.coefficient({0, 2}) == doctest::Approx(1.0 / 3.0));

  CHECK_THROWS_AS(pair_average_action(ModelSpec::zero_range(RateFunction::identity()), 1, 0), Error);
}

TEST_CASE("rho pair actions") {
  const auto uniform = RhoSpec::uniform();
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b + a <= 4; ++b) {
      auto diff = rho_pair_action(uniform, a, b) - pair_average_action(ModelSpec::kac(), a, b);
      CHECK(diff.max_abs_coefficient() < 1e-14);
    }

  const auto cosine = RhoSpec::from_density([](double t) { return (1.0 + std::cos(t)) / (2.0 * std::numbers::pi); });
  const auto c20 = rho_pair_action(cosine, 2, 0);
  CHECK(c20.coefficient({2, 0}) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(c20.coefficient({0, 2}) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(std::abs(c20.coefficient({1, 1})) < 1e-10);

  // quadrature oracle in tests/oracles/derive.py
  const auto second = RhoSpec::from_density([](double t) { return (1.0 + 0.5 * std::cos(2 * t)) / (2.0 * std::numbers::pi); });
  const auto s20 = rho_pair_action(second, 2, 0);
  CHECK(s20.coefficient({2, 0}) == doctest::Approx(0.625).epsilon(1e-8));
  CHECK(s20.coefficient({0, 2}) == doctest::Approx(0.375).epsilon(1e-8));
  const auto s11 = rho_pair_action(second, 1, 1);
  CHECK(s11.coefficient({1, 1}) == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(std::abs(s11.coefficient({2, 0})) < 1e-10);
  const auto s40 = rho_pair_action(second, 4, 0);
  CHECK(s40.coefficient({4, 0}) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(s40.coefficient({0, 4}) == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(s40.coefficient({2, 2}) == doctest::Approx(0.75).epsilon(1e-8));

  std::vector<std::complex<double>> short_series{1.0, 0.1};
  CHECK_THROWS_AS(rho_pair_action(RhoSpec::from_fourier(short_series), 4, 0), Error);
}

TEST_CASE("basis construction") {
  const auto full = make_basis(3, 2, BasisMode::Full);
  CHECK(full.size() == 10);  // C(3+2, 2)
  const auto sym = make_basis(3, 4, BasisMode::Symmetric);
  // partitions of 0..4 into at most 3 parts: 1 + 1 + 2 + 3 + 4
  CHECK(sym.size() == 11);
}

TEST_CASE("generator preserves degree and kills constants") {
  const auto graph = build_graph(GraphKind::Complete, 1, 3);
  for (const auto& m : {ModelSpec::kac(), ModelSpec::gamma_exchange(GammaExchangeSpec::simple_average(1.5))}) {
    const auto pair = assemble_galerkin(m, graph, 1.0, 4);
    CHECK(pair.out_of_sector < 1e-12);
    CHECK(pair.constant_residual < 1e-12);
    CHECK(pair.asymmetry < 1e-10);
  }
}

TEST_CASE("Kac sector gaps") {
  CHECK(galerkin(ModelSpec::kac(), 3, 4) == doctest::Approx(5.0 / 12.0).epsilon(1e-9));
  CHECK(galerkin(ModelSpec::kac(), 4, 4) == doctest::Approx(3.0 / 8.0).epsilon(1e-9));
  CHECK(galerkin(ModelSpec::kac(), 6, 4, BasisMode::Symmetric) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  for (int N = 3; N <= 5; ++N)
    CHECK(galerkin(ModelSpec::kac(), N, 4, BasisMode::Symmetric) == doctest::Approx(kac_exact(N)).epsilon(1e-9));
}

TEST_CASE("gamma sector gaps") {
  const auto g1 = ModelSpec::gamma_exchange(GammaExchangeSpec::simple_average(1.0));
  CHECK(galerkin(g1, 3, 2) == doctest::Approx(4.0 / 9.0).epsilon(1e-9));
  const auto g2 = ModelSpec::gamma_exchange(GammaExchangeSpec::simple_average(2.0));
  CHECK(galerkin(g2, 3, 2) == doctest::Approx(7.0 / 15.0).epsilon(1e-9));
  for (double g : {0.5, 1.0, 3.0})
    for (int N = 3; N <= 5; ++N)
      CHECK(galerkin(ModelSpec::simple_average_gamma(g), N, 3) == doctest::Approx(gamma_exact(g, N)).epsilon(1e-8));
}

TEST_CASE("sector gaps upper-bound the degree-2 gap as the degree grows") {
  const auto m = ModelSpec::kac();
  double previous = INFINITY;
  for (int D = 2; D <= 6; D += 2) {
    const double gap = galerkin(m, 3, D, BasisMode::Symmetric);
    CHECK(gap <= previous + 1e-12);
    previous = gap;
  }
}

TEST_CASE("assembly errors") {
  const auto graph = build_graph(GraphKind::Complete, 1, 3);
  CHECK_THROWS_AS(assemble_galerkin(ModelSpec::kac(), graph, 1.0, 1), Error);
  CHECK_THROWS_AS(assemble_galerkin(ModelSpec::kac(), build_graph(GraphKind::Lattice, 1, 3), 1.0, 2, BasisMode::Symmetric), Error);
  CHECK_THROWS_AS(assemble_galerkin(ModelSpec::zero_range(RateFunction::identity()), graph, 1.0, 2), Error);
}

TEST_CASE("K operator") {
  const auto one = k_operator_check(1.0, 8);
  for (int n = 0; n <= 8; ++n) CHECK(one.computed(n) == doctest::Approx((n % 2 ? -1.0 : 1.0) / (n + 1)).epsilon(1e-10));
  for (double g : {0.5, 1.0, 2.0, 4.0}) {
    const auto k = k_operator_check(g, 6);
    CHECK(k.max_residual < 1e-10);
    CHECK(k.mu1 == doctest::Approx(-0.5));
    CHECK(k.mu2 == doctest::Approx((1 + g) / (2 * (1 + 2 * g))));
    CHECK(k.three_site_bound == doctest::Approx((1 + 3 * g) / (3 * (1 + 2 * g))));
    CHECK(k.eigenfunction_residual < 1e-12);
    CHECK(k.self_adjoint_residual < 1e-10);
  }
}

TEST_CASE("quadratic eigen identity") {
  const auto one = quadratic_eigen_identity(1.0);
  CHECK(one.residual < 1e-12);
  CHECK(one.lambda == doctest::Approx(4.0 / 9.0));
  const auto half = quadratic_eigen_identity(0.5);
  CHECK(half.residual < 1e-12);
  CHECK(half.lambda == doctest::Approx(5.0 / 12.0));
  const auto two = quadratic_eigen_identity(2.0);
  CHECK(two.lambda == doctest::Approx(7.0 / 15.0));
  CHECK(two.conditional_residual < 1e-10);
}

TEST_CASE("two-site Fourier reduction") {
  const auto u = two_site_fourier_gap(RhoSpec::uniform(), 20);
  CHECK(u.lambda2 == doctest::Approx(0.5));
  CHECK(u.kappa == doctest::Approx(0.5));
  const auto c = two_site_fourier_gap(
      RhoSpec::from_density([](double t) { return (1.0 + std::cos(t)) / (2.0 * std::numbers::pi); }), 20);
  CHECK(c.modes[0] == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(c.modes[1] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(c.lambda2 == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(c.kappa == doctest::Approx(0.5).epsilon(1e-10));
  const auto w = two_site_fourier_gap(
      RhoSpec::from_density([](double t) { return std::exp(std::cos(t)) / (2.0 * std::numbers::pi * std::cyl_bessel_i(0.0, 1.0)); }), 20);
  CHECK(w.kappa <= 1.0);
}
