#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "gaplab/error.hpp"
#include "gaplab/model.hpp"
#include "gaplab/rational.hpp"
#include "gaplab/special.hpp"

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

TEST_CASE("graph sizes") {
  const auto k4 = build_graph(GraphKind::Complete, 1, 4);
  CHECK(k4.edges.size() == 6);
  CHECK(k4.pair_scaling == doctest::Approx(0.25));
  const auto l23 = build_graph(GraphKind::Lattice, 2, 3);
  CHECK(l23.vertex_count == 9);
  CHECK(l23.edges.size() == 12);
  CHECK(l23.pair_scaling == 1.0);
  const auto l12 = build_graph(GraphKind::Lattice, 1, 2);
  CHECK(l12.vertex_count == 2);
  CHECK(l12.edges.size() == 1);
}

TEST_CASE("graph errors") {
  CHECK(kind_of([] { build_graph(GraphKind::Complete, 1, 1); }) == ErrorKind::InvalidSize);
  CHECK(kind_of([] { build_graph(GraphKind::Lattice, 0, 3); }) == ErrorKind::InvalidDimension);
  CHECK(kind_of([] { parse_graph_kind("torus"); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("lattice coordinates round trip and adjacency") {
  const auto g = build_graph(GraphKind::Lattice, 3, 3);
  for (int v = 0; v < g.vertex_count; ++v) CHECK(g.vertex_at(g.coordinates(v)) == v);
  for (const auto& e : g.edges) {
    CHECK(g.adjacent(e[0], e[1]));
    const auto a = g.coordinates(e[0]);
    const auto b = g.coordinates(e[1]);
    int dist = 0;
    for (std::size_t i = 0; i < a.size(); ++i) dist += std::abs(a[i] - b[i]);
    CHECK(dist == 1);
  }
  CHECK_FALSE(g.adjacent(0, g.vertex_count - 1));
}

TEST_CASE("conserved totals") {
  const std::vector<int> counts{1, 2, 0};
  CHECK(conserved_total(counts) == 3);
  const std::vector<double> kac{1.0, -1.0};
  CHECK(conserved_total(kac, ConservationLaw::Square, SiteSpace::gaussian()) == doctest::Approx(2.0));
  CHECK(conserved_total(std::vector<int>{0, 0, 0, 0}) == 0);
  const std::vector<double> bad{1.0, -0.5};
  CHECK(kind_of([&] { conserved_total(bad, ConservationLaw::Identity, SiteSpace::gamma_shape(1.0)); }) ==
        ErrorKind::DomainError);
  CHECK(kind_of([] { conserved_total(std::vector<int>{1, -1}); }) == ErrorKind::DomainError);
}

TEST_CASE("rate functions") {
  CHECK(RateFunction::identity()(7) == 7.0);
  CHECK(RateFunction::constant_one()(7) == 1.0);
  CHECK(RateFunction::identity()(0) == 0.0);
  const auto t = RateFunction::from_table({1.0, 3.0});
  CHECK(t(2) == 3.0);
  CHECK(kind_of([&] { t(3); }) == ErrorKind::DomainError);
  CHECK(kind_of([] { RateFunction::from_table({1.0, 0.0}); }) == ErrorKind::DomainError);
  const auto lf = RateFunction::identity().log_factorials(20);
  CHECK(lf[0] == 0.0);
  CHECK(lf[20] == doctest::Approx(std::lgamma(21.0)).epsilon(1e-14));
}

TEST_CASE("catalog validation") {
  CHECK(validate_model(ModelSpec::gamma_exchange(GammaExchangeSpec::simple_average(1.0))).passed());
  CHECK(validate_model(ModelSpec::gamma_exchange(GammaExchangeSpec::simple_average(2.5))).passed());
  CHECK(validate_model(ModelSpec::kac()).passed());
  CHECK(validate_model(ModelSpec::zero_range(RateFunction::identity())).passed());

  const auto uniform = RhoSpec::uniform();
  CHECK(validate_model(ModelSpec::kac_rho(uniform)).passed());
  for (int n = 1; n <= 5; ++n) CHECK(std::abs(uniform.coefficient(n)) == doctest::Approx(0.0));
  CHECK(uniform.coefficient(0).real() == doctest::Approx(1.0));

  const auto half = RhoSpec::from_density([](double) { return 0.25 / std::numbers::pi; });
  const auto report = validate_model(ModelSpec::kac_rho(half));
  CHECK_FALSE(report.passed());
  REQUIRE(report.find("rho-normalized") != nullptr);
  CHECK_FALSE(report.find("rho-normalized")->passed);
  CHECK(half.coefficient(0).real() == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("a concentrated Fourier series is rejected") {
  std::vector<std::complex<double>> c(8, 1.0);
  const auto rho = RhoSpec::from_fourier(c);
  CHECK_FALSE(validate_model(ModelSpec::kac_rho(rho)).passed());
}

TEST_CASE("density quadrature recovers Fourier coefficients") {
  const auto rho = RhoSpec::from_density([](double t) { return (1.0 + std::cos(t)) / (2.0 * std::numbers::pi); });
  CHECK(rho.coefficient(1).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(rho.coefficient(2)) < 1e-12);
  CHECK(rho.coefficient(-1).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rho.min_density() >= -1e-15);
  CHECK(kind_of([&] { rho.coefficient(1000); }) == ErrorKind::OrderError);
}

TEST_CASE("rational arithmetic") {
  const Rational a(5, 12);
  const Rational b(1, 2);
  CHECK((a + b) == Rational(11, 12));
  CHECK((a * b) == Rational(5, 24));
  CHECK((a / b) == Rational(5, 6));
  CHECK(Rational(6, -8) == Rational(-3, 4));
  CHECK(Rational(2, 4).str() == "1/2");
  CHECK(Rational(3).str() == "3");
  CHECK(Rational(1, 3) < Rational(4, 9));
  CHECK(kind_of([] { Rational(1, 0); }) == ErrorKind::NumericError);
}

TEST_CASE("special functions") {
  // Beta(2,3) at x = 0.4: 1 - (1-x)^4 - 4x(1-x)^3 over the regularized form
  const double x = 0.4;
  const double exact = 1.0 - std::pow(1 - x, 4) - 4 * x * std::pow(1 - x, 3);
  CHECK(incomplete_beta(2.0, 3.0, x) == doctest::Approx(exact).epsilon(1e-12));
  CHECK(incomplete_beta(0.5, 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(log_beta(2.0, 3.0) == doctest::Approx(std::log(1.0 / 12.0)));
  CHECK(beta_moment<Rational>(2, 0, Rational(1)) == Rational(1, 3));
  CHECK(beta_moment<Rational>(1, 1, Rational(1)) == Rational(1, 6));
  for (int n = 0; n <= 6; ++n)
    CHECK(k_operator_eigenvalue(n, 1.0) == doctest::Approx((n % 2 ? -1.0 : 1.0) / (n + 1)));
}
