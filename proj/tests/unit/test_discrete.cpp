#include <cmath>
#include <vector>

#include "doctest.h"

#include "gaplab/error.hpp"
#include "gaplab/generator.hpp"
#include "gaplab/states.hpp"
#include "gaplab/two_site.hpp"

using namespace gaplab;

namespace {

std::vector<int> as_vector(std::span<const int> s) { return {s.begin(), s.end()}; }

GapResult exact_gap(const ModelSpec& m, GraphKind kind, int d, int N, int omega, bool top = false) {
  const auto g = build_graph(kind, d, N);
  const StateSet states(g.vertex_count, omega);
  GapOptions opt;
  opt.want_top = top;
  return spectral_analysis(build_generator(m, g, states), opt);
}

}  // namespace

TEST_CASE("state enumeration") {
  CHECK(StateSet(3, 2).size() == 6);
  CHECK(StateSet(4, 3).size() == 20);
  const StateSet dirac(2, 0);
  REQUIRE(dirac.size() == 1);
  CHECK(as_vector(dirac[0]) == std::vector<int>{0, 0});
  CHECK(composition_count(5, 4) == 70);

  const StateSet s(4, 5);
  for (std::int64_t i = 0; i < s.size(); ++i) {
    CHECK(s.index_of(s[i]) == i);
    int total = 0;
    for (int v : s[i]) total += v;
    CHECK(total == 5);
  }
  CHECK_THROWS_AS(StateSet(10, 30, 1000), Error);
}

TEST_CASE("stationary weights") {
  const StateSet s(2, 2);  // (0,2), (1,1), (2,0)
  const auto id = stationary_weights(RateFunction::identity(), s).weights;
  CHECK(id(0) == doctest::Approx(0.25));
  CHECK(id(1) == doctest::Approx(0.5));
  CHECK(id(2) == doctest::Approx(0.25));
  const auto one = stationary_weights(RateFunction::constant_one(), s).weights;
  for (int i = 0; i < 3; ++i) CHECK(one(i) == doctest::Approx(1.0 / 3.0));
  const auto three = stationary_weights(RateFunction::identity(), StateSet(3, 1)).weights;
  for (int i = 0; i < 3; ++i) CHECK(three(i) == doctest::Approx(1.0 / 3.0));
  // large totals stay finite thanks to log-space factorials
  const auto big = stationary_weights(RateFunction::identity(), StateSet(2, 400)).weights;
  CHECK(big.allFinite());
  CHECK(big.sum() == doctest::Approx(1.0));
}

TEST_CASE("exchange of two sites") {
  const std::vector<int> c{2, 0, 1};
  CHECK(apply_exchange(c, 0, 2) == std::vector<int>{1, 0, 2});
  CHECK(apply_exchange(c, 1, 1) == c);
}

TEST_CASE("generators are conservative and reversible") {
  for (const auto& m : {ModelSpec::zero_range(RateFunction::identity()), ModelSpec::zero_range(RateFunction::constant_one()),
                        ModelSpec::simple_average(RateFunction::identity()),
                        ModelSpec::simple_average(RateFunction::constant_one())}) {
    for (const auto& g : {build_graph(GraphKind::Complete, 1, 4), build_graph(GraphKind::Lattice, 2, 2)}) {
      const StateSet s(g.vertex_count, 3);
      const auto gen = build_generator(m, g, s);
      CHECK(gen.max_row_sum() < 1e-12);
      CHECK(gen.max_asymmetry() < 1e-12);
      const Eigen::MatrixXd S(gen.symmetrized());
      CHECK((S - S.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("two-site gaps") {
  // simple average on two sites: one resampling clock at rate 1/2
  for (int w = 1; w <= 5; ++w)
    CHECK(exact_gap(ModelSpec::simple_average(RateFunction::constant_one()), GraphKind::Complete, 1, 2, w).gap ==
          doctest::Approx(0.5));
  CHECK(std::isinf(exact_gap(ModelSpec::simple_average(RateFunction::identity()), GraphKind::Complete, 1, 2, 0).gap));

  const auto zr = ModelSpec::zero_range(RateFunction::identity());
  const auto one = exact_gap(zr, GraphKind::Complete, 1, 2, 1, true);
  CHECK(one.gap == doctest::Approx(1.0));
  CHECK(one.top == doctest::Approx(1.0));
  CHECK(exact_gap(zr, GraphKind::Complete, 1, 2, 3).gap == doctest::Approx(1.0));
}

TEST_CASE("three-site gaps against an independent solver") {
  // values from tests/oracles/derive.py
  const auto sa = ModelSpec::simple_average(RateFunction::constant_one());
  const double sa_gap = exact_gap(sa, GraphKind::Complete, 1, 3, 2).gap;
  CHECK(sa_gap == doctest::Approx(0.44444444444444436).epsilon(1e-12));
  CHECK(sa_gap > 1.0 / 3.0);

  const auto zr1 = exact_gap(ModelSpec::zero_range(RateFunction::constant_one()), GraphKind::Complete, 1, 3, 2, true);
  CHECK(zr1.gap == doctest::Approx(0.5657414540893351).epsilon(1e-12));
  CHECK(zr1.top == doctest::Approx(1.7675918792440002).epsilon(1e-12));
  CHECK(exact_gap(ModelSpec::zero_range(RateFunction::identity()), GraphKind::Complete, 1, 3, 4).gap ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(exact_gap(ModelSpec::simple_average(RateFunction::identity()), GraphKind::Lattice, 1, 3, 3).gap ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("gap eigenvector solves the eigen equation") {
  const auto m = ModelSpec::zero_range(RateFunction::constant_one());
  const auto g = build_graph(GraphKind::Lattice, 1, 4);
  const StateSet s(g.vertex_count, 3);
  const auto gen = build_generator(m, g, s);
  const auto r = spectral_analysis(gen);
  const Eigen::VectorXd Lf = gen.L * r.eigenvector;
  CHECK((Lf + r.gap * r.eigenvector).norm() < 1e-8 * r.eigenvector.norm());
  // mean zero under the stationary measure
  CHECK(std::abs(gen.measure.weights.dot(r.eigenvector)) < 1e-10);
}

TEST_CASE("iterative path agrees with the dense solve") {
  const auto m = ModelSpec::zero_range(RateFunction::identity());
  const auto g = build_graph(GraphKind::Lattice, 2, 3);
  const StateSet s(g.vertex_count, 3);
  const auto gen = build_generator(m, g, s);
  GapOptions dense;
  GapOptions sparse;
  sparse.dense_limit = 10;
  const auto a = spectral_analysis(gen, dense);
  const auto b = spectral_analysis(gen, sparse);
  CHECK(b.iterative);
  CHECK(a.gap == doctest::Approx(b.gap).epsilon(1e-7));
}

TEST_CASE("two-site tables") {
  const auto id = two_site_spectrum(ModelSpec::zero_range(RateFunction::identity()), {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  for (const auto& row : id.rows) {
    CHECK(row.gap == doctest::Approx(1.0));
    CHECK(row.kappa == doctest::Approx(row.omega));
  }
  CHECK(id.inf_gap == doctest::Approx(1.0));
  CHECK(kappa_up_to(id, 4) == doctest::Approx(4.0));

  // g = 1: values from tests/oracles/derive.py, decaying toward 0
  const auto flat = two_site_spectrum(ModelSpec::zero_range(RateFunction::constant_one()), {1, 2, 3, 4, 5, 6});
  const double expected[] = {1.0, 0.5, 0.2928932188134525, 0.1909830056250526, 0.13397459621556135, 0.09903113209758088};
  for (int i = 0; i < 6; ++i) CHECK(flat.rows[static_cast<std::size_t>(i)].gap == doctest::Approx(expected[i]).epsilon(1e-12));
  CHECK(flat.gap_trend < 0);

  const auto dirac = two_site_spectrum(ModelSpec::zero_range(RateFunction::identity()), {0});
  CHECK(std::isinf(dirac.rows[0].gap));
  CHECK(std::isinf(dirac.rows[0].kappa));
  CHECK_THROWS_AS(two_site_spectrum(ModelSpec::zero_range(RateFunction::identity()), {}), Error);
}

TEST_CASE("kernel matrices") {
  const auto k2 = kernel_matrix(RateFunction::constant_one(), 2);
  Eigen::Matrix2d expected;
  expected << 0, 1, 0.5, 0.5;
  CHECK((k2.entries - expected).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(k2.spectrum(0) == doctest::Approx(-0.5));
  CHECK(k2.spectrum(1) == doctest::Approx(1.0));

  const auto k3 = kernel_matrix(RateFunction::constant_one(), 3);
  Eigen::Matrix3d e3;
  e3 << 0, 0, 1, 0, 0.5, 0.5, 1.0 / 3, 1.0 / 3, 1.0 / 3;
  CHECK((k3.entries - e3).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(k3.spectrum(0) == doctest::Approx(-0.5));
  CHECK(k3.spectrum(1) == doctest::Approx(1.0 / 3.0));

  const auto id2 = kernel_matrix(RateFunction::identity(), 2);
  CHECK((id2.entries - expected).cwiseAbs().maxCoeff() < 1e-14);
  for (int n = 2; n <= 8; ++n) {
    const auto k = kernel_matrix(RateFunction::identity(), n);
    CHECK((k.entries.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("kernel extremes") {
  const auto one = kernel_spectrum_extremes(RateFunction::constant_one(), 40);
  CHECK(one.mu2 == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  CHECK(one.mu1 == doctest::Approx(-0.5).epsilon(1e-9));
  const auto id = kernel_spectrum_extremes(RateFunction::identity(), 40);
  CHECK(id.mu2 == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(id.mu1 == doctest::Approx(-0.5).epsilon(1e-9));
}

TEST_CASE("rate-condition scans") {
  const auto lin = lsv_condition_check(RateFunction::identity(), 1000, 5);
  CHECK(lin.increment_sup == doctest::Approx(1.0));
  CHECK(lin.best_k0 == 1);
  CHECK(lin.best_c == doctest::Approx(1.0));
  CHECK(lin.holds_on_range);

  const auto flat = lsv_condition_check(RateFunction::constant_one(), 100, 5);
  CHECK(flat.best_k0 == 0);
  CHECK_FALSE(flat.holds_on_range);

  // g(k) = k + sin k, values from tests/oracles/derive.py
  const auto wavy = lsv_condition_check(RateFunction::custom("k+sin", [](long k) { return k + std::sin(double(k)); }), 1000, 5);
  CHECK(wavy.increment_sup == doctest::Approx(1.9588418776490926).epsilon(1e-12));
  CHECK(wavy.increment_sup <= 3.0);
  REQUIRE(wavy.gap_by_k0.size() == 5);
  CHECK(wavy.gap_by_k0[0] == doctest::Approx(0.04115799617341054).epsilon(1e-10));
  CHECK(wavy.gap_by_k0[1] == doctest::Approx(0.31705803114886066).epsilon(1e-10));
  CHECK(wavy.gap_by_k0[2] == doctest::Approx(1.0050289049120238).epsilon(1e-10));
}
