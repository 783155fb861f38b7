#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hcolor/cone_measure.hpp"
#include "support.hpp"

using namespace hcolor;

namespace {

// Oracle values computed by hand, independently of the library.
constexpr double kOrthantRhoMinusThird = 0.125 + 3 * -0.33983690945412193 / (4 * std::numbers::pi);
constexpr double kBoundStrongK3 = 0.07113968355062796;  // (e/6pi)^1.5 / sqrt(16/27)
constexpr double kBoundIdentityK2 = std::numbers::e / (2 * std::numbers::pi);

Eigen::MatrixXd random_gram(int k, int rank, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd u(rank, k);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < k; ++j) u(i, j) = normal(rng);
  for (int j = 0; j < k; ++j) u.col(j).normalize();
  return u.transpose() * u;
}

// Gram matrix of a planted rainbow edge: k vertices, all k - l colors present,
// color classes mapped to simplex vertices.
Eigen::MatrixXd rainbow_edge_gram(int k, int l, Rng& rng) {
  const int chi = k - l;
  std::vector<int> color(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) color[i] = i < chi ? i : static_cast<int>(rng() % chi);
  std::shuffle(color.begin(), color.end(), rng);
  Eigen::MatrixXd a(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) a(i, j) = color[i] == color[j] ? 1.0 : -1.0 / (chi - 1);
  return a;
}

}  // namespace

TEST_CASE("gram cone validation") {
  CHECK(ERROR_CODE(GramCone(Eigen::MatrixXd(0, 0))) == "invalid_gram");
  Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(2, 2);
  asym(0, 1) = 0.5;
  CHECK(ERROR_CODE(GramCone(asym)) == "invalid_gram");
  CHECK(ERROR_CODE(GramCone(2 * Eigen::MatrixXd::Identity(2, 2))) == "invalid_gram");
  CHECK(ERROR_CODE(GramCone(equicorrelated_gram(3, -0.6))) == "invalid_gram");
  GramCone cone(symmetric_cone_gram(5));
  CHECK(cone.sum_norm() == doctest::Approx(1.0));
  CHECK(GramCone(strong_cone_gram(4, 2)).sum_norm() == doctest::Approx(std::sqrt(8.0 / 5)));
}

TEST_CASE("upper bound oracles") {
  CHECK(measure_upper_bound(GramCone(strong_cone_gram(3, 1))) ==
        doctest::Approx(kBoundStrongK3).epsilon(1e-12));
  CHECK(measure_upper_bound(GramCone(Eigen::MatrixXd::Identity(2, 2))) ==
        doctest::Approx(kBoundIdentityK2).epsilon(1e-12));
  CHECK(ERROR_CODE(measure_upper_bound(GramCone(Eigen::MatrixXd::Ones(2, 2)))) == "singular");
  // log form agrees with the direct value even when the bound underflows
  GramCone big(symmetric_cone_gram(400));
  CHECK(std::isfinite(log_measure_upper_bound(big)));
  CHECK(log_measure_upper_bound(big) < -700);
}

TEST_CASE("trivariate orthant oracle") {
  MeasureEstimate m = gaussian_measure_mc(equicorrelated_gram(3, -1.0 / 3), 400000, 17);
  CHECK(std::abs(m.estimate - kOrthantRhoMinusThird) <= 4 * m.std_error);
  CHECK(m.samples == 400000);
  CHECK(m.jitter == 0);
  MeasureEstimate id = gaussian_measure_mc(Eigen::MatrixXd::Identity(2, 2), 400000, 3);
  CHECK(std::abs(id.estimate - 0.25) <= 4 * id.std_error);
}

TEST_CASE("Monte Carlo does not depend on the worker count") {
  const Eigen::MatrixXd g = strong_cone_gram(5, 1);
  MeasureEstimate a = gaussian_measure_mc(g, 300000, 8, 1);
  MeasureEstimate b = gaussian_measure_mc(g, 300000, 8, 4);
  CHECK(a.hits == b.hits);
  CHECK(a.estimate == b.estimate);
  MeasureEstimate c = gaussian_measure_mc(g, 300000, 9, 4);
  CHECK(a.hits != c.hits);
}

TEST_CASE("degenerate grams need jitter, indefinite ones are refused") {
  MeasureEstimate m = gaussian_measure_mc(Eigen::MatrixXd::Ones(3, 3), 10000, 1);
  CHECK(m.jitter > 0);
  CHECK(m.estimate == doctest::Approx(0.5).epsilon(0.05));
  CHECK(ERROR_CODE(gaussian_measure_mc(equicorrelated_gram(3, -0.6), 100, 1)) == "not_psd");
}

TEST_CASE("measure never exceeds the bound on random cones") {
  Rng rng = make_rng(4, "cones");
  for (int rep = 0; rep < 20; ++rep) {
    const int k = 2 + rep % 6;
    Eigen::MatrixXd g = random_gram(k, k + 2, rng);
    GramCone cone(g);
    MeasureEstimate m = gaussian_measure_mc(g, 100000, static_cast<std::uint64_t>(rep));
    CHECK(m.estimate <= measure_upper_bound(cone) + 4 * m.std_error);
  }
}

TEST_CASE("Daniels asymptotic tracks the symmetric cone") {
  GramCone cone(symmetric_cone_gram(8));
  MeasureEstimate m = gaussian_measure_mc(cone.gram(), 4000000, 12, 4);
  const double ratio = m.estimate / symmetric_cone_asymptotic(8);
  CHECK(ratio >= 0.5);
  CHECK(ratio <= 2.0);
  CHECK(m.estimate <= measure_upper_bound(cone) + 4 * m.std_error);
  CHECK(ERROR_CODE(symmetric_cone_asymptotic(1)) == "invalid_parameters");
}

TEST_CASE("simplicial form") {
  Rng rng = make_rng(6, "simplicial");
  std::normal_distribution<double> normal;
  for (int k : {2, 3, 6}) {
    Eigen::MatrixXd u(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) u(i, j) = normal(rng);
    for (int j = 0; j < k; ++j) u.col(j).normalize();
    SimplicialForm s = normals_to_simplicial(u);
    CHECK(s.residual < 1e-9);
    CHECK(s.cofactor_error < 1e-9);
    CHECK(s.D.minCoeff() > 0);
    for (int j = 0; j < k; ++j) CHECK(s.V.col(j).norm() == doctest::Approx(1.0));
  }
  Eigen::MatrixXd singular = Eigen::MatrixXd::Ones(3, 3);
  CHECK(ERROR_CODE(normals_to_simplicial(singular)) == "singular");
}

TEST_CASE("l1 inequality: equality cases and random instances") {
  const int k = 6;
  L1Check id = l1_bound_check(Eigen::MatrixXd::Identity(k, k), Eigen::VectorXd::Ones(k));
  CHECK(id.lhs == doctest::Approx(id.rhs).epsilon(1e-12));
  CHECK(id.holds);

  Eigen::VectorXd w(k);
  w << 1, 2, 0.5, 3, 1, 0.25;
  const Eigen::MatrixXd rank_one = w * w.transpose();
  L1Check r1 = l1_bound_check(rank_one, 2 * w);
  CHECK(r1.lhs == doctest::Approx(r1.rhs).epsilon(1e-9));

  Rng rng = make_rng(1, "l1");
  std::uniform_real_distribution<double> unit(0, 1);
  for (int rep = 0; rep < 200; ++rep) {
    const int rank = 1 + rep % k;
    Eigen::MatrixXd u = random_gram(k, rank, rng);
    Eigen::MatrixXd a = u + 0.5 * Eigen::MatrixXd::Ones(k, k);
    Eigen::VectorXd y(k);
    for (int i = 0; i < k; ++i) y(i) = unit(rng);
    Eigen::VectorXd x = a * y;
    if (x.minCoeff() < 0) continue;
    L1Check c = l1_bound_check(a, x);
    CHECK(c.holds);
  }
  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2, 2);
  diag(0, 0) = 1;
  Eigen::VectorXd off(2);
  off << 0, 1;
  CHECK(ERROR_CODE(l1_bound_check(diag, off)) == "not_in_colspace");
}

TEST_CASE("well-behaved subset on planted rainbow edges") {
  Rng rng = make_rng(2, "subset");
  std::uniform_real_distribution<double> unit(0, 1);
  const int k = 30;
  for (int rep = 0; rep < 40; ++rep) {
    const int l = 1 + rep % 4;
    Eigen::MatrixXd a = rainbow_edge_gram(k, l, rng);
    if (rep % 2) {
      const double t = unit(rng);
      a = (1 - t) * a + t * Eigen::MatrixXd::Identity(k, k);
    }
    SubsetSelection s = select_well_behaved(a, l, 0.5);
    CHECK(s.k_tilde == k - s.removed);
    CHECK(s.lambda_min >= s.lambda_bound - 1e-9);
    CHECK(s.sum_A_S <= s.sum_bound + 1e-9);
    CHECK(s.max_selected_column <= s.column_cap + 1e-9);
  }
}

TEST_CASE("well-behaved subset: ties keep the lowest ids, bad input is refused") {
  const int k = 30;
  const double l = 1;
  SubsetSelection s = select_well_behaved(Eigen::MatrixXd::Identity(k, k), l, 0.5);
  for (int i = 0; i < s.k_tilde; ++i) CHECK(s.selected[i] == i);
  Eigen::MatrixXd pair = Eigen::MatrixXd::Identity(k, k);
  pair(0, 1) = pair(1, 0) = -0.5;
  CHECK(ERROR_CODE(select_well_behaved(pair, l)) == "infeasible_input");
  CHECK(ERROR_CODE(select_well_behaved(Eigen::MatrixXd::Identity(4, 4), 3)) == "invalid_parameters");
}
