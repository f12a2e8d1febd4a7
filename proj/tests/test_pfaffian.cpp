#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "ghf/pfaffian.hpp"

using namespace ghf;

namespace {

Eigen::MatrixXd random_skew(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = normal(rng);
  }
  return antisymmetrize_upper(m);
}

Eigen::MatrixXd random_orthogonal(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ();
}

// (M - M^T)/2, so that single-entry perturbations act under the
// independent-entry convention.
Eigen::MatrixXd skew_part(const Eigen::MatrixXd& m) {
  return 0.5 * (m - m.transpose());
}

double closed_form_4x4(const Eigen::MatrixXd& a) {
  return a(0, 1) * a(2, 3) - a(0, 2) * a(1, 3) + a(0, 3) * a(1, 2);
}

}  // namespace

TEST_CASE("pfaffian closed forms") {
  Eigen::MatrixXd a2(2, 2);
  a2 << 0.0, 1.7, -1.7, 0.0;
  CHECK(pfaffian(a2) == 1.7);

  CHECK(pfaffian(Eigen::MatrixXd(0, 0)) == 1.0);

  auto a4 = random_skew(4, 7);
  CHECK(pfaffian(a4) == doctest::Approx(closed_form_4x4(a4)).epsilon(1e-13));
}

TEST_CASE("Pf^2 equals det up to dim 20") {
  for (int dim = 2; dim <= 20; dim += 2) {
    auto a = random_skew(dim, 100 + dim);
    const double pf = pfaffian(a);
    const double det = a.fullPivLu().determinant();
    CHECK(pf * pf == doctest::Approx(det).epsilon(1e-10));
  }
}

TEST_CASE("orthogonal congruence scales Pf by det(O)") {
  for (int dim = 4; dim <= 12; dim += 4) {
    auto a = random_skew(dim, 55 + dim);
    auto o = random_orthogonal(dim, 200 + dim);
    const double det_o = o.determinant();  // +-1
    const double lhs = pfaffian(antisymmetrize_upper(o * a * o.transpose()));
    CHECK(lhs == doctest::Approx(det_o * pfaffian(a)).epsilon(1e-9));
  }
}

TEST_CASE("Pf of a direct sum is the product of block Pfaffians") {
  for (int trial = 0; trial < 4; ++trial) {
    auto a = random_skew(4, 300 + trial);
    auto b = random_skew(8, 400 + trial);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(12, 12);
    sum.topLeftCorner(4, 4) = a;
    sum.bottomRightCorner(8, 8) = b;
    CHECK(pfaffian(sum) ==
          doctest::Approx(pfaffian(a) * pfaffian(b)).epsilon(1e-10));
  }
}

TEST_CASE("pfaffian rejects bad input") {
  CHECK_THROWS_AS(pfaffian(Eigen::MatrixXd::Zero(3, 3)),
                  std::invalid_argument);
  Eigen::MatrixXd not_skew = Eigen::MatrixXd::Ones(4, 4);
  CHECK_THROWS_AS(pfaffian(not_skew), std::invalid_argument);
  CHECK(pfaffian(Eigen::MatrixXd::Zero(6, 6)) == 0.0);
}

TEST_CASE("gradient closed forms") {
  Eigen::MatrixXd a2(2, 2);
  a2 << 0.0, 3.0, -3.0, 0.0;
  auto g2 = pfaffian_gradient(a2);
  CHECK(g2(0, 1) == 0.5);
  CHECK(g2(1, 0) == -0.5);

  auto a4 = random_skew(4, 11);
  auto g4 = pfaffian_gradient(a4);
  CHECK(g4(0, 1) == doctest::Approx(a4(2, 3) / 2).epsilon(1e-12));
  CHECK(g4(0, 2) == doctest::Approx(-a4(1, 3) / 2).epsilon(1e-12));
  CHECK(g4(0, 3) == doctest::Approx(a4(1, 2) / 2).epsilon(1e-12));
}

TEST_CASE("gradient matches central finite differences") {
  const double eps = 1e-6;
  for (int dim = 4; dim <= 12; dim += 4) {
    auto a = random_skew(dim, 500 + dim);
    auto g = pfaffian_gradient(a);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        if (i == j) continue;
        Eigen::MatrixXd plus = a, minus = a;
        plus(i, j) += eps;   // A_ji untouched
        minus(i, j) -= eps;
        const double fd = (pfaffian(skew_part(plus)) -
                           pfaffian(skew_part(minus))) /
                          (2 * eps);
        CHECK(g(i, j) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
      }
    }
  }
}

TEST_CASE("gradient minor fallback agrees with the fast path") {
  // A singular skew matrix forces the minor route; embed an invertible
  // block so the minors are still nonzero.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(6, 6);
  a.topLeftCorner(4, 4) = random_skew(4, 77);
  a = antisymmetrize_upper(a);
  CHECK(pfaffian(a) == doctest::Approx(0.0));
  auto g = pfaffian_gradient(a);
  // d Pf / d A_45 = Pf(top-left 4x4 block) / 2 (indices 4,5 removed).
  CHECK(g(4, 5) ==
        doctest::Approx(0.5 * pfaffian(a.topLeftCorner(4, 4))).epsilon(1e-10));
}

TEST_CASE("principal submatrix restriction") {
  auto a = random_skew(6, 42);
  std::vector<int> all{0, 1, 2, 3, 4, 5};
  CHECK(principal_submatrix(a, all).isApprox(a));

  auto s = principal_submatrix(a, {1, 3});
  CHECK(s(0, 1) == a(1, 3));
  CHECK(s(1, 0) == -a(1, 3));

  auto s4 = principal_submatrix(a, {1, 2, 4, 5});
  CHECK(pfaffian(s4) == doctest::Approx(closed_form_4x4(s4)).epsilon(1e-12));

  CHECK_THROWS_AS(principal_submatrix(a, {2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(principal_submatrix(a, {3, 1}), std::invalid_argument);
  CHECK_THROWS_AS(principal_submatrix(a, {0, 6}), std::out_of_range);
}
