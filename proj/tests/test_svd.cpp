#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "lsvcluster/cluster.hpp"
#include "lsvcluster/datasets.hpp"
#include "lsvcluster/svd.hpp"
#include "test_helpers.hpp"

using namespace lsvc;
using lsvtest::random_decoupled;
using lsvtest::random_stochastic;

namespace {

void check_svd_contract(const Matrix& m, const SvdResult& svd) {
  const auto n = m.rows();
  const double scale = std::max(1.0, m.norm());
  const Matrix recon =
      svd.u * svd.singular_values.asDiagonal() * svd.v.transpose();
  REQUIRE((recon - m).norm() <= 1e-8 * scale);
  REQUIRE((svd.u.transpose() * svd.u - Matrix::Identity(n, n)).norm() <= 1e-8);
  REQUIRE((svd.v.transpose() * svd.v - Matrix::Identity(n, n)).norm() <= 1e-8);
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    REQUIRE(svd.singular_values(i) >= svd.singular_values(i + 1));
}

}  // namespace

TEST_CASE("full_svd of the zero matrix") {
  const SvdResult svd = full_svd(Matrix::Zero(3, 3));
  REQUIRE(svd.singular_values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("full_svd rejects non-finite input") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(full_svd(m), std::invalid_argument);
}

TEST_CASE("analytic two-block spectrum: 1 (x8), 2a, 0") {
  const StochasticMatrix t = analytic_two_block(5, 0.1);
  const Vector s = full_svd(laplacian(t.mat())).singular_values;
  for (int i = 0; i < 8; ++i) REQUIRE(std::abs(s(i) - 1.0) < 1e-10);
  REQUIRE(std::abs(s(8) - 0.2) < 1e-10);
  REQUIRE(std::abs(s(9)) < 1e-10);
}

TEST_CASE("Courtois Laplacian singular values") {
  const double expected[8] = {1.2824, 0.7063, 0.6053, 0.4935, 0.2354, 0.0015, 0.0002, 0.0};
  const Vector s = full_svd(laplacian(courtois_matrix().mat())).singular_values;
  for (int i = 0; i < 8; ++i) REQUIRE(std::abs(s(i) - expected[i]) < 5e-4);
}

TEST_CASE("full_svd satisfies the reconstruction and orthogonality contract") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix m(8, 8);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) m(i, j) = gauss(rng);
    check_svd_contract(m, full_svd(m));
  }
}

TEST_CASE("full_svd matches a hand-rolled Jacobi eigensolver on random matrices") {
  std::mt19937_64 rng(22);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    Matrix m(10, 10);
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j) m(i, j) = gauss(rng);
    const Vector s = full_svd(m).singular_values;
    const auto oracle = lsvtest::singular_values_via_jacobi(m);
    for (int i = 0; i < 10; ++i)
      REQUIRE(std::abs(s(i) - oracle[static_cast<std::size_t>(i)]) <= 1e-8 * std::max(1.0, m.norm()));
  }
}

TEST_CASE("sigma_1 of a stochastic matrix is at most sqrt(n)") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> dim(2, 9);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = dim(rng);
    const StochasticMatrix t = random_stochastic(rng, n);
    const double s1 = full_svd(t.mat()).singular_values(0);
    REQUIRE(s1 <= std::sqrt(static_cast<double>(n)) + 1e-10);
  }
}

TEST_CASE("sigma_1 reaches sqrt(n) exactly for the matrices 1 e_j^T") {
  const int n = 4;
  for (int j = 0; j < n; ++j) {
    Matrix t = Matrix::Zero(n, n);
    t.col(j).setOnes();
    const double s1 = full_svd(t).singular_values(0);
    REQUIRE(std::abs(s1 - 2.0) < 1e-10);
  }
}

TEST_CASE("second smallest pair on a decoupled chain separates the blocks") {
  std::mt19937_64 rng(24);
  const StochasticMatrix t = random_decoupled(rng, {4, 5});
  const auto pair = second_smallest_pair(laplacian(t.mat()));
  REQUIRE(pair.has_value());
  REQUIRE(pair->sigma < 1e-12);
  const double eta = sign_threshold(pair->left);
  bool first_positive = pair->left(0) > eta;
  for (int i = 0; i < 4; ++i) REQUIRE((pair->left(i) > eta) == first_positive);
  for (int i = 4; i < 9; ++i) REQUIRE((pair->left(i) < -eta) == first_positive);
}

TEST_CASE("second smallest pair reproduces the Courtois singular vector") {
  const double expected[8] = {0.2997, 0.3114, 0.1359, 0.5272,
                              0.3955, -0.2262, -0.5221, -0.1914};
  const auto pair = second_smallest_pair(laplacian(courtois_matrix().mat()));
  REQUIRE(pair.has_value());
  REQUIRE(std::abs(pair->sigma - 0.0002) < 5e-5);
  for (int i = 0; i < 8; ++i) REQUIRE(std::abs(pair->left(i) - expected[i]) < 5e-4);
}

TEST_CASE("second smallest pair splits the deep south walk as published") {
  const auto pair = second_smallest_pair(laplacian(deep_south_walk().mat()));
  REQUIRE(pair.has_value());
  REQUIRE(std::abs(pair->sigma - 0.1965) < 1e-3);
  const SignSplit split = sign_split(pair->left, sign_threshold(pair->left));
  std::vector<int> s1, s2;
  for (int i : {1, 2, 3, 4, 5, 6, 7, 8, 9, 19, 20, 21, 22, 23, 24, 25, 26}) s1.push_back(i - 1);
  for (int i : {10, 11, 12, 13, 14, 15, 16, 17, 18, 27, 28, 29, 30, 31, 32}) s2.push_back(i - 1);
  const IndexSet a(s1, 32), b(s2, 32);
  const bool forward = split.positive == b && split.negative == a;
  const bool backward = split.positive == a && split.negative == b;
  REQUIRE((forward || backward));
  REQUIRE(split.zeros.empty());
}

TEST_CASE("second smallest pair satisfies its residual contract") {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 50; ++trial) {
    const StochasticMatrix t = random_stochastic(rng, 7);
    const Matrix lap = laplacian(t.mat());
    const auto pair = second_smallest_pair(lap);
    REQUIRE(pair.has_value());
    REQUIRE(std::abs(pair->left.norm() - 1.0) <= 1e-12);
    REQUIRE(std::abs(pair->right.norm() - 1.0) <= 1e-12);
    const double scale = std::max(1.0, lap.norm());
    REQUIRE((pair->left.transpose() * lap - pair->sigma * pair->right.transpose()).norm() <=
            1e-8 * scale);
    const double eta = sign_threshold(pair->left);
    REQUIRE((pair->left.array() > eta).any());
    REQUIRE((pair->left.array() < -eta).any());
  }
}

TEST_CASE("second smallest pair requires at least two states") {
  REQUIRE_THROWS_AS(second_smallest_pair(Matrix::Zero(1, 1)), std::invalid_argument);
}

TEST_CASE("mixed signs are signalled as unobtainable when the gap is simple") {
  // For n = 2 the second smallest singular value is the largest one. Build
  // M = 2 u2 e1^T + u1 e2^T so that the left vector attached to it is the
  // strictly positive u2, and the 2 vs 1 gap rules out a degenerate rescue.
  const double r = 1.0 / std::sqrt(2.0);
  Vector u1(2), u2(2);
  u1 << r, -r;
  u2 << r, r;
  const Matrix m = 2.0 * u2 * Matrix::Identity(2, 2).col(0).transpose() +
                   u1 * Matrix::Identity(2, 2).col(1).transpose();
  REQUIRE_FALSE(extract_second_smallest(full_svd(m)).has_value());
}

TEST_CASE("spectral radius of a stochastic matrix is one") {
  std::mt19937_64 rng(26);
  const StochasticMatrix t = random_stochastic(rng, 6);
  const PerronResult pr = spectral_radius(t.mat());
  REQUIRE(pr.converged);
  REQUIRE(std::abs(pr.rho - 1.0) < 1e-9);
  const StochasticMatrix doubly{Matrix::Constant(4, 4, 0.25)};
  const PerronResult pu = spectral_radius(doubly.mat());
  REQUIRE((pu.vec.array() - 0.5).abs().maxCoeff() < 1e-9);
}

TEST_CASE("spectral radius of a permutation matrix is one") {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  const PerronResult pr = spectral_radius(m);
  REQUIRE(pr.converged);
  REQUIRE(std::abs(pr.rho - 1.0) < 1e-10);
}

TEST_CASE("spectral radius matches a dense eigensolver on Courtois cluster blocks") {
  const StochasticMatrix c = courtois_matrix();
  const std::vector<IndexSet> clusters{IndexSet({0, 1, 2}, 8), IndexSet({3, 4}, 8),
                                       IndexSet({5, 6, 7}, 8)};
  for (const IndexSet& s : clusters) {
    const Matrix block = principal_submatrix(c.mat(), s);
    const PerronResult pr = spectral_radius(block);
    REQUIRE(pr.converged);
    REQUIRE(std::abs(pr.rho - lsvtest::spectral_radius_dense(block)) < 1e-9);
  }
}

TEST_CASE("spectral radius rejects negative entries") {
  Matrix m(2, 2);
  m << 0.5, -0.5, 0.5, 0.5;
  REQUIRE_THROWS_AS(spectral_radius(m), std::invalid_argument);
}
