#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sparselab/errors.hpp"
#include "sparselab/model_core.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <cmath>

using namespace sparselab;

TEST_CASE("norms") {
  const Norms a = norms(Eigen::Vector3d(1, -2, 3));
  CHECK(a.l0 == 3);
  CHECK(a.l1 == doctest::Approx(6.0));
  CHECK(a.l2 == doctest::Approx(std::sqrt(14.0)));
  CHECK(a.linf == doctest::Approx(3.0));

  const Norms z = norms(Eigen::VectorXd::Zero(3));
  CHECK(z.l0 == 0);
  CHECK(z.l1 == 0.0);
  CHECK(z.l2 == 0.0);
  CHECK(z.linf == 0.0);

  Rng rng(3);
  Eigen::VectorXd v = rng.normal_vector(8);
  v[2] = 0.0;
  double l1 = 0, l2 = 0, linf = 0;
  int l0 = 0;
  for (int i = 0; i < 8; ++i) {
    l1 += std::abs(v[i]);
    l2 += v[i] * v[i];
    linf = std::max(linf, std::abs(v[i]));
    l0 += v[i] != 0.0;
  }
  const Norms r = norms(v);
  CHECK(r.l0 == l0);
  CHECK(r.l1 == doctest::Approx(l1).epsilon(1e-14));
  CHECK(r.l2 == doctest::Approx(std::sqrt(l2)).epsilon(1e-14));
  CHECK(r.linf == linf);
}

TEST_CASE("sign vector") {
  CHECK(sign_vector(Eigen::Vector3d(-2, 0, 5)) == Eigen::Vector3i(-1, 0, 1));
  CHECK(sign_vector(Eigen::VectorXd::Zero(4)) == Eigen::VectorXi::Zero(4));
  CHECK(sign_vector(Eigen::Vector2d(1e-300, -1e-300)) == Eigen::Vector2i(1, -1));
}

TEST_CASE("soft threshold") {
  CHECK(soft_threshold(3, 2) == 1.0);
  CHECK(soft_threshold(-3, 2) == -1.0);
  CHECK(soft_threshold(1.5, 2) == 0.0);
  CHECK(soft_threshold(2, 0) == 2.0);
  CHECK_THROWS_AS(soft_threshold(1, -0.1), ArgumentError);
}

TEST_CASE("design validation") {
  CHECK_THROWS_AS(DesignMatrix(Eigen::MatrixXd(0, 3)), ArgumentError);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Ones(2, 2);
  bad(1, 1) = std::nan("");
  CHECK_THROWS_AS(DesignMatrix{bad}, ArgumentError);
}

TEST_CASE("gram") {
  CHECK(gram(DesignMatrix(Eigen::MatrixXd::Identity(3, 3))).matrix().isApprox(Eigen::MatrixXd::Identity(3, 3) / 3.0));

  const GramMatrix g = gram(DesignMatrix(Eigen::MatrixXd{{1.0, 2.0}}));
  CHECK(g(0, 0) == 1.0);
  CHECK(g(0, 1) == 2.0);
  CHECK(g(1, 0) == 2.0);
  CHECK(g(1, 1) == 4.0);

  const Eigen::MatrixXd X = fixture::gaussian(6, 4, 11);
  const Eigen::MatrixXd ref = oracle::gram_loops(X);
  CHECK((gram(DesignMatrix(X)).matrix() - ref).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("support") {
  const Support S = Support::from_one_based({2, 4}, 5);
  CHECK(S.size() == 2);
  CHECK(S[0] == 1);
  CHECK(S.contains(3));
  CHECK_FALSE(S.contains(0));
  CHECK(S.to_string() == "{2,4}");
  CHECK(S.complement().indices() == std::vector<Index>{0, 2, 4});
  CHECK(S.is_subset_of(Support::first(4, 5)));
  CHECK_FALSE(Support::first(1, 5).is_subset_of(S));
  CHECK_THROWS_AS(Support({2, 1}, 4), ArgumentError);
  CHECK_THROWS_AS(Support({0, 4}, 4), ArgumentError);
  CHECK_THROWS_AS(Support::from_one_based({0}, 4), ArgumentError);
}

TEST_CASE("partition gram") {
  const double rho = 0.3;
  const GramMatrix sigma(fixture::last_correlated_gram(rho));
  const PartitionedGram part = partition_gram(sigma, Support::first(4, 5));
  CHECK(part.sigma11.isApprox(Eigen::MatrixXd::Identity(4, 4)));
  CHECK(part.sigma12.isApprox(Eigen::VectorXd::Constant(4, rho)));
  CHECK(part.sigma21.isApprox(Eigen::RowVectorXd::Constant(4, rho)));
  CHECK(part.sigma22(0, 0) == 1.0);

  const GramMatrix diag(Eigen::Vector4d(1, 2, 3, 4).asDiagonal().toDenseMatrix());
  CHECK(partition_gram(diag, Support({1, 3}, 4)).sigma12.isZero(0.0));

  Rng rng(5);
  Eigen::MatrixXd a = rng.normal_matrix(5, 5);
  a = (a + a.transpose()).eval();
  const Support S({1, 3}, 5);
  const PartitionedGram pr = partition_gram(GramMatrix(a), S);
  const std::vector<int> on = {1, 3}, off = {0, 2, 4};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) CHECK(pr.sigma11(i, j) == a(on[i], on[j]));
    for (int j = 0; j < 3; ++j) {
      CHECK(pr.sigma12(i, j) == a(on[i], off[j]));
      CHECK(pr.sigma21(j, i) == a(off[j], on[i]));
    }
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(pr.sigma22(i, j) == a(off[i], off[j]));
  }

  CHECK_THROWS_AS(partition_gram(sigma, Support({}, 5)), ArgumentError);
  CHECK_THROWS_AS(partition_gram(sigma, Support::first(5, 5)), ArgumentError);
}

TEST_CASE("support_of") {
  CHECK(support_of(Eigen::Vector4d(0, 3, 0, -1), 0.0).one_based() == std::vector<long long>{2, 4});
  CHECK(support_of(Eigen::Vector2d(1e-12, 5), 1e-8).one_based() == std::vector<long long>{2});
  CHECK(support_of(Eigen::VectorXd::Zero(3)).empty());
}

TEST_CASE("null space basis") {
  const Eigen::MatrixXd k1 = null_space_basis(DesignMatrix(Eigen::MatrixXd{{1.0, 2.0}}));
  REQUIRE(k1.cols() == 1);
  CHECK(std::abs(k1(0, 0) / k1(1, 0) - (-2.0)) < 1e-12);

  const Eigen::MatrixXd k2 = null_space_basis(DesignMatrix(Eigen::MatrixXd{{2.0, 1.0}}));
  REQUIRE(k2.cols() == 1);
  CHECK(std::abs(k2(0, 0) / k2(1, 0) - (-0.5)) < 1e-12);

  CHECK(null_space_basis(DesignMatrix(fixture::gaussian(4, 4, 2))).cols() == 0);

  const Eigen::MatrixXd X = fixture::gaussian(3, 7, 9);
  const Eigen::MatrixXd K = null_space_basis(DesignMatrix(X));
  CHECK(K.cols() == 4);
  CHECK((X * K).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((K.transpose() * K - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("min eigen") {
  CHECK(min_eigen(Eigen::MatrixXd::Identity(3, 3)) == doctest::Approx(1.0));
  CHECK(std::abs(min_eigen(fixture::last_correlated_gram(0.5))) <= 1e-9);

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed, 3);
    Eigen::MatrixXd a = rng.normal_matrix(4, 4);
    a = (0.5 * (a + a.transpose())).eval();
    CHECK(std::abs(min_eigen(a) - oracle::min_eigen_bisection(a)) <= 1e-8);
  }

  Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(2, 2);
  asym(0, 1) = 1e-6;
  CHECK_THROWS_AS(min_eigen(asym), ArgumentError);
}
