#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/SVD>

#include "gnnlg/linalg.h"
#include "support/test_util.h"

namespace gnnlg {
namespace {

using testing::random_matrix;
using testing::random_symmetric;

void expect_valid_svd(const Matrix& a, const SvdResult& r, SvdMode mode) {
  const Eigen::Index k = std::min(a.rows(), a.cols());
  ASSERT_EQ(r.s.size(), k);
  if (mode == SvdMode::kFull) {
    ASSERT_EQ(r.u.rows(), a.rows());
    ASSERT_EQ(r.u.cols(), a.rows());
    ASSERT_EQ(r.v.rows(), a.cols());
    ASSERT_EQ(r.v.cols(), a.cols());
  } else {
    ASSERT_EQ(r.u.cols(), k);
    ASSERT_EQ(r.v.cols(), k);
  }
  Matrix sigma = Matrix::Zero(r.u.cols(), r.v.cols());
  for (Eigen::Index i = 0; i < k; ++i) sigma(i, i) = r.s(i);
  const double scale = std::max(1.0, a.norm());
  EXPECT_LE((r.u * sigma * r.v.transpose() - a).norm(), 1e-10 * scale);
  EXPECT_LE((r.u.transpose() * r.u - Matrix::Identity(r.u.cols(), r.u.cols())).norm(), 1e-10);
  EXPECT_LE((r.v.transpose() * r.v - Matrix::Identity(r.v.cols(), r.v.cols())).norm(), 1e-10);
  for (Eigen::Index i = 0; i < k; ++i) {
    EXPECT_GE(r.s(i), 0.0);
    if (i > 0) EXPECT_LE(r.s(i), r.s(i - 1));
  }
}

TEST(Svd, Identity) {
  const SvdResult r = svd(Matrix::Identity(3, 3));
  EXPECT_EQ(r.s, Vector::Ones(3));
  expect_valid_svd(Matrix::Identity(3, 3), r, SvdMode::kFull);
}

TEST(Svd, NegativeDiagonalSignGoesIntoFactors) {
  Matrix a(2, 2);
  a << 3, 0, 0, -2;
  const SvdResult r = svd(a);
  EXPECT_NEAR(r.s(0), 3.0, 1e-15);
  EXPECT_NEAR(r.s(1), 2.0, 1e-15);
  expect_valid_svd(a, r, SvdMode::kFull);
}

TEST(Svd, RandomShapesBothModes) {
  std::mt19937_64 rng(1);
  for (auto [m, n] : {std::pair{16, 25}, {25, 16}, {1, 7}, {7, 1}, {10, 10}, {3, 40}}) {
    const Matrix a = random_matrix(rng, m, n, 50.0);
    expect_valid_svd(a, svd(a, SvdMode::kFull), SvdMode::kFull);
    expect_valid_svd(a, svd(a, SvdMode::kThin), SvdMode::kThin);
  }
}

TEST(Svd, RankDeficientAndZeroInputs) {
  std::mt19937_64 rng(2);
  const Matrix low_rank = random_matrix(rng, 16, 2) * random_matrix(rng, 2, 25);
  const SvdResult r = svd(low_rank);
  expect_valid_svd(low_rank, r, SvdMode::kFull);
  EXPECT_LE(r.s(2), 1e-12 * r.s(0));

  const Matrix zero = Matrix::Zero(4, 6);
  const SvdResult z = svd(zero);
  expect_valid_svd(zero, z, SvdMode::kFull);
  EXPECT_EQ(z.s.sum(), 0.0);

  const Matrix constant = Matrix::Constant(16, 25, 3.5);
  const SvdResult c = svd(constant);
  expect_valid_svd(constant, c, SvdMode::kFull);
  EXPECT_NEAR(c.s(0), 3.5 * 20.0, 1e-12);
}

TEST(Svd, AgreesWithEigenJacobiSvd) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = random_matrix(rng, 16, 25);
    const Eigen::JacobiSVD<Matrix> reference(a);
    const Vector s = svd(a).s;
    EXPECT_LE((s - reference.singularValues()).norm(), 1e-12 * reference.singularValues()(0));
  }
}

TEST(Svd, SquaredSingularValuesAreGramEigenvalues) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = random_matrix(rng, 16, 25);
    const Vector s = svd(a).s;
    const Vector lambda = sym_eig(a.transpose() * a).lambda;  // 25 values, ascending
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      const double expected = lambda(lambda.size() - 1 - i);
      EXPECT_NEAR(s(i) * s(i), expected, 1e-8 * std::max(1.0, expected));
    }
  }
}

TEST(Svd, RejectsNonFiniteInput) {
  Matrix a = Matrix::Ones(2, 2);
  a(1, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(svd(a), LinalgError);
  a(1, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(sym_eig(a), LinalgError);
}

void expect_valid_eig(const Matrix& a, const EigResult& r) {
  const double scale = std::max(1.0, a.norm());
  EXPECT_LE((r.q * r.lambda.asDiagonal() * r.q.transpose() - a).norm(), 1e-10 * scale);
  EXPECT_LE((r.q.transpose() * r.q - Matrix::Identity(a.rows(), a.rows())).norm(), 1e-10);
  for (Eigen::Index i = 1; i < r.lambda.size(); ++i) EXPECT_GE(r.lambda(i), r.lambda(i - 1));
}

TEST(SymEig, DiagonalMatrix) {
  const Matrix a = Vector(Eigen::Vector3d(3, 1, 2)).asDiagonal();
  const EigResult r = sym_eig(a);
  EXPECT_EQ(r.lambda, Vector(Eigen::Vector3d(1, 2, 3)));
  expect_valid_eig(a, r);
  // Columns of Q are signed unit vectors.
  EXPECT_NEAR(r.q.cwiseAbs().colwise().sum().sum(), 3.0, 1e-15);
}

TEST(SymEig, TwoNodeLaplacian) {
  Matrix l(2, 2);
  l << 1, -1, -1, 1;
  const EigResult r = sym_eig(l);
  EXPECT_NEAR(r.lambda(0), 0.0, 1e-15);
  EXPECT_NEAR(r.lambda(1), 2.0, 1e-15);
  expect_valid_eig(l, r);
}

TEST(SymEig, RandomSymmetricMatchesEigenSolver) {
  std::mt19937_64 rng(5);
  for (int n : {1, 2, 5, 16, 25}) {
    const Matrix a = random_symmetric(rng, n, 10.0);
    const EigResult r = sym_eig(a);
    expect_valid_eig(a, r);
    const Eigen::SelfAdjointEigenSolver<Matrix> reference(a);
    EXPECT_LE((r.lambda - reference.eigenvalues()).norm(), 1e-11 * std::max(1.0, a.norm()));
  }
}

TEST(SymEig, LaplaciansArePositiveSemidefinite) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> weight(0.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial;
    Matrix l = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double w = trial % 2 ? weight(rng) : (j == i + 1 ? 1.0 : 0.0);
        l(i, j) = l(j, i) = -w;
        l(i, i) += w;
        l(j, j) += w;
      }
    }
    EXPECT_GE(sym_eig(l).lambda(0), -1e-8);
  }
}

}  // namespace
}  // namespace gnnlg
