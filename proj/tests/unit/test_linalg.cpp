#include <catch_amalgamated.hpp>

#include <cmath>

#include <Eigen/LU>

#include "rgqda/error.hpp"
#include "rgqda/linalg.hpp"
#include "rgqda/rng.hpp"
#include "test_util.hpp"

using namespace rgqda;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("cholesky of the identity") {
  const SpdMatrix s = cholesky(Matrix::Identity(3, 3));
  CHECK(s.chol().isApprox(Matrix::Identity(3, 3)));
  CHECK(s.log_det() == 0.0);
}

TEST_CASE("log-determinant of diagonal and 2x2 matrices") {
  CHECK_THAT(cholesky(2.0 * Matrix::Identity(3, 3)).log_det(), WithinRel(3.0 * std::log(2.0), 1e-14));
  Matrix m(2, 2);
  m << 4, 2, 2, 3;
  CHECK_THAT(cholesky(m).log_det(), WithinRel(std::log(8.0), 1e-14));
}

TEST_CASE("cholesky reconstructs the input") {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = test::random_matrix(5, 5, rng);
    const Matrix m = a * a.transpose() + 0.1 * Matrix::Identity(5, 5);
    const SpdMatrix s(m);
    const Matrix back = s.chol() * s.chol().transpose();
    CHECK((back - m).norm() <= 1e-10 * m.norm());
  }
}

TEST_CASE("log-determinant equals twice the log of the factor diagonal") {
  Matrix m(3, 3);
  m << 5, 1, 0.5, 1, 4, 0.2, 0.5, 0.2, 3;
  const SpdMatrix s(m);
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) sum += std::log(s.chol()(i, i));
  CHECK(s.log_det() == 2.0 * sum);
}

TEST_CASE("singular and indefinite matrices are rejected") {
  Matrix singular(2, 2);
  singular << 1, 1, 1, 1;
  CHECK_THROWS_MATCHES(cholesky(singular), Error, test::KindIs(ErrorKind::NotPositiveDefinite));
  Matrix indefinite(2, 2);
  indefinite << 1, 2, 2, 1;
  CHECK_THROWS_MATCHES(cholesky(indefinite), Error, test::KindIs(ErrorKind::NotPositiveDefinite));
  Matrix asym(2, 2);
  asym << 2, 1, 0, 2;
  CHECK_THROWS_MATCHES(cholesky(asym), Error, test::KindIs(ErrorKind::InvalidArgument));
}

TEST_CASE("pivot tolerance is relative to the largest diagonal entry") {
  // A well-conditioned matrix scaled down stays positive definite.
  CHECK_NOTHROW(cholesky(1e-30 * Matrix::Identity(3, 3)));
  Matrix nearly(2, 2);
  nearly << 1.0, 0.0, 0.0, 1e-11;
  CHECK_THROWS_MATCHES(cholesky(nearly), Error, test::KindIs(ErrorKind::NotPositiveDefinite));
}

TEST_CASE("ridge adds a multiple of the mean diagonal") {
  Matrix singular(2, 2);
  singular << 1, 1, 1, 1;
  const SpdMatrix s = SpdMatrix::with_ridge(singular, 0.5);
  Matrix expected = singular;
  expected.diagonal().array() += 0.5;
  CHECK(s.matrix().isApprox(expected));
}

TEST_CASE("mahalanobis distance examples") {
  Matrix m(2, 2);
  m << 4, 2, 2, 3;
  const SpdMatrix s(m);
  const Vector mu = Vector::Zero(2);
  CHECK(mahalanobis_sq(mu, mu, s) == 0.0);
  CHECK_THAT(mahalanobis_sq(Vector::Ones(2), mu, s), WithinRel(3.0 / 8.0, 1e-14));
  const SpdMatrix id(Matrix::Identity(3, 3));
  CHECK_THAT(mahalanobis_sq(Vector::Unit(3, 1), Vector::Zero(3), id), WithinRel(1.0, 1e-15));
}

TEST_CASE("mahalanobis distance rejects mismatched dimensions") {
  const SpdMatrix id(Matrix::Identity(3, 3));
  CHECK_THROWS_MATCHES(mahalanobis_sq(Vector::Zero(2), Vector::Zero(3), id), Error,
                       test::KindIs(ErrorKind::DimensionMismatch));
  CHECK_THROWS_MATCHES(mahalanobis_sq(Vector::Zero(3), Vector::Zero(2), id), Error,
                       test::KindIs(ErrorKind::DimensionMismatch));
}

TEST_CASE("row-wise distances match the single-point version") {
  Rng rng(5);
  const Matrix a = test::random_matrix(4, 4, rng);
  const SpdMatrix s(Matrix(a * a.transpose() + Matrix::Identity(4, 4)));
  const Matrix x = test::random_matrix(30, 4, rng);
  const Vector center = test::random_matrix(4, 1, rng);
  const Vector d2 = s.mahalanobis_sq_rows(x, center);
  for (int i = 0; i < 30; ++i) {
    CHECK_THAT(d2(i), WithinRel(mahalanobis_sq(x.row(i).transpose(), center, s), 1e-12));
  }
}

TEST_CASE("mahalanobis distance is non-negative and affine invariant") {
  Rng rng(17);
  for (int t = 0; t < 50; ++t) {
    const Matrix b = test::random_matrix(3, 3, rng);
    const Matrix sigma = b * b.transpose() + 0.5 * Matrix::Identity(3, 3);
    const Vector x = test::random_matrix(3, 1, rng);
    const Vector mu = test::random_matrix(3, 1, rng);
    const Matrix a = test::random_matrix(3, 3, rng) + 2.0 * Matrix::Identity(3, 3);
    const Vector shift = test::random_matrix(3, 1, rng);
    const double d = mahalanobis_sq(x, mu, SpdMatrix(sigma));
    CHECK(d >= 0.0);
    const Matrix mapped = a * sigma * a.transpose();
    const double da = mahalanobis_sq(a * x + shift, a * mu + shift, SpdMatrix(Matrix(0.5 * (mapped + mapped.transpose()))));
    CHECK_THAT(da, WithinRel(d, 1e-8));
  }
}

TEST_CASE("log-determinant under a linear map") {
  Rng rng(23);
  for (int t = 0; t < 50; ++t) {
    const Matrix b = test::random_matrix(4, 4, rng);
    const Matrix sigma = b * b.transpose() + Matrix::Identity(4, 4);
    const Matrix a = test::random_matrix(4, 4, rng) + 3.0 * Matrix::Identity(4, 4);
    Matrix mapped = a * sigma * a.transpose();
    mapped = 0.5 * (mapped + mapped.transpose());
    const double expected = SpdMatrix(sigma).log_det() + 2.0 * std::log(std::abs(a.determinant()));
    CHECK_THAT(SpdMatrix(mapped).log_det(), WithinAbs(expected, 1e-8));
  }
}

TEST_CASE("sample moments use divisor n") {
  Matrix x(3, 1);
  x << 0, 1, 2;
  const Moments m = sample_moments(x);
  CHECK_THAT(m.mean(0), WithinAbs(1.0, 1e-15));
  CHECK_THAT(m.scatter(0, 0), WithinRel(2.0 / 3.0, 1e-14));
}

TEST_CASE("weighted moments with unit weights equal sample moments") {
  Rng rng(3);
  const Matrix x = test::random_matrix(40, 3, rng);
  const std::vector<double> w(40, 1.0);
  const Moments a = sample_moments(x);
  const Moments b = weighted_moments(x, w);
  CHECK((a.mean - b.mean).norm() < 1e-13);
  CHECK((a.scatter - b.scatter).norm() < 1e-13);
}

TEST_CASE("weighted moments ignore zero-weight rows") {
  Rng rng(4);
  Matrix x = test::random_matrix(20, 2, rng);
  std::vector<double> w(20, 1.0);
  w[3] = 0.0;
  w[7] = 0.0;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < 20; ++i) {
    if (w[i] > 0) keep.push_back(i);
  }
  const Moments a = weighted_moments(x, w);
  const Moments b = sample_moments(select_rows(x, keep));
  CHECK((a.mean - b.mean).norm() < 1e-13);
  CHECK((a.scatter - b.scatter).norm() < 1e-13);
}
