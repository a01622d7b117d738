#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "common/oracles.hpp"
#include "ggmdl/matrix.hpp"

using namespace ggmdl;
using Catch::Approx;

TEST_CASE("cholesky of identity is identity") {
  const Matrix i3 = Matrix::Identity(3, 3);
  const SpdFactor f = cholesky(i3);
  REQUIRE((f.matrix_l() - i3).cwiseAbs().maxCoeff() == Approx(0.0).margin(1e-14));
}

TEST_CASE("cholesky 2x2 hand expansion") {
  Matrix m(2, 2);
  m << 4, 2, 2, 3;
  const SpdFactor f = cholesky(m);
  CHECK(f.matrix_l()(0, 0) == Approx(2.0));
  CHECK(f.matrix_l()(1, 0) == Approx(1.0));
  CHECK(f.matrix_l()(1, 1) == Approx(std::sqrt(2.0)));
  CHECK(f.matrix_l()(0, 1) == Approx(0.0).margin(1e-15));
}

TEST_CASE("cholesky rejects indefinite input") {
  Matrix m(2, 2);
  m << 1, 2, 2, 1;  // eigenvalues 3 and -1
  REQUIRE_THROWS_AS(cholesky(m), NotPositiveDefinite);
}

TEST_CASE("cholesky rejects asymmetric input") {
  Matrix m(2, 2);
  m << 1, 0.5, 0.1, 1;
  REQUIRE_THROWS_AS(cholesky(m), std::invalid_argument);
}

TEST_CASE("log_det_spd closed forms") {
  CHECK(log_det_spd(cholesky(Matrix::Identity(5, 5))) == Approx(0.0).margin(1e-14));
  Matrix d(2, 2);
  d << 2, 0, 0, 2;
  CHECK(log_det_spd(cholesky(d)) == Approx(std::log(4.0)));
  Matrix m(2, 2);
  m << 4, 2, 2, 3;
  CHECK(log_det_spd(cholesky(m)) == Approx(std::log(8.0)));
}

TEST_CASE("log_det_spd matches characteristic-polynomial oracle for p <= 3") {
  std::mt19937 gen(1234);
  for (int trial = 0; trial < 50; ++trial) {
    const int p = 1 + trial % 3;
    const Matrix m = oracles::random_spd(p, gen, 1.0);
    const double expect = oracles::log_det_charpoly(m);
    REQUIRE(log_det_spd(cholesky(m)) == Approx(expect).margin(1e-9));
  }
}

TEST_CASE("solve_spd examples") {
  const SpdFactor id = cholesky(Matrix::Identity(3, 3));
  Vector b(3);
  b << 1, -2, 3;
  REQUIRE((solve_spd(id, b) - b).norm() == Approx(0.0).margin(1e-14));

  Matrix d(2, 2);
  d << 2, 0, 0, 4;
  Vector b2(2);
  b2 << 2, 4;
  const Vector x2 = solve_spd(cholesky(d), b2);
  CHECK(x2(0) == Approx(1.0));
  CHECK(x2(1) == Approx(1.0));

  Matrix m(2, 2);
  m << 4, 2, 2, 3;
  Vector b3(2);
  b3 << 6, 5;
  const Vector x3 = solve_spd(cholesky(m), b3);
  CHECK(x3(0) == Approx(1.0));
  CHECK(x3(1) == Approx(1.0));
}

TEST_CASE("solve_spd rejects dimension mismatch") {
  const SpdFactor id = cholesky(Matrix::Identity(3, 3));
  Vector b(2);
  b << 1, 2;
  REQUIRE_THROWS_AS(solve_spd(id, b), DimensionMismatch);
}

TEST_CASE("solve round-trip on random SPD matrices") {
  std::mt19937 gen(99);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 30; ++trial) {
    const int p = 2 + trial % 7;
    Matrix b(p, p);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) b(i, j) = nd(gen);
    const Matrix m = symmetrize(b.transpose() * b + p * Matrix::Identity(p, p));
    Vector rhs(p);
    for (int i = 0; i < p; ++i) rhs(i) = nd(gen);
    const Vector x = solve_spd(cholesky(m), rhs);
    REQUIRE((m * x - rhs).norm() <= 1e-8 * rhs.norm());
  }
}

TEST_CASE("cholesky factor reconstructs the source") {
  std::mt19937 gen(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int p = 2 + trial % 6;
    const Matrix m = oracles::random_spd(p, gen, 2.0);
    const SpdFactor f = cholesky(m);
    const Matrix back = f.matrix_l() * f.matrix_l().transpose();
    REQUIRE((back - m).norm() <= 1e-8 * m.norm());
  }
}

TEST_CASE("sample_covariance outer products") {
  Matrix one(1, 2);
  one << 1, 2;
  const Matrix s1 = sample_covariance(one);
  CHECK(s1(0, 0) == Approx(1.0));
  CHECK(s1(0, 1) == Approx(2.0));
  CHECK(s1(1, 1) == Approx(4.0));

  Matrix two(2, 2);
  two << 1, 0, -1, 0;
  const Matrix s2 = sample_covariance(two);
  CHECK(s2(0, 0) == Approx(1.0));
  CHECK(s2(0, 1) == Approx(0.0).margin(1e-15));
  CHECK(s2(1, 1) == Approx(0.0).margin(1e-15));

  const Matrix zeros = Matrix::Zero(4, 3);
  REQUIRE(sample_covariance(zeros).cwiseAbs().maxCoeff() == Approx(0.0).margin(1e-15));
}

TEST_CASE("sample_covariance divides by N and does not center") {
  // Model is zero-mean: a constant sample must produce its outer product,
  // not a zero matrix.
  Matrix data(4, 2);
  data << 1, 1, 1, 1, 1, 1, 1, 1;
  const Matrix s = sample_covariance(data);
  CHECK(s(0, 0) == Approx(1.0));
  CHECK(s(0, 1) == Approx(1.0));
}

TEST_CASE("sample_covariance is symmetric") {
  std::mt19937 gen(5);
  std::normal_distribution<double> nd;
  Matrix data(13, 5);
  for (int i = 0; i < data.rows(); ++i)
    for (int j = 0; j < data.cols(); ++j) data(i, j) = nd(gen);
  const Matrix s = sample_covariance(data);
  REQUIRE((s - s.transpose()).cwiseAbs().maxCoeff() == Approx(0.0).margin(1e-14));
}
