#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "ggmdl/errors.hpp"

namespace ggmdl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline Matrix symmetrize(const Matrix& m) {
  return 0.5 * (m + m.transpose());
}

inline bool is_symmetric(const Matrix& m, double tol = 1e-10) {
  if (m.rows() != m.cols()) return false;
  if (m.rows() == 0) return true;
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

// Cholesky factor of a symmetric positive definite matrix. Holds L with
// m = L * L^T, L lower triangular with strictly positive diagonal.
class SpdFactor {
 public:
  const Matrix& matrix_l() const { return l_; }
  Eigen::Index dim() const { return l_.rows(); }

 private:
  explicit SpdFactor(Matrix l) : l_(std::move(l)) {}
  friend SpdFactor cholesky(const Matrix& m, double sym_tol);
  Matrix l_;
};

inline SpdFactor cholesky(const Matrix& m, double sym_tol = 1e-10) {
  if (m.rows() != m.cols())
    throw DimensionMismatch("cholesky: matrix is not square");
  if (m.rows() == 0) throw EmptyInput("cholesky: empty matrix");
  if (!m.allFinite())
    throw std::invalid_argument("cholesky: matrix has non-finite entries");
  if (!is_symmetric(m, sym_tol))
    throw std::invalid_argument("cholesky: matrix is not symmetric");
  Eigen::LLT<Matrix> llt(symmetrize(m));
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("cholesky: matrix is not positive definite");
  return SpdFactor(Matrix(llt.matrixL()));
}

// log det(m) in nats, via 2 * sum(log diag(L))
inline double log_det_spd(const SpdFactor& f) {
  return 2.0 * f.matrix_l().diagonal().array().log().sum();
}

inline Vector solve_spd(const SpdFactor& f, const Vector& b) {
  if (b.size() != f.dim())
    throw DimensionMismatch("solve_spd: right-hand side has wrong length");
  Vector y = f.matrix_l().triangularView<Eigen::Lower>().solve(b);
  return f.matrix_l().transpose().triangularView<Eigen::Upper>().solve(y);
}

inline Matrix solve_spd(const SpdFactor& f, const Matrix& b) {
  if (b.rows() != f.dim())
    throw DimensionMismatch("solve_spd: right-hand side has wrong row count");
  Matrix y = f.matrix_l().triangularView<Eigen::Lower>().solve(b);
  return f.matrix_l().transpose().triangularView<Eigen::Upper>().solve(y);
}

inline Matrix spd_inverse(const SpdFactor& f) {
  return solve_spd(f, Matrix(Matrix::Identity(f.dim(), f.dim())));
}

// Second-moment matrix S = (1/n) * sum_i x_i x_i^T over the rows of data.
// No mean subtraction; callers wanting centered input subtract column means
// beforehand.
inline Matrix sample_covariance(const Matrix& data) {
  if (data.rows() < 1)
    throw std::invalid_argument("sample_covariance: need at least one sample");
  if (data.cols() < 1)
    throw std::invalid_argument("sample_covariance: need at least one column");
  if (!data.allFinite())
    throw std::invalid_argument("sample_covariance: non-finite entries");
  Matrix s = (data.transpose() * data) / static_cast<double>(data.rows());
  return symmetrize(s);
}

}  // namespace ggmdl
