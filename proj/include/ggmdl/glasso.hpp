#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ggmdl/errors.hpp"
#include "ggmdl/graph.hpp"
#include "ggmdl/matrix.hpp"

namespace ggmdl {

// L1-penalized Gaussian precision estimation:
//   maximize  log det(Omega) - tr(S * Omega) - lambda * sum_{i != j} |Omega_ij|
// The diagonal is unpenalized, so at any stationary point the fitted
// covariance W = Omega^{-1} satisfies W_ii = S_ii and |W_ij - S_ij| <= lambda.

struct GlassoConfig {
  double lambda = 0.1;
  int max_outer_iters = 200;
  double outer_tol = 1e-4;   // mean absolute change of W per full sweep
  int max_inner_iters = 250;
  double inner_tol = 1e-7;   // max coefficient change in the inner lasso
  double zero_threshold = 1e-6;  // |Omega_ij| > tau counts as an edge
};

struct PrecisionEstimate {
  Matrix omega;  // estimated precision
  Matrix sigma;  // fitted covariance W (approximate inverse of omega)
  bool converged = true;
  int outer_iters = 0;
};

inline double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

inline double lambda_max(const Matrix& s) {
  const auto p = s.rows();
  if (p != s.cols()) throw DimensionMismatch("lambda_max: matrix is not square");
  if (p < 2) throw std::invalid_argument("lambda_max: need at least 2 variables");
  double lm = 0.0;
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = i + 1; j < p; ++j)
      lm = std::max(lm, std::abs(s(i, j)));
  return lm;
}

struct LambdaGrid {
  std::vector<double> values;  // descending
  bool degenerate = false;     // lambda_max(s) == 0
};

// k log-spaced values from lambda_max(s) down to lambda_max(s)/10 inclusive.
inline LambdaGrid lambda_grid(const Matrix& s, int k) {
  if (k < 2) throw std::invalid_argument("lambda_grid: need at least 2 points");
  LambdaGrid grid;
  const double lm = lambda_max(s);
  if (lm <= 0.0) {
    grid.values.assign(k, 0.0);
    grid.degenerate = true;
    return grid;
  }
  grid.values.resize(k);
  for (int i = 0; i < k; ++i)
    grid.values[i] = lm * std::pow(0.1, static_cast<double>(i) / (k - 1));
  grid.values.front() = lm;
  grid.values.back() = lm * 0.1;
  return grid;
}

// Block coordinate descent over columns (one row/column of W per step), with
// the column subproblem solved by cyclic coordinate descent on the lasso
//   min_beta 1/2 beta^T W11 beta - s12^T beta + lambda |beta|_1,
// then w12 <- W11 beta and the precision column recovered from the Schur
// complement. W starts at S with off-diagonals shrunk by 0.95 (keeps the
// start positive definite when S is merely positive semidefinite).
inline PrecisionEstimate glasso_fit(const Matrix& s_in, const GlassoConfig& cfg,
                                    const PrecisionEstimate* warm = nullptr) {
  const auto pe = s_in.rows();
  if (pe != s_in.cols()) throw DimensionMismatch("glasso_fit: matrix is not square");
  const int p = static_cast<int>(pe);
  if (p < 2) throw std::invalid_argument("glasso_fit: need at least 2 variables");
  if (!(cfg.lambda >= 0.0)) throw std::invalid_argument("glasso_fit: lambda must be >= 0");
  if (!s_in.allFinite()) throw std::invalid_argument("glasso_fit: non-finite entries");
  if (!is_symmetric(s_in, 1e-8))
    throw std::invalid_argument("glasso_fit: matrix is not symmetric");

  const Matrix S = symmetrize(s_in);
  if (S.diagonal().minCoeff() <= 0.0)
    throw SingularInput("glasso_fit: nonpositive diagonal entry");

  // The problem is convex, so any positive-definite start reaches the same
  // optimum; a neighboring lambda's solution gets there in far fewer sweeps.
  const bool use_warm = warm != nullptr && warm->sigma.rows() == p &&
                        warm->sigma.cols() == p && warm->omega.rows() == p &&
                        warm->omega.cols() == p && warm->sigma.allFinite() &&
                        warm->omega.allFinite();

  Matrix W;
  Matrix Omega;
  if (use_warm) {
    W = warm->sigma;
    W.diagonal() = S.diagonal();  // the unpenalized-diagonal stationarity
    Omega = warm->omega;
  } else {
    W = 0.95 * S;
    W.diagonal() = S.diagonal();

    Eigen::LLT<Matrix> llt(W);
    if (llt.info() != Eigen::Success) {
      // S had off-scale structure; nudge the diagonal minimally
      W.diagonal().array() += 1e-10 * S.diagonal().mean();
      llt.compute(W);
      if (llt.info() != Eigen::Success)
        throw SingularInput("glasso_fit: cannot factor the initial covariance");
    }
    Omega = llt.solve(Matrix::Identity(p, p));
  }

  const int q = p - 1;
  Matrix w11(q, q);
  Vector s12(q), beta(q), v(q);
  std::vector<int> idx(q);

  PrecisionEstimate est;
  est.converged = false;
  bool ill_conditioned = false;
  const double denom_floor = 1e-12;

  for (int outer = 1; outer <= cfg.max_outer_iters; ++outer) {
    double change_sum = 0.0;
    for (int j = 0; j < p; ++j) {
      for (int k = 0, t = 0; k < p; ++k)
        if (k != j) idx[t++] = k;
      for (int a = 0; a < q; ++a) {
        s12[a] = S(idx[a], j);
        for (int b = 0; b < q; ++b) w11(a, b) = W(idx[a], idx[b]);
      }
      const double ojj = Omega(j, j);
      for (int a = 0; a < q; ++a)
        beta[a] = ojj != 0.0 ? -Omega(idx[a], j) / ojj : 0.0;
      v.noalias() = w11 * beta;

      for (int inner = 0; inner < cfg.max_inner_iters; ++inner) {
        double max_delta = 0.0;
        for (int a = 0; a < q; ++a) {
          const double z = s12[a] - v[a] + w11(a, a) * beta[a];
          const double nb = soft_threshold(z, cfg.lambda) / w11(a, a);
          const double d = nb - beta[a];
          if (d != 0.0) {
            v.noalias() += d * w11.col(a);
            beta[a] = nb;
            max_delta = std::max(max_delta, std::abs(d));
          }
        }
        if (max_delta < cfg.inner_tol) break;
      }

      for (int a = 0; a < q; ++a) {
        change_sum += 2.0 * std::abs(v[a] - W(idx[a], j));
        W(idx[a], j) = v[a];
        W(j, idx[a]) = v[a];
      }
      double denom = W(j, j) - v.dot(beta);
      if (denom < denom_floor * W(j, j)) {
        denom = denom_floor * W(j, j);
        ill_conditioned = true;
      }
      const double new_ojj = 1.0 / denom;
      Omega(j, j) = new_ojj;
      for (int a = 0; a < q; ++a) {
        Omega(idx[a], j) = -beta[a] * new_ojj;
        Omega(j, idx[a]) = -beta[a] * new_ojj;
      }
    }
    est.outer_iters = outer;
    if (change_sum / (static_cast<double>(p) * p) < cfg.outer_tol) {
      est.converged = true;
      break;
    }
  }
  if (ill_conditioned) est.converged = false;

  est.omega = symmetrize(Omega);
  est.sigma = std::move(W);
  return est;
}

// Penalized objective; requires omega positive definite.
inline double glasso_objective(const Matrix& s, const Matrix& omega, double lambda) {
  const double ld = log_det_spd(cholesky(omega, 1e-8));
  double l1_off = 0.0;
  for (Eigen::Index i = 0; i < omega.rows(); ++i)
    for (Eigen::Index j = 0; j < omega.cols(); ++j)
      if (i != j) l1_off += std::abs(omega(i, j));
  return ld - (s * omega).trace() - lambda * l1_off;
}

// Conditional-independence pattern read-off: edge {i,j} iff |omega_ij| > tau.
inline Graph extract_graph(const Matrix& omega, double tau = 1e-6) {
  if (omega.rows() != omega.cols())
    throw DimensionMismatch("extract_graph: matrix is not square");
  if (tau < 0.0) throw std::invalid_argument("extract_graph: tau must be >= 0");
  const int p = static_cast<int>(omega.rows());
  Graph g(p);
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      if (std::max(std::abs(omega(i, j)), std::abs(omega(j, i))) > tau)
        g.add_edge(i, j);
  return g;
}

inline Graph extract_graph(const PrecisionEstimate& est, double tau = 1e-6) {
  return extract_graph(est.omega, tau);
}

// Partial-correlation magnitude below which an off-diagonal entry is treated
// as conditional independence when reading a graph off a fitted precision
// matrix. Raw-|omega| thresholds are scale-dependent; this one is not.
inline constexpr double kPartialThreshold = 0.15;

// Scale-free pattern read-off: edge {i,j} iff |omega_ij|/sqrt(omega_ii*omega_jj),
// i.e. the estimated partial correlation magnitude, exceeds tau.
inline Graph extract_graph_partial(const Matrix& omega, double tau = kPartialThreshold) {
  if (omega.rows() != omega.cols())
    throw DimensionMismatch("extract_graph_partial: matrix is not square");
  if (tau < 0.0) throw std::invalid_argument("extract_graph_partial: tau must be >= 0");
  const int p = static_cast<int>(omega.rows());
  Graph g(p);
  for (int i = 0; i < p; ++i) {
    if (!(omega(i, i) > 0.0))
      throw SingularInput("extract_graph_partial: nonpositive diagonal");
  }
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) {
      const double denom = std::sqrt(omega(i, i) * omega(j, j));
      const double mag =
          std::max(std::abs(omega(i, j)), std::abs(omega(j, i))) / denom;
      if (mag > tau) g.add_edge(i, j);
    }
  return g;
}

inline Graph extract_graph_partial(const PrecisionEstimate& est,
                                   double tau = kPartialThreshold) {
  return extract_graph_partial(est.omega, tau);
}

// Rescale a covariance to unit diagonal (correlation matrix). The precision
// matrix of the rescaled problem has the same off-diagonal support, so graph
// estimation on the correlation scale is exact while the penalty grid becomes
// scale-free.
inline Matrix correlation_matrix(const Matrix& s) {
  if (s.rows() != s.cols())
    throw DimensionMismatch("correlation_matrix: matrix is not square");
  const Eigen::Index p = s.rows();
  Vector d(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    if (!(s(i, i) > 0.0))
      throw SingularInput("correlation_matrix: nonpositive diagonal entry");
    d[i] = std::sqrt(s(i, i));
  }
  Matrix r(p, p);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      r(i, j) = i == j ? 1.0 : s(i, j) / (d[i] * d[j]);
  return r;
}

struct LambdaFit {
  double lambda = 0.0;
  PrecisionEstimate estimate;
  Graph graph;
};

// Fit every lambda of a grid in grid order, warm-starting each fit from its
// predecessor. The order is fixed by the grid itself, so results never depend
// on how callers schedule surrounding work.
inline std::vector<LambdaFit> sweep_lambda_path(const Matrix& s,
                                                const std::vector<double>& lambdas,
                                                const GlassoConfig& cfg = {}) {
  std::vector<LambdaFit> fits;
  fits.reserve(lambdas.size());
  const PrecisionEstimate* warm = nullptr;
  for (double lm : lambdas) {
    GlassoConfig c = cfg;
    c.lambda = lm;
    LambdaFit fit;
    fit.lambda = lm;
    fit.estimate = glasso_fit(s, c, warm);
    fit.graph = extract_graph(fit.estimate, cfg.zero_threshold);
    fits.push_back(std::move(fit));
    warm = &fits.back().estimate;
  }
  return fits;
}

}  // namespace ggmdl
