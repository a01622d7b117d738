#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "ggmdl/errors.hpp"
#include "ggmdl/graph.hpp"
#include "ggmdl/matrix.hpp"

namespace ggmdl {

// Maximum-likelihood covariance completion under a conditional-independence
// graph: find sigma_check with
//   sigma_check_ij = s_ij        on the diagonal and on edges of g,
//   (sigma_check^{-1})_ij = 0    for every non-edge {i,j}.
//
// The solver is block coordinate ascent on the constrained log-likelihood,
// one vertex at a time: with W the current iterate and ne(j) the neighbors of
// vertex j, the column update solves the restricted system
//   W_{ne,ne} beta = s_{ne,j}
// and writes W_{-j,j} = W_{-j,ne} beta. That column is the exact maximizer
// given the rest of W: edge entries land on s_{ne,j} and the inverse acquires
// zeros at the column's non-edges; cycling to a fixed point yields the unique
// completion. Per-entry coordinate ascent (zeroing one K_ij at a time) reaches
// the same fixed point but needs thousands of sweeps on long-cycle graphs,
// where a correction must travel the cycle one entry per sweep.

struct CompletedCovariance {
  Matrix sigma_check;
  Graph graph;
  bool converged = true;
  bool ridge_applied = false;
  int sweeps = 0;
  double max_violation = 0.0;  // max |K_ij| over non-edges at exit
};

inline CompletedCovariance complete_covariance(const Matrix& s, const Graph& g,
                                               double tol = 1e-6,
                                               int max_iters = 500,
                                               const Matrix* warm_start = nullptr) {
  const auto pe = s.rows();
  if (pe != s.cols())
    throw DimensionMismatch("complete_covariance: matrix is not square");
  const int p = static_cast<int>(pe);
  if (p < 1) throw EmptyInput("complete_covariance: empty matrix");
  if (g.vertex_count() != p)
    throw DimensionMismatch("complete_covariance: graph size does not match");
  if (!s.allFinite())
    throw std::invalid_argument("complete_covariance: non-finite entries");
  if (!(tol > 0.0)) throw std::invalid_argument("complete_covariance: tol must be > 0");
  if (max_iters < 1)
    throw std::invalid_argument("complete_covariance: max_iters must be >= 1");

  Matrix S = symmetrize(s);
  if (S.diagonal().minCoeff() <= 0.0)
    throw SingularInput("complete_covariance: nonpositive diagonal entry");

  CompletedCovariance out;
  out.graph = g;

  // Ridge fallback for inputs that are singular or numerically near-singular
  // (e.g. running second moments built from fewer than p samples). A pivot
  // close to zero means LLT "succeeded" only by rounding luck, so those count
  // as failures too. The starting ridge is deliberately sizeable: completion
  // on a barely-regularized rank-deficient matrix is so ill-conditioned that
  // the fixed-point iteration stalls short of tolerance, and the wild
  // fill-in values it produces are useless downstream.
  {
    const double scale = S.trace() / p;
    const auto near_singular = [&](const Eigen::LLT<Matrix>& f) {
      return f.info() != Eigen::Success ||
             f.matrixLLT().diagonal().minCoeff() <=
                 std::sqrt(1e-10 * scale);
    };
    Eigen::LLT<Matrix> probe(S);
    if (near_singular(probe)) {
      double gamma = 0.1 * scale;
      bool fixed = false;
      for (int tries = 0; tries < 30; ++tries) {
        Matrix ridged = S;
        ridged.diagonal().array() += gamma;
        probe.compute(ridged);
        if (!near_singular(probe)) {
          S = std::move(ridged);
          fixed = true;
          break;
        }
        gamma *= 10.0;
      }
      if (!fixed)
        throw NotPositiveDefinite(
            "complete_covariance: input cannot be made positive definite");
      out.ridge_applied = true;
    }
  }

  std::vector<std::pair<int, int>> free_entries;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      if (!g.has_edge(i, j)) free_entries.emplace_back(i, j);

  Matrix sigma;
  if (warm_start != nullptr && warm_start->rows() == p && warm_start->cols() == p &&
      warm_start->allFinite()) {
    sigma = symmetrize(*warm_start);
    // constrained entries always come from the (possibly ridged) input
    sigma.diagonal() = S.diagonal();
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j)
        if (g.has_edge(i, j)) {
          sigma(i, j) = S(i, j);
          sigma(j, i) = S(j, i);
        }
    Eigen::LLT<Matrix> probe(sigma);
    if (probe.info() != Eigen::Success) sigma = S;
  } else {
    sigma = S;
  }

  if (free_entries.empty()) {
    out.sigma_check = std::move(sigma);
    return out;
  }

  std::vector<std::vector<int>> neighbors(p);
  for (const auto& [i, j] : g.edges()) {
    neighbors[i].push_back(j);
    neighbors[j].push_back(i);
  }

  Matrix K(p, p);
  Matrix last_factored = sigma;
  out.converged = false;

  for (int it = 0; it <= max_iters; ++it) {
    Eigen::LLT<Matrix> llt(sigma);
    if (llt.info() != Eigen::Success) {
      sigma = last_factored;  // roll back to the newest factorable iterate
      break;
    }
    last_factored = sigma;
    K = llt.solve(Matrix::Identity(p, p));
    K = symmetrize(K);

    double viol = 0.0;
    for (const auto& [i, j] : free_entries)
      viol = std::max(viol, std::abs(K(i, j)));
    out.max_violation = viol;
    out.sweeps = it;
    if (viol < tol) {
      out.converged = true;
      break;
    }
    if (it == max_iters) break;

    for (int j = 0; j < p; ++j) {
      const auto& ne = neighbors[j];
      const int d = static_cast<int>(ne.size());
      if (d == 0) {
        for (int i = 0; i < p; ++i)
          if (i != j) sigma(i, j) = sigma(j, i) = 0.0;
        continue;
      }
      Matrix wnn(d, d);
      Vector snj(d);
      for (int a = 0; a < d; ++a) {
        snj[a] = S(ne[a], j);
        for (int b = 0; b < d; ++b) wnn(a, b) = sigma(ne[a], ne[b]);
      }
      Eigen::LLT<Matrix> wl(wnn);
      if (wl.info() != Eigen::Success) continue;  // leave column for next sweep
      const Vector beta = wl.solve(snj);
      for (int i = 0; i < p; ++i) {
        if (i == j) continue;
        double v = 0.0;
        for (int a = 0; a < d; ++a) v += sigma(i, ne[a]) * beta[a];
        sigma(i, j) = sigma(j, i) = v;
      }
      // pin the constrained entries exactly (the solve hits them to roundoff)
      for (int a = 0; a < d; ++a) sigma(ne[a], j) = sigma(j, ne[a]) = snj[a];
    }
  }

  out.sigma_check = std::move(sigma);
  return out;
}

}  // namespace ggmdl
