#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "ggmdl/errors.hpp"
#include "ggmdl/graph.hpp"
#include "ggmdl/matrix.hpp"
#include "ggmdl/rng.hpp"

namespace ggmdl {

// Closed family of ground-truth precision structures used by the benchmarks.
enum class StructureKind { Cycle, AR1, AR2, ER, Hub };

inline const char* structure_name(StructureKind k) {
  switch (k) {
    case StructureKind::Cycle: return "cycle";
    case StructureKind::AR1: return "ar1";
    case StructureKind::AR2: return "ar2";
    case StructureKind::ER: return "er";
    case StructureKind::Hub: return "hub";
  }
  return "?";
}

inline StructureKind structure_from_name(const std::string& s) {
  if (s == "cycle") return StructureKind::Cycle;
  if (s == "ar1") return StructureKind::AR1;
  if (s == "ar2") return StructureKind::AR2;
  if (s == "er") return StructureKind::ER;
  if (s == "hub") return StructureKind::Hub;
  throw std::invalid_argument("unknown structure \"" + s +
                              "\" (cycle|ar1|ar2|er|hub)");
}

struct GroundTruth {
  StructureKind kind = StructureKind::AR1;
  Matrix omega;
  Graph graph;  // off-diagonal support of omega
  std::uint64_t seed = 0;
};

namespace detail {

inline Graph support_graph(const Matrix& omega) {
  const int p = static_cast<int>(omega.rows());
  Graph g(p);
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      if (omega(i, j) != 0.0) g.add_edge(i, j);
  return g;
}

// weight drawn uniformly from (-hi,-lo) union (lo,hi)
inline double signed_uniform(Rng& rng, double lo, double hi) {
  const double mag = rng.uniform(lo, hi);
  return rng.uniform() < 0.5 ? -mag : mag;
}

inline double min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace detail

// Deterministic in (kind, p, seed); random kinds draw from the substream
// derive_seed(seed, kind_id, p). The returned omega is validated positive
// definite by Cholesky.
inline GroundTruth make_structure(StructureKind kind, int p, std::uint64_t seed) {
  if (p < 3) throw std::invalid_argument("make_structure: need p >= 3");

  GroundTruth gt;
  gt.kind = kind;
  gt.seed = seed;
  Matrix omega = Matrix::Zero(p, p);

  switch (kind) {
    case StructureKind::Cycle: {
      omega.diagonal().setOnes();
      for (int i = 0; i + 1 < p; ++i) omega(i, i + 1) = omega(i + 1, i) = 0.5;
      omega(0, p - 1) = omega(p - 1, 0) = 0.4;
      break;
    }
    case StructureKind::AR1: {
      omega.diagonal().setOnes();
      for (int i = 0; i + 1 < p; ++i) omega(i, i + 1) = omega(i + 1, i) = 0.5;
      break;
    }
    case StructureKind::AR2: {
      omega.diagonal().setOnes();
      for (int i = 0; i + 1 < p; ++i) omega(i, i + 1) = omega(i + 1, i) = 0.5;
      for (int i = 0; i + 2 < p; ++i) omega(i, i + 2) = omega(i + 2, i) = 0.25;
      break;
    }
    case StructureKind::ER: {
      const std::uint64_t kind_id = static_cast<std::uint64_t>(kind) + 1;
      for (std::uint64_t attempt = 0;; ++attempt) {
        Rng rng(derive_seed(seed, kind_id, static_cast<std::uint64_t>(p), attempt));
        omega.setZero();
        const double edge_prob = 2.0 / p;
        bool any = false;
        for (int i = 0; i < p; ++i) {
          for (int j = i + 1; j < p; ++j) {
            if (rng.uniform() < edge_prob) {
              const double w = rng.uniform(0.4, 0.8);
              omega(i, j) = omega(j, i) = w;
              any = true;
            }
          }
        }
        if (any) break;  // all-zero draws are retried on the next substream
      }
      const double delta = std::abs(detail::min_eigenvalue(omega)) + 0.05;
      omega.diagonal().array() += delta;
      break;
    }
    case StructureKind::Hub: {
      const std::uint64_t kind_id = static_cast<std::uint64_t>(kind) + 1;
      Rng rng(derive_seed(seed, kind_id, static_cast<std::uint64_t>(p)));
      Matrix a = Matrix::Zero(p, p);
      // background: every off-diagonal cell of the asymmetric pattern matrix
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
          if (i != j && rng.uniform() < 0.01) a(i, j) = 1.0;
      // two distinct hubs; their rows and columns fill in with prob 0.7,
      // taking the union with the background pattern
      const int h1 = static_cast<int>(rng.below(p));
      int h2 = static_cast<int>(rng.below(p - 1));
      if (h2 >= h1) ++h2;
      for (int h : {h1, h2}) {
        for (int j = 0; j < p; ++j) {
          if (j != h && rng.uniform() < 0.7) a(h, j) = 1.0;
          if (j != h && rng.uniform() < 0.7) a(j, h) = 1.0;
        }
      }
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
          if (i != j && a(i, j) != 0.0)
            a(i, j) = detail::signed_uniform(rng, 0.25, 0.75);
      omega = 0.5 * (a + a.transpose());
      const double delta = std::abs(detail::min_eigenvalue(omega)) + 0.05;
      omega.diagonal().array() += delta;
      break;
    }
  }

  gt.graph = detail::support_graph(omega);
  gt.omega = std::move(omega);
  cholesky(gt.omega);  // enforce the positive-definiteness invariant
  return gt;
}

// n rows of x ~ N(0, omega^{-1}) via x = L^{-T} z with omega = L L^T and z
// standard normal. Deterministic in (gt dimensions, n, seed); draws come from
// the substream derive_seed(seed, 0x5A11).
inline Matrix sample_mvn(const GroundTruth& gt, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_mvn: need n >= 1");
  const int p = static_cast<int>(gt.omega.rows());
  const SpdFactor f = cholesky(gt.omega);
  Rng rng(derive_seed(seed, 0x5A11ull));
  Matrix data(n, p);
  Vector z(p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) z[j] = rng.normal();
    data.row(i) =
        f.matrix_l().transpose().triangularView<Eigen::Upper>().solve(z).transpose();
  }
  return data;
}

}  // namespace ggmdl
