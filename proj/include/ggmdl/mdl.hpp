#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "ggmdl/codec.hpp"
#include "ggmdl/completion.hpp"
#include "ggmdl/glasso.hpp"
#include "ggmdl/graph.hpp"
#include "ggmdl/matrix.hpp"

namespace ggmdl {

// Ideal codelength of one observation under N(0, Sigma), in bits:
//   [p ln(2pi) + ln det(Sigma) + x^T Sigma^{-1} x] / (2 ln 2).
// The fixed-point rounding residual of an implementable arithmetic coder is a
// data-independent constant and is dropped throughout.
inline double gaussian_code_bits(const Vector& x, const SpdFactor& sigma_factor) {
  if (x.size() != sigma_factor.dim())
    throw DimensionMismatch("gaussian_code_bits: dimension mismatch");
  const double p = static_cast<double>(x.size());
  const double quad = x.dot(solve_spd(sigma_factor, x));
  const double nats = p * std::log(2.0 * std::numbers::pi) +
                      log_det_spd(sigma_factor) + quad;
  return nats / (2.0 * std::numbers::ln2);
}

struct PredictiveOptions {
  int warmup = -1;        // < 0: min(10, ceil(n/10))
  int update_every = -1;  // < 0: max(1, ceil(n/20))
  double completion_tol = 1e-6;
  int completion_max_iters = 500;
  // Partial-correlation magnitude above which a fitted precision entry counts
  // as an edge when candidate graphs are read off the regularization path.
  double edge_threshold = kPartialThreshold;
};

inline int default_warmup(int n) { return std::min(10, (n + 9) / 10); }
inline int default_update_every(int n) { return std::max(1, (n + 19) / 20); }

struct PredictiveBits {
  double total_bits = 0.0;
  std::vector<double> per_sample_bits;
  bool completion_all_converged = true;
  bool ridge_applied = false;
};

// Prequential data codelength of the rows of `data` under the model family
// "Gaussian, Markov with respect to g". Sample i is coded with parameters
// estimated from samples 0..i-1 only: the first `warmup` samples under
// N(0, I), later samples under the completed covariance of the running
// second-moment matrix, refreshed every `update_every` samples.
inline PredictiveBits predictive_data_bits(const Matrix& data, const Graph& g,
                                           PredictiveOptions opt = {}) {
  const int n = static_cast<int>(data.rows());
  const int p = static_cast<int>(data.cols());
  if (n < 1) throw EmptyInput("predictive_data_bits: no samples");
  if (p < 1) throw EmptyInput("predictive_data_bits: no variables");
  if (g.vertex_count() != p)
    throw DimensionMismatch("predictive_data_bits: graph size does not match");
  if (!data.allFinite())
    throw std::invalid_argument("predictive_data_bits: non-finite entries");

  const int warmup = opt.warmup >= 0 ? opt.warmup : default_warmup(n);
  const int update_every =
      opt.update_every >= 1 ? opt.update_every : default_update_every(n);

  PredictiveBits out;
  out.per_sample_bits.resize(n);

  const SpdFactor identity = cholesky(Matrix(Matrix::Identity(p, p)));
  Matrix moment = Matrix::Zero(p, p);  // sum of x x^T over coded samples

  std::optional<SpdFactor> factor;
  Matrix last_sigma;

  for (int i = 0; i < n; ++i) {
    const Vector x = data.row(i).transpose();
    if (i < warmup) {
      out.per_sample_bits[i] = gaussian_code_bits(x, identity);
    } else {
      if ((i - warmup) % update_every == 0) {
        const Matrix s_prefix = symmetrize(moment / static_cast<double>(i));
        CompletedCovariance comp = complete_covariance(
            s_prefix, g, opt.completion_tol, opt.completion_max_iters,
            last_sigma.size() > 0 ? &last_sigma : nullptr);
        if (!comp.converged) out.completion_all_converged = false;
        if (comp.ridge_applied) out.ridge_applied = true;
        factor.emplace(cholesky(comp.sigma_check, 1e-6));
        last_sigma = std::move(comp.sigma_check);
      }
      out.per_sample_bits[i] = gaussian_code_bits(x, *factor);
    }
    moment.noalias() += x * x.transpose();
    out.total_bits += out.per_sample_bits[i];
  }
  return out;
}

struct DescriptionLength {
  double graph_bits = 0.0;
  double data_bits = 0.0;
  double total_bits = 0.0;
  bool completion_all_converged = true;
  bool ridge_applied = false;
};

inline DescriptionLength total_description_length(const Matrix& data, const Graph& g,
                                                  CoderKind kind,
                                                  PredictiveOptions opt = {}) {
  DescriptionLength out;
  out.graph_bits = codelength(g, kind);
  PredictiveBits pred = predictive_data_bits(data, g, opt);
  out.data_bits = pred.total_bits;
  out.total_bits = out.graph_bits + out.data_bits;
  out.completion_all_converged = pred.completion_all_converged;
  out.ridge_applied = pred.ridge_applied;
  return out;
}

struct SelectionRecord {
  double lambda = 0.0;
  Graph graph;
  double graph_bits = 0.0;
  double data_bits = 0.0;
  double total_bits = 0.0;
  bool estimator_converged = true;
  bool completion_all_converged = true;
  bool ridge_applied = false;
};

struct SelectionResult {
  std::vector<SelectionRecord> records;  // grid order, lambda descending
  int best_index = -1;
  CoderKind kind = CoderKind::IID;
  bool degenerate_grid = false;

  const SelectionRecord& best() const { return records.at(best_index); }
  bool any_ridge() const {
    for (const auto& r : records)
      if (r.ridge_applied) return true;
    return false;
  }
};

namespace detail {

// The prequential data term depends on the graph only, so records whose
// estimates share an edge set share one evaluation.
class PredictiveCache {
 public:
  explicit PredictiveCache(const Matrix& data, PredictiveOptions opt)
      : data_(data), opt_(opt) {}

  const PredictiveBits& bits_for(const Graph& g) {
    auto key = g.edges();
    auto it = cache_.find(key);
    if (it == cache_.end())
      it = cache_.emplace(std::move(key), predictive_data_bits(data_, g, opt_)).first;
    return it->second;
  }

 private:
  const Matrix& data_;
  PredictiveOptions opt_;
  std::map<std::vector<std::pair<int, int>>, PredictiveBits> cache_;
};

inline int argmin_total(const std::vector<SelectionRecord>& records) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(records.size()); ++i)
    if (records[i].total_bits < records[best].total_bits) best = i;
  return best;  // strict comparison: ties go to the earlier (larger) lambda
}

}  // namespace detail

// Two-part MDL model selection over a lambda grid: for each candidate graph
// along the regularization path, total bits = graph codelength + prequential
// data codelength; the minimizer is returned (ties toward larger lambda).
//
// Candidate graphs are estimated on the correlation scale: the precision
// support is invariant under diagonal rescaling, but on the correlation scale
// the penalty grid [lambda_max/10, lambda_max] is scale-free and path entries
// are comparable partial correlations. The data codelength itself is computed
// on the raw scale (it is the codelength of the actual observations).
//
// With explicit_lambdas the given values are swept instead of the automatic
// grid; grid_size == 1 without explicit values sweeps {lambda_max}.
inline SelectionResult select_model(const Matrix& data, int grid_size, CoderKind kind,
                                    const GlassoConfig& cfg = {},
                                    PredictiveOptions opt = {},
                                    const std::vector<double>* explicit_lambdas = nullptr) {
  if (data.rows() < 2)
    throw std::invalid_argument("select_model: need at least 2 samples");
  const Matrix s = sample_covariance(data);
  const Matrix r = correlation_matrix(s);

  SelectionResult result;
  result.kind = kind;

  std::vector<double> lambdas;
  if (explicit_lambdas != nullptr && !explicit_lambdas->empty()) {
    lambdas = *explicit_lambdas;
  } else {
    if (grid_size < 1) throw std::invalid_argument("select_model: grid size must be >= 1");
    const double lm = lambda_max(r);
    if (lm <= 0.0) {
      // nothing to shrink: report the empty graph as the selected model
      result.degenerate_grid = true;
      SelectionRecord rec;
      rec.lambda = 0.0;
      rec.graph = Graph(static_cast<int>(s.rows()));
      rec.graph_bits = codelength(rec.graph, kind);
      PredictiveBits pred = predictive_data_bits(data, rec.graph, opt);
      rec.data_bits = pred.total_bits;
      rec.total_bits = rec.graph_bits + rec.data_bits;
      rec.completion_all_converged = pred.completion_all_converged;
      rec.ridge_applied = pred.ridge_applied;
      result.records.push_back(std::move(rec));
      result.best_index = 0;
      return result;
    }
    lambdas = grid_size == 1 ? std::vector<double>{lm} : lambda_grid(r, grid_size).values;
  }

  const std::vector<LambdaFit> fits = sweep_lambda_path(r, lambdas, cfg);
  detail::PredictiveCache cache(data, opt);

  result.records.reserve(fits.size());
  for (const LambdaFit& fit : fits) {
    SelectionRecord rec;
    rec.lambda = fit.lambda;
    rec.graph = extract_graph_partial(fit.estimate, opt.edge_threshold);
    rec.estimator_converged = fit.estimate.converged;
    rec.graph_bits = codelength(rec.graph, kind);
    const PredictiveBits& pred = cache.bits_for(rec.graph);
    rec.data_bits = pred.total_bits;
    rec.total_bits = rec.graph_bits + rec.data_bits;
    rec.completion_all_converged = pred.completion_all_converged;
    rec.ridge_applied = pred.ridge_applied;
    result.records.push_back(std::move(rec));
  }
  result.best_index = detail::argmin_total(result.records);
  return result;
}

}  // namespace ggmdl
