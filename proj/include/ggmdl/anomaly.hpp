#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ggmdl/codec.hpp"
#include "ggmdl/completion.hpp"
#include "ggmdl/matrix.hpp"
#include "ggmdl/mdl.hpp"

namespace ggmdl {

// Codelength-based anomaly detection for batches of observations. A typical
// model is trained once; a test batch is anomalous when describing it from
// scratch (graph + prequentially coded data + parameter overhead) is cheaper
// than describing it with the typical model.

struct TypicalModel {
  CoderKind kind = CoderKind::IID;
  Graph graph;
  Matrix sigma_check;   // completed covariance of the training data
  TrainedCoder coder;   // graph coder fitted to `graph`
  double best_lambda = 0.0;
  bool ridge_applied = false;

  const SpdFactor& factor() const {
    if (!factor_) factor_.emplace(cholesky(sigma_check, 1e-6));
    return *factor_;
  }

 private:
  mutable std::optional<SpdFactor> factor_;
};

inline TypicalModel train_typical(const Matrix& train, CoderKind kind,
                                  const GlassoConfig& cfg = {}, int grid_size = 50,
                                  PredictiveOptions opt = {}) {
  const SelectionResult sel = select_model(train, grid_size, kind, cfg, opt);
  TypicalModel model;
  model.kind = kind;
  model.graph = sel.best().graph;
  model.best_lambda = sel.best().lambda;
  CompletedCovariance comp =
      complete_covariance(sample_covariance(train), model.graph,
                          opt.completion_tol, opt.completion_max_iters);
  model.sigma_check = std::move(comp.sigma_check);
  model.ridge_applied = comp.ridge_applied || sel.any_ridge();
  model.coder = train_coder(model.graph, kind);
  model.factor();  // validate now rather than at first scoring
  return model;
}

// Bits to describe a test batch with the frozen typical model: the typical
// graph under the trained coder, plus each sample under N(0, sigma_check).
inline double typical_codelength(const Matrix& test, const TypicalModel& model) {
  if (test.rows() > 0 && test.cols() != model.sigma_check.rows())
    throw IncompatibleDimension("typical_codelength: variable count differs from model");
  double bits = codelength_with_trained(model.graph, model.coder);
  const SpdFactor& f = model.factor();
  for (Eigen::Index i = 0; i < test.rows(); ++i)
    bits += gaussian_code_bits(test.row(i).transpose(), f);
  return bits;
}

struct AtypicalCodelength {
  double bits = 0.0;            // minimum over the grid, overhead included
  double parameter_bits = 0.0;  // coder parameter overhead at this batch size
  SelectionResult sweep;        // per-lambda table (bits exclude the overhead)
};

// Bits to describe a test batch from scratch: sweep the lambda grid on the
// batch itself, and charge graph bits + prequential data bits + the overhead
// of the graph coder's parameters at the batch's sample count.
inline AtypicalCodelength atypical_codelength(const Matrix& test, CoderKind kind,
                                              const GlassoConfig& cfg = {},
                                              int grid_size = 50,
                                              PredictiveOptions opt = {}) {
  if (test.rows() < 2)
    throw std::invalid_argument("atypical_codelength: need at least 2 samples");
  AtypicalCodelength out;
  out.sweep = select_model(test, grid_size, kind, cfg, opt);
  const TrainedCoder c = train_coder(out.sweep.best().graph, kind);
  out.parameter_bits = parameter_overhead(c, test.rows());
  out.bits = out.sweep.best().total_bits + out.parameter_bits;
  return out;
}

struct AtypicalityScore {
  double typical_bits = 0.0;
  double atypical_bits = 0.0;
  double score = 0.0;  // atypical - typical; negative favors "anomalous"
  bool anomalous = false;
  SelectionResult sweep;
};

inline AtypicalityScore atypicality(const Matrix& test, const TypicalModel& model,
                                    const GlassoConfig& cfg = {}, int grid_size = 50,
                                    double threshold = 0.0,
                                    PredictiveOptions opt = {}) {
  AtypicalityScore s;
  s.typical_bits = typical_codelength(test, model);
  AtypicalCodelength a = atypical_codelength(test, model.kind, cfg, grid_size, opt);
  s.atypical_bits = a.bits;
  s.score = s.atypical_bits - s.typical_bits;
  s.anomalous = s.score < threshold;
  s.sweep = std::move(a.sweep);
  return s;
}

// Area under the ROC curve by pairwise comparison (Mann-Whitney), ties
// counted 1/2. Callers rank anomalous batches as positives with scores
// oriented so that higher means more anomalous (i.e. pass the negated
// atypicality scores).
inline double roc_auc(const std::vector<double>& positives,
                      const std::vector<double>& negatives) {
  if (positives.empty() || negatives.empty())
    throw EmptyInput("roc_auc: need at least one score on each side");
  double wins = 0.0;
  for (double sp : positives) {
    for (double sn : negatives) {
      if (sp > sn) wins += 1.0;
      else if (sp == sn) wins += 0.5;
    }
  }
  return wins / (static_cast<double>(positives.size()) * negatives.size());
}

inline std::vector<double> negated(const std::vector<double>& xs) {
  std::vector<double> out(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) out[i] = -xs[i];
  return out;
}

}  // namespace ggmdl
