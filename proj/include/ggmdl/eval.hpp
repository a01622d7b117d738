#pragma once

#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ggmdl/glasso.hpp"
#include "ggmdl/graph.hpp"
#include "ggmdl/matrix.hpp"
#include "ggmdl/mdl.hpp"
#include "ggmdl/rng.hpp"
#include "ggmdl/synthetic.hpp"

namespace ggmdl {

struct F1Report {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long true_edges = 0;
  long estimated_edges = 0;
  long correct_edges = 0;
};

// Edge-set F1 of an estimated graph against the truth. Conventions: empty
// numerators give precision/recall 0, and f1 = 0 when both are 0.
inline F1Report f1_score(const Graph& estimated, const Graph& truth) {
  if (estimated.vertex_count() != truth.vertex_count())
    throw DimensionMismatch("f1_score: vertex counts differ");
  F1Report r;
  r.true_edges = truth.edge_count();
  r.estimated_edges = estimated.edge_count();
  for (const auto& [i, j] : estimated.edges())
    if (truth.has_edge(i, j)) ++r.correct_edges;
  r.precision = r.estimated_edges > 0
                    ? static_cast<double>(r.correct_edges) / r.estimated_edges
                    : 0.0;
  r.recall = r.true_edges > 0
                 ? static_cast<double>(r.correct_edges) / r.true_edges
                 : 0.0;
  r.f1 = (r.precision + r.recall) > 0.0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

namespace detail {

// Rescale columns to unit sample variance (the precision support is invariant
// under diagonal scaling); all selectors operate on this scale so their
// penalty grids and thresholds are comparable across problems.
inline Matrix standardize_columns(const Matrix& data) {
  const Matrix s = sample_covariance(data);
  Matrix out = data;
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    if (!(s(j, j) > 0.0))
      throw SingularInput("standardize_columns: a column has zero variance");
    out.col(j) /= std::sqrt(s(j, j));
  }
  return out;
}

// Baseline selectors reuse SelectionRecord with criterion semantics:
// data_bits carries the fit term, graph_bits the complexity penalty, and
// total_bits their sum (the selection criterion). `r` is the matrix the fits
// were computed on (the correlation matrix of the data).
inline SelectionResult score_information_criterion(
    const Matrix& r, int n, const std::vector<LambdaFit>& fits, double tau,
    double extra_log_p_factor) {
  const int p = static_cast<int>(r.rows());
  SelectionResult result;
  result.records.reserve(fits.size());
  for (const LambdaFit& fit : fits) {
    SelectionRecord rec;
    rec.lambda = fit.lambda;
    rec.graph = extract_graph_partial(fit.estimate, tau);
    rec.estimator_converged = fit.estimate.converged;
    const double k = static_cast<double>(rec.graph.edge_count());
    double fit_term;
    try {
      const double ld = log_det_spd(cholesky(fit.estimate.omega, 1e-8));
      fit_term = n * ((r * fit.estimate.omega).trace() - ld);
    } catch (const NotPositiveDefinite&) {
      fit_term = std::numeric_limits<double>::infinity();
      rec.estimator_converged = false;
    }
    rec.data_bits = fit_term;
    rec.graph_bits = k * std::log(static_cast<double>(n)) +
                     extra_log_p_factor * k * std::log(static_cast<double>(p));
    rec.total_bits = rec.data_bits + rec.graph_bits;
    result.records.push_back(std::move(rec));
  }
  result.best_index = argmin_total(result.records);
  return result;
}

// Per-lambda cross-validation scores on already-standardized data: sum over
// folds of tr(S_val Omega_train) - log det Omega_train.
inline void cv_fold_scores(const Matrix& data_std, const std::vector<double>& lambdas,
                           const GlassoConfig& cfg, int folds,
                           std::vector<double>& score, std::vector<bool>& failed) {
  const int n = static_cast<int>(data_std.rows());
  const int k = static_cast<int>(lambdas.size());
  score.assign(k, 0.0);
  failed.assign(k, false);
  for (int f = 0; f < folds; ++f) {
    const int lo = static_cast<int>(static_cast<long>(f) * n / folds);
    const int hi = static_cast<int>(static_cast<long>(f + 1) * n / folds);
    const int n_val = hi - lo;
    const int n_train = n - n_val;
    Matrix train(n_train, data_std.cols());
    if (lo > 0) train.topRows(lo) = data_std.topRows(lo);
    if (hi < n) train.bottomRows(n - hi) = data_std.bottomRows(n - hi);
    const Matrix s_train = sample_covariance(train);
    const Matrix s_val = sample_covariance(data_std.middleRows(lo, n_val));
    const std::vector<LambdaFit> fits = sweep_lambda_path(s_train, lambdas, cfg);
    for (int a = 0; a < k; ++a) {
      try {
        const double ld = log_det_spd(cholesky(fits[a].estimate.omega, 1e-8));
        score[a] += (s_val * fits[a].estimate.omega).trace() - ld;
      } catch (const NotPositiveDefinite&) {
        failed[a] = true;
      }
    }
  }
}

}  // namespace detail

// BIC over a lambda grid: n * [tr(R Omega) - log det Omega] + k log n, with R
// the sample correlation matrix and k the selected edge count (diagonal
// excluded). Ties go to larger lambda.
inline SelectionResult select_bic(const Matrix& data, const std::vector<double>& lambdas,
                                  const GlassoConfig& cfg = {},
                                  double edge_threshold = kPartialThreshold) {
  if (lambdas.empty()) throw EmptyInput("select_bic: empty grid");
  const Matrix r = correlation_matrix(sample_covariance(data));
  const std::vector<LambdaFit> fits = sweep_lambda_path(r, lambdas, cfg);
  return detail::score_information_criterion(r, static_cast<int>(data.rows()), fits,
                                             edge_threshold, 0.0);
}

// Extended BIC: BIC + 4 * gamma * k * log p.
inline SelectionResult select_ebic(const Matrix& data, const std::vector<double>& lambdas,
                                   const GlassoConfig& cfg = {}, double gamma = 0.5,
                                   double edge_threshold = kPartialThreshold) {
  if (lambdas.empty()) throw EmptyInput("select_ebic: empty grid");
  if (gamma < 0.0) throw std::invalid_argument("select_ebic: gamma must be >= 0");
  const Matrix r = correlation_matrix(sample_covariance(data));
  const std::vector<LambdaFit> fits = sweep_lambda_path(r, lambdas, cfg);
  return detail::score_information_criterion(r, static_cast<int>(data.rows()), fits,
                                             edge_threshold, 4.0 * gamma);
}

// K-fold cross-validation with contiguous-block folds (the samples are already
// i.i.d., so no shuffling). Columns are standardized once on the full sample;
// per lambda, the fold score is the held-out negative Gaussian log-likelihood
// tr(S_val Omega_train) - log det Omega_train, averaged across folds; the
// reported graphs come from full-data fits on the same grid. folds == n gives
// leave-one-out.
inline SelectionResult select_cv(const Matrix& data, const std::vector<double>& lambdas,
                                 const GlassoConfig& cfg = {}, int folds = 5,
                                 double edge_threshold = kPartialThreshold) {
  if (lambdas.empty()) throw EmptyInput("select_cv: empty grid");
  const int n = static_cast<int>(data.rows());
  if (folds < 2) throw std::invalid_argument("select_cv: need at least 2 folds");
  if (n < folds) throw std::invalid_argument("select_cv: more folds than samples");

  const Matrix data_std = detail::standardize_columns(data);
  const int k = static_cast<int>(lambdas.size());
  std::vector<double> score;
  std::vector<bool> any_failed;
  detail::cv_fold_scores(data_std, lambdas, cfg, folds, score, any_failed);

  const std::vector<LambdaFit> full_fits =
      sweep_lambda_path(sample_covariance(data_std), lambdas, cfg);
  SelectionResult result;
  result.records.reserve(k);
  for (int a = 0; a < k; ++a) {
    SelectionRecord rec;
    rec.lambda = lambdas[a];
    rec.graph = extract_graph_partial(full_fits[a].estimate, edge_threshold);
    rec.estimator_converged = full_fits[a].estimate.converged && !any_failed[a];
    rec.data_bits = any_failed[a] ? std::numeric_limits<double>::infinity()
                                  : score[a] / folds;
    rec.graph_bits = 0.0;
    rec.total_bits = rec.data_bits;
    result.records.push_back(std::move(rec));
  }
  result.best_index = detail::argmin_total(result.records);
  return result;
}

enum class Method { CV, BIC, EBIC, DegreeMdl, IidMdl, TriangleMdl };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::CV: return "cv";
    case Method::BIC: return "bic";
    case Method::EBIC: return "ebic";
    case Method::DegreeMdl: return "degree";
    case Method::IidMdl: return "iid";
    case Method::TriangleMdl: return "triangle";
  }
  return "?";
}

inline Method method_from_name(const std::string& s) {
  if (s == "cv") return Method::CV;
  if (s == "bic") return Method::BIC;
  if (s == "ebic") return Method::EBIC;
  if (s == "degree") return Method::DegreeMdl;
  if (s == "iid") return Method::IidMdl;
  if (s == "triangle") return Method::TriangleMdl;
  throw std::invalid_argument("unknown method \"" + s +
                              "\" (cv|bic|ebic|degree|iid|triangle)");
}

struct SizeSpec {
  int p = 0;
  int n = 0;
};

struct BenchmarkOptions {
  int grid_size = 50;
  int trials = 10;
  std::uint64_t seed = 1;
  int jobs = 1;
  GlassoConfig glasso;
  PredictiveOptions predictive;
  int cv_folds = 5;
  double ebic_gamma = 0.5;
  std::function<void(const std::string&)> progress;  // may be empty
};

struct BenchmarkRow {
  StructureKind kind = StructureKind::AR1;
  int p = 0;
  int n = 0;
  Method method = Method::BIC;
  double mean_f1 = 0.0;
  int trials_done = 0;
  int failures = 0;
};

struct TrialDetail {
  StructureKind kind;
  int p, n, trial;
  Method method;
  double f1 = 0.0;
  double selected_lambda = 0.0;
  int selected_edges = 0;
  bool failed = false;
};

namespace detail {

struct TrialOutcome {
  std::vector<TrialDetail> details;  // one per method, method order
  bool failed = false;
};

// One synthetic trial: draw a structure and data, sweep the shared lambda grid
// once, and let every requested selector consume the same grid/fits.
inline TrialOutcome run_trial(StructureKind kind, SizeSpec size,
                              const std::vector<Method>& methods, int trial,
                              const BenchmarkOptions& opt) {
  TrialOutcome out;
  out.details.resize(methods.size());
  const std::uint64_t kind_id = static_cast<std::uint64_t>(kind) + 1;
  for (size_t m = 0; m < methods.size(); ++m) {
    auto& d = out.details[m];
    d.kind = kind;
    d.p = size.p;
    d.n = size.n;
    d.trial = trial;
    d.method = methods[m];
  }
  try {
    const std::uint64_t structure_seed =
        derive_seed(opt.seed, kind_id, size.p, size.n, trial, 0xA);
    const std::uint64_t data_seed =
        derive_seed(opt.seed, kind_id, size.p, size.n, trial, 0xB);
    const GroundTruth gt = make_structure(kind, size.p, structure_seed);
    const Matrix data = sample_mvn(gt, size.n, data_seed);
    const Matrix r = correlation_matrix(sample_covariance(data));
    const double tau = opt.predictive.edge_threshold;

    const double lm = lambda_max(r);
    std::vector<double> lambdas;
    if (lm > 0.0) lambdas = lambda_grid(r, opt.grid_size).values;

    std::vector<LambdaFit> fits;
    std::vector<Graph> graphs;  // shared thresholded pattern per grid point
    if (!lambdas.empty()) {
      fits = sweep_lambda_path(r, lambdas, opt.glasso);
      graphs.reserve(fits.size());
      for (const LambdaFit& fit : fits)
        graphs.push_back(extract_graph_partial(fit.estimate, tau));
    }

    // shared prequential cache across the three MDL coders (the data term
    // depends only on the graph)
    PredictiveCache cache(data, opt.predictive);

    // CV fold scores are computed once even when several method lists ask
    const int n = static_cast<int>(data.rows());
    std::vector<double> cv_score;
    std::vector<bool> cv_failed;
    bool cv_ready = false;

    for (size_t m = 0; m < methods.size(); ++m) {
      auto& d = out.details[m];
      Graph selected(size.p);
      double sel_lambda = 0.0;
      if (!lambdas.empty()) {
        switch (methods[m]) {
          case Method::BIC:
          case Method::EBIC: {
            const double factor = methods[m] == Method::BIC ? 0.0 : 4.0 * opt.ebic_gamma;
            int best = 0;
            double best_total = std::numeric_limits<double>::infinity();
            for (size_t a = 0; a < fits.size(); ++a) {
              double fit_term;
              try {
                fit_term = n * ((r * fits[a].estimate.omega).trace() -
                                log_det_spd(cholesky(fits[a].estimate.omega, 1e-8)));
              } catch (const NotPositiveDefinite&) {
                continue;
              }
              const double k = static_cast<double>(graphs[a].edge_count());
              const double total = fit_term + k * std::log(static_cast<double>(n)) +
                                   factor * k * std::log(static_cast<double>(size.p));
              if (total < best_total) {
                best_total = total;
                best = static_cast<int>(a);
              }
            }
            selected = graphs[best];
            sel_lambda = fits[best].lambda;
            break;
          }
          case Method::CV: {
            if (!cv_ready) {
              const Matrix data_std = standardize_columns(data);
              cv_fold_scores(data_std, lambdas, opt.glasso, opt.cv_folds, cv_score,
                             cv_failed);
              cv_ready = true;
            }
            int best = 0;
            double best_total = std::numeric_limits<double>::infinity();
            for (size_t a = 0; a < lambdas.size(); ++a) {
              if (cv_failed[a]) continue;
              if (cv_score[a] < best_total) {
                best_total = cv_score[a];
                best = static_cast<int>(a);
              }
            }
            selected = graphs[best];
            sel_lambda = fits[best].lambda;
            break;
          }
          case Method::DegreeMdl:
          case Method::IidMdl:
          case Method::TriangleMdl: {
            const CoderKind ck = methods[m] == Method::DegreeMdl ? CoderKind::Degree
                                 : methods[m] == Method::IidMdl  ? CoderKind::IID
                                                                 : CoderKind::Triangle;
            int best = 0;
            double best_total = std::numeric_limits<double>::infinity();
            for (size_t a = 0; a < fits.size(); ++a) {
              const double total = codelength(graphs[a], ck) +
                                   cache.bits_for(graphs[a]).total_bits;
              if (total < best_total) {
                best_total = total;
                best = static_cast<int>(a);
              }
            }
            selected = graphs[best];
            sel_lambda = fits[best].lambda;
            break;
          }
        }
      }
      d.f1 = f1_score(selected, gt.graph).f1;
      d.selected_lambda = sel_lambda;
      d.selected_edges = selected.edge_count();
    }
  } catch (const std::exception&) {
    out.failed = true;
    for (auto& d : out.details) d.failed = true;
  }
  return out;
}

}  // namespace detail

// Monte Carlo comparison of the selectors over the synthetic structure
// family. All methods of a trial consume the identical lambda grid and glasso
// fits. Trials run independently (optionally across opt.jobs threads); the
// aggregation order is fixed, so results do not depend on the thread count.
inline std::vector<BenchmarkRow> run_benchmark(const std::vector<StructureKind>& kinds,
                                               const std::vector<SizeSpec>& sizes,
                                               const std::vector<Method>& methods,
                                               const BenchmarkOptions& opt,
                                               std::vector<TrialDetail>* details = nullptr) {
  if (kinds.empty() || sizes.empty() || methods.empty())
    throw EmptyInput("run_benchmark: kinds, sizes and methods must be nonempty");
  if (opt.trials < 1) throw std::invalid_argument("run_benchmark: trials must be >= 1");

  std::vector<BenchmarkRow> rows;
  for (StructureKind kind : kinds) {
    for (SizeSpec size : sizes) {
      std::vector<detail::TrialOutcome> outcomes(opt.trials);
      const int jobs = std::max(1, opt.jobs);
      if (jobs == 1) {
        for (int t = 0; t < opt.trials; ++t)
          outcomes[t] = detail::run_trial(kind, size, methods, t, opt);
      } else {
        std::atomic<int> next{0};
        auto worker = [&]() {
          for (;;) {
            const int t = next.fetch_add(1);
            if (t >= opt.trials) return;
            outcomes[t] = detail::run_trial(kind, size, methods, t, opt);
          }
        };
        std::vector<std::thread> pool;
        const int nthreads = std::min(jobs, opt.trials);
        pool.reserve(nthreads);
        for (int w = 0; w < nthreads; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
      }

      for (size_t m = 0; m < methods.size(); ++m) {
        BenchmarkRow row;
        row.kind = kind;
        row.p = size.p;
        row.n = size.n;
        row.method = methods[m];
        double sum = 0.0;
        for (int t = 0; t < opt.trials; ++t) {
          if (outcomes[t].failed) {
            ++row.failures;
            continue;
          }
          sum += outcomes[t].details[m].f1;
          ++row.trials_done;
        }
        row.mean_f1 = row.trials_done > 0 ? sum / row.trials_done : 0.0;
        rows.push_back(row);
      }
      if (details != nullptr)
        for (int t = 0; t < opt.trials; ++t)
          for (const auto& d : outcomes[t].details) details->push_back(d);
      if (opt.progress)
        opt.progress(std::string(structure_name(kind)) + " p=" + std::to_string(size.p) +
                     " n=" + std::to_string(size.n) + " done");
    }
  }
  return rows;
}

}  // namespace ggmdl
