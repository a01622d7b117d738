#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "common/oracles.hpp"
#include "ggmdl/eval.hpp"
#include "ggmdl/mdl.hpp"
#include "ggmdl/synthetic.hpp"

using namespace ggmdl;
using Catch::Approx;

namespace {

Graph path_graph(int p) {
  Graph g(p);
  for (int i = 0; i + 1 < p; ++i) g.add_edge(i, i + 1);
  return g;
}

Graph complete_graph(int p) {
  Graph g(p);
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) g.add_edge(i, j);
  return g;
}

}  // namespace

TEST_CASE("gaussian_code_bits closed forms") {
  const double log2_2pi = std::log2(2.0 * std::numbers::pi);

  Vector zero1(1);
  zero1 << 0.0;
  const SpdFactor i1 = cholesky(Matrix::Identity(1, 1));
  CHECK(gaussian_code_bits(zero1, i1) == Approx(0.5 * log2_2pi).epsilon(1e-12));
  CHECK(gaussian_code_bits(zero1, i1) == Approx(1.3257).margin(5e-5));

  for (int p : {2, 5, 9}) {
    Vector z = Vector::Zero(p);
    const SpdFactor ip = cholesky(Matrix::Identity(p, p));
    REQUIRE(gaussian_code_bits(z, ip) == Approx(p * 0.5 * log2_2pi).epsilon(1e-12));
  }

  Vector one(1);
  one << 1.0;
  CHECK(gaussian_code_bits(one, i1) ==
        Approx(0.5 * log2_2pi + 0.5 / std::numbers::ln2).epsilon(1e-12));
  CHECK(gaussian_code_bits(one, i1) == Approx(2.047).margin(5e-4));
}

TEST_CASE("gaussian_code_bits rejects dimension mismatch") {
  Vector x(2);
  x << 1, 2;
  REQUIRE_THROWS_AS(gaussian_code_bits(x, cholesky(Matrix::Identity(3, 3))),
                    DimensionMismatch);
}

TEST_CASE("warmup-only data codelength is graph independent") {
  const GroundTruth gt = make_structure(StructureKind::AR1, 6, 5);
  const Matrix data = sample_mvn(gt, 4, 9);  // N = warmup for N<10
  PredictiveOptions opt;
  opt.warmup = 4;
  opt.update_every = 1;
  // N == warmup: post requires N >= warmup + 1, so use warmup = N - 1 and
  // compare prefixes instead: first `warmup` contributions are identical
  opt.warmup = 3;
  const PredictiveBits a = predictive_data_bits(data, Graph(6), opt);
  const PredictiveBits b = predictive_data_bits(data, complete_graph(6), opt);
  const PredictiveBits c = predictive_data_bits(data, path_graph(6), opt);
  for (int i = 0; i < 3; ++i) {
    REQUIRE(a.per_sample_bits[i] == Approx(b.per_sample_bits[i]).margin(1e-12));
    REQUIRE(a.per_sample_bits[i] == Approx(c.per_sample_bits[i]).margin(1e-12));
  }
  // and they equal the N(0, I) code bits exactly
  const SpdFactor id = cholesky(Matrix::Identity(6, 6));
  for (int i = 0; i < 3; ++i) {
    const Vector x = data.row(i).transpose();
    REQUIRE(a.per_sample_bits[i] == Approx(gaussian_code_bits(x, id)).margin(1e-12));
  }
}

TEST_CASE("prequential validity: future samples never affect past contributions") {
  std::mt19937 gen(2024);
  std::normal_distribution<double> nd;
  const int p = 5, n = 40;
  const GroundTruth gt = make_structure(StructureKind::AR1, p, 77);
  const Matrix data = sample_mvn(gt, n, 78);
  const Graph g = path_graph(p);

  PredictiveOptions opt;  // defaults: warmup 4, update_every 2 at n=40
  const PredictiveBits base = predictive_data_bits(data, g, opt);

  for (int check = 0; check < 20; ++check) {
    const int cut = 1 + check % (n - 1);  // mutate samples at index >= cut
    Matrix mutated = data;
    for (int i = cut; i < n; ++i)
      for (int j = 0; j < p; ++j) mutated(i, j) = 10.0 * nd(gen);
    const PredictiveBits after = predictive_data_bits(mutated, g, opt);
    for (int i = 0; i < cut; ++i)
      REQUIRE(after.per_sample_bits[i] == base.per_sample_bits[i]);  // exact
  }
}

TEST_CASE("white noise: empty graph codes cheaper than complete graph") {
  // Monte Carlo: p=10, N=200 draws from N(0, I); the complete graph wastes
  // bits chasing noise covariances.
  int empty_wins = 0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    GroundTruth iid;
    iid.kind = StructureKind::ER;
    iid.omega = Matrix::Identity(10, 10);
    iid.graph = Graph(10);
    const Matrix data = sample_mvn(iid, 200, 1000 + s);
    const double empty = predictive_data_bits(data, Graph(10)).total_bits;
    const double full = predictive_data_bits(data, complete_graph(10)).total_bits;
    if (empty <= full) ++empty_wins;
  }
  REQUIRE(empty_wins >= 18);  // >= 90% of seeds
}

TEST_CASE("true structure codes cheaper than the empty graph") {
  int wins = 0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    const GroundTruth gt = make_structure(StructureKind::AR1, 10, 400 + s);
    const Matrix data = sample_mvn(gt, 200, 500 + s);
    const double truth = predictive_data_bits(data, gt.graph).total_bits;
    const double empty = predictive_data_bits(data, Graph(10)).total_bits;
    if (truth < empty) ++wins;
  }
  REQUIRE(wins >= 19);
}

TEST_CASE("total description length decomposes exactly") {
  const GroundTruth gt = make_structure(StructureKind::AR1, 6, 3);
  const Matrix data = sample_mvn(gt, 50, 4);
  for (CoderKind kind : {CoderKind::IID, CoderKind::Degree, CoderKind::Triangle}) {
    const DescriptionLength d = total_description_length(data, gt.graph, kind);
    REQUIRE(d.total_bits == Approx(d.graph_bits + d.data_bits).margin(1e-9));
    REQUIRE(d.graph_bits == Approx(codelength(gt.graph, kind)).margin(1e-12));
    // determinism
    const DescriptionLength again = total_description_length(data, gt.graph, kind);
    REQUIRE(again.total_bits == d.total_bits);
  }
  // cross-module consistency: empty p=3 graph bits under IID
  Matrix small = sample_mvn(gt, 20, 5).leftCols(3);
  const DescriptionLength e = total_description_length(small, Graph(3), CoderKind::IID);
  REQUIRE(e.graph_bits == Approx(std::log2(48.0 / 15.0)).margin(1e-9));
}

TEST_CASE("select_model recovers a planted cycle (single seed smoke)") {
  const GroundTruth gt = make_structure(StructureKind::Cycle, 20, 7);
  const Matrix data = sample_mvn(gt, 100, 8);
  const SelectionResult sel = select_model(data, 50, CoderKind::Degree);
  REQUIRE(sel.best_index >= 0);
  const F1Report f1 = f1_score(sel.best().graph, gt.graph);
  REQUIRE(f1.f1 >= 0.9);
}

TEST_CASE("null data selects a near-empty graph") {
  int near_empty = 0;
  const int seeds = 10;
  for (int s = 0; s < seeds; ++s) {
    GroundTruth iid;
    iid.kind = StructureKind::ER;
    iid.omega = Matrix::Identity(10, 10);
    iid.graph = Graph(10);
    const Matrix data = sample_mvn(iid, 100, 2000 + s);
    const SelectionResult sel = select_model(data, 50, CoderKind::Degree);
    if (sel.best().graph.edge_count() <= 2) ++near_empty;
  }
  REQUIRE(near_empty >= 9);  // >= 90% of seeds
}

TEST_CASE("single-lambda grid selects that lambda") {
  const GroundTruth gt = make_structure(StructureKind::AR1, 5, 1);
  const Matrix data = sample_mvn(gt, 60, 2);
  const std::vector<double> one = {0.2};
  const SelectionResult sel =
      select_model(data, 1, CoderKind::IID, {}, {}, &one);
  REQUIRE(sel.records.size() == 1);
  REQUIRE(sel.best_index == 0);
  REQUIRE(sel.best().lambda == Approx(0.2));
}

TEST_CASE("ties break toward larger lambda") {
  // Duplicate lambdas produce identical records; argmin must stay at the
  // first (larger-lambda) copy.
  const GroundTruth gt = make_structure(StructureKind::AR1, 5, 6);
  const Matrix data = sample_mvn(gt, 60, 7);
  const std::vector<double> lams = {0.3, 0.3, 0.3};
  const SelectionResult sel = select_model(data, 3, CoderKind::IID, {}, {}, &lams);
  REQUIRE(sel.records.size() == 3);
  REQUIRE(sel.records[0].total_bits == Approx(sel.records[2].total_bits).margin(1e-12));
  REQUIRE(sel.best_index == 0);
}

TEST_CASE("degenerate grid returns the empty-graph result flagged") {
  GroundTruth iid;
  iid.kind = StructureKind::ER;
  iid.omega = Matrix::Identity(4, 4);
  iid.graph = Graph(4);
  // perfectly uncorrelated columns: use exactly orthogonal patterns
  Matrix data(4, 4);
  data << 1, 1, 1, 1, 1, -1, 1, -1, 1, 1, -1, -1, 1, -1, -1, 1;
  REQUIRE(lambda_max(sample_covariance(data)) == 0.0);
  const SelectionResult sel = select_model(data, 10, CoderKind::IID);
  REQUIRE(sel.degenerate_grid);
  REQUIRE(sel.best().graph.edge_count() == 0);
}

TEST_CASE("empty graph is the cheapest graph at the sparse end (IID coder)") {
  const GroundTruth gt = make_structure(StructureKind::Cycle, 12, 9);
  const Matrix data = sample_mvn(gt, 80, 10);
  const SelectionResult sel = select_model(data, 30, CoderKind::IID);
  // graph bits at lambda_max (empty) <= graph bits of the densest grid graph
  REQUIRE(sel.records.front().graph.edge_count() == 0);
  double densest_bits = 0.0;
  int densest_edges = -1;
  for (const auto& rec : sel.records)
    if (rec.graph.edge_count() > densest_edges) {
      densest_edges = rec.graph.edge_count();
      densest_bits = rec.graph_bits;
    }
  REQUIRE(sel.records.front().graph_bits <= densest_bits);
}

TEST_CASE("selection records carry per-lambda flags and sane values") {
  const GroundTruth gt = make_structure(StructureKind::AR1, 8, 13);
  const Matrix data = sample_mvn(gt, 30, 14);
  const SelectionResult sel = select_model(data, 15, CoderKind::Degree);
  REQUIRE(sel.records.size() == 15);
  for (size_t i = 1; i < sel.records.size(); ++i)
    REQUIRE(sel.records[i].lambda < sel.records[i - 1].lambda);
  for (const auto& rec : sel.records) {
    REQUIRE(rec.graph_bits > 0.0);
    REQUIRE(rec.data_bits > 0.0);
    REQUIRE(rec.total_bits == Approx(rec.graph_bits + rec.data_bits).margin(1e-9));
  }
  REQUIRE(sel.best().total_bits ==
          Approx(std::min_element(sel.records.begin(), sel.records.end(),
                                  [](const SelectionRecord& a, const SelectionRecord& b) {
                                    return a.total_bits < b.total_bits;
                                  })
                     ->total_bits));
}
