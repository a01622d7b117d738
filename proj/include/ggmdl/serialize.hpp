#pragma once

#include <json.hpp>
#include <string>

#include "ggmdl/anomaly.hpp"
#include "ggmdl/codec.hpp"
#include "ggmdl/graph.hpp"
#include "ggmdl/matrix.hpp"
#include "ggmdl/mdl.hpp"

namespace ggmdl {

using Json = nlohmann::json;

inline Json edges_to_json(const Graph& g) {
  Json arr = Json::array();
  for (const auto& [i, j] : g.edges()) arr.push_back(Json::array({i, j}));
  return arr;
}

inline Graph graph_from_json(int p, const Json& edges) {
  Graph g(p);
  for (const auto& e : edges) g.add_edge(e.at(0).get<int>(), e.at(1).get<int>());
  return g;
}

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const Json& rows) {
  const auto r = rows.size();
  if (r == 0) throw std::runtime_error("matrix json: empty");
  const auto c = rows.at(0).size();
  Matrix m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  for (size_t i = 0; i < r; ++i) {
    if (rows.at(i).size() != c) throw std::runtime_error("matrix json: ragged rows");
    for (size_t j = 0; j < c; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows.at(i).at(j).get<double>();
  }
  return m;
}

inline Json trained_coder_to_json(const TrainedCoder& c) {
  Json j;
  j["kind"] = coder_name(c.kind);
  j["p"] = c.p;
  switch (c.kind) {
    case CoderKind::IID:
      j["edge_prob"] = c.edge_prob;
      break;
    case CoderKind::Degree:
      j["degree_hist"] = c.degree_hist;
      break;
    case CoderKind::Triangle:
      j["ctx0_prob"] = c.ctx_prob[0];
      j["ctx1_prob"] = c.ctx_prob[1];
      break;
  }
  return j;
}

inline TrainedCoder trained_coder_from_json(const Json& j) {
  TrainedCoder c;
  c.kind = coder_from_name(j.at("kind").get<std::string>());
  c.p = j.at("p").get<int>();
  switch (c.kind) {
    case CoderKind::IID:
      c.edge_prob = j.at("edge_prob").get<double>();
      break;
    case CoderKind::Degree:
      c.degree_hist = j.at("degree_hist").get<std::vector<double>>();
      break;
    case CoderKind::Triangle:
      c.ctx_prob[0] = j.at("ctx0_prob").get<double>();
      c.ctx_prob[1] = j.at("ctx1_prob").get<double>();
      break;
  }
  return c;
}

inline Json typical_model_to_json(const TypicalModel& m) {
  Json j;
  j["kind"] = coder_name(m.kind);
  j["p"] = m.graph.vertex_count();
  j["edges"] = edges_to_json(m.graph);
  j["sigma_check"] = matrix_to_json(m.sigma_check);
  j["coder"] = trained_coder_to_json(m.coder);
  j["best_lambda"] = m.best_lambda;
  j["ridge_applied"] = m.ridge_applied;
  return j;
}

inline TypicalModel typical_model_from_json(const Json& j) {
  TypicalModel m;
  m.kind = coder_from_name(j.at("kind").get<std::string>());
  m.graph = graph_from_json(j.at("p").get<int>(), j.at("edges"));
  m.sigma_check = matrix_from_json(j.at("sigma_check"));
  m.coder = trained_coder_from_json(j.at("coder"));
  m.best_lambda = j.at("best_lambda").get<double>();
  m.ridge_applied = j.at("ridge_applied").get<bool>();
  m.factor();  // validate the stored covariance
  return m;
}

inline Json selection_result_to_json(const SelectionResult& r) {
  Json records = Json::array();
  for (const auto& rec : r.records) {
    Json jr;
    jr["lambda"] = rec.lambda;
    jr["edges"] = rec.graph.edge_count();
    jr["graph_bits"] = rec.graph_bits;
    jr["data_bits"] = rec.data_bits;
    jr["total_bits"] = rec.total_bits;
    jr["estimator_converged"] = rec.estimator_converged;
    jr["completion_converged"] = rec.completion_all_converged;
    jr["ridge_applied"] = rec.ridge_applied;
    records.push_back(std::move(jr));
  }
  Json j;
  j["records"] = std::move(records);
  j["best_lambda"] = r.best().lambda;
  j["best_edges"] = edges_to_json(r.best().graph);
  j["best_edge_count"] = r.best().graph.edge_count();
  j["best_total_bits"] = r.best().total_bits;
  j["coder"] = coder_name(r.kind);
  j["ridge_applied"] = r.any_ridge();
  j["degenerate_grid"] = r.degenerate_grid;
  return j;
}

}  // namespace ggmdl
