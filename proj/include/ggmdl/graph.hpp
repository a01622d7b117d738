#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ggmdl/errors.hpp"

namespace ggmdl {

// Simple labeled undirected graph on vertices 0..p-1, no self loops, no
// duplicate edges. Dense adjacency; the sizes used here are small (p in the
// tens to low hundreds).
class Graph {
 public:
  Graph() = default;

  explicit Graph(int p) : p_(p), adj_(static_cast<size_t>(p) * p, 0), degree_(p, 0) {
    if (p < 1) throw std::invalid_argument("Graph: vertex count must be >= 1");
  }

  static Graph from_edges(int p, const std::vector<std::pair<int, int>>& edges) {
    Graph g(p);
    for (const auto& [i, j] : edges) g.add_edge(i, j);
    return g;
  }

  int vertex_count() const { return p_; }
  int edge_count() const { return edge_count_; }

  bool has_edge(int i, int j) const {
    check_vertex(i);
    check_vertex(j);
    return adj_[static_cast<size_t>(i) * p_ + j] != 0;
  }

  // idempotent; adding an existing edge is a no-op
  void add_edge(int i, int j) {
    check_vertex(i);
    check_vertex(j);
    if (i == j) throw std::invalid_argument("Graph: self loops are not allowed");
    auto& a = adj_[static_cast<size_t>(i) * p_ + j];
    if (a) return;
    a = 1;
    adj_[static_cast<size_t>(j) * p_ + i] = 1;
    ++degree_[i];
    ++degree_[j];
    ++edge_count_;
  }

  int degree(int i) const {
    check_vertex(i);
    return degree_[i];
  }

  // edges in row-major upper-triangle order: (0,1),(0,2),...,(1,2),...
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edge_count_);
    for (int i = 0; i < p_; ++i)
      for (int j = i + 1; j < p_; ++j)
        if (adj_[static_cast<size_t>(i) * p_ + j]) out.emplace_back(i, j);
    return out;
  }

  std::vector<int> degrees() const { return degree_; }

  bool operator==(const Graph& other) const {
    return p_ == other.p_ && adj_ == other.adj_;
  }
  bool operator!=(const Graph& other) const { return !(*this == other); }

 private:
  void check_vertex(int i) const {
    if (i < 0 || i >= p_) throw std::out_of_range("Graph: vertex out of range");
  }

  int p_ = 0;
  std::vector<std::uint8_t> adj_;
  std::vector<int> degree_;
  int edge_count_ = 0;
};

inline long slot_count(int p) { return static_cast<long>(p) * (p - 1) / 2; }

// Edge-list text format: header line "p <vertex-count>", then one "i j" pair
// per line in row-major upper-triangle order.
inline std::string format_edge_list(const Graph& g) {
  std::ostringstream os;
  os << "p " << g.vertex_count() << "\n";
  for (const auto& [i, j] : g.edges()) os << i << " " << j << "\n";
  return os.str();
}

inline Graph parse_edge_list(const std::string& text) {
  std::istringstream is(text);
  std::string tag;
  int p = 0;
  if (!(is >> tag) || tag != "p" || !(is >> p))
    throw std::invalid_argument("parse_edge_list: expected header \"p <count>\"");
  Graph g(p);
  int i = 0, j = 0;
  while (is >> i) {
    if (!(is >> j))
      throw std::invalid_argument("parse_edge_list: dangling vertex index");
    if (i < 0 || j < 0 || i >= p || j >= p)
      throw std::invalid_argument("parse_edge_list: vertex index out of range");
    g.add_edge(i, j);
  }
  if (!is.eof()) throw std::invalid_argument("parse_edge_list: malformed edge line");
  return g;
}

}  // namespace ggmdl
