#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ggmdl/errors.hpp"
#include "ggmdl/graph.hpp"

namespace ggmdl {

// Lossless codelength assignments (in bits) for labeled undirected graphs.
// All three coders scan the p(p-1)/2 upper-triangle edge slots in row-major
// order and charge -log2 of the modeled probability of each slot's bit, so
// each codelength satisfies Kraft by construction.

enum class CoderKind { IID, Degree, Triangle };

inline const char* coder_name(CoderKind k) {
  switch (k) {
    case CoderKind::IID: return "iid";
    case CoderKind::Degree: return "degree";
    case CoderKind::Triangle: return "triangle";
  }
  return "?";
}

inline CoderKind coder_from_name(const std::string& s) {
  if (s == "iid") return CoderKind::IID;
  if (s == "degree") return CoderKind::Degree;
  if (s == "triangle") return CoderKind::Triangle;
  throw std::invalid_argument("unknown coder \"" + s + "\" (iid|degree|triangle)");
}

// probability floor/ceiling for any modeled probability that could otherwise
// reach 0 or 1
inline constexpr double kProbClip = 1e-6;

inline double clip_prob(double x) {
  return std::clamp(x, kProbClip, 1.0 - kProbClip);
}

namespace detail {

// Krichevsky-Trofimov sequential estimator for a binary stream:
// P(next = 1) = (ones + 1/2) / (seen + 1).
struct KtBinary {
  double ones = 0.0;
  double seen = 0.0;
  double prob_one() const { return (ones + 0.5) / (seen + 1.0); }
  void observe(bool b) {
    if (b) ones += 1.0;
    seen += 1.0;
  }
};

inline double bit_cost(double prob_one, bool b) {
  return -std::log2(b ? prob_one : 1.0 - prob_one);
}

inline void require_codable(const Graph& g, const char* who) {
  if (g.vertex_count() < 2)
    throw std::invalid_argument(std::string(who) + ": need at least 2 vertices");
}

// Degree-budget slot scan shared by the adaptive and the frozen Degree coder.
// Visits slots in row-major order; fn(prob_of_one, bit). Budgets start at the
// degree sequence of g and decrement as edges are emitted, so they never go
// negative, and the scan is decodable once the degree sequence is known.
template <class SlotFn>
void scan_degree_budget(const Graph& g, SlotFn&& fn) {
  const int p = g.vertex_count();
  std::vector<long> r(p);
  long r_total = 0;  // equals 2R, the sum of all remaining budgets
  for (int i = 0; i < p; ++i) {
    r[i] = g.degree(i);
    r_total += r[i];
  }
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      double prob;
      if (r_total == 0) {
        prob = kProbClip;
      } else {
        prob = clip_prob(static_cast<double>(r[i]) * static_cast<double>(r[j]) /
                         static_cast<double>(r_total));
      }
      const bool b = g.has_edge(i, j);
      fn(prob, b);
      if (b) {
        --r[i];
        --r[j];
        r_total -= 2;
      }
    }
  }
}

// Two-context slot scan shared by the Triangle coder variants. The context of
// slot (i,j) is 1 iff i and j have at least one common neighbor among the
// edges already emitted earlier in the scan; fn(context, bit).
template <class SlotFn>
void scan_triangle_contexts(const Graph& g, SlotFn&& fn) {
  const int p = g.vertex_count();
  std::vector<std::uint8_t> coded(static_cast<size_t>(p) * p, 0);
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      int ctx = 0;
      const std::uint8_t* row_i = coded.data() + static_cast<size_t>(i) * p;
      const std::uint8_t* row_j = coded.data() + static_cast<size_t>(j) * p;
      for (int k = 0; k < p; ++k) {
        if (row_i[k] && row_j[k]) {
          ctx = 1;
          break;
        }
      }
      const bool b = g.has_edge(i, j);
      fn(ctx, b);
      if (b) {
        coded[static_cast<size_t>(i) * p + j] = 1;
        coded[static_cast<size_t>(j) * p + i] = 1;
      }
    }
  }
}

}  // namespace detail

// Single KT estimator over all edge slots.
inline double codelength_iid(const Graph& g) {
  detail::require_codable(g, "codelength_iid");
  detail::KtBinary kt;
  double bits = 0.0;
  const int p = g.vertex_count();
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      const bool b = g.has_edge(i, j);
      bits += detail::bit_cost(kt.prob_one(), b);
      kt.observe(b);
    }
  }
  return bits;
}

// Part 1: the degree sequence d_0..d_{p-1}, coded with an add-1/2 sequential
// estimator over the alphabet {0..p-1}. Part 2: the edge slots, coded with
// adaptive Bernoulli probabilities driven by the remaining degree budgets.
inline double codelength_degree(const Graph& g) {
  detail::require_codable(g, "codelength_degree");
  const int p = g.vertex_count();
  double bits = 0.0;
  std::vector<double> counts(p, 0.0);
  for (int i = 0; i < p; ++i) {
    const int d = g.degree(i);
    const double prob = (counts[d] + 0.5) / (i + 0.5 * p);
    bits += -std::log2(prob);
    counts[d] += 1.0;
  }
  detail::scan_degree_budget(g, [&bits](double prob, bool b) {
    bits += detail::bit_cost(prob, b);
  });
  return bits;
}

// One KT estimator per context (context 1 = the slot's endpoints already share
// a neighbor), so triangle-closing edges are learned separately from the rest.
inline double codelength_triangle(const Graph& g) {
  detail::require_codable(g, "codelength_triangle");
  detail::KtBinary kt[2];
  double bits = 0.0;
  detail::scan_triangle_contexts(g, [&](int ctx, bool b) {
    bits += detail::bit_cost(kt[ctx].prob_one(), b);
    kt[ctx].observe(b);
  });
  return bits;
}

inline double codelength(const Graph& g, CoderKind kind) {
  switch (kind) {
    case CoderKind::IID: return codelength_iid(g);
    case CoderKind::Degree: return codelength_degree(g);
    case CoderKind::Triangle: return codelength_triangle(g);
  }
  throw std::invalid_argument("codelength: unknown coder kind");
}

// Frozen-parameter coder fitted to one graph. Only the fields of the matching
// kind are meaningful.
struct TrainedCoder {
  CoderKind kind = CoderKind::IID;
  int p = 0;
  double edge_prob = 0.5;            // IID
  std::vector<double> degree_hist;   // Degree: histogram over {0..p-1}
  double ctx_prob[2] = {0.5, 0.5};   // Triangle: per-context edge frequency
};

inline TrainedCoder train_coder(const Graph& g, CoderKind kind) {
  detail::require_codable(g, "train_coder");
  TrainedCoder c;
  c.kind = kind;
  c.p = g.vertex_count();
  switch (kind) {
    case CoderKind::IID: {
      const double t = static_cast<double>(slot_count(c.p));
      c.edge_prob = clip_prob(static_cast<double>(g.edge_count()) / t);
      break;
    }
    case CoderKind::Degree: {
      c.degree_hist.assign(c.p, 0.0);
      for (int i = 0; i < c.p; ++i) c.degree_hist[g.degree(i)] += 1.0;
      const double denom = 1.5 * c.p;  // p observations + p cells * 1/2
      for (double& h : c.degree_hist) h = clip_prob((h + 0.5) / denom);
      break;
    }
    case CoderKind::Triangle: {
      double ones[2] = {0.0, 0.0};
      double seen[2] = {0.0, 0.0};
      detail::scan_triangle_contexts(g, [&](int ctx, bool b) {
        if (b) ones[ctx] += 1.0;
        seen[ctx] += 1.0;
      });
      for (int ctx = 0; ctx < 2; ++ctx)
        c.ctx_prob[ctx] = seen[ctx] > 0.0 ? clip_prob(ones[ctx] / seen[ctx]) : 0.5;
      break;
    }
  }
  return c;
}

// Codelength of g under the frozen probabilities of c. Same slot/context scan
// as the corresponding adaptive coder; for the Degree kind the budget-driven
// part is content-derived (from g's own degree sequence), so only the degree
// histogram is frozen.
inline double codelength_with_trained(const Graph& g, const TrainedCoder& c) {
  detail::require_codable(g, "codelength_with_trained");
  double bits = 0.0;
  switch (c.kind) {
    case CoderKind::IID: {
      const long t = slot_count(g.vertex_count());
      const long m = g.edge_count();
      bits = -static_cast<double>(m) * std::log2(c.edge_prob) -
             static_cast<double>(t - m) * std::log2(1.0 - c.edge_prob);
      break;
    }
    case CoderKind::Degree: {
      if (c.p != g.vertex_count())
        throw IncompatibleDimension(
            "codelength_with_trained: degree histogram is for a different vertex count");
      for (int i = 0; i < c.p; ++i)
        bits += -std::log2(c.degree_hist[g.degree(i)]);
      detail::scan_degree_budget(g, [&bits](double prob, bool b) {
        bits += detail::bit_cost(prob, b);
      });
      break;
    }
    case CoderKind::Triangle: {
      detail::scan_triangle_contexts(g, [&](int ctx, bool b) {
        bits += detail::bit_cost(c.ctx_prob[ctx], b);
      });
      break;
    }
  }
  return bits;
}

// Two-part-code overhead of transmitting the coder's fitted parameters at the
// precision warranted by m_samples observations: (k/2) * log2(m_samples) bits,
// where k is the coder's free-parameter count.
inline double parameter_overhead(const TrainedCoder& c, long m_samples) {
  if (m_samples < 1)
    throw std::invalid_argument("parameter_overhead: sample count must be >= 1");
  int k = 0;
  switch (c.kind) {
    case CoderKind::IID: k = 1; break;
    case CoderKind::Degree: k = c.p - 1; break;
    case CoderKind::Triangle: k = 2; break;
  }
  return 0.5 * k * std::log2(static_cast<double>(m_samples));
}

}  // namespace ggmdl
