#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "common/oracles.hpp"
#include "ggmdl/glasso.hpp"
#include "ggmdl/synthetic.hpp"

using namespace ggmdl;
using Catch::Approx;

TEST_CASE("cycle structure matches the stated pattern at p=4") {
  const GroundTruth gt = make_structure(StructureKind::Cycle, 4, 1);
  Matrix expect(4, 4);
  expect << 1, 0.5, 0, 0.4, 0.5, 1, 0.5, 0, 0, 0.5, 1, 0.5, 0.4, 0, 0.5, 1;
  REQUIRE((gt.omega - expect).cwiseAbs().maxCoeff() == Approx(0.0).margin(1e-15));
  REQUIRE(gt.graph.edge_count() == 4);
  REQUIRE(gt.graph.has_edge(0, 3));
}

TEST_CASE("ar1 is tridiagonal with bands 1 and 0.5") {
  const GroundTruth gt = make_structure(StructureKind::AR1, 6, 2);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      const int d = std::abs(i - j);
      const double expect = d == 0 ? 1.0 : d == 1 ? 0.5 : 0.0;
      REQUIRE(gt.omega(i, j) == Approx(expect).margin(1e-15));
    }
  REQUIRE(gt.graph.edge_count() == 5);
}

TEST_CASE("ar2 is pentadiagonal with bands 1, 0.5, 0.25") {
  const GroundTruth gt = make_structure(StructureKind::AR2, 5, 3);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const int d = std::abs(i - j);
      const double expect = d == 0 ? 1.0 : d == 1 ? 0.5 : d == 2 ? 0.25 : 0.0;
      REQUIRE(gt.omega(i, j) == Approx(expect).margin(1e-15));
    }
  // path edges plus distance-2 chords: (p-1) + (p-2) = 7 at p=5
  REQUIRE(gt.graph.edge_count() == 7);
}

TEST_CASE("er structure is positive definite with the delta margin") {
  const GroundTruth gt = make_structure(StructureKind::ER, 50, 4);
  REQUIRE_NOTHROW(cholesky(gt.omega));
  Matrix shifted = gt.omega;
  shifted.diagonal().array() -= 0.05 - 1e-9;
  REQUIRE_NOTHROW(cholesky(shifted));
}

TEST_CASE("hub structure has two high-degree hubs") {
  const GroundTruth gt = make_structure(StructureKind::Hub, 30, 5);
  REQUIRE_NOTHROW(cholesky(gt.omega));
  int high = 0;
  for (int v = 0; v < 30; ++v)
    if (gt.graph.degree(v) >= 10) ++high;
  REQUIRE(high >= 2);
}

TEST_CASE("every kind yields SPD omega whose support equals the stored graph") {
  for (StructureKind kind : {StructureKind::Cycle, StructureKind::AR1,
                             StructureKind::AR2, StructureKind::ER,
                             StructureKind::Hub}) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const GroundTruth gt = make_structure(kind, 12, seed);
      REQUIRE_NOTHROW(cholesky(gt.omega));
      const Graph support = extract_graph(gt.omega, 1e-12);
      REQUIRE(support.edge_count() == gt.graph.edge_count());
      for (const auto& [i, j] : gt.graph.edges()) REQUIRE(support.has_edge(i, j));
    }
  }
}

TEST_CASE("cycle requires p >= 3") {
  REQUIRE_THROWS_AS(make_structure(StructureKind::Cycle, 2, 1), std::invalid_argument);
}

TEST_CASE("structure names round-trip") {
  for (StructureKind kind : {StructureKind::Cycle, StructureKind::AR1,
                             StructureKind::AR2, StructureKind::ER,
                             StructureKind::Hub})
    REQUIRE(structure_from_name(structure_name(kind)) == kind);
  REQUIRE_THROWS_AS(structure_from_name("nope"), std::invalid_argument);
}

TEST_CASE("identity omega reproduces the identity empirically") {
  GroundTruth id;
  id.kind = StructureKind::ER;
  id.omega = Matrix::Identity(4, 4);
  id.graph = Graph(4);
  const int n = 10000;
  const Matrix data = sample_mvn(id, n, 6);
  const Matrix s = sample_covariance(data);
  REQUIRE((s - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <= 5.0 / std::sqrt(n));
}

TEST_CASE("diagonal omega scales variances correctly") {
  GroundTruth d4;
  d4.kind = StructureKind::ER;
  d4.omega = 4.0 * Matrix::Identity(3, 3);
  d4.graph = Graph(3);
  const Matrix data = sample_mvn(d4, 10000, 7);
  const Matrix s = sample_covariance(data);
  for (int i = 0; i < 3; ++i) REQUIRE(s(i, i) == Approx(0.25).margin(0.02));
}

TEST_CASE("sampling is deterministic given the seed") {
  const GroundTruth gt = make_structure(StructureKind::AR2, 8, 11);
  const Matrix a = sample_mvn(gt, 25, 13);
  const Matrix b = sample_mvn(gt, 25, 13);
  REQUIRE((a - b).cwiseAbs().maxCoeff() == 0.0);
  const Matrix c = sample_mvn(gt, 25, 14);
  REQUIRE((a - c).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("structure construction is deterministic given the seed") {
  const GroundTruth a = make_structure(StructureKind::ER, 20, 21);
  const GroundTruth b = make_structure(StructureKind::ER, 20, 21);
  REQUIRE((a.omega - b.omega).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("inverse sample covariance approximates omega at large N") {
  for (StructureKind kind : {StructureKind::Cycle, StructureKind::AR1,
                             StructureKind::AR2, StructureKind::ER,
                             StructureKind::Hub}) {
    const GroundTruth gt = make_structure(kind, 10, 31);
    const Matrix data = sample_mvn(gt, 100000, 32);
    const Matrix s = sample_covariance(data);
    const Matrix k = s.inverse();
    REQUIRE((k - gt.omega).cwiseAbs().maxCoeff() <= 0.1);
  }
}
