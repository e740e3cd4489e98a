#include "doctest.h"
#include "oddterw/errors.hpp"
#include "oddterw/intersection.hpp"
#include "oddterw/oddgraph.hpp"

using namespace oddterw;

namespace {

BigInt trace(const IntMatrix& m) {
  BigInt t = 0;
  for (std::size_t r = 0; r < m.nrows(); ++r) t += m.at(r, r);
  return t;
}

}  // namespace

TEST_SUITE_BEGIN("oddgraph");

TEST_CASE("parameter limits") {
  CHECK_THROWS_AS(OddGraph::build(0), ParameterError);
  CHECK_THROWS_AS(OddGraph::build(7), ParameterError);
  CHECK_NOTHROW(OddGraph::build(3, 3));
  CHECK_THROWS_AS(OddGraph::build(4, 3), ParameterError);
}

TEST_CASE("vertex counts, regularity and class sizes") {
  for (int m = 1; m <= 5; ++m) {
    auto g = OddGraph::build(m);
    REQUIRE(BigInt(g.num_vertices()) == binomial(2 * m + 1, m));
    const auto& a = g.adjacency();
    for (std::size_t y = 0; y < g.num_vertices(); ++y) REQUIRE(a.row(y).cols.size() == std::size_t(m + 1));
    REQUIRE(transpose(a) == a);
    for (std::size_t y = 0; y < g.num_vertices(); ++y) REQUIRE(a.at(y, y) == 0);
    for (std::size_t y = 0; y < g.num_vertices(); ++y) {
      for (auto z : a.row(y).cols) REQUIRE((g.vertex_masks()[y] & g.vertex_masks()[z]) == 0);
    }
  }
  auto petersen = OddGraph::build(2);
  CHECK(petersen.num_vertices() == 10);
  CHECK(petersen.class_size(0) == 1);
  CHECK(petersen.class_size(1) == 3);
  CHECK(petersen.class_size(2) == 6);
  CHECK(petersen.class_offsets() == std::vector<std::size_t>{0, 1, 4, 10});
}

TEST_CASE("Petersen graph has girth five") {
  auto g = OddGraph::build(2);
  const auto& a = g.adjacency();
  auto a2 = mat_mul(a, a);
  auto a3 = mat_mul(a2, a);
  CHECK(trace(a3) == 0);  // no triangles
  for (std::size_t y = 0; y < 10; ++y) {
    CHECK(a2.at(y, y) == 3);
    for (std::size_t z = 0; z < 10; ++z) {
      if (y != z) REQUIRE(a2.at(y, z) <= 1);  // no 4-cycles
    }
  }
}

TEST_CASE("distance classes agree with BFS, diameter m") {
  for (int m = 1; m <= 5; ++m) {
    auto g = OddGraph::build(m);
    auto r = verify_distance_partition(g);
    REQUIRE(r.passed());
    REQUIRE(*std::max_element(g.bfs_distances().begin(), g.bfs_distances().end()) == m);
  }
  auto g3 = OddGraph::build(3);
  CHECK(g3.num_vertices() == 35);
  CHECK(g3.diameter() == 3);
}

TEST_CASE("canonical order inside each class") {
  auto g = OddGraph::build(3);
  // x itself comes first.
  CHECK(g.vertex_elements(0) == std::vector<int>{0, 1, 2});
  // Class 1 = the 3-subsets of the complement {3,4,5,6}, in colex order.
  CHECK(g.vertex_elements(1) == std::vector<int>{3, 4, 5});
  CHECK(g.vertex_elements(2) == std::vector<int>{3, 4, 6});
  CHECK(g.index_of((1u << 3) | (1u << 4) | (1u << 6)) == 2);
  // Class 2 vertex at local index rank(alpha) * C(4,1) + rank(beta).
  std::size_t base = g.class_offsets()[2];
  CHECK(g.vertex_elements(base + 1 * 4 + 2) == std::vector<int>{0, 2, 5});
  CHECK_THROWS_AS(g.index_of(0b11), IndexError);
}

TEST_CASE("dual idempotents partition the identity") {
  for (int m = 1; m <= 4; ++m) {
    auto g = OddGraph::build(m);
    IntMatrix sum(g.num_vertices(), g.num_vertices());
    for (int i = 0; i <= m; ++i) {
      auto ei = g.dual_idempotent(i);
      sum = sum + ei;
      REQUIRE(mat_mul(ei, ei) == ei);
      for (int j = 0; j <= m; ++j) {
        if (i != j) REQUIRE(mat_mul(ei, g.dual_idempotent(j)).is_zero());
      }
    }
    REQUIRE(sum == g.identity());
    auto e0 = g.dual_idempotent(0);
    REQUIRE(e0.nnz() == 1);
    REQUIRE(e0.at(0, 0) == 1);
    CHECK_THROWS_AS(g.dual_idempotent(m + 1), ParameterError);
  }
}

TEST_CASE("block extraction and embedding") {
  auto g = OddGraph::build(3);
  const auto& a = g.adjacency();
  // Block path from x's class into class 1 is a single row of ones.
  auto b01 = g.extract_block(a, {0, 1});
  CHECK(b01 == kron(build_h({3, 0, 0, 3}), build_h({0, 3, 0, 4})));
  for (int i = 0; i <= 3; ++i) {
    auto id = g.extract_block(g.identity(), {i, i});
    REQUIRE(id == IntMatrix::identity(g.class_size(i)));
  }
  // Reassembly from the admissible blocks.
  IntMatrix sum(g.num_vertices(), g.num_vertices());
  for (int i = 0; i <= 3; ++i) {
    for (int j = 0; j <= 3; ++j) {
      if (std::abs(i - j) == 1 || (i == 3 && j == 3)) sum = sum + g.embed(g.extract_block(a, {i, j}), {i, j});
    }
  }
  CHECK(sum == a);
  // Sandwich by dual idempotents is the same as embedding the block.
  auto sandwich = mat_mul(mat_mul(g.dual_idempotent(1), a), g.dual_idempotent(2));
  CHECK(sandwich == g.embed(g.extract_block(a, {1, 2}), {1, 2}));

  auto e = g.embed(b01, {0, 1});
  CHECK(g.extract_block(e, {0, 1}) == b01);
  CHECK(g.extract_block(e, {1, 0}).is_zero());
  CHECK(g.embed(IntMatrix(g.class_size(2), g.class_size(3)), {2, 3}).is_zero());
  CHECK_THROWS_AS(g.embed(b01, {1, 1}), ShapeError);
  CHECK_THROWS_AS(g.extract_block(IntMatrix::identity(3), {0, 0}), ShapeError);
}

TEST_CASE("Petersen block from x's class") {
  auto g = OddGraph::build(2);
  auto b = g.extract_block(g.adjacency(), {0, 1});
  CHECK(b == IntMatrix::from_dense({{1, 1, 1}}));
  CHECK(b == kron(build_h({2, 0, 0, 2}), build_h({0, 2, 0, 3})));
}

TEST_CASE("Kronecker block structure of the adjacency matrix") {
  for (int m = 1; m <= 5; ++m) {
    auto g = OddGraph::build(m);
    auto r = verify_lemma2(g);
    CAPTURE(m);
    REQUIRE(r.passed());
    REQUIRE(r.witnesses.empty());
  }
}

TEST_CASE("a flipped adjacency entry is caught with a witness") {
  auto g = OddGraph::build(3);
  const auto& a = g.adjacency();
  // Turn on a (0,2) entry: forbidden block, and breaks symmetry.
  std::size_t col = g.class_offsets()[2];
  auto tampered = a + IntMatrix::from_triplets(a.nrows(), a.ncols(), {{0, col, 1}});
  auto r = verify_lemma2(g, tampered);
  CHECK_FALSE(r.passed());
  REQUIRE_FALSE(r.witnesses.empty());
  CHECK(r.witnesses[0]["row"] == 0);
  CHECK(r.witnesses[0]["col"] == col);

  // Turn off an entry inside a Kronecker block.
  auto rv = a.row(g.class_offsets()[1]);
  std::size_t z = rv.cols[0];
  auto removed = a - IntMatrix::from_triplets(a.nrows(), a.ncols(), {{g.class_offsets()[1], z, 1}});
  CHECK_FALSE(verify_lemma2(g, removed).passed());
}

TEST_CASE("manifest lists vertices and class offsets") {
  auto g = OddGraph::build(2);
  auto j = g.manifest();
  CHECK(j["m"] == 2);
  CHECK(j["vertices"].size() == 10);
  CHECK(j["vertices"][0] == std::vector<int>{0, 1});
  CHECK(j["class_offsets"] == std::vector<int>{0, 1, 4, 10});
}

TEST_SUITE_END();
