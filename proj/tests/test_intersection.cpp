#include "doctest.h"
#include "oddterw/errors.hpp"
#include "oddterw/intersection.hpp"
#include "oracles.hpp"

using namespace oddterw;

namespace {

// Coefficients of a dense product in the H_{i,k}^g basis, read straight off
// the subset masks.
std::map<int, long long> brute_decompose(const oracle::Dense& p, int i, int k, int v) {
  auto rows = oracle::subsets(v, i);
  auto cols = oracle::subsets(v, k);
  std::map<int, long long> out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      int g = std::popcount(rows[r] & cols[c]);
      if (p[r][c] != 0) out[g] = p[r][c];
    }
  }
  return out;
}

Expansion to_expansion(const std::map<int, long long>& m) {
  Expansion e;
  for (auto [g, c] : m) e[g] = c;
  return e;
}

}  // namespace

TEST_SUITE_BEGIN("intersection");

TEST_CASE("small intersection matrices") {
  CHECK(build_h({1, 1, 1, 2}) == IntMatrix::identity(2));
  CHECK(build_h({1, 1, 0, 2}) == IntMatrix::from_dense({{0, 1}, {1, 0}}));
  auto h = build_h({2, 2, 1, 4});
  for (std::size_t r = 0; r < h.nrows(); ++r) REQUIRE(h.row(r).cols.size() == 4);
  CHECK(build_h({2, 3, 0, 4}).is_zero());
  CHECK(build_h({2, 3, -1, 5}).is_zero());
  CHECK(build_h({2, 3, 3, 5}).nrows() == 10);
  CHECK(build_h({2, 3, 3, 5}).is_zero());
  CHECK_THROWS_AS(build_h({4, 1, 0, 3}), ParameterError);
}

TEST_CASE("construction matches the brute-force definition for v <= 7") {
  for (int v = 0; v <= 7; ++v) {
    for (int i = 0; i <= v; ++i) {
      for (int j = 0; j <= v; ++j) {
        for (int l = -1; l <= std::min(i, j) + 1; ++l) {
          REQUIRE(build_h({i, j, l, v}) == IntMatrix::from_dense(oracle::h_matrix(i, j, l, v)));
        }
      }
    }
  }
}

TEST_CASE("nonzero exactly on the feasible range, partition of J, transpose symmetry (v <= 8)") {
  for (int v = 0; v <= 8; ++v) {
    for (int i = 0; i <= v; ++i) {
      for (int j = 0; j <= v; ++j) {
        IntMatrix sum(binomial_checked(v, i), binomial_checked(v, j));
        for (int l = -1; l <= std::min(i, j) + 1; ++l) {
          HSpec spec{i, j, l, v};
          IntMatrix h = build_h(spec);
          REQUIRE(h.is_zero() == !g_range(i, j, v).contains(l));
          REQUIRE(transpose(h) == build_h(spec.transposed()));
          sum = sum + h;
        }
        REQUIRE(sum.nnz() == sum.nrows() * sum.ncols());
        for (std::size_t r = 0; r < sum.nrows(); ++r) {
          for (const auto& x : sum.row(r).values) REQUIRE(x == 1);
        }
      }
    }
  }
}

TEST_CASE("coefficient terms") {
  // h > g kills C(g,h).
  CHECK(eq7_coefficient(3, 3, 2, 2, 3, 7, 1, 2) == 0);
  // i = k = g, l = s = h = 0, j = 0: every binomial has lower index 0.
  for (int g = 0; g <= 4; ++g) CHECK(eq7_coefficient(g, g, 0, 0, 0, 7, g, 0) == 1);
}

TEST_CASE("H^0_{2,2}(5) squared") {
  // Oracle: product of brute-force matrices, classes read off by mask.
  auto h = oracle::h_matrix(2, 2, 0, 5);
  auto dec = brute_decompose(oracle::multiply(h, h), 2, 2, 5);
  CHECK(dec == std::map<int, long long>{{1, 1}, {2, 3}});
  CHECK(eq7_expand(2, 2, 2, 0, 0, 5) == to_expansion(dec));
  auto direct = mat_mul(build_h({2, 2, 0, 5}), build_h({2, 2, 0, 5}));
  CHECK(direct == assemble_h_combination(to_expansion(dec), 2, 2, 5));
}

TEST_CASE("expansion edge cases") {
  // Left factor zero (l outside the feasible range).
  CHECK(eq7_expand(2, 3, 2, 0, 1, 4).empty());
  CHECK(eq7_expand(2, 2, 2, 3, 1, 5).empty());
  CHECK(eq7_expand(2, 2, 2, -1, 1, 5).empty());
  // Identity times identity.
  CHECK(eq7_expand(1, 1, 1, 1, 1, 3) == Expansion{{1, 1}});
  // l > i leaves nothing in the closed-form special case.
  CHECK(eq8_expand(2, 3, 2, 3, 6).empty());
}

TEST_CASE("special case agrees with general expansion") {
  CHECK(eq8_expand(2, 1, 2, 1, 5) == eq7_expand(2, 1, 2, 1, 0, 5));
  for (int v = 0; v <= 7; ++v)
    for (int i = 0; i <= v; ++i)
      for (int j = 0; j <= v; ++j)
        for (int k = 0; k <= v; ++k)
          for (int l = 0; l <= std::min(i, j) + 1; ++l)
            REQUIRE(eq8_expand(i, j, k, l, v) == eq7_expand(i, j, k, l, 0, v));
}

TEST_CASE("adjacent path blocks for m = 2 via the special case") {
  // A_{0,1} A_{1,2} for the Petersen graph, one factor at a time:
  // x side H^0_{2,0}(2) H^0_{0,1}(2), complement side H^0_{0,2}(3) H^0_{2,1}(3).
  auto x_side = eq8_expand(2, 0, 1, 0, 2);
  auto c_side = eq8_expand(0, 2, 1, 0, 3);
  REQUIRE(x_side == Expansion{{1, 1}});
  REQUIRE(c_side == Expansion{{0, 1}});
  BigInt c1 = x_side.at(1) * c_side.at(0);
  CHECK(c1 > 0);
}

TEST_CASE("product expansion matches brute-force decomposition for v <= 5") {
  for (int v = 0; v <= 5; ++v) {
    for (int i = 0; i <= v; ++i)
      for (int j = 0; j <= v; ++j)
        for (int k = 0; k <= v; ++k)
          for (int l = 0; l <= std::min(i, j); ++l)
            for (int s = 0; s <= std::min(j, k); ++s) {
              auto p = oracle::multiply(oracle::h_matrix(i, j, l, v), oracle::h_matrix(j, k, s, v));
              REQUIRE(eq7_expand(i, j, k, l, s, v) == to_expansion(brute_decompose(p, i, k, v)));
            }
  }
}

TEST_CASE("decomposition detects a matrix that is not constant on classes") {
  auto m = build_h({2, 2, 1, 4});
  auto tampered = m + IntMatrix::from_triplets(m.nrows(), m.ncols(), {{0, 0, 5}});
  CHECK(decompose_in_h_basis(m, 2, 2, 4).coefficients == Expansion{{1, 1}});
  auto dec = decompose_in_h_basis(tampered, 2, 2, 4);
  CHECK_FALSE(dec.constant_on_classes);
  CHECK(dec.witness.has_value());
  CHECK_THROWS_AS(decompose_in_h_basis(m, 2, 3, 4), ShapeError);
}

TEST_CASE("sweep report over small v passes and counts tuples") {
  SweepOptions options;
  options.v_max = 4;
  auto r = verify_eq7_sweep(options);
  CHECK(r.passed());
  CHECK(r.parameters["products_checked"].get<std::size_t>() > 0);
  options.jobs = 3;
  auto parallel = verify_eq7_sweep(options);
  CHECK(parallel.passed());
  CHECK(parallel.parameters["products_checked"] == r.parameters["products_checked"]);
}

TEST_SUITE_END();
