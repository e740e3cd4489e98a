#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oddterw/exactmat.hpp"
#include "oddterw/intersection.hpp"
#include "oddterw/oddgraph.hpp"
#include "oddterw/report.hpp"

namespace oddterw {

// One explicit generator: embed(kron(H_left, H_right), block).
struct MGenerator {
  BlockRef block;
  HSpec left;
  HSpec right;

  IntMatrix matrix(const OddGraph& g) const;
  std::string label() const;
};

struct MGeneratorSet {
  int m = 0;
  std::vector<MGenerator> generators;
};

// The block-labelled generating family, one sub-family per parity pattern
// of (p, q):
//   (2i,   2j  ): H_{m-i,m-j}^l(m) (x) H_{i,j}^s(m+1)
//   (2i,   2j+1): H_{m-i,j}^l(m)   (x) H_{i,m-j}^s(m+1)
//   (2i+1, 2j  ): H_{i,m-j}^l(m)   (x) H_{m-i,j}^s(m+1)
//   (2i+1, 2j+1): H_{i,j}^l(m)     (x) H_{m-i,m-j}^s(m+1)
// with l and s running over the feasible intersection ranges.
MGeneratorSet m_generators(int m);

// The single-pattern family H_{m-i,m-j}^l(m) (x) H_{i,j}^s(m+1) for
// i,j = 0..m, where i counts the points of a vertex outside x. Each i is
// placed in the distance class whose vertices have exactly i such points.
MGeneratorSet single_pattern_generators(int m);

// Expected generator count: sum over i,j of |G_{m-i,m-j}(m)| |G_{i,j}(m+1)|.
std::size_t expected_generator_count(int m);

struct ClosureOptions {
  FieldConfig field = FieldConfig::gf(kDefaultPrime);
  // 0 selects the default cap of 4(m+1)^2 rounds.
  std::size_t max_rounds = 0;
  unsigned jobs = 1;
  // Shuffles the seed and generator order; the span must not depend on it.
  std::optional<std::uint64_t> shuffle_seed;
};

struct ClosureResult {
  MatrixSpace space;
  // The integer words whose insertion grew the space; they span it.
  std::vector<IntMatrix> basis;
  std::size_t dimension = 0;
  std::size_t rounds = 0;
  std::size_t products_computed = 0;
  bool stabilized = false;
};

// Smallest algebra containing A and every E_i*: seeds the span with I, A
// and the E_i*, then multiplies every new element by each generator on
// both sides until a whole round adds nothing. Throws DivergenceError if
// the round cap is hit.
ClosureResult closure(const OddGraph& g, const ClosureOptions& options = {});

// Every product of a basis word with a generator, on either side, lies in
// the span.
VerificationReport verify_closure_stable(const OddGraph& g, const ClosureResult& t);

// T inside M: every closure word lies in the span of the generating family;
// also checks the two diagonal-block identities for the E_i*.
VerificationReport verify_t_subset_m(const OddGraph& g, const ClosureResult& t,
                                     const MGeneratorSet& gens);

// M inside T: every generator lies in the closure span.
VerificationReport verify_m_subset_t(const OddGraph& g, const ClosureResult& t,
                                     const MGeneratorSet& gens);

// Membership of the two explicit odd-row families in the closure:
//   H_{i,j}^l(m) (x) H_{m-i,m-j}^{m-j}(m+1) at block (2i+1, 2j+1),
//     i <= j <= ceil(m/2)-1, 0 <= l <= i;
//   H_{i,m-j}^l(m) (x) H_{m-i,j}^{j-i-1}(m+1) at block (2i+1, 2j),
//     i+1 <= j <= floor(m/2), 0 <= l <= i.
VerificationReport verify_lemma24_25(const OddGraph& g, const ClosureResult& t);

// Generators are linearly independent (each insert grows a fresh space)
// and their span has the closure's dimension.
VerificationReport verify_basis(const OddGraph& g, const MGeneratorSet& gens, const ClosureResult& t);

// Block-path products A_{i1,i2} A_{i2,i3} ... lie in the closure; the
// path from class 0 to class q equals a positive multiple of the single
// generator of block (0, q).
VerificationReport verify_chain_products(const OddGraph& g, const ClosureResult& t);

// For random pairs of closure words the product of their (i,j) and (j,k)
// blocks, re-embedded at (i,k), lies in the closure.
VerificationReport verify_block_closure(const OddGraph& g, const ClosureResult& t,
                                        std::size_t samples, std::uint64_t seed);

struct DimensionCount {
  BigInt double_sum;
  BigInt binomial;
};

// sum_{i,j=0}^m (min(m-i,m-j) - max(0,m-i-j) + 1)(min(i,j) - max(0,i+j-m-1) + 1)
// alongside C(m+4,4). Throws FormulaError if they differ.
DimensionCount dimension_formula(int m);

VerificationReport verify_dimension_formula(int m_max);

}  // namespace oddterw
