#pragma once

#include <map>
#include <optional>
#include <string>

#include "oddterw/combinatorics.hpp"
#include "oddterw/exactmat.hpp"
#include "oddterw/report.hpp"

namespace oddterw {

// Parameters of the intersection matrix H_{i,j}^l(v): rows are the
// i-subsets and columns the j-subsets of a v-set (both in colex order),
// entry 1 where the pair meets in exactly l points.
struct HSpec {
  int i = 0;
  int j = 0;
  int l = 0;
  int v = 0;

  // Zero matrix iff l lies outside g_range(i, j, v).
  bool nonzero() const { return g_range(i, j, v).contains(l); }
  HSpec transposed() const { return {j, i, l, v}; }
  std::string label() const;

  friend bool operator==(const HSpec&, const HSpec&) = default;
};

IntMatrix build_h(const HSpec& spec);

using Expansion = std::map<int, BigInt>;

// Coefficient of the (g,h) term in the expansion of H_{i,j}^l H_{j,k}^s:
// C(g,h) C(i-g,l-h) C(k-g,s-h) C(v+g-i-k, j+h-l-s).
BigInt eq7_coefficient(int i, int k, int l, int s, int j, int v, int g, int h);

// H_{i,j}^l(v) H_{j,k}^s(v) = sum_g expansion[g] H_{i,k}^g(v), g = 0..min(i,k).
// Entries with zero coefficient are omitted.
Expansion eq7_expand(int i, int j, int k, int l, int s, int v);

// Special case s = 0 of the above, in closed form:
// H_{i,j}^l H_{j,k}^0 = sum_s C(i-s,l) C(v+s-i-k, j-l) H_{i,k}^s
// over s = max(0, i+j+k-l-v) .. min(i-l, k). Zero coefficients omitted.
Expansion eq8_expand(int i, int j, int k, int l, int v);

// Decomposition of an i-subset by k-subset matrix in the H_{i,k}^g(v) basis,
// read off one entry per intersection class. Empty coefficients if the
// matrix is not constant on some class; `witness` then names the entry.
struct HDecomposition {
  bool constant_on_classes = true;
  Expansion coefficients;
  std::optional<std::string> witness;
};

HDecomposition decompose_in_h_basis(const IntMatrix& m, int i, int k, int v);

// Sum_g coefficients[g] * H_{i,k}^g(v).
IntMatrix assemble_h_combination(const Expansion& coefficients, int i, int k, int v);

struct SweepOptions {
  int v_max = 7;
  // Extra ground-set sizes swept in addition to 0..v_max.
  std::vector<int> extra_v;
  unsigned jobs = 1;
};

// Checks the product expansion entry-exactly for every v in the sweep and
// every i,j,k <= v, l,s in [-1, min+1]; checks that the closed-form s = 0
// case agrees with the general expansion over the same tuples.
VerificationReport verify_eq7_sweep(const SweepOptions& options);

}  // namespace oddterw
