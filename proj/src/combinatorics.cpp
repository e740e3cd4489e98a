#include "oddterw/combinatorics.hpp"

#include <array>
#include <bit>
#include <limits>
#include <string>

#include "oddterw/errors.hpp"

namespace oddterw {

namespace {

// Pascal table for n <= 63; every entry fits in 64 bits.
using PascalTable = std::array<std::array<std::uint64_t, 64>, 64>;

const PascalTable& pascal() {
  static const PascalTable table = [] {
    PascalTable t{};
    for (int n = 0; n < 64; ++n) {
      t[n][0] = 1;
      for (int k = 1; k <= n; ++k) t[n][k] = t[n - 1][k - 1] + (k < n ? t[n - 1][k] : 0);
    }
    return t;
  }();
  return table;
}

std::uint64_t small_binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  return pascal()[n][k];
}

}  // namespace

BigInt binomial(long long n, long long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (long long t = 1; t <= k; ++t) {
    result *= n - k + t;
    result /= t;
  }
  return result;
}

std::uint64_t binomial_checked(long long n, long long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (n < 64) return small_binomial(static_cast<int>(n), static_cast<int>(k));
  BigInt exact = binomial(n, k);
  if (exact > std::numeric_limits<std::uint64_t>::max()) {
    throw OverflowError("C(" + std::to_string(n) + "," + std::to_string(k) +
                        ") exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(exact);
}

SubsetIndex::SubsetIndex(int n, int k) : n_(n), k_(k) {
  if (n < 0 || n > kMaxGround || k < 0 || k > n) {
    throw ParameterError("SubsetIndex: need 0 <= k <= n <= 63, got n=" + std::to_string(n) +
                         " k=" + std::to_string(k));
  }
  size_ = small_binomial(n, k);
}

std::uint64_t SubsetIndex::rank(std::span<const int> subset) const {
  if (static_cast<int>(subset.size()) != k_) {
    throw MalformedSubsetError("subset has " + std::to_string(subset.size()) +
                               " elements, expected " + std::to_string(k_));
  }
  std::uint64_t r = 0;
  int prev = -1;
  for (int t = 0; t < k_; ++t) {
    int e = subset[t];
    if (e <= prev || e >= n_) {
      throw MalformedSubsetError("subset must be strictly increasing within [0," +
                                 std::to_string(n_) + ")");
    }
    r += small_binomial(e, t + 1);
    prev = e;
  }
  return r;
}

std::uint64_t SubsetIndex::rank_mask(std::uint64_t mask) const {
  if (std::popcount(mask) != k_ || (n_ < 64 && (mask >> n_) != 0)) {
    throw MalformedSubsetError("mask is not a " + std::to_string(k_) + "-subset of [0," +
                               std::to_string(n_) + ")");
  }
  std::uint64_t r = 0;
  int t = 1;
  while (mask) {
    int e = std::countr_zero(mask);
    r += small_binomial(e, t++);
    mask &= mask - 1;
  }
  return r;
}

std::vector<int> SubsetIndex::unrank(std::uint64_t r) const {
  if (r >= size_) {
    throw IndexError("rank " + std::to_string(r) + " out of range [0," + std::to_string(size_) +
                     ")");
  }
  std::vector<int> out(k_);
  int c = n_ - 1;
  for (int t = k_; t >= 1; --t) {
    while (small_binomial(c, t) > r) --c;
    out[t - 1] = c;
    r -= small_binomial(c, t);
    --c;
  }
  return out;
}

std::uint64_t SubsetIndex::unrank_mask(std::uint64_t r) const {
  std::uint64_t mask = 0;
  for (int e : unrank(r)) mask |= std::uint64_t{1} << e;
  return mask;
}

void for_each_subset(int n, int k, const std::function<void(std::span<const int>)>& fn) {
  if (k < 0 || k > n) return;
  std::vector<int> s(k);
  for (int t = 0; t < k; ++t) s[t] = t;
  while (true) {
    fn(s);
    // Colex successor: bump the lowest element that can move up.
    int t = 0;
    while (t < k && (t + 1 < k ? s[t] + 1 == s[t + 1] : s[t] + 1 == n)) ++t;
    if (t == k) return;
    ++s[t];
    for (int u = 0; u < t; ++u) s[u] = u;
  }
}

GRange g_range(int i, int j, int v) {
  GRange g;
  g.i = i;
  g.j = j;
  g.v = v;
  g.lo = std::max(0, i + j - v);
  g.hi = std::min(i, j);
  return g;
}

}  // namespace oddterw
