#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oddterw {

using BigInt = boost::multiprecision::cpp_int;

// C(n,k), exact. Zero when k < 0, k > n or n < 0.
BigInt binomial(long long n, long long k);

// Same convention, 64-bit. Throws OverflowError if the result does not fit.
std::uint64_t binomial_checked(long long n, long long k);

// Canonical colexicographic bijection between the k-subsets of {0,...,n-1}
// and {0,...,C(n,k)-1}: rank(S) = sum_t C(S[t], t+1) for S sorted ascending.
// Subsets may also be passed as bitmasks, hence n <= 63.
class SubsetIndex {
 public:
  static constexpr int kMaxGround = 63;

  SubsetIndex(int n, int k);

  int n() const { return n_; }
  int k() const { return k_; }
  std::uint64_t size() const { return size_; }

  std::uint64_t rank(std::span<const int> subset) const;
  std::uint64_t rank_mask(std::uint64_t mask) const;
  std::vector<int> unrank(std::uint64_t r) const;
  std::uint64_t unrank_mask(std::uint64_t r) const;

 private:
  int n_;
  int k_;
  std::uint64_t size_;
};

// Calls fn once per k-subset of {0,...,n-1}, as a sorted list, in colex order.
void for_each_subset(int n, int k, const std::function<void(std::span<const int>)>& fn);

// Feasible intersection sizes of an i-subset and a j-subset of a v-set:
// the closed interval [max(0, i+j-v), min(i,j)].
struct GRange {
  int i = 0;
  int j = 0;
  int v = 0;
  int lo = 0;
  int hi = -1;

  int size() const { return hi >= lo ? hi - lo + 1 : 0; }
  bool contains(int g) const { return g >= lo && g <= hi; }
  bool empty() const { return size() == 0; }
};

GRange g_range(int i, int j, int v);

}  // namespace oddterw
