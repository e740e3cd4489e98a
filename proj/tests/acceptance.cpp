#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "oddterw/errors.hpp"
#include "oddterw/terwilliger.hpp"

using namespace oddterw;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::vector<std::string> detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail.push_back(what);
    }
  }
};

// Closures are expensive at m = 5; share them between criteria.
class Closures {
 public:
  const OddGraph& graph(int m) {
    auto it = graphs_.find(m);
    if (it == graphs_.end()) it = graphs_.emplace(m, OddGraph::build(m)).first;
    return it->second;
  }

  const ClosureResult& get(int m, const FieldConfig& field) {
    auto key = std::make_pair(m, field.name());
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      ClosureOptions o;
      o.field = field;
      auto t0 = Clock::now();
      it = cache_.emplace(key, closure(graph(m), o)).first;
      times_[key] = seconds_since(t0);
    }
    return it->second;
  }

  double time(int m, const FieldConfig& field) { return times_.at({m, field.name()}); }

 private:
  std::map<int, OddGraph> graphs_;
  std::map<std::pair<int, std::string>, ClosureResult> cache_;
  std::map<std::pair<int, std::string>, double> times_;
};

const FieldConfig kP1 = FieldConfig::gf(kDefaultPrime);
const FieldConfig kP2 = FieldConfig::gf(kSecondPrime);
const FieldConfig kQ = FieldConfig::exact();

std::string seconds(double s) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << s << " s";
  return os.str();
}

Outcome dimension_reproduction(Closures& cache) {
  Outcome o;
  const std::map<int, std::size_t> expected{{1, 5}, {2, 15}, {3, 35}, {4, 70}, {5, 126}};
  double small = 0;
  for (auto [m, dim] : expected) {
    const auto& t = cache.get(m, kP1);
    o.require(t.dimension == dim, "m=" + std::to_string(m) + ": closure dimension " +
                                      std::to_string(t.dimension) + ", expected " + std::to_string(dim));
    o.require(BigInt(t.dimension) == binomial(m + 4, 4), "m=" + std::to_string(m) + ": differs from C(m+4,4)");
    if (m <= 4) small += cache.time(m, kP1);
  }
  double big = cache.time(5, kP1);
  o.detail.push_back("closure time m<=4 " + seconds(small) + ", m=5 " + seconds(big));
  o.require(small < 10.0, "m <= 4 closures exceeded 10 s");
  o.require(big < 120.0, "m = 5 closure exceeded 2 min");
  return o;
}

Outcome t_equals_m(Closures& cache) {
  Outcome o;
  for (int m = 1; m <= 5; ++m) {
    const auto gens = m_generators(m);
    std::vector<FieldConfig> fields{kP1, kP2};
    if (m <= 3) fields.push_back(kQ);
    for (const auto& f : fields) {
      const auto& t = cache.get(m, f);
      const auto& g = cache.graph(m);
      std::string tag = "m=" + std::to_string(m) + " " + f.name();
      o.require(verify_t_subset_m(g, t, gens).passed(), tag + ": T in M failed");
      o.require(verify_m_subset_t(g, t, gens).passed(), tag + ": M in T failed");
    }
  }
  return o;
}

Outcome block_decomposition(Closures& cache) {
  Outcome o;
  for (int m = 1; m <= 5; ++m) {
    o.require(verify_lemma2(cache.graph(m)).passed(), "m=" + std::to_string(m) + ": block mismatch");
    o.require(verify_distance_partition(cache.graph(m)).passed(),
              "m=" + std::to_string(m) + ": distance classes disagree with BFS");
  }
  return o;
}

Outcome product_formula() {
  Outcome o;
  SweepOptions options;
  options.v_max = 7;
  auto t0 = Clock::now();
  auto r = verify_eq7_sweep(options);
  double s = seconds_since(t0);
  o.require(r.passed(), "sweep reported " + std::to_string(r.witnesses.size()) + " witnesses");
  o.detail.push_back(r.parameters.dump() + " in " + seconds(s));
  o.require(s < 30.0, "sweep exceeded 30 s");
  return o;
}

Outcome basis(Closures& cache) {
  Outcome o;
  for (int m = 1; m <= 5; ++m) {
    auto gens = m_generators(m);
    o.require(BigInt(gens.generators.size()) == binomial(m + 4, 4), "m=" + std::to_string(m) + ": generator count");
    auto r = verify_basis(cache.graph(m), gens, cache.get(m, kP1));
    o.require(r.passed(), "m=" + std::to_string(m) + ": basis check failed");
  }
  for (int m = 1; m <= 3; ++m) {
    o.require(verify_basis(cache.graph(m), m_generators(m), cache.get(m, kQ)).passed(),
              "m=" + std::to_string(m) + ": basis check failed over Q");
  }
  return o;
}

Outcome odd_row_families(Closures& cache) {
  Outcome o;
  std::size_t members = 0;
  for (int m = 2; m <= 5; ++m) {
    auto r = verify_lemma24_25(cache.graph(m), cache.get(m, kP1));
    o.require(r.passed(), "m=" + std::to_string(m) + ": a family member is outside the closure");
    members += r.parameters["odd_odd_checked"].get<std::size_t>() + r.parameters["odd_even_checked"].get<std::size_t>();
  }
  o.detail.push_back(std::to_string(members) + " members checked");
  o.require(members > 0, "no members checked");
  return o;
}

Outcome counting_identity() {
  Outcome o;
  auto t0 = Clock::now();
  auto r = verify_dimension_formula(200);
  double s = seconds_since(t0);
  o.require(r.passed(), "double sum differs from C(m+4,4)");
  o.detail.push_back("m <= 200 in " + seconds(s));
  o.require(s < 1.0, "took longer than a second");
  return o;
}

Outcome property_suites(Closures& cache) {
  Outcome o;
  // E_i* partition and orthogonality.
  for (int m = 1; m <= 5; ++m) {
    const auto& g = cache.graph(m);
    IntMatrix sum(g.num_vertices(), g.num_vertices());
    for (int i = 0; i <= m; ++i) {
      auto ei = g.dual_idempotent(i);
      sum = sum + ei;
      for (int j = 0; j <= m; ++j) {
        auto p = mat_mul(ei, g.dual_idempotent(j));
        o.require(i == j ? p == ei : p.is_zero(), "E* orthogonality at m=" + std::to_string(m));
      }
    }
    o.require(sum == g.identity(), "E* sum at m=" + std::to_string(m));
  }
  // H partition of J and transpose symmetry.
  for (int v = 0; v <= 8; ++v) {
    for (int i = 0; i <= v; ++i) {
      for (int j = 0; j <= v; ++j) {
        IntMatrix sum(binomial_checked(v, i), binomial_checked(v, j));
        for (int l = 0; l <= std::min(i, j); ++l) {
          HSpec h{i, j, l, v};
          sum = sum + build_h(h);
          o.require(transpose(build_h(h)) == build_h(h.transposed()), "transpose " + h.label());
        }
        bool all_ones = sum.nnz() == sum.nrows() * sum.ncols();
        for (std::size_t r = 0; r < sum.nrows() && all_ones; ++r) {
          for (const auto& x : sum.row(r).values) all_ones = all_ones && x == 1;
        }
        o.require(all_ones, "partition of J fails at (" + std::to_string(i) + "," + std::to_string(j) + "," +
                                std::to_string(v) + ")");
      }
    }
  }
  // Kronecker mixed product on random integer matrices.
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> dim(1, 6), entry(-3, 3);
  auto random_matrix = [&](std::size_t r, std::size_t c) {
    std::vector<Triplet> t;
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < c; ++b) t.push_back({a, b, entry(rng)});
    return IntMatrix::from_triplets(r, c, t);
  };
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t p = dim(rng), q = dim(rng), r = dim(rng), s = dim(rng), t = dim(rng), u = dim(rng);
    auto a = random_matrix(p, q), c = random_matrix(q, r), b = random_matrix(s, t), d = random_matrix(t, u);
    o.require(mat_mul(kron(a, b), kron(c, d)) == kron(mat_mul(a, c), mat_mul(b, d)), "mixed product");
  }
  // Rank/unrank bijection.
  for (int n = 0; n <= 12; ++n) {
    for (int k = 0; k <= n; ++k) {
      SubsetIndex idx(n, k);
      std::uint64_t seen = 0;
      for_each_subset(n, k, [&](std::span<const int> set) {
        o.require(idx.rank(set) == seen && idx.unrank(seen) == std::vector<int>(set.begin(), set.end()),
                  "rank/unrank at n=" + std::to_string(n));
        ++seen;
      });
      o.require(seen == idx.size() && BigInt(seen) == binomial(n, k), "subset count at n=" + std::to_string(n));
    }
  }
  // Closure order invariance.
  for (int m = 1; m <= 3; ++m) {
    const auto& base = cache.get(m, kP1);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      ClosureOptions opt;
      opt.shuffle_seed = seed;
      auto t = closure(cache.graph(m), opt);
      o.require(t.space.same_span(base.space), "order dependence at m=" + std::to_string(m));
    }
  }
  // Two-prime dimension agreement.
  for (int m = 1; m <= 5; ++m) {
    o.require(cache.get(m, kP1).dimension == cache.get(m, kP2).dimension,
              "prime disagreement at m=" + std::to_string(m));
  }
  return o;
}

Outcome fault_injection(Closures& cache) {
  Outcome o;
  const auto& g = cache.graph(3);
  const auto& t = cache.get(3, kP1);

  // Flipped adjacency entry.
  const auto& a = g.adjacency();
  std::size_t col = g.class_offsets()[2];
  auto flipped = a + IntMatrix::from_triplets(a.nrows(), a.ncols(), {{0, col, 1}});
  auto r1 = verify_lemma2(g, flipped);
  o.require(!r1.passed() && !r1.witnesses.empty(), "flipped adjacency entry not caught");
  std::size_t row = g.class_offsets()[1];
  auto dropped_edge = a - IntMatrix::from_triplets(a.nrows(), a.ncols(), {{row, a.row(row).cols[0], 1}});
  auto r1b = verify_lemma2(g, dropped_edge);
  o.require(!r1b.passed() && !r1b.witnesses.empty(), "removed adjacency entry not caught");

  // Dropped generator.
  auto dropped = m_generators(3);
  dropped.generators.erase(dropped.generators.begin() + 11);
  auto r2 = verify_t_subset_m(g, t, dropped);
  o.require(!r2.passed() && !r2.witnesses.empty(), "dropped generator not caught by T in M");
  auto r3 = verify_basis(g, dropped, t);
  o.require(!r3.passed() && !r3.witnesses.empty(), "dropped generator not caught by basis");

  // Duplicated generator.
  auto duplicated = m_generators(3);
  duplicated.generators.push_back(duplicated.generators[5]);
  auto r4 = verify_basis(g, duplicated, t);
  o.require(!r4.passed() && !r4.witnesses.empty(), "duplicated generator not caught by basis");

  // Truncated closure: M in T and stability must both notice.
  ClosureResult partial = t;
  partial.space = MatrixSpace(g.num_vertices(), g.num_vertices());
  partial.space.insert(g.identity());
  partial.space.insert(g.adjacency());
  partial.dimension = partial.space.dim();
  auto r5 = verify_m_subset_t(g, partial, m_generators(3));
  o.require(!r5.passed() && !r5.witnesses.empty(), "truncated closure not caught by M in T");
  auto r6 = verify_closure_stable(g, partial);
  o.require(!r6.passed() && !r6.witnesses.empty(), "truncated closure not caught by stability check");
  auto r7 = verify_lemma24_25(g, partial);
  o.require(!r7.passed() && !r7.witnesses.empty(), "truncated closure not caught by odd-row families");
  return o;
}

}  // namespace

int main() {
  Closures cache;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"closure dimension equals C(m+4,4) for m = 1..5", [&] { return dimension_reproduction(cache); }},
      {"T = M over two primes for m = 1..5, and over Q for m <= 3", [&] { return t_equals_m(cache); }},
      {"adjacency blocks equal their Kronecker products for m = 1..5", [&] { return block_decomposition(cache); }},
      {"product expansion exact for v <= 7, special case agrees", [] { return product_formula(); }},
      {"generating family is a basis of the closure for m = 1..5", [&] { return basis(cache); }},
      {"odd-row families lie in the closure for m = 2..5", [&] { return odd_row_families(cache); }},
      {"double sum equals C(m+4,4) for m <= 200", [] { return counting_identity(); }},
      {"property suites", [&] { return property_suites(cache); }},
      {"fault injection is caught with witnesses", [&] { return fault_injection(cache); }},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k + 1 << ": " << criteria[k].first << " ["
              << seconds(seconds_since(t0)) << "]\n";
    for (const auto& d : o.detail) std::cout << "    " << d << '\n';
    if (!o.pass) ++failures;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
  return failures == 0 ? 0 : 1;
}
