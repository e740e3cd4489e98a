#include "oddterw/terwilliger.hpp"

#include <algorithm>
#include <random>
#include <thread>

#include "oddterw/errors.hpp"

namespace oddterw {

namespace {

int ceil_half(int m) { return (m + 1) / 2; }
int floor_half(int m) { return m / 2; }

void append_family(MGeneratorSet& out, BlockRef block, int left_i, int left_j, int right_i,
                   int right_j) {
  const int m = out.m;
  GRange ls = g_range(left_i, left_j, m);
  GRange ss = g_range(right_i, right_j, m + 1);
  for (int l = ls.lo; l <= ls.hi; ++l) {
    for (int s = ss.lo; s <= ss.hi; ++s) {
      out.generators.push_back({block, {left_i, left_j, l, m}, {right_i, right_j, s, m + 1}});
    }
  }
}

// Distance class of the vertices with exactly `outside` points off x.
int class_with_outside(int m, int outside) {
  return outside <= floor_half(m) ? 2 * outside : 2 * (m - outside) + 1;
}

// Blocks (i,j) of the support of an |X| x |X| matrix.
nlohmann::json support_blocks(const OddGraph& g, const IntMatrix& w) {
  nlohmann::json blocks = nlohmann::json::array();
  for (int i = 0; i <= g.m(); ++i) {
    for (int j = 0; j <= g.m(); ++j) {
      if (!g.extract_block(w, {i, j}).is_zero()) blocks.push_back({i, j});
    }
  }
  return blocks;
}

}  // namespace

IntMatrix MGenerator::matrix(const OddGraph& g) const {
  return g.embed(kron(build_h(left), build_h(right)), block);
}

std::string MGenerator::label() const {
  return "L_(" + std::to_string(block.i) + "," + std::to_string(block.j) + ")[" + left.label() +
         " x " + right.label() + "]";
}

MGeneratorSet m_generators(int m) {
  if (m < 1) throw ParameterError("m_generators: m must be >= 1");
  MGeneratorSet out;
  out.m = m;
  for (int p = 0; p <= m; ++p) {
    for (int q = 0; q <= m; ++q) {
      const int i = p / 2;
      const int j = q / 2;
      BlockRef b{p, q};
      if (p % 2 == 0 && q % 2 == 0) {
        append_family(out, b, m - i, m - j, i, j);
      } else if (p % 2 == 0) {
        append_family(out, b, m - i, j, i, m - j);
      } else if (q % 2 == 0) {
        append_family(out, b, i, m - j, m - i, j);
      } else {
        append_family(out, b, i, j, m - i, m - j);
      }
    }
  }
  return out;
}

MGeneratorSet single_pattern_generators(int m) {
  if (m < 1) throw ParameterError("single_pattern_generators: m must be >= 1");
  MGeneratorSet out;
  out.m = m;
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; j <= m; ++j) {
      append_family(out, {class_with_outside(m, i), class_with_outside(m, j)}, m - i, m - j, i, j);
    }
  }
  return out;
}

std::size_t expected_generator_count(int m) {
  std::size_t total = 0;
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; j <= m; ++j) {
      total += static_cast<std::size_t>(g_range(m - i, m - j, m).size()) *
               static_cast<std::size_t>(g_range(i, j, m + 1).size());
    }
  }
  return total;
}

ClosureResult closure(const OddGraph& g, const ClosureOptions& options) {
  const int m = g.m();
  const std::size_t n = g.num_vertices();
  const std::size_t cap = options.max_rounds ? options.max_rounds
                                             : static_cast<std::size_t>(4 * (m + 1) * (m + 1));

  std::vector<IntMatrix> generators;
  for (int c = 0; c <= m; ++c) generators.push_back(g.dual_idempotent(c));
  generators.push_back(g.adjacency());

  std::vector<IntMatrix> seeds;
  seeds.push_back(g.identity());
  seeds.push_back(g.adjacency());
  for (int c = 0; c <= m; ++c) seeds.push_back(g.dual_idempotent(c));

  if (options.shuffle_seed) {
    std::mt19937_64 rng(*options.shuffle_seed);
    std::shuffle(generators.begin(), generators.end(), rng);
    std::shuffle(seeds.begin(), seeds.end(), rng);
  }

  ClosureResult result{MatrixSpace(n, n, options.field), {}, 0, 0, 0, false};
  std::vector<std::size_t> frontier;
  for (auto& s : seeds) {
    if (result.space.insert(s)) {
      frontier.push_back(result.basis.size());
      result.basis.push_back(std::move(s));
    }
  }

  const unsigned jobs = std::max(1u, options.jobs);
  const std::size_t per_word = 2 * generators.size();
  std::vector<IntMatrix> products(per_word);
  auto compute = [&](const IntMatrix& w, std::size_t t) {
    const IntMatrix& gen = generators[t / 2];
    products[t] = t % 2 == 0 ? mat_mul(gen, w) : mat_mul(w, gen);
  };

  while (!frontier.empty()) {
    if (result.rounds >= cap) {
      throw DivergenceError("closure did not stabilize within " + std::to_string(cap) + " rounds");
    }
    ++result.rounds;
    std::vector<std::size_t> next;
    for (std::size_t idx : frontier) {
      // Copy: basis may reallocate while products are inserted.
      const IntMatrix w = result.basis[idx];
      if (jobs == 1) {
        for (std::size_t t = 0; t < per_word; ++t) compute(w, t);
      } else {
        std::vector<std::thread> threads;
        for (unsigned k = 0; k < jobs; ++k) {
          threads.emplace_back([&, k] {
            for (std::size_t t = k; t < per_word; t += jobs) compute(w, t);
          });
        }
        for (auto& th : threads) th.join();
      }
      for (auto& p : products) {
        ++result.products_computed;
        if (result.space.insert(p)) {
          next.push_back(result.basis.size());
          result.basis.push_back(std::move(p));
        }
      }
    }
    frontier = std::move(next);
  }
  result.dimension = result.space.dim();
  result.stabilized = true;
  return result;
}

VerificationReport verify_closure_stable(const OddGraph& g, const ClosureResult& t) {
  VerificationReport report;
  report.name = "closure_stable";
  report.field = t.space.field().name();
  report.parameters = {{"m", g.m()}, {"dimension", t.dimension}};
  ReportTimer timer(report);
  std::vector<std::pair<std::string, IntMatrix>> gens;
  gens.emplace_back("A", g.adjacency());
  for (int c = 0; c <= g.m(); ++c) gens.emplace_back("E" + std::to_string(c) + "*", g.dual_idempotent(c));
  for (std::size_t k = 0; k < t.basis.size(); ++k) {
    for (const auto& [name, gen] : gens) {
      if (!t.space.contains(mat_mul(gen, t.basis[k]))) {
        report.fail({{"basis_index", k}, {"product", name + " * B"}});
      }
      if (!t.space.contains(mat_mul(t.basis[k], gen))) {
        report.fail({{"basis_index", k}, {"product", "B * " + name}});
      }
    }
  }
  if (!t.stabilized) report.fail({{"kind", "closure not marked stabilized"}});
  return report;
}

VerificationReport verify_t_subset_m(const OddGraph& g, const ClosureResult& t,
                                     const MGeneratorSet& gens) {
  const int m = g.m();
  VerificationReport report;
  report.name = "t_subset_m";
  report.field = t.space.field().name();
  report.parameters = {{"m", m}, {"generators", gens.generators.size()}};
  ReportTimer timer(report);

  MatrixSpace span(g.num_vertices(), g.num_vertices(), t.space.field());
  for (const auto& gen : gens.generators) span.insert(gen.matrix(g));
  report.parameters["generator_span_dim"] = span.dim();

  if (!span.contains(g.adjacency())) report.fail({{"kind", "adjacency outside generator span"}});
  for (std::size_t k = 0; k < t.basis.size(); ++k) {
    if (!span.contains(t.basis[k])) {
      report.fail({{"kind", "closure element outside generator span"},
                   {"basis_index", k},
                   {"support_blocks", support_blocks(g, t.basis[k])}});
    }
  }

  for (int i = 0; i <= floor_half(m); ++i) {
    IntMatrix expected = g.embed(
        kron(build_h({m - i, m - i, m - i, m}), build_h({i, i, i, m + 1})), {2 * i, 2 * i});
    if (auto mm = first_mismatch(g.dual_idempotent(2 * i), expected)) {
      report.fail({{"kind", "even dual idempotent identity"}, {"class", 2 * i}, {"row", mm->row}, {"col", mm->col}});
    }
  }
  for (int i = 0; i <= ceil_half(m) - 1; ++i) {
    IntMatrix expected = g.embed(kron(build_h({i, i, i, m}), build_h({m - i, m - i, m - i, m + 1})),
                                 {2 * i + 1, 2 * i + 1});
    if (auto mm = first_mismatch(g.dual_idempotent(2 * i + 1), expected)) {
      report.fail({{"kind", "odd dual idempotent identity"}, {"class", 2 * i + 1}, {"row", mm->row}, {"col", mm->col}});
    }
  }
  return report;
}

VerificationReport verify_m_subset_t(const OddGraph& g, const ClosureResult& t,
                                     const MGeneratorSet& gens) {
  VerificationReport report;
  report.name = "m_subset_t";
  report.field = t.space.field().name();
  report.parameters = {{"m", g.m()}, {"generators", gens.generators.size()}};
  ReportTimer timer(report);
  for (std::size_t k = 0; k < gens.generators.size(); ++k) {
    if (!t.space.contains(gens.generators[k].matrix(g))) {
      report.fail({{"kind", "generator outside closure"},
                   {"generator_index", k},
                   {"generator", gens.generators[k].label()}});
    }
  }
  return report;
}

VerificationReport verify_lemma24_25(const OddGraph& g, const ClosureResult& t) {
  const int m = g.m();
  VerificationReport report;
  report.name = "lemma2425";
  report.field = t.space.field().name();
  ReportTimer timer(report);
  std::size_t odd_odd = 0;
  std::size_t odd_even = 0;
  for (int i = 0; i <= ceil_half(m) - 1; ++i) {
    for (int j = i; j <= ceil_half(m) - 1; ++j) {
      for (int l = 0; l <= i; ++l) {
        MGenerator member{{2 * i + 1, 2 * j + 1}, {i, j, l, m}, {m - i, m - j, m - j, m + 1}};
        ++odd_odd;
        if (!t.space.contains(member.matrix(g))) {
          report.fail({{"family", "odd_odd"}, {"i", i}, {"j", j}, {"l", l}, {"matrix", member.label()}});
        }
      }
    }
  }
  for (int i = 0; i <= floor_half(m); ++i) {
    for (int j = i + 1; j <= floor_half(m); ++j) {
      for (int l = 0; l <= i; ++l) {
        MGenerator member{{2 * i + 1, 2 * j}, {i, m - j, l, m}, {m - i, j, j - i - 1, m + 1}};
        ++odd_even;
        if (!t.space.contains(member.matrix(g))) {
          report.fail({{"family", "odd_even"}, {"i", i}, {"j", j}, {"l", l}, {"matrix", member.label()}});
        }
      }
    }
  }
  report.parameters = {{"m", m}, {"odd_odd_checked", odd_odd}, {"odd_even_checked", odd_even}};
  return report;
}

VerificationReport verify_basis(const OddGraph& g, const MGeneratorSet& gens, const ClosureResult& t) {
  const int m = g.m();
  VerificationReport report;
  report.name = "basis";
  report.field = t.space.field().name();
  ReportTimer timer(report);
  const std::size_t expected = expected_generator_count(m);
  report.parameters = {{"m", m},
                       {"generators", gens.generators.size()},
                       {"expected_count", expected},
                       {"closure_dim", t.dimension}};

  MatrixSpace span(g.num_vertices(), g.num_vertices(), t.space.field());
  for (std::size_t k = 0; k < gens.generators.size(); ++k) {
    if (!span.insert(gens.generators[k].matrix(g))) {
      report.fail({{"kind", "dependent generator"},
                   {"generator_index", k},
                   {"generator", gens.generators[k].label()}});
    }
  }
  if (gens.generators.size() != expected) {
    report.fail({{"kind", "generator count"}, {"found", gens.generators.size()}, {"expected", expected}});
  }
  if (span.dim() != t.dimension) {
    report.fail({{"kind", "span dimension differs from closure"}, {"span_dim", span.dim()}, {"closure_dim", t.dimension}});
  } else if (!span.same_span(t.space)) {
    report.fail({{"kind", "echelon bases differ"}});
  }

  // Compare the single-pattern reading of the basis with the block-labelled
  // family.
  MGeneratorSet single = single_pattern_generators(m);
  std::size_t unmatched = 0;
  for (const auto& s : single.generators) {
    bool found = std::any_of(gens.generators.begin(), gens.generators.end(), [&](const MGenerator& b) {
      return b.block == s.block && b.left == s.left && b.right == s.right;
    });
    if (!found) ++unmatched;
  }
  if (unmatched == 0 && single.generators.size() == gens.generators.size()) {
    report.note("single-pattern family (i,j = number of points outside x) coincides generator-for-generator with the block-labelled family");
  } else {
    MatrixSpace single_span(g.num_vertices(), g.num_vertices(), t.space.field());
    for (const auto& s : single.generators) single_span.insert(s.matrix(g));
    report.note("single-pattern family differs from the block-labelled family in " +
                std::to_string(unmatched) + " generators; spans closure: " +
                (single_span.same_span(t.space) ? "yes" : "no"));
  }
  return report;
}

VerificationReport verify_chain_products(const OddGraph& g, const ClosureResult& t) {
  const int m = g.m();
  VerificationReport report;
  report.name = "chain_products";
  report.field = t.space.field().name();
  ReportTimer timer(report);
  const IntMatrix& a = g.adjacency();

  auto chain = [&](const std::vector<int>& path) {
    IntMatrix acc = g.extract_block(a, {path[0], path[1]});
    for (std::size_t s = 1; s + 1 < path.size(); ++s) {
      acc = mat_mul(acc, g.extract_block(a, {path[s], path[s + 1]}));
    }
    return acc;
  };
  auto check_member = [&](const std::vector<int>& path) {
    IntMatrix product = chain(path);
    if (!t.space.contains(g.embed(product, {path.front(), path.back()}))) {
      report.fail({{"kind", "block chain outside closure"}, {"path", path}});
    }
  };

  std::size_t chains = 0;
  // Monotone paths in both directions, and detours i -> i+1 -> i.
  for (int i = 0; i <= m; ++i) {
    for (int j = i + 1; j <= m; ++j) {
      std::vector<int> up, down;
      for (int c = i; c <= j; ++c) up.push_back(c);
      for (int c = j; c >= i; --c) down.push_back(c);
      check_member(up);
      check_member(down);
      chains += 2;
    }
    if (i < m) {
      check_member({i, i + 1, i});
      ++chains;
    }
  }
  check_member({m, m, m});
  check_member({m - 1, m, m, m - 1});
  chains += 2;

  // Path from class 0 to class q against the single generator of block (0,q).
  // The multiplier is predicted factor-wise by iterating the product formula
  // on the x-side and complement-side factors separately.
  nlohmann::json multipliers = nlohmann::json::array();
  for (int q = 1; q <= m; ++q) {
    std::vector<int> path;
    for (int c = 0; c <= q; ++c) path.push_back(c);
    IntMatrix product = chain(path);
    const int j = q / 2;
    MGenerator target = q % 2 == 0
                            ? MGenerator{{0, q}, {m, m - j, m - j, m}, {0, j, 0, m + 1}}
                            : MGenerator{{0, q}, {m, j, j, m}, {0, m - j, 0, m + 1}};
    IntMatrix gen = kron(build_h(target.left), build_h(target.right));

    Expansion left{{m, 1}};
    Expansion right{{0, 1}};
    for (int c = 0; c < q; ++c) {
      int a0 = g.x_part_size(c);
      int a1 = g.x_part_size(c + 1);
      Expansion nl, nr;
      for (const auto& [gg, coef] : left) {
        for (const auto& [h, k] : eq7_expand(m, a0, a1, gg, 0, m)) nl[h] += coef * k;
      }
      for (const auto& [gg, coef] : right) {
        for (const auto& [h, k] : eq7_expand(0, m - a0, m - a1, gg, 0, m + 1)) nr[h] += coef * k;
      }
      left = std::move(nl);
      right = std::move(nr);
    }
    BigInt predicted = 0;
    if (left.size() == 1 && right.size() == 1 && left.begin()->first == target.left.l &&
        right.begin()->first == target.right.l) {
      predicted = left.begin()->second * right.begin()->second;
    }

    BigInt c = 0;
    if (!gen.is_zero()) {
      auto rv = gen.row(0);
      c = product.at(0, rv.cols[0]);
    }
    if (c <= 0 || !(product == gen.scaled(c))) {
      report.fail({{"kind", "path product is not a positive multiple of the block generator"}, {"q", q}});
    } else if (predicted != c) {
      report.fail({{"kind", "multiplier disagrees with factor-wise prediction"},
                   {"q", q},
                   {"direct", c.str()},
                   {"predicted", predicted.str()}});
    }
    multipliers.push_back({{"q", q}, {"multiplier", c.str()}});
  }
  report.parameters = {{"m", m}, {"chains_checked", chains}, {"path_multipliers", multipliers}};
  return report;
}

VerificationReport verify_block_closure(const OddGraph& g, const ClosureResult& t,
                                        std::size_t samples, std::uint64_t seed) {
  const int m = g.m();
  VerificationReport report;
  report.name = "block_closure";
  report.field = t.space.field().name();
  report.parameters = {{"m", m}, {"samples", samples}, {"seed", seed}};
  ReportTimer timer(report);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, t.basis.size() - 1);
  std::uniform_int_distribution<int> cls(0, m);
  for (std::size_t n = 0; n < samples; ++n) {
    std::size_t x = pick(rng), y = pick(rng);
    int i = cls(rng), j = cls(rng), k = cls(rng);
    IntMatrix product = mat_mul(g.extract_block(t.basis[x], {i, j}), g.extract_block(t.basis[y], {j, k}));
    if (!t.space.contains(g.embed(product, {i, k}))) {
      report.fail({{"basis_pair", {x, y}}, {"blocks", {i, j, k}}});
    }
  }
  return report;
}

DimensionCount dimension_formula(int m) {
  if (m < 1) throw ParameterError("dimension_formula: m must be >= 1");
  DimensionCount out;
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; j <= m; ++j) {
      BigInt a = std::min(m - i, m - j) - std::max(0, m - i - j) + 1;
      BigInt b = std::min(i, j) - std::max(0, i + j - m - 1) + 1;
      out.double_sum += a * b;
    }
  }
  out.binomial = binomial(m + 4, 4);
  if (out.double_sum != out.binomial) {
    throw FormulaError("m=" + std::to_string(m) + ": double sum " + out.double_sum.str() +
                       " != C(m+4,4) = " + out.binomial.str());
  }
  return out;
}

VerificationReport verify_dimension_formula(int m_max) {
  VerificationReport report;
  report.name = "dimension";
  report.field = "Z";
  report.parameters = {{"m_max", m_max}};
  ReportTimer timer(report);
  for (int m = 1; m <= m_max; ++m) {
    try {
      dimension_formula(m);
    } catch (const FormulaError& e) {
      report.fail({{"m", m}, {"detail", e.what()}});
    }
  }
  return report;
}

}  // namespace oddterw
