#include "oddterw/intersection.hpp"

#include <atomic>
#include <bit>
#include <mutex>
#include <thread>
#include <tuple>

#include "oddterw/errors.hpp"

namespace oddterw {

std::string HSpec::label() const {
  return "H^" + std::to_string(l) + "_{" + std::to_string(i) + "," + std::to_string(j) + "}(" +
         std::to_string(v) + ")";
}

IntMatrix build_h(const HSpec& spec) {
  const auto [i, j, l, v] = spec;
  if (v < 0 || i < 0 || j < 0 || i > v || j > v) {
    throw ParameterError("build_h: need 0 <= i,j <= v, got " + spec.label());
  }
  SubsetIndex rows(v, i);
  SubsetIndex cols(v, j);
  if (!spec.nonzero()) return IntMatrix(rows.size(), cols.size());

  const std::uint64_t full = v == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << v) - 1;
  IntMatrix::Builder out(rows.size(), cols.size());
  std::vector<int> inside;
  std::vector<int> outside;
  std::vector<std::size_t> hits;
  for (std::uint64_t r = 0; r < rows.size(); ++r) {
    std::uint64_t y = rows.unrank_mask(r);
    inside.clear();
    outside.clear();
    for (int e = 0; e < v; ++e) ((y >> e) & 1 ? inside : outside).push_back(e);
    hits.clear();
    // Columns meeting y in exactly l points: l points of y plus j-l points
    // of its complement.
    for_each_subset(i, l, [&](std::span<const int> a) {
      std::uint64_t left = 0;
      for (int t : a) left |= std::uint64_t{1} << inside[t];
      for_each_subset(v - i, j - l, [&](std::span<const int> b) {
        std::uint64_t z = left;
        for (int t : b) z |= std::uint64_t{1} << outside[t];
        hits.push_back(cols.rank_mask(z & full));
      });
    });
    std::sort(hits.begin(), hits.end());
    for (std::size_t c : hits) out.push(c, 1);
    out.end_row();
  }
  return out.finish();
}

BigInt eq7_coefficient(int i, int k, int l, int s, int j, int v, int g, int h) {
  return binomial(g, h) * binomial(i - g, l - h) * binomial(k - g, s - h) *
         binomial(v + g - i - k, j + h - l - s);
}

Expansion eq7_expand(int i, int j, int k, int l, int s, int v) {
  Expansion out;
  for (int g = 0; g <= std::min(i, k); ++g) {
    BigInt sum = 0;
    for (int h = 0; h <= g; ++h) sum += eq7_coefficient(i, k, l, s, j, v, g, h);
    if (!sum.is_zero()) out[g] = sum;
  }
  return out;
}

Expansion eq8_expand(int i, int j, int k, int l, int v) {
  Expansion out;
  for (int s = std::max(0, i + j + k - l - v); s <= std::min(i - l, k); ++s) {
    BigInt c = binomial(i - s, l) * binomial(v + s - i - k, j - l);
    if (!c.is_zero()) out[s] = c;
  }
  return out;
}

HDecomposition decompose_in_h_basis(const IntMatrix& m, int i, int k, int v) {
  SubsetIndex rows(v, i);
  SubsetIndex cols(v, k);
  if (m.nrows() != rows.size() || m.ncols() != cols.size()) {
    throw ShapeError("decompose_in_h_basis: matrix shape does not match C(v,i) x C(v,k)");
  }
  HDecomposition out;
  std::map<int, BigInt> seen;
  std::vector<std::uint64_t> col_masks(cols.size());
  for (std::uint64_t c = 0; c < cols.size(); ++c) col_masks[c] = cols.unrank_mask(c);
  for (std::uint64_t r = 0; r < rows.size(); ++r) {
    std::uint64_t y = rows.unrank_mask(r);
    auto rv = m.row(r);
    std::size_t t = 0;
    for (std::uint64_t c = 0; c < cols.size(); ++c) {
      BigInt value = 0;
      if (t < rv.cols.size() && rv.cols[t] == c) value = rv.values[t++];
      int g = std::popcount(y & col_masks[c]);
      auto [it, inserted] = seen.emplace(g, value);
      if (!inserted && it->second != value) {
        out.constant_on_classes = false;
        out.witness = "entry (" + std::to_string(r) + "," + std::to_string(c) + ") = " +
                      value.str() + " but class g=" + std::to_string(g) + " has " +
                      it->second.str();
        return out;
      }
    }
  }
  for (auto& [g, value] : seen) {
    if (!value.is_zero()) out.coefficients[g] = value;
  }
  return out;
}

IntMatrix assemble_h_combination(const Expansion& coefficients, int i, int k, int v) {
  IntMatrix sum(binomial_checked(v, i), binomial_checked(v, k));
  for (const auto& [g, c] : coefficients) sum = sum + build_h({i, k, g, v}).scaled(c);
  return sum;
}

namespace {

nlohmann::json expansion_json(const Expansion& e) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [g, c] : e) j[std::to_string(g)] = c.str();
  return j;
}

}  // namespace

VerificationReport verify_eq7_sweep(const SweepOptions& options) {
  VerificationReport report;
  report.name = "eq7";
  report.field = "Z";
  ReportTimer timer(report);

  std::vector<int> vs;
  for (int v = 0; v <= options.v_max; ++v) vs.push_back(v);
  for (int v : options.extra_v) {
    if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
  }
  std::sort(vs.begin(), vs.end());
  report.parameters = {{"v_values", vs}, {"jobs", options.jobs}};

  // All H matrices are built up front so the workers only read.
  std::map<std::tuple<int, int, int, int>, IntMatrix> cache;
  auto key = [](int i, int j, int l, int v) { return std::make_tuple(i, j, l, v); };
  for (int v : vs) {
    for (int i = 0; i <= v; ++i) {
      for (int j = 0; j <= v; ++j) {
        for (int l = -1; l <= std::min(i, j) + 1; ++l) cache.emplace(key(i, j, l, v), build_h({i, j, l, v}));
      }
    }
  }

  struct Task {
    int v, i, j, k;
  };
  std::vector<Task> tasks;
  for (int v : vs) {
    for (int i = 0; i <= v; ++i) {
      for (int j = 0; j <= v; ++j) {
        for (int k = 0; k <= v; ++k) tasks.push_back({v, i, j, k});
      }
    }
  }

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> products{0};
  std::atomic<std::size_t> eq8_checked{0};
  std::mutex failures_mutex;
  const std::size_t kMaxWitnesses = 20;

  auto record = [&](nlohmann::json w) {
    std::lock_guard lock(failures_mutex);
    if (report.witnesses.size() < kMaxWitnesses) report.fail(std::move(w));
    report.status = Status::fail;
  };

  auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      const auto [v, i, j, k] = tasks[t];
      for (int l = -1; l <= std::min(i, j) + 1; ++l) {
        const IntMatrix& left = cache.at(key(i, j, l, v));
        for (int s = -1; s <= std::min(j, k) + 1; ++s) {
          const IntMatrix& right = cache.at(key(j, k, s, v));
          IntMatrix product = mat_mul(left, right);
          ++products;
          Expansion formula = eq7_expand(i, j, k, l, s, v);
          nlohmann::json params = {{"i", i}, {"j", j}, {"k", k}, {"l", l}, {"s", s}, {"v", v}};

          HDecomposition dec = decompose_in_h_basis(product, i, k, v);
          if (!dec.constant_on_classes) {
            record({{"kind", "product not constant on intersection classes"},
                    {"tuple", params},
                    {"detail", *dec.witness}});
            continue;
          }
          if (dec.coefficients != formula) {
            record({{"kind", "coefficient mismatch"},
                    {"tuple", params},
                    {"direct", expansion_json(dec.coefficients)},
                    {"formula", expansion_json(formula)}});
            continue;
          }
          IntMatrix assembled(product.nrows(), product.ncols());
          for (const auto& [g, c] : formula) assembled = assembled + cache.at(key(i, k, g, v)).scaled(c);
          if (auto mm = first_mismatch(product, assembled)) {
            record({{"kind", "entry mismatch"},
                    {"tuple", params},
                    {"row", mm->row},
                    {"col", mm->col},
                    {"direct", mm->left.str()},
                    {"formula", mm->right.str()}});
          }
          if (s == 0 && l >= 0) {
            Expansion special = eq8_expand(i, j, k, l, v);
            ++eq8_checked;
            if (special != formula) {
              record({{"kind", "special case disagrees with general expansion"},
                      {"tuple", params},
                      {"special", expansion_json(special)},
                      {"general", expansion_json(formula)}});
            }
          }
        }
      }
    }
  };

  unsigned jobs = std::max(1u, options.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
  }
  report.parameters["products_checked"] = products.load();
  report.parameters["special_case_checked"] = eq8_checked.load();
  return report;
}

}  // namespace oddterw
