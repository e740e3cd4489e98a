#include "oddterw/oddgraph.hpp"

#include <bit>
#include <deque>
#include <stdexcept>

#include "oddterw/errors.hpp"
#include "oddterw/intersection.hpp"

namespace oddterw {

namespace {

constexpr std::size_t kNoVertex = static_cast<std::size_t>(-1);

int ceil_half(int m) { return (m + 1) / 2; }
int floor_half(int m) { return m / 2; }

}  // namespace

OddGraph OddGraph::build(int m, int max_m) {
  if (m < 1 || m > max_m) {
    throw ParameterError("m must lie in [1," + std::to_string(max_m) + "], got " + std::to_string(m));
  }
  OddGraph g;
  g.m_ = m;
  const int omega = 2 * m + 1;
  g.index_by_mask_.assign(std::size_t{1} << omega, kNoVertex);

  for (int c = 0; c <= m; ++c) {
    g.offsets_.push_back(g.vertices_.size());
    int a = g.x_part_size(c);
    SubsetIndex alpha(m, a);
    SubsetIndex beta(m + 1, m - a);
    for (std::uint64_t ra = 0; ra < alpha.size(); ++ra) {
      std::uint64_t am = alpha.unrank_mask(ra);
      for (std::uint64_t rb = 0; rb < beta.size(); ++rb) {
        std::uint64_t mask = am | (beta.unrank_mask(rb) << m);
        g.index_by_mask_[mask] = g.vertices_.size();
        g.vertices_.push_back(mask);
        g.class_of_.push_back(c);
      }
    }
  }
  g.offsets_.push_back(g.vertices_.size());
  if (g.vertices_.size() != binomial_checked(omega, m)) {
    throw std::logic_error("OddGraph: distance classes do not cover all m-subsets");
  }

  // y's neighbours are the m-subsets of its (m+1)-element complement.
  const std::uint64_t full = (std::uint64_t{1} << omega) - 1;
  std::vector<std::vector<std::size_t>> nbrs(g.vertices_.size());
  IntMatrix::Builder adj(g.vertices_.size(), g.vertices_.size());
  for (std::size_t y = 0; y < g.vertices_.size(); ++y) {
    std::uint64_t rest = full & ~g.vertices_[y];
    for (std::uint64_t bits = rest; bits; bits &= bits - 1) {
      std::uint64_t z = rest & ~(bits & -bits);
      nbrs[y].push_back(g.index_by_mask_[z]);
    }
    std::sort(nbrs[y].begin(), nbrs[y].end());
    for (std::size_t z : nbrs[y]) adj.push(z, 1);
    adj.end_row();
  }
  g.adjacency_ = adj.finish();

  g.bfs_.assign(g.vertices_.size(), -1);
  std::deque<std::size_t> queue{0};
  g.bfs_[0] = 0;
  while (!queue.empty()) {
    std::size_t y = queue.front();
    queue.pop_front();
    for (std::size_t z : nbrs[y]) {
      if (g.bfs_[z] < 0) {
        g.bfs_[z] = g.bfs_[y] + 1;
        queue.push_back(z);
      }
    }
  }
  return g;
}

int OddGraph::x_part_size(int c) const {
  check_class(c);
  return c % 2 == 0 ? m_ - c / 2 : (c - 1) / 2;
}

void OddGraph::check_class(int c) const {
  if (c < 0 || c > m_) {
    throw ParameterError("class index " + std::to_string(c) + " outside [0," + std::to_string(m_) + "]");
  }
}

void OddGraph::check_square(const IntMatrix& m) const {
  if (m.nrows() != num_vertices() || m.ncols() != num_vertices()) {
    throw ShapeError("expected a " + std::to_string(num_vertices()) + "x" +
                     std::to_string(num_vertices()) + " matrix");
  }
}

std::vector<int> OddGraph::vertex_elements(std::size_t index) const {
  std::vector<int> out;
  for (std::uint64_t bits = vertices_.at(index); bits; bits &= bits - 1) {
    out.push_back(std::countr_zero(bits));
  }
  return out;
}

std::size_t OddGraph::index_of(std::uint64_t mask) const {
  if (mask >= index_by_mask_.size() || index_by_mask_[mask] == kNoVertex) {
    throw IndexError("mask is not a vertex");
  }
  return index_by_mask_[mask];
}

std::size_t OddGraph::class_size(int c) const {
  check_class(c);
  return offsets_[c + 1] - offsets_[c];
}

IntMatrix OddGraph::dual_idempotent(int c) const {
  check_class(c);
  IntMatrix::Builder b(num_vertices(), num_vertices());
  for (std::size_t y = 0; y < num_vertices(); ++y) {
    if (class_of_[y] == c) b.push(y, 1);
    b.end_row();
  }
  return b.finish();
}

IntMatrix OddGraph::extract_block(const IntMatrix& m, BlockRef b) const {
  check_square(m);
  check_class(b.i);
  check_class(b.j);
  const std::size_t r0 = offsets_[b.i], r1 = offsets_[b.i + 1];
  const std::size_t c0 = offsets_[b.j], c1 = offsets_[b.j + 1];
  IntMatrix::Builder out(r1 - r0, c1 - c0);
  for (std::size_t r = r0; r < r1; ++r) {
    auto rv = m.row(r);
    auto first = std::lower_bound(rv.cols.begin(), rv.cols.end(), c0);
    for (auto it = first; it != rv.cols.end() && *it < c1; ++it) {
      out.push(*it - c0, rv.values[static_cast<std::size_t>(it - rv.cols.begin())]);
    }
    out.end_row();
  }
  return out.finish();
}

IntMatrix OddGraph::embed(const IntMatrix& block, BlockRef b) const {
  check_class(b.i);
  check_class(b.j);
  if (block.nrows() != class_size(b.i) || block.ncols() != class_size(b.j)) {
    throw ShapeError("embed: block is " + std::to_string(block.nrows()) + "x" +
                     std::to_string(block.ncols()) + ", class block (" + std::to_string(b.i) + "," +
                     std::to_string(b.j) + ") is " + std::to_string(class_size(b.i)) + "x" +
                     std::to_string(class_size(b.j)));
  }
  const std::size_t r0 = offsets_[b.i];
  const std::size_t c0 = offsets_[b.j];
  IntMatrix::Builder out(num_vertices(), num_vertices());
  for (std::size_t r = 0; r < num_vertices(); ++r) {
    if (r >= r0 && r < r0 + block.nrows()) {
      auto rv = block.row(r - r0);
      for (std::size_t t = 0; t < rv.cols.size(); ++t) out.push(c0 + rv.cols[t], rv.values[t]);
    }
    out.end_row();
  }
  return out.finish();
}

nlohmann::json OddGraph::manifest() const {
  nlohmann::json vertices = nlohmann::json::array();
  for (std::size_t y = 0; y < num_vertices(); ++y) vertices.push_back(vertex_elements(y));
  return {{"m", m_}, {"vertices", vertices}, {"class_offsets", offsets_}};
}

VerificationReport verify_distance_partition(const OddGraph& g) {
  VerificationReport report;
  report.name = "distance_partition";
  report.field = "Z";
  report.parameters = {{"m", g.m()}};
  ReportTimer timer(report);
  int max_distance = 0;
  for (std::size_t y = 0; y < g.num_vertices(); ++y) {
    int bfs = g.bfs_distances()[y];
    max_distance = std::max(max_distance, bfs);
    int by_intersection = g.class_of(y);
    int meet = std::popcount(g.vertex_masks()[y] & ((std::uint64_t{1} << g.m()) - 1));
    if (bfs != by_intersection || meet != g.x_part_size(by_intersection)) {
      report.fail({{"vertex", g.vertex_elements(y)},
                   {"bfs_distance", bfs},
                   {"class_by_intersection", by_intersection},
                   {"intersection_with_x", meet}});
      break;
    }
  }
  if (max_distance != g.m()) {
    report.fail({{"kind", "diameter from x"}, {"expected", g.m()}, {"found", max_distance}});
  }
  return report;
}

VerificationReport verify_lemma2(const OddGraph& g) { return verify_lemma2(g, g.adjacency()); }

VerificationReport verify_lemma2(const OddGraph& g, const IntMatrix& a) {
  const int m = g.m();
  VerificationReport report;
  report.name = "lemma2";
  report.parameters = {{"m", m}};
  report.field = "Z";
  ReportTimer timer(report);

  auto witness = [&](const std::string& kind, BlockRef b, const Mismatch& mm) {
    report.fail({{"kind", kind},
                 {"block", {b.i, b.j}},
                 {"row", g.class_offsets()[b.i] + mm.row},
                 {"col", g.class_offsets()[b.j] + mm.col},
                 {"found", mm.left.str()},
                 {"expected", mm.right.str()}});
  };
  auto compare = [&](const std::string& kind, BlockRef b, const IntMatrix& expected) {
    IntMatrix block = g.extract_block(a, b);
    if (auto mm = first_mismatch(block, expected)) witness(kind, b, *mm);
  };

  std::size_t blocks_checked = 0;
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; j <= m; ++j) {
      BlockRef b{i, j};
      IntMatrix block = g.extract_block(a, b);
      bool allowed = std::abs(i - j) == 1 || (i == m && j == m);
      if (!allowed) {
        compare("zero_block", b, IntMatrix(block.nrows(), block.ncols()));
      }
      IntMatrix mirrored = transpose(g.extract_block(a, {j, i}));
      if (auto mm = first_mismatch(block, mirrored)) witness("symmetry", b, *mm);
      ++blocks_checked;
    }
  }
  for (int i = 0; i <= ceil_half(m) - 1; ++i) {
    compare("even_to_odd_block", {2 * i, 2 * i + 1},
            kron(build_h({m - i, i, 0, m}), build_h({i, m - i, 0, m + 1})));
  }
  for (int i = 0; i <= floor_half(m) - 1; ++i) {
    compare("odd_to_even_block", {2 * i + 1, 2 * i + 2},
            kron(build_h({i, m - i - 1, 0, m}), build_h({m - i, i + 1, 0, m + 1})));
  }
  compare("top_diagonal_block", {m, m},
          kron(build_h({floor_half(m), floor_half(m), 0, m}),
               build_h({ceil_half(m), ceil_half(m), 0, m + 1})));
  report.parameters["blocks_checked"] = blocks_checked;
  report.parameters["kronecker_identities"] = ceil_half(m) + floor_half(m) + 1;
  return report;
}

}  // namespace oddterw
