#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "oddterw/exactmat.hpp"
#include "oddterw/report.hpp"

namespace oddterw {

// Distance-class block (rows in class i, columns in class j).
struct BlockRef {
  int i = 0;
  int j = 0;
  friend bool operator==(const BlockRef&, const BlockRef&) = default;
};

inline constexpr int kDefaultMaxM = 6;

// The Odd graph on the m-subsets of Omega = {0,...,2m}, adjacency by
// disjointness, with base vertex x = {0,...,m-1}.
//
// Vertices are grouped by distance class. A vertex y splits as
// y = alpha u beta with alpha = y n x and beta = y \ x. Inside a class the
// local index is rank(alpha) * C(m+1, |beta|) + rank(beta), where alpha is
// ranked among the |alpha|-subsets of x and beta (relabelled by -m) among
// the |beta|-subsets of Omega \ x. This is the kron() row convention with
// the x-side as left factor.
//
// Class 2i holds the vertices with |alpha| = m-i, class 2i+1 those with
// |alpha| = i.
class OddGraph {
 public:
  // Throws ParameterError unless 1 <= m <= max_m.
  static OddGraph build(int m, int max_m = kDefaultMaxM);

  int m() const { return m_; }
  int diameter() const { return m_; }
  std::size_t num_vertices() const { return vertices_.size(); }

  // Vertex masks over Omega in canonical order.
  const std::vector<std::uint64_t>& vertex_masks() const { return vertices_; }
  std::vector<int> vertex_elements(std::size_t index) const;
  std::size_t index_of(std::uint64_t mask) const;

  // class_offsets()[c] is the first index of class c; the last entry is |X|.
  const std::vector<std::size_t>& class_offsets() const { return offsets_; }
  std::size_t class_size(int c) const;
  int class_of(std::size_t vertex) const { return class_of_[vertex]; }
  // |y n x| for the vertices of class c.
  int x_part_size(int c) const;

  // Distances from x found by breadth-first search over the adjacency.
  const std::vector<int>& bfs_distances() const { return bfs_; }

  const IntMatrix& adjacency() const { return adjacency_; }
  IntMatrix identity() const { return IntMatrix::identity(num_vertices()); }
  IntMatrix dual_idempotent(int c) const;

  IntMatrix extract_block(const IntMatrix& m, BlockRef b) const;
  IntMatrix embed(const IntMatrix& block, BlockRef b) const;

  // {"m", "vertices": [[...]], "class_offsets": [...]}
  nlohmann::json manifest() const;

 private:
  int m_ = 0;
  std::vector<std::uint64_t> vertices_;
  std::vector<std::size_t> offsets_;
  std::vector<int> class_of_;
  std::vector<std::size_t> index_by_mask_;
  std::vector<int> bfs_;
  IntMatrix adjacency_;

  void check_class(int c) const;
  void check_square(const IntMatrix& m) const;
};

// Distance class by intersection size agrees with BFS distance everywhere.
VerificationReport verify_distance_partition(const OddGraph& g);

// Block structure of the adjacency matrix: zero blocks outside
// |i-j| = 1 and (m,m), the three Kronecker block identities, and
// A_{j,i} = A_{i,j}^T. `adjacency` defaults to g.adjacency().
VerificationReport verify_lemma2(const OddGraph& g);
VerificationReport verify_lemma2(const OddGraph& g, const IntMatrix& adjacency);

}  // namespace oddterw
