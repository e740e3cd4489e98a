#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oddterw/combinatorics.hpp"

namespace oddterw {

struct Triplet {
  std::size_t row;
  std::size_t col;
  BigInt value;
};

// Exact integer matrix in compressed sparse row form. Column indices are
// strictly increasing within a row and no zero is ever stored. Values are
// immutable once built, so sharing across threads is safe.
class IntMatrix {
 public:
  struct RowView {
    std::span<const std::size_t> cols;
    std::span<const BigInt> values;
  };

  IntMatrix() = default;
  IntMatrix(std::size_t nrows, std::size_t ncols);

  static IntMatrix identity(std::size_t n);
  // Duplicate coordinates are summed; resulting zeros are dropped.
  static IntMatrix from_triplets(std::size_t nrows, std::size_t ncols,
                                 std::vector<Triplet> triplets);
  static IntMatrix from_dense(const std::vector<std::vector<long long>>& rows);

  std::size_t nrows() const { return nrows_; }
  std::size_t ncols() const { return ncols_; }
  std::size_t nnz() const { return values_.size(); }
  bool is_zero() const { return values_.empty(); }

  BigInt at(std::size_t r, std::size_t c) const;
  RowView row(std::size_t r) const;

  std::vector<std::vector<BigInt>> to_dense() const;
  std::vector<Triplet> triplets() const;

  IntMatrix operator+(const IntMatrix& other) const;
  IntMatrix operator-(const IntMatrix& other) const;
  IntMatrix scaled(const BigInt& factor) const;

  friend bool operator==(const IntMatrix& a, const IntMatrix& b);

  // Incremental row-by-row construction; rows must be appended in order and
  // columns within a row strictly increasing.
  class Builder;

 private:
  std::size_t nrows_ = 0;
  std::size_t ncols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> cols_;
  std::vector<BigInt> values_;

  friend IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix kron(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix transpose(const IntMatrix& a);
};

class IntMatrix::Builder {
 public:
  Builder(std::size_t nrows, std::size_t ncols);
  void push(std::size_t col, BigInt value);
  void end_row();
  IntMatrix finish();

 private:
  IntMatrix m_;
  std::size_t row_ = 0;
};

IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b);

// kron(A,B)[rA*B.nrows + rB, cA*B.ncols + cB] = A[rA,cA] * B[rB,cB].
IntMatrix kron(const IntMatrix& a, const IntMatrix& b);

IntMatrix transpose(const IntMatrix& a);

// First coordinate where the two matrices differ, if any.
struct Mismatch {
  std::size_t row;
  std::size_t col;
  BigInt left;
  BigInt right;
};
std::optional<Mismatch> first_mismatch(const IntMatrix& a, const IntMatrix& b);

std::ostream& operator<<(std::ostream& os, const IntMatrix& m);

// Matrix Market coordinate/integer/general exchange format, 1-based,
// entries sorted by (row, column).
void write_matrix_market(std::ostream& os, const IntMatrix& m);
IntMatrix read_matrix_market(std::istream& is);
void write_matrix_market_file(const std::string& path, const IntMatrix& m);
IntMatrix read_matrix_market_file(const std::string& path);

// Field in which a MatrixSpace does its elimination.
struct FieldConfig {
  enum class Kind { prime, rational };

  Kind kind = Kind::prime;
  std::uint64_t prime = 1000000007;

  static FieldConfig gf(std::uint64_t p) { return {Kind::prime, p}; }
  static FieldConfig exact() { return {Kind::rational, 0}; }

  std::string name() const;
  friend bool operator==(const FieldConfig&, const FieldConfig&) = default;
};

inline constexpr std::uint64_t kDefaultPrime = 1000000007;
inline constexpr std::uint64_t kSecondPrime = 998244353;

bool is_prime(std::uint64_t n);

// Linear span of matrices of a fixed shape. Matrices are vectorized
// row-major and kept as sparse rows in reduced row-echelon form.
//
// Over GF(p) pivots are normalized to 1, which makes the basis canonical.
// In rational mode rows hold integers and elimination is fraction-free:
// every row is kept primitive with a positive pivot, which is again
// canonical and decides membership over Q exactly.
//
// Single writer: insert() must not run concurrently with anything else;
// contains() and the accessors may run concurrently with each other.
class MatrixSpace {
 public:
  MatrixSpace(std::size_t nrows, std::size_t ncols, FieldConfig field = FieldConfig{});
  ~MatrixSpace();
  MatrixSpace(const MatrixSpace&);
  MatrixSpace& operator=(const MatrixSpace&);
  MatrixSpace(MatrixSpace&&) noexcept;
  MatrixSpace& operator=(MatrixSpace&&) noexcept;

  // Returns true iff the dimension grew.
  bool insert(const IntMatrix& m);
  bool contains(const IntMatrix& m) const;
  std::size_t dim() const;

  std::pair<std::size_t, std::size_t> shape() const { return {nrows_, ncols_}; }
  const FieldConfig& field() const { return field_; }

  // Both spaces must share shape and field.
  bool same_span(const MatrixSpace& other) const;

  // Pivot positions (vectorized indices) in increasing order.
  std::vector<std::size_t> pivots() const;

 private:
  struct Impl;
  std::size_t nrows_;
  std::size_t ncols_;
  FieldConfig field_;
  std::unique_ptr<Impl> impl_;

  void check_shape(const IntMatrix& m) const;
};

}  // namespace oddterw
