#include <algorithm>
#include <numeric>
#include <variant>

#include "oddterw/errors.hpp"
#include "oddterw/exactmat.hpp"

namespace oddterw {

namespace {

template <class T>
struct SparseVec {
  std::vector<std::size_t> idx;
  std::vector<T> val;

  bool empty() const { return idx.empty(); }

  // Value at position i, or zero.
  const T* find(std::size_t i) const {
    auto it = std::lower_bound(idx.begin(), idx.end(), i);
    if (it == idx.end() || *it != i) return nullptr;
    return &val[static_cast<std::size_t>(it - idx.begin())];
  }

  friend bool operator==(const SparseVec&, const SparseVec&) = default;
};

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mul_mod(r, a, p);
    a = mul_mod(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t to_mod(const BigInt& v, std::uint64_t p) {
  BigInt r = v % p;
  if (r < 0) r += p;
  return static_cast<std::uint64_t>(r);
}

// Reduced row-echelon basis over GF(p), pivots normalized to 1.
class ModpEchelon {
 public:
  ModpEchelon(std::size_t ambient, std::uint64_t p) : p_(p), owner_(ambient, -1) {}

  std::size_t dim() const { return rows_.size(); }

  SparseVec<std::uint64_t> vectorize(const IntMatrix& m) const {
    SparseVec<std::uint64_t> v;
    v.idx.reserve(m.nnz());
    v.val.reserve(m.nnz());
    for (std::size_t r = 0; r < m.nrows(); ++r) {
      auto rv = m.row(r);
      for (std::size_t t = 0; t < rv.cols.size(); ++t) {
        std::uint64_t x = to_mod(rv.values[t], p_);
        if (x) {
          v.idx.push_back(r * m.ncols() + rv.cols[t]);
          v.val.push_back(x);
        }
      }
    }
    return v;
  }

  // v minus its projection onto the basis. Every row is zero at every
  // other row's pivot, so the multiplier of row k is simply v[pivot_k].
  SparseVec<std::uint64_t> reduce(const SparseVec<std::uint64_t>& v) const {
    std::vector<std::pair<std::size_t, std::uint64_t>> terms;
    terms.reserve(v.idx.size());
    for (std::size_t t = 0; t < v.idx.size(); ++t) terms.emplace_back(v.idx[t], v.val[t]);
    bool touched = false;
    for (std::size_t t = 0; t < v.idx.size(); ++t) {
      int k = owner_[v.idx[t]];
      if (k < 0) continue;
      touched = true;
      std::uint64_t neg = p_ - v.val[t];
      const auto& row = rows_[static_cast<std::size_t>(k)];
      for (std::size_t s = 0; s < row.idx.size(); ++s) {
        terms.emplace_back(row.idx[s], mul_mod(neg, row.val[s], p_));
      }
    }
    if (!touched) return v;
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseVec<std::uint64_t> out;
    for (std::size_t t = 0; t < terms.size();) {
      std::uint64_t sum = 0;
      std::size_t u = t;
      for (; u < terms.size() && terms[u].first == terms[t].first; ++u) {
        sum += terms[u].second;
        if (sum >= p_) sum -= p_;
      }
      if (sum) {
        out.idx.push_back(terms[t].first);
        out.val.push_back(sum);
      }
      t = u;
    }
    return out;
  }

  void add_reduced(SparseVec<std::uint64_t> r) {
    std::uint64_t inv = pow_mod(r.val.front(), p_ - 2, p_);
    for (auto& x : r.val) x = mul_mod(x, inv, p_);
    std::size_t pivot = r.idx.front();
    for (auto& row : rows_) {
      const std::uint64_t* e = row.find(pivot);
      if (e) row = axpy(row, p_ - *e, r);
    }
    owner_[pivot] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(r));
  }

  std::vector<SparseVec<std::uint64_t>> canonical_rows() const {
    auto rows = rows_;
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.idx.front() < b.idx.front(); });
    return rows;
  }

  std::vector<std::size_t> pivots() const {
    std::vector<std::size_t> out;
    for (const auto& r : rows_) out.push_back(r.idx.front());
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  // a + c*b
  SparseVec<std::uint64_t> axpy(const SparseVec<std::uint64_t>& a, std::uint64_t c,
                                const SparseVec<std::uint64_t>& b) const {
    SparseVec<std::uint64_t> out;
    std::size_t s = 0, t = 0;
    while (s < a.idx.size() || t < b.idx.size()) {
      if (t == b.idx.size() || (s < a.idx.size() && a.idx[s] < b.idx[t])) {
        out.idx.push_back(a.idx[s]);
        out.val.push_back(a.val[s]);
        ++s;
      } else if (s == a.idx.size() || b.idx[t] < a.idx[s]) {
        out.idx.push_back(b.idx[t]);
        out.val.push_back(mul_mod(c, b.val[t], p_));
        ++t;
      } else {
        std::uint64_t x = (a.val[s] + mul_mod(c, b.val[t], p_)) % p_;
        if (x) {
          out.idx.push_back(a.idx[s]);
          out.val.push_back(x);
        }
        ++s;
        ++t;
      }
    }
    return out;
  }

  std::uint64_t p_;
  std::vector<SparseVec<std::uint64_t>> rows_;
  std::vector<int> owner_;
};

// Reduced row-echelon basis over Z, fraction-free: each row is primitive
// with a positive pivot and is zero at every other row's pivot.
class IntegerEchelon {
 public:
  explicit IntegerEchelon(std::size_t ambient) : owner_(ambient, -1) {}

  std::size_t dim() const { return rows_.size(); }

  SparseVec<BigInt> vectorize(const IntMatrix& m) const {
    SparseVec<BigInt> v;
    v.idx.reserve(m.nnz());
    v.val.reserve(m.nnz());
    for (std::size_t r = 0; r < m.nrows(); ++r) {
      auto rv = m.row(r);
      for (std::size_t t = 0; t < rv.cols.size(); ++t) {
        v.idx.push_back(r * m.ncols() + rv.cols[t]);
        v.val.push_back(rv.values[t]);
      }
    }
    return v;
  }

  // Returns L*v - sum_k (L/d_k) v[p_k] row_k with L = lcm of the pivots
  // involved; zero iff v lies in the rational span.
  SparseVec<BigInt> reduce(const SparseVec<BigInt>& v) const {
    std::vector<std::pair<std::size_t, BigInt>> hits;
    BigInt lcm = 1;
    for (std::size_t t = 0; t < v.idx.size(); ++t) {
      int k = owner_[v.idx[t]];
      if (k < 0) continue;
      hits.emplace_back(static_cast<std::size_t>(k), v.val[t]);
      const BigInt& d = pivot_value(rows_[static_cast<std::size_t>(k)]);
      lcm = lcm / boost::multiprecision::gcd(lcm, d) * d;
    }
    if (hits.empty()) return v;
    std::vector<std::pair<std::size_t, BigInt>> terms;
    for (std::size_t t = 0; t < v.idx.size(); ++t) terms.emplace_back(v.idx[t], lcm * v.val[t]);
    for (const auto& [k, c] : hits) {
      const auto& row = rows_[k];
      BigInt factor = -(lcm / pivot_value(row)) * c;
      for (std::size_t s = 0; s < row.idx.size(); ++s) terms.emplace_back(row.idx[s], factor * row.val[s]);
    }
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseVec<BigInt> out;
    for (std::size_t t = 0; t < terms.size();) {
      BigInt sum = 0;
      std::size_t u = t;
      for (; u < terms.size() && terms[u].first == terms[t].first; ++u) sum += terms[u].second;
      if (!sum.is_zero()) {
        out.idx.push_back(terms[t].first);
        out.val.push_back(std::move(sum));
      }
      t = u;
    }
    return out;
  }

  void add_reduced(SparseVec<BigInt> r) {
    make_primitive(r);
    std::size_t pivot = r.idx.front();
    const BigInt d = r.val.front();
    for (auto& row : rows_) {
      const BigInt* e = row.find(pivot);
      if (!e) continue;
      BigInt ecopy = *e;
      row = combine(row, d, r, -ecopy);
      make_primitive(row);
    }
    owner_[pivot] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(r));
  }

  std::vector<SparseVec<BigInt>> canonical_rows() const {
    auto rows = rows_;
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.idx.front() < b.idx.front(); });
    return rows;
  }

  std::vector<std::size_t> pivots() const {
    std::vector<std::size_t> out;
    for (const auto& r : rows_) out.push_back(r.idx.front());
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  static const BigInt& pivot_value(const SparseVec<BigInt>& row) { return row.val.front(); }

  static void make_primitive(SparseVec<BigInt>& r) {
    BigInt g = 0;
    for (const auto& x : r.val) {
      g = boost::multiprecision::gcd(g, x);
      if (g == 1) break;
    }
    if (r.val.front() < 0) g = -g;
    if (g != 1) {
      for (auto& x : r.val) x /= g;
    }
  }

  // ca*a + cb*b
  static SparseVec<BigInt> combine(const SparseVec<BigInt>& a, const BigInt& ca,
                                   const SparseVec<BigInt>& b, const BigInt& cb) {
    SparseVec<BigInt> out;
    std::size_t s = 0, t = 0;
    while (s < a.idx.size() || t < b.idx.size()) {
      if (t == b.idx.size() || (s < a.idx.size() && a.idx[s] < b.idx[t])) {
        out.idx.push_back(a.idx[s]);
        out.val.push_back(ca * a.val[s]);
        ++s;
      } else if (s == a.idx.size() || b.idx[t] < a.idx[s]) {
        out.idx.push_back(b.idx[t]);
        out.val.push_back(cb * b.val[t]);
        ++t;
      } else {
        BigInt x = ca * a.val[s] + cb * b.val[t];
        if (!x.is_zero()) {
          out.idx.push_back(a.idx[s]);
          out.val.push_back(std::move(x));
        }
        ++s;
        ++t;
      }
    }
    return out;
  }

  std::vector<SparseVec<BigInt>> rows_;
  std::vector<int> owner_;
};

}  // namespace

struct MatrixSpace::Impl {
  std::variant<ModpEchelon, IntegerEchelon> basis;
};

std::string FieldConfig::name() const {
  return kind == Kind::rational ? std::string("Q") : "GF(" + std::to_string(prime) + ")";
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t small : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % small == 0) return n == small;
  }
  // Deterministic Miller-Rabin for 64-bit inputs.
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

MatrixSpace::MatrixSpace(std::size_t nrows, std::size_t ncols, FieldConfig field)
    : nrows_(nrows), ncols_(ncols), field_(field) {
  std::size_t ambient = nrows * ncols;
  if (field.kind == FieldConfig::Kind::prime) {
    if (!is_prime(field.prime) || field.prime >= (std::uint64_t{1} << 62)) {
      throw ParameterError("MatrixSpace: " + std::to_string(field.prime) +
                           " is not a usable prime below 2^62");
    }
    impl_ = std::make_unique<Impl>(Impl{ModpEchelon(ambient, field.prime)});
  } else {
    impl_ = std::make_unique<Impl>(Impl{IntegerEchelon(ambient)});
  }
}

MatrixSpace::~MatrixSpace() = default;
MatrixSpace::MatrixSpace(const MatrixSpace& other)
    : nrows_(other.nrows_),
      ncols_(other.ncols_),
      field_(other.field_),
      impl_(std::make_unique<Impl>(*other.impl_)) {}
MatrixSpace& MatrixSpace::operator=(const MatrixSpace& other) {
  if (this != &other) {
    nrows_ = other.nrows_;
    ncols_ = other.ncols_;
    field_ = other.field_;
    impl_ = std::make_unique<Impl>(*other.impl_);
  }
  return *this;
}
MatrixSpace::MatrixSpace(MatrixSpace&&) noexcept = default;
MatrixSpace& MatrixSpace::operator=(MatrixSpace&&) noexcept = default;

void MatrixSpace::check_shape(const IntMatrix& m) const {
  if (m.nrows() != nrows_ || m.ncols() != ncols_) {
    throw ShapeError("MatrixSpace of " + std::to_string(nrows_) + "x" + std::to_string(ncols_) +
                     " matrices given a " + std::to_string(m.nrows()) + "x" +
                     std::to_string(m.ncols()) + " matrix");
  }
}

bool MatrixSpace::insert(const IntMatrix& m) {
  check_shape(m);
  return std::visit(
      [&](auto& basis) {
        auto r = basis.reduce(basis.vectorize(m));
        if (r.empty()) return false;
        basis.add_reduced(std::move(r));
        return true;
      },
      impl_->basis);
}

bool MatrixSpace::contains(const IntMatrix& m) const {
  check_shape(m);
  return std::visit([&](const auto& basis) { return basis.reduce(basis.vectorize(m)).empty(); },
                    impl_->basis);
}

std::size_t MatrixSpace::dim() const {
  return std::visit([](const auto& basis) { return basis.dim(); }, impl_->basis);
}

bool MatrixSpace::same_span(const MatrixSpace& other) const {
  if (shape() != other.shape() || !(field_ == other.field_)) {
    throw ShapeError("same_span: spaces differ in shape or field");
  }
  if (dim() != other.dim()) return false;
  return std::visit(
      [](const auto& a, const auto& b) -> bool {
        using A = std::decay_t<decltype(a)>;
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<A, B>) {
          return a.canonical_rows() == b.canonical_rows();
        } else {
          return false;
        }
      },
      impl_->basis, other.impl_->basis);
}

std::vector<std::size_t> MatrixSpace::pivots() const {
  return std::visit([](const auto& basis) { return basis.pivots(); }, impl_->basis);
}

}  // namespace oddterw
