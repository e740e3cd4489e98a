#include "oddterw/exactmat.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "oddterw/errors.hpp"

namespace oddterw {

namespace {

std::string shape_str(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

IntMatrix::IntMatrix(std::size_t nrows, std::size_t ncols)
    : nrows_(nrows), ncols_(ncols), row_ptr_(nrows + 1, 0) {}

IntMatrix IntMatrix::identity(std::size_t n) {
  Builder b(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    b.push(r, 1);
    b.end_row();
  }
  return b.finish();
}

IntMatrix IntMatrix::from_triplets(std::size_t nrows, std::size_t ncols,
                                   std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row >= nrows || t.col >= ncols) {
      throw ShapeError("triplet (" + std::to_string(t.row) + "," + std::to_string(t.col) +
                       ") outside " + shape_str(nrows, ncols));
    }
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  Builder b(nrows, ncols);
  std::size_t row = 0;
  for (std::size_t t = 0; t < triplets.size();) {
    BigInt sum = triplets[t].value;
    std::size_t u = t + 1;
    while (u < triplets.size() && triplets[u].row == triplets[t].row &&
           triplets[u].col == triplets[t].col) {
      sum += triplets[u].value;
      ++u;
    }
    while (row < triplets[t].row) {
      b.end_row();
      ++row;
    }
    b.push(triplets[t].col, std::move(sum));
    t = u;
  }
  while (row < nrows) {
    b.end_row();
    ++row;
  }
  return b.finish();
}

IntMatrix IntMatrix::from_dense(const std::vector<std::vector<long long>>& rows) {
  std::size_t ncols = rows.empty() ? 0 : rows.front().size();
  Builder b(rows.size(), ncols);
  for (const auto& r : rows) {
    if (r.size() != ncols) throw ShapeError("from_dense: ragged rows");
    for (std::size_t c = 0; c < ncols; ++c) b.push(c, r[c]);
    b.end_row();
  }
  return b.finish();
}

IntMatrix::Builder::Builder(std::size_t nrows, std::size_t ncols) {
  m_.nrows_ = nrows;
  m_.ncols_ = ncols;
  m_.row_ptr_.assign(1, 0);
  m_.row_ptr_.reserve(nrows + 1);
}

void IntMatrix::Builder::push(std::size_t col, BigInt value) {
  if (value.is_zero()) return;
  if (row_ >= m_.nrows_ || col >= m_.ncols_) throw ShapeError("Builder: entry out of range");
  if (m_.cols_.size() > m_.row_ptr_.back() && m_.cols_.back() >= col) {
    throw ShapeError("Builder: columns must increase within a row");
  }
  m_.cols_.push_back(col);
  m_.values_.push_back(std::move(value));
}

void IntMatrix::Builder::end_row() {
  if (row_ >= m_.nrows_) throw ShapeError("Builder: too many rows");
  m_.row_ptr_.push_back(m_.cols_.size());
  ++row_;
}

IntMatrix IntMatrix::Builder::finish() {
  if (row_ != m_.nrows_) throw ShapeError("Builder: not all rows were ended");
  return std::move(m_);
}

BigInt IntMatrix::at(std::size_t r, std::size_t c) const {
  if (r >= nrows_ || c >= ncols_) throw IndexError("IntMatrix::at out of range");
  auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]);
  auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]);
  auto it = std::lower_bound(first, last, c);
  if (it == last || *it != c) return 0;
  return values_[static_cast<std::size_t>(it - cols_.begin())];
}

IntMatrix::RowView IntMatrix::row(std::size_t r) const {
  std::size_t b = row_ptr_[r];
  std::size_t e = row_ptr_[r + 1];
  return {std::span<const std::size_t>(cols_.data() + b, e - b),
          std::span<const BigInt>(values_.data() + b, e - b)};
}

std::vector<std::vector<BigInt>> IntMatrix::to_dense() const {
  std::vector<std::vector<BigInt>> out(nrows_, std::vector<BigInt>(ncols_));
  for (std::size_t r = 0; r < nrows_; ++r) {
    auto rv = row(r);
    for (std::size_t t = 0; t < rv.cols.size(); ++t) out[r][rv.cols[t]] = rv.values[t];
  }
  return out;
}

std::vector<Triplet> IntMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::size_t r = 0; r < nrows_; ++r) {
    auto rv = row(r);
    for (std::size_t t = 0; t < rv.cols.size(); ++t) out.push_back({r, rv.cols[t], rv.values[t]});
  }
  return out;
}

namespace {

// Row-wise sorted merge of a + sign*b.
IntMatrix merge_add(const IntMatrix& a, const IntMatrix& b, int sign) {
  if (a.nrows() != b.nrows() || a.ncols() != b.ncols()) {
    throw ShapeError("add: " + shape_str(a.nrows(), a.ncols()) + " vs " +
                     shape_str(b.nrows(), b.ncols()));
  }
  IntMatrix::Builder out(a.nrows(), a.ncols());
  for (std::size_t r = 0; r < a.nrows(); ++r) {
    auto ra = a.row(r);
    auto rb = b.row(r);
    std::size_t s = 0, t = 0;
    while (s < ra.cols.size() || t < rb.cols.size()) {
      if (t == rb.cols.size() || (s < ra.cols.size() && ra.cols[s] < rb.cols[t])) {
        out.push(ra.cols[s], ra.values[s]);
        ++s;
      } else if (s == ra.cols.size() || rb.cols[t] < ra.cols[s]) {
        out.push(rb.cols[t], sign > 0 ? BigInt(rb.values[t]) : BigInt(-rb.values[t]));
        ++t;
      } else {
        out.push(ra.cols[s], sign > 0 ? BigInt(ra.values[s] + rb.values[t])
                                      : BigInt(ra.values[s] - rb.values[t]));
        ++s;
        ++t;
      }
    }
    out.end_row();
  }
  return out.finish();
}

}  // namespace

IntMatrix IntMatrix::operator+(const IntMatrix& other) const { return merge_add(*this, other, 1); }

IntMatrix IntMatrix::operator-(const IntMatrix& other) const { return merge_add(*this, other, -1); }

IntMatrix IntMatrix::scaled(const BigInt& factor) const {
  if (factor.is_zero()) return IntMatrix(nrows_, ncols_);
  IntMatrix out = *this;
  for (auto& v : out.values_) v *= factor;
  return out;
}

bool operator==(const IntMatrix& a, const IntMatrix& b) {
  return a.nrows_ == b.nrows_ && a.ncols_ == b.ncols_ && a.row_ptr_ == b.row_ptr_ &&
         a.cols_ == b.cols_ && a.values_ == b.values_;
}

IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b) {
  if (a.ncols_ != b.nrows_) {
    throw ShapeError("mat_mul: " + shape_str(a.nrows_, a.ncols_) + " * " +
                     shape_str(b.nrows_, b.ncols_));
  }
  IntMatrix out(a.nrows_, b.ncols_);
  out.row_ptr_.assign(1, 0);
  std::vector<BigInt> acc(b.ncols_);
  std::vector<char> seen(b.ncols_, 0);
  std::vector<std::size_t> touched;
  for (std::size_t r = 0; r < a.nrows_; ++r) {
    touched.clear();
    for (std::size_t s = a.row_ptr_[r]; s < a.row_ptr_[r + 1]; ++s) {
      std::size_t k = a.cols_[s];
      const BigInt& av = a.values_[s];
      bool unit = av == 1;
      for (std::size_t t = b.row_ptr_[k]; t < b.row_ptr_[k + 1]; ++t) {
        std::size_t c = b.cols_[t];
        if (!seen[c]) {
          seen[c] = 1;
          touched.push_back(c);
        }
        if (unit) {
          acc[c] += b.values_[t];
        } else {
          acc[c] += av * b.values_[t];
        }
      }
    }
    std::sort(touched.begin(), touched.end());
    for (std::size_t c : touched) {
      if (!acc[c].is_zero()) {
        out.cols_.push_back(c);
        out.values_.push_back(std::move(acc[c]));
      }
      acc[c] = 0;
      seen[c] = 0;
    }
    out.row_ptr_.push_back(out.cols_.size());
  }
  return out;
}

IntMatrix kron(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix out(a.nrows_ * b.nrows_, a.ncols_ * b.ncols_);
  out.row_ptr_.assign(1, 0);
  out.cols_.reserve(a.nnz() * b.nnz());
  out.values_.reserve(a.nnz() * b.nnz());
  for (std::size_t ra = 0; ra < a.nrows_; ++ra) {
    for (std::size_t rb = 0; rb < b.nrows_; ++rb) {
      for (std::size_t s = a.row_ptr_[ra]; s < a.row_ptr_[ra + 1]; ++s) {
        std::size_t base = a.cols_[s] * b.ncols_;
        for (std::size_t t = b.row_ptr_[rb]; t < b.row_ptr_[rb + 1]; ++t) {
          out.cols_.push_back(base + b.cols_[t]);
          out.values_.push_back(a.values_[s] * b.values_[t]);
        }
      }
      out.row_ptr_.push_back(out.cols_.size());
    }
  }
  return out;
}

IntMatrix transpose(const IntMatrix& a) {
  IntMatrix out(a.ncols_, a.nrows_);
  std::vector<std::size_t> counts(a.ncols_ + 1, 0);
  for (std::size_t c : a.cols_) ++counts[c + 1];
  for (std::size_t c = 0; c < a.ncols_; ++c) counts[c + 1] += counts[c];
  out.row_ptr_ = counts;
  out.cols_.resize(a.nnz());
  out.values_.resize(a.nnz());
  std::vector<std::size_t> next(counts.begin(), counts.end() - 1);
  for (std::size_t r = 0; r < a.nrows_; ++r) {
    for (std::size_t s = a.row_ptr_[r]; s < a.row_ptr_[r + 1]; ++s) {
      std::size_t pos = next[a.cols_[s]]++;
      out.cols_[pos] = r;
      out.values_[pos] = a.values_[s];
    }
  }
  return out;
}

std::optional<Mismatch> first_mismatch(const IntMatrix& a, const IntMatrix& b) {
  if (a.nrows() != b.nrows() || a.ncols() != b.ncols()) {
    throw ShapeError("compare: " + shape_str(a.nrows(), a.ncols()) + " vs " +
                     shape_str(b.nrows(), b.ncols()));
  }
  for (std::size_t r = 0; r < a.nrows(); ++r) {
    auto ra = a.row(r);
    auto rb = b.row(r);
    std::size_t s = 0, t = 0;
    while (s < ra.cols.size() || t < rb.cols.size()) {
      if (t == rb.cols.size() || (s < ra.cols.size() && ra.cols[s] < rb.cols[t])) {
        return Mismatch{r, ra.cols[s], ra.values[s], 0};
      }
      if (s == ra.cols.size() || rb.cols[t] < ra.cols[s]) {
        return Mismatch{r, rb.cols[t], 0, rb.values[t]};
      }
      if (ra.values[s] != rb.values[t]) return Mismatch{r, ra.cols[s], ra.values[s], rb.values[t]};
      ++s;
      ++t;
    }
  }
  return std::nullopt;
}

std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
  auto dense = m.to_dense();
  for (const auto& row : dense) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? " " : "") << row[c];
    os << '\n';
  }
  return os;
}

void write_matrix_market(std::ostream& os, const IntMatrix& m) {
  os << "%%MatrixMarket matrix coordinate integer general\n";
  os << m.nrows() << ' ' << m.ncols() << ' ' << m.nnz() << '\n';
  for (std::size_t r = 0; r < m.nrows(); ++r) {
    auto rv = m.row(r);
    for (std::size_t t = 0; t < rv.cols.size(); ++t) {
      os << r + 1 << ' ' << rv.cols[t] + 1 << ' ' << rv.values[t] << '\n';
    }
  }
}

IntMatrix read_matrix_market(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("Matrix Market: empty input");
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  auto lower = [](std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
    return s;
  };
  if (banner != "%%MatrixMarket" || lower(object) != "matrix" || lower(format) != "coordinate" ||
      lower(field) != "integer" || lower(symmetry) != "general") {
    throw IoError("Matrix Market: unsupported header '" + line + "'");
  }
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::size_t nrows = 0, ncols = 0, nnz = 0;
  {
    std::istringstream size_line(line);
    if (!(size_line >> nrows >> ncols >> nnz)) throw IoError("Matrix Market: bad size line");
  }
  std::vector<Triplet> triplets;
  triplets.reserve(nnz);
  for (std::size_t t = 0; t < nnz; ++t) {
    std::size_t r = 0, c = 0;
    std::string value;
    if (!(is >> r >> c >> value)) throw IoError("Matrix Market: truncated entry list");
    if (r == 0 || c == 0 || r > nrows || c > ncols) throw IoError("Matrix Market: index out of range");
    triplets.push_back({r - 1, c - 1, BigInt(value)});
  }
  return IntMatrix::from_triplets(nrows, ncols, std::move(triplets));
}

void write_matrix_market_file(const std::string& path, const IntMatrix& m) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  write_matrix_market(os, m);
  if (!os) throw IoError("write to '" + path + "' failed");
}

IntMatrix read_matrix_market_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path + "'");
  return read_matrix_market(is);
}

}  // namespace oddterw
