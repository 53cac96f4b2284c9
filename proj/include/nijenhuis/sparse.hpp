#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "linalg.hpp"

namespace nij {

struct Triplet {
  std::size_t row;
  std::size_t col;
  Scalar value;
};

struct SparseEntry {
  std::size_t col;
  Scalar value;
};

using SparseRow = std::vector<SparseEntry>;

/// Row-compressed sparse matrix with exact entries; rows are sorted by column and hold no zeros.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows) {}

  static SparseMatrix identity(std::size_t n) {
    SparseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.data_[i].push_back({i, Scalar(1)});
    return m;
  }

  /// Duplicate positions are summed; zeros dropped.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> triplets) {
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    SparseMatrix m(rows, cols);
    for (auto& t : triplets) {
      if (t.row >= rows || t.col >= cols) throw StructureError("triplet out of range");
      auto& row = m.data_[t.row];
      if (!row.empty() && row.back().col == t.col) {
        row.back().value += t.value;
        if (nij::is_zero(row.back().value)) row.pop_back();
      } else if (!nij::is_zero(t.value)) {
        row.push_back({t.col, std::move(t.value)});
      }
    }
    return m;
  }

  static SparseMatrix from_dense(const Matrix& d) {
    SparseMatrix m(d.rows(), d.cols());
    for (std::size_t r = 0; r < d.rows(); ++r)
      for (std::size_t c = 0; c < d.cols(); ++c)
        if (!nij::is_zero(d(r, c))) m.data_[r].push_back({c, d(r, c)});
    return m;
  }

  /// Columns given as vectors of length rows.
  static SparseMatrix from_columns(std::size_t rows, const std::vector<Vector>& columns) {
    std::vector<Triplet> t;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c].size() != rows) throw StructureError("column has wrong length");
      for (std::size_t r = 0; r < rows; ++r)
        if (!nij::is_zero(columns[c][r])) t.push_back({r, c, columns[c][r]});
    }
    return from_triplets(rows, columns.size(), std::move(t));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const SparseRow& row(std::size_t r) const { return data_[r]; }

  /// Replaces a row; the caller supplies sorted, zero-free entries.
  void set_row(std::size_t r, SparseRow entries) { data_[r] = std::move(entries); }

  std::size_t nnz() const {
    std::size_t n = 0;
    for (const auto& r : data_) n += r.size();
    return n;
  }

  bool is_zero() const {
    for (const auto& r : data_)
      if (!r.empty()) return false;
    return true;
  }

  Scalar at(std::size_t r, std::size_t c) const {
    const auto& row = data_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const SparseEntry& e, std::size_t col) { return e.col < col; });
    if (it != row.end() && it->col == c) return it->value;
    return Scalar(0);
  }

  Vector apply(const Vector& x) const {
    if (x.size() != cols_) throw StructureError("sparse matrix-vector size mismatch");
    Vector y(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (const auto& e : data_[r])
        if (!nij::is_zero(x[e.col])) y[r] += e.value * x[e.col];
    return y;
  }

  SparseMatrix transpose() const {
    SparseMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (const auto& e : data_[r]) t.data_[e.col].push_back({r, e.value});
    return t;
  }

  Matrix to_dense() const {
    Matrix d(rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (const auto& e : data_[r]) d(r, e.col) = e.value;
    return d;
  }

  Vector column(std::size_t c) const {
    Vector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = at(r, c);
    return v;
  }

  friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols_ != b.rows_) throw StructureError("sparse product size mismatch");
    SparseMatrix p(a.rows_, b.cols_);
    std::vector<Scalar> acc(b.cols_);
    std::vector<char> touched(b.cols_, 0);
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < a.rows_; ++i) {
      cols.clear();
      for (const auto& ea : a.data_[i])
        for (const auto& eb : b.data_[ea.col]) {
          if (!touched[eb.col]) {
            touched[eb.col] = 1;
            cols.push_back(eb.col);
            acc[eb.col] = ea.value * eb.value;
          } else {
            acc[eb.col] += ea.value * eb.value;
          }
        }
      std::sort(cols.begin(), cols.end());
      auto& out = p.data_[i];
      for (auto c : cols) {
        touched[c] = 0;
        if (!nij::is_zero(acc[c])) out.push_back({c, acc[c]});
      }
    }
    return p;
  }

  friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) {
    return combine(a, b, Scalar(1));
  }

  friend SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) {
    return combine(a, b, Scalar(-1));
  }

  friend SparseMatrix operator*(const Scalar& s, SparseMatrix a) {
    if (nij::is_zero(s)) return SparseMatrix(a.rows_, a.cols_);
    for (auto& row : a.data_)
      for (auto& e : row) e.value *= s;
    return a;
  }

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t r = 0; r < a.rows_; ++r) {
      const auto& x = a.data_[r];
      const auto& y = b.data_[r];
      if (x.size() != y.size()) return false;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i].col != y[i].col || x[i].value != y[i].value) return false;
    }
    return true;
  }

 private:
  static SparseMatrix combine(const SparseMatrix& a, const SparseMatrix& b, const Scalar& s) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw StructureError("sparse sum size mismatch");
    SparseMatrix out(a.rows_, a.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r) {
      const auto& x = a.data_[r];
      const auto& y = b.data_[r];
      auto& o = out.data_[r];
      std::size_t i = 0, j = 0;
      while (i < x.size() || j < y.size()) {
        if (j == y.size() || (i < x.size() && x[i].col < y[j].col)) {
          o.push_back(x[i++]);
        } else if (i == x.size() || y[j].col < x[i].col) {
          o.push_back({y[j].col, s * y[j].value});
          ++j;
        } else {
          Scalar v = x[i].value + s * y[j].value;
          if (!nij::is_zero(v)) o.push_back({x[i].col, std::move(v)});
          ++i;
          ++j;
        }
      }
    }
    return out;
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<SparseRow> data_;
};

/// Assembles a block matrix; a null entry is a zero block. Block sizes come from row_dims/col_dims.
inline SparseMatrix block_matrix(const std::vector<std::size_t>& row_dims,
                                 const std::vector<std::size_t>& col_dims,
                                 const std::vector<std::vector<const SparseMatrix*>>& blocks) {
  std::size_t rows = 0, cols = 0;
  for (auto r : row_dims) rows += r;
  for (auto c : col_dims) cols += c;
  SparseMatrix out(rows, cols);
  std::size_t row_off = 0;
  for (std::size_t bi = 0; bi < row_dims.size(); ++bi) {
    for (std::size_t r = 0; r < row_dims[bi]; ++r) {
      SparseRow row;
      std::size_t col_off = 0;
      for (std::size_t bj = 0; bj < col_dims.size(); ++bj) {
        const SparseMatrix* b = blocks[bi][bj];
        if (b) {
          if (b->rows() != row_dims[bi] || b->cols() != col_dims[bj])
            throw StructureError("block has wrong shape");
          for (const auto& e : b->row(r)) row.push_back({e.col + col_off, e.value});
        }
        col_off += col_dims[bj];
      }
      out.set_row(row_off + r, std::move(row));
    }
    row_off += row_dims[bi];
  }
  return out;
}

/// Sub-block [r0, r0+nr) x [c0, c0+nc).
inline SparseMatrix sub_block(const SparseMatrix& m, std::size_t r0, std::size_t nr, std::size_t c0,
                              std::size_t nc) {
  SparseMatrix out(nr, nc);
  for (std::size_t r = 0; r < nr; ++r) {
    SparseRow row;
    for (const auto& e : m.row(r0 + r))
      if (e.col >= c0 && e.col < c0 + nc) row.push_back({e.col - c0, e.value});
    out.set_row(r, std::move(row));
  }
  return out;
}

inline SparseMatrix hstack(const SparseMatrix& a, const SparseMatrix& b) {
  return block_matrix({a.rows()}, {a.cols(), b.cols()}, {{&a, &b}});
}

namespace detail {

using IntRow = std::vector<std::pair<std::size_t, mpz_class>>;

inline void make_primitive(IntRow& row) {
  mpz_class g = 0;
  for (const auto& [c, v] : row) {
    g = gcd(g, v);
    if (g == 1) break;
  }
  if (g > 1)
    for (auto& [c, v] : row) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
  if (!row.empty() && row.front().second < 0)
    for (auto& [c, v] : row) v = -v;
}

inline IntRow integer_row(const SparseRow& row) {
  mpz_class l = 1;
  for (const auto& e : row) l = lcm(l, e.value.get_den());
  IntRow out;
  out.reserve(row.size());
  for (const auto& e : row) out.emplace_back(e.col, e.value.get_num() * (l / e.value.get_den()));
  make_primitive(out);
  return out;
}

// r <- a*r - b*p where a = lead(p)/g, b = lead(r)/g; the leading column cancels.
inline IntRow eliminate_lead(const IntRow& r, const IntRow& p) {
  mpz_class g = gcd(r.front().second, p.front().second);
  mpz_class a = p.front().second / g;
  mpz_class b = r.front().second / g;
  IntRow out;
  out.reserve(r.size() + p.size());
  std::size_t i = 1, j = 1;
  mpz_class v;
  while (i < r.size() || j < p.size()) {
    if (j == p.size() || (i < r.size() && r[i].first < p[j].first)) {
      out.emplace_back(r[i].first, a * r[i].second);
      ++i;
    } else if (i == r.size() || p[j].first < r[i].first) {
      out.emplace_back(p[j].first, -b * p[j].second);
      ++j;
    } else {
      v = a * r[i].second - b * p[j].second;
      if (v != 0) out.emplace_back(r[i].first, v);
      ++i;
      ++j;
    }
  }
  make_primitive(out);
  return out;
}

// r <- r - r.lead * p, with p's leading entry 1.
inline SparseRow eliminate_rational(const SparseRow& r, const SparseRow& p, const Scalar& factor,
                                    std::size_t skip_r, std::size_t skip_p) {
  SparseRow out;
  out.reserve(r.size() + p.size());
  std::size_t i = 0, j = 0;
  while (i < r.size() || j < p.size()) {
    if (i == skip_r) {
      ++i;
      continue;
    }
    if (j == skip_p) {
      ++j;
      continue;
    }
    if (j == p.size() || (i < r.size() && r[i].col < p[j].col)) {
      out.push_back(r[i++]);
    } else if (i == r.size() || p[j].col < r[i].col) {
      out.push_back({p[j].col, -factor * p[j].value});
      ++j;
    } else {
      Scalar v = r[i].value - factor * p[j].value;
      if (!is_zero(v)) out.push_back({r[i].col, std::move(v)});
      ++i;
      ++j;
    }
  }
  return out;
}

/// Row echelon form with unit leading entries, built row by row.
class RationalEchelon {
 public:
  explicit RationalEchelon(std::size_t cols) : pivot_of_col_(cols, npos) {}

  /// Reduces a row against the current pivots; keeps it if independent. Returns its lead or npos.
  std::size_t insert(SparseRow row) {
    while (!row.empty()) {
      std::size_t c = row.front().col;
      std::size_t p = pivot_of_col_[c];
      if (p == npos) {
        Scalar inv = 1 / row.front().value;
        for (auto& e : row) e.value *= inv;
        pivot_of_col_[c] = rows_.size();
        rows_.push_back(std::move(row));
        return c;
      }
      Scalar factor = row.front().value;
      row = eliminate_rational(row, rows_[p], factor, 0, 0);
    }
    return npos;
  }

  /// Back-substitution to reduced row echelon form.
  void reduce() {
    std::vector<std::size_t> order(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return rows_[a].front().col > rows_[b].front().col;
    });
    for (std::size_t idx : order) {
      std::map<std::size_t, Scalar> acc;
      for (const auto& e : rows_[idx]) acc.emplace(e.col, e.value);
      std::size_t lead = rows_[idx].front().col;
      for (auto it = acc.upper_bound(lead); it != acc.end();) {
        std::size_t c = it->first;
        std::size_t p = pivot_of_col_[c];
        if (p == npos || is_zero(it->second)) {
          ++it;
          continue;
        }
        Scalar factor = it->second;
        for (const auto& e : rows_[p]) acc[e.col] -= factor * e.value;
        it = acc.upper_bound(c);
      }
      SparseRow out;
      for (auto& [c, v] : acc)
        if (!is_zero(v)) out.push_back({c, v});
      rows_[idx] = std::move(out);
    }
  }

  std::size_t rank() const { return rows_.size(); }
  std::size_t pivot_row(std::size_t col) const { return pivot_of_col_[col]; }
  const SparseRow& row(std::size_t i) const { return rows_[i]; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<std::size_t> pivot_of_col_;
  std::vector<SparseRow> rows_;
};

}  // namespace detail

/// Exact rank by fraction-free elimination over the integers (rows scaled to primitive
/// integer vectors, first-nonzero pivoting).
inline std::size_t rank(const SparseMatrix& m) {
  const SparseMatrix* src = &m;
  SparseMatrix t;
  if (m.rows() > m.cols()) {
    t = m.transpose();
    src = &t;
  }
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::vector<std::size_t> pivot_of_col(src->cols(), npos);
  std::vector<detail::IntRow> pivots;
  std::vector<std::size_t> order(src->rows());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return src->row(a).size() < src->row(b).size();
  });
  for (std::size_t r : order) {
    if (src->row(r).empty()) continue;
    detail::IntRow row = detail::integer_row(src->row(r));
    while (!row.empty()) {
      std::size_t c = row.front().first;
      std::size_t p = pivot_of_col[c];
      if (p == npos) {
        pivot_of_col[c] = pivots.size();
        pivots.push_back(std::move(row));
        break;
      }
      row = detail::eliminate_lead(row, pivots[p]);
    }
  }
  return pivots.size();
}

inline std::size_t rank(const Matrix& m) { return rank(SparseMatrix::from_dense(m)); }

/// Basis of {x : m x = 0}, one vector per free column in increasing column order.
inline std::vector<Vector> kernel_basis(const SparseMatrix& m) {
  detail::RationalEchelon ech(m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    if (!m.row(r).empty()) ech.insert(m.row(r));
  ech.reduce();
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (ech.pivot_row(f) != detail::RationalEchelon::npos) continue;
    Vector x(m.cols());
    x[f] = 1;
    for (std::size_t i = 0; i < ech.rank(); ++i) {
      const auto& row = ech.row(i);
      for (const auto& e : row)
        if (e.col == f) x[row.front().col] = -e.value;
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

inline std::vector<Vector> kernel_basis(const Matrix& m) {
  return kernel_basis(SparseMatrix::from_dense(m));
}

/// Some x with m x = b (free variables set to zero), or none.
inline std::optional<Vector> solve(const SparseMatrix& m, const Vector& b) {
  if (b.size() != m.rows()) throw StructureError("right-hand side has wrong length");
  const std::size_t rhs = m.cols();
  detail::RationalEchelon ech(m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    SparseRow row = m.row(r);
    if (!is_zero(b[r])) row.push_back({rhs, b[r]});
    if (row.empty()) continue;
    if (ech.insert(std::move(row)) == rhs) return std::nullopt;
  }
  ech.reduce();
  Vector x(m.cols());
  for (std::size_t i = 0; i < ech.rank(); ++i) {
    const auto& row = ech.row(i);
    if (row.back().col == rhs) x[row.front().col] = row.back().value;
  }
  return x;
}

inline std::optional<Vector> solve(const Matrix& m, const Vector& b) {
  return solve(SparseMatrix::from_dense(m), b);
}

inline std::optional<Matrix> inverse(const Matrix& m) {
  if (!m.is_square()) throw StructureError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  if (rank(m) != n) return std::nullopt;
  Matrix inv(n, n);
  SparseMatrix s = SparseMatrix::from_dense(m);
  for (std::size_t j = 0; j < n; ++j) {
    auto col = solve(s, unit_vector(n, j));
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = (*col)[i];
  }
  return inv;
}

}  // namespace nij
