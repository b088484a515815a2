#pragma once
// Dense exact-rational vectors and matrices with dimension-checked arithmetic,
// plus the elimination kernel everything else is built on: reduced row echelon
// form, rank, null spaces, linear solves, span bases and orthogonal
// complements. Dimensions are fixed at construction.

#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "cpwl/rational.hpp"

namespace cpwl {

namespace detail {
inline void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}
}  // namespace detail

class RatVec {
 public:
  RatVec() = default;
  explicit RatVec(int dim) : entries_(static_cast<std::size_t>(dim)) {
    detail::require(dim >= 0, "vector dimension must be nonnegative");
  }
  RatVec(std::initializer_list<Rat> init) : entries_(init) {}

  static RatVec zero(int dim) { return RatVec(dim); }
  static RatVec unit(int dim, int i) {
    RatVec v(dim);
    v[i] = 1;
    return v;
  }

  int dim() const { return static_cast<int>(entries_.size()); }
  Rat& operator[](int i) { return entries_[static_cast<std::size_t>(i)]; }
  const Rat& operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }

  bool is_zero() const {
    for (const Rat& e : entries_)
      if (e != 0) return false;
    return true;
  }

  friend bool operator==(const RatVec& a, const RatVec& b) { return a.entries_ == b.entries_; }
  friend bool operator!=(const RatVec& a, const RatVec& b) { return !(a == b); }

  RatVec& operator+=(const RatVec& o) {
    detail::require(dim() == o.dim(), "vector dimension mismatch in +");
    for (int i = 0; i < dim(); ++i) entries_[i] += o[i];
    return *this;
  }
  RatVec& operator-=(const RatVec& o) {
    detail::require(dim() == o.dim(), "vector dimension mismatch in -");
    for (int i = 0; i < dim(); ++i) entries_[i] -= o[i];
    return *this;
  }
  RatVec& operator*=(const Rat& s) {
    for (Rat& e : entries_) e *= s;
    return *this;
  }
  friend RatVec operator+(RatVec a, const RatVec& b) { return a += b; }
  friend RatVec operator-(RatVec a, const RatVec& b) { return a -= b; }
  friend RatVec operator*(const Rat& s, RatVec v) { return v *= s; }
  friend RatVec operator-(RatVec v) {
    for (int i = 0; i < v.dim(); ++i) v[i] = -v[i];
    return v;
  }

  friend Rat dot(const RatVec& a, const RatVec& b) {
    detail::require(a.dim() == b.dim(), "vector dimension mismatch in dot");
    Rat s = 0;
    for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
  }

  Rat l1_norm() const {
    Rat s = 0;
    for (const Rat& e : entries_) s += abs(e);
    return s;
  }
  Rat linf_norm() const {
    Rat s = 0;
    for (const Rat& e : entries_)
      if (abs(e) > s) s = abs(e);
    return s;
  }

  /// Concatenation (a, b).
  friend RatVec concat(const RatVec& a, const RatVec& b) {
    RatVec r(a.dim() + b.dim());
    for (int i = 0; i < a.dim(); ++i) r[i] = a[i];
    for (int i = 0; i < b.dim(); ++i) r[a.dim() + i] = b[i];
    return r;
  }
  RatVec slice(int begin, int end) const {
    detail::require(0 <= begin && begin <= end && end <= dim(), "bad slice bounds");
    RatVec r(end - begin);
    for (int i = begin; i < end; ++i) r[i - begin] = entries_[i];
    return r;
  }

  std::string str() const {
    std::string s = "(";
    for (int i = 0; i < dim(); ++i) {
      if (i) s += ", ";
      s += rat_str(entries_[i]);
    }
    return s + ")";
  }

 private:
  std::vector<Rat> entries_;
};

class RatMat {
 public:
  RatMat() = default;
  RatMat(int rows, int cols)
      : rows_(rows), cols_(cols), entries_(static_cast<std::size_t>(rows) * cols) {
    detail::require(rows >= 0 && cols >= 0, "matrix dimensions must be nonnegative");
  }

  static RatMat identity(int n) {
    RatMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }
  static RatMat zero(int rows, int cols) { return RatMat(rows, cols); }
  static RatMat from_rows(const std::vector<RatVec>& rows, int cols) {
    RatMat m(static_cast<int>(rows.size()), cols);
    for (int i = 0; i < m.rows(); ++i) {
      detail::require(rows[i].dim() == cols, "row dimension mismatch in from_rows");
      for (int j = 0; j < cols; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
  }
  static RatMat from_cols(const std::vector<RatVec>& cols, int rows) {
    RatMat m(rows, static_cast<int>(cols.size()));
    for (int j = 0; j < m.cols(); ++j) {
      detail::require(cols[j].dim() == rows, "column dimension mismatch in from_cols");
      for (int i = 0; i < rows; ++i) m.at(i, j) = cols[j][i];
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rat& at(int i, int j) { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Rat& at(int i, int j) const { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }

  RatVec row(int i) const {
    RatVec r(cols_);
    for (int j = 0; j < cols_; ++j) r[j] = at(i, j);
    return r;
  }
  RatVec col(int j) const {
    RatVec c(rows_);
    for (int i = 0; i < rows_; ++i) c[i] = at(i, j);
    return c;
  }
  std::vector<RatVec> row_list() const {
    std::vector<RatVec> rs;
    rs.reserve(rows_);
    for (int i = 0; i < rows_; ++i) rs.push_back(row(i));
    return rs;
  }

  RatMat transpose() const {
    RatMat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  friend bool operator==(const RatMat& a, const RatMat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }
  friend bool operator!=(const RatMat& a, const RatMat& b) { return !(a == b); }

  RatMat& operator+=(const RatMat& o) {
    detail::require(rows_ == o.rows_ && cols_ == o.cols_, "matrix dimension mismatch in +");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
    return *this;
  }
  friend RatMat operator+(RatMat a, const RatMat& b) { return a += b; }
  RatMat& operator*=(const Rat& s) {
    for (Rat& e : entries_) e *= s;
    return *this;
  }
  friend RatMat operator*(const Rat& s, RatMat m) { return m *= s; }

  friend RatVec operator*(const RatMat& m, const RatVec& v) {
    detail::require(m.cols_ == v.dim(), "matrix-vector dimension mismatch");
    RatVec r(m.rows_);
    for (int i = 0; i < m.rows_; ++i) {
      Rat s = 0;
      for (int j = 0; j < m.cols_; ++j) s += m.at(i, j) * v[j];
      r[i] = s;
    }
    return r;
  }
  friend RatMat operator*(const RatMat& a, const RatMat& b) {
    detail::require(a.cols_ == b.rows_, "matrix-matrix dimension mismatch");
    RatMat r(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        if (a.at(i, k) == 0) continue;
        for (int j = 0; j < b.cols_; ++j) r.at(i, j) += a.at(i, k) * b.at(k, j);
      }
    return r;
  }

  /// Max absolute row sum (the operator norm for the sup norm).
  Rat max_row_l1() const {
    Rat best = 0;
    for (int i = 0; i < rows_; ++i) {
      Rat s = row(i).l1_norm();
      if (s > best) best = s;
    }
    return best;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rat> entries_;
};

struct RrefResult {
  RatMat mat;
  std::vector<int> pivot_cols;
};

/// Gauss-Jordan to reduced row echelon form. Deterministic: the pivot is the
/// first nonzero entry in the column.
inline RrefResult rref(RatMat m) {
  RrefResult out;
  int r = 0;
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    int pivot = -1;
    for (int i = r; i < m.rows(); ++i)
      if (m.at(i, c) != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != r)
      for (int j = 0; j < m.cols(); ++j) std::swap(m.at(pivot, j), m.at(r, j));
    Rat inv = Rat(1) / m.at(r, c);
    for (int j = 0; j < m.cols(); ++j) m.at(r, j) *= inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == r || m.at(i, c) == 0) continue;
      Rat f = m.at(i, c);
      for (int j = 0; j < m.cols(); ++j) m.at(i, j) -= f * m.at(r, j);
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  out.mat = std::move(m);
  return out;
}

inline int rank(const RatMat& m) { return static_cast<int>(rref(m).pivot_cols.size()); }

/// Basis of {v : Mv = 0}; empty when the kernel is trivial.
inline std::vector<RatVec> kernel_basis(const RatMat& m) {
  const int n = m.cols();
  RrefResult r = rref(m);
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (int c : r.pivot_cols) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<RatVec> basis;
  for (int f = 0; f < n; ++f) {
    if (is_pivot[static_cast<std::size_t>(f)]) continue;
    RatVec v(n);
    v[f] = 1;
    for (std::size_t pr = 0; pr < r.pivot_cols.size(); ++pr)
      v[r.pivot_cols[pr]] = -r.mat.at(static_cast<int>(pr), f);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// One solution of Mx = b, or nullopt when inconsistent (free variables 0).
inline std::optional<RatVec> solve_linear(const RatMat& m, const RatVec& b) {
  detail::require(m.rows() == b.dim(), "solve_linear dimension mismatch");
  RatMat aug(m.rows(), m.cols() + 1);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols()) = b[i];
  }
  RrefResult r = rref(aug);
  for (int c : r.pivot_cols)
    if (c == m.cols()) return std::nullopt;
  RatVec x(m.cols());
  for (std::size_t pr = 0; pr < r.pivot_cols.size(); ++pr)
    x[r.pivot_cols[pr]] = r.mat.at(static_cast<int>(pr), m.cols());
  return x;
}

/// Canonical basis (rref rows) of span{gens} inside R^dim.
inline std::vector<RatVec> span_basis(const std::vector<RatVec>& gens, int dim) {
  if (gens.empty()) return {};
  RrefResult r = rref(RatMat::from_rows(gens, dim));
  std::vector<RatVec> basis;
  for (std::size_t i = 0; i < r.pivot_cols.size(); ++i) basis.push_back(r.mat.row(static_cast<int>(i)));
  return basis;
}

inline bool spans_equal(const std::vector<RatVec>& a, const std::vector<RatVec>& b, int dim) {
  return span_basis(a, dim) == span_basis(b, dim);
}

inline bool in_span(const RatVec& v, const std::vector<RatVec>& gens) {
  if (v.is_zero()) return true;
  if (gens.empty()) return false;
  RatMat m = RatMat::from_rows(gens, v.dim());
  return solve_linear(m.transpose(), v).has_value();
}

/// Basis of {y : <y, g> = 0 for every generator}; the full standard basis when
/// there are no generators.
inline std::vector<RatVec> orthogonal_complement(const std::vector<RatVec>& gens, int dim) {
  if (gens.empty()) {
    std::vector<RatVec> basis;
    for (int i = 0; i < dim; ++i) basis.push_back(RatVec::unit(dim, i));
    return basis;
  }
  return kernel_basis(RatMat::from_rows(gens, dim));
}

/// True iff span{a} and span{b} intersect only at the origin.
inline bool spans_intersect_trivially(const std::vector<RatVec>& a, const std::vector<RatVec>& b,
                                      int dim) {
  std::vector<RatVec> joint = span_basis(a, dim);
  std::vector<RatVec> bb = span_basis(b, dim);
  const int ra = static_cast<int>(joint.size());
  const int rb = static_cast<int>(bb.size());
  joint.insert(joint.end(), bb.begin(), bb.end());
  if (joint.empty()) return true;
  return rank(RatMat::from_rows(joint, dim)) == ra + rb;
}

/// Primitive integer vector with the direction of v: clears denominators and
/// divides by the gcd. Scaling is positive, so rays keep their orientation.
inline RatVec primitive_ray(const RatVec& v) {
  if (v.is_zero()) return v;
  Int l = 1;
  for (int i = 0; i < v.dim(); ++i)
    if (v[i] != 0) l = lcm(l, denominator(v[i]));
  std::vector<Int> ints(static_cast<std::size_t>(v.dim()));
  Int g = 0;
  for (int i = 0; i < v.dim(); ++i) {
    ints[i] = numerator(v[i]) * (l / denominator(v[i]));
    g = gcd(g, ints[i]);
  }
  RatVec out(v.dim());
  for (int i = 0; i < v.dim(); ++i) out[i] = Rat(ints[i], g);
  return out;
}

/// Sign-canonical primitive representative of the line/hyperplane through v:
/// primitive_ray with the first nonzero coordinate made positive. v and -v map
/// to the same vector.
inline RatVec primitive(const RatVec& v) {
  RatVec out = primitive_ray(v);
  for (int i = 0; i < out.dim(); ++i) {
    if (out[i] == 0) continue;
    if (out[i] < 0) out = -out;
    break;
  }
  return out;
}

}  // namespace cpwl
