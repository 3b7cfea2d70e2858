#pragma once

// Exact integer linear algebra: Smith normal form, finitely generated abelian
// groups, divisibility of classes and bounded box enumeration. Everything here
// works over arbitrary-precision integers; there is no floating point.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "singfib/errors.hpp"

namespace singfib {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer abs_value(const Integer& x) { return x < 0 ? Integer(-x) : x; }

inline Integer gcd(const Integer& a, const Integer& b) {
  return boost::multiprecision::gcd(abs_value(a), abs_value(b));
}

// Floor division and the matching nonnegative remainder (for b > 0).
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += abs_value(m);
  return r;
}

inline std::string to_string(const Integer& x) { return x.str(); }

// Dense row-major integer matrix. Empty shapes (0 rows or 0 columns) are valid.
class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  IntegerMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  IntegerMatrix(std::initializer_list<std::initializer_list<Integer>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw InputError("ragged matrix literal");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static IntegerMatrix from_rows(const std::vector<std::vector<Integer>>& rows, std::size_t cols) {
    IntegerMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw InputError("row " + std::to_string(i) + " has wrong length");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static IntegerMatrix identity(std::size_t n) {
    IntegerMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<Integer> row(std::size_t i) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
  }

  IntegerMatrix transpose() const {
    IntegerMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_square() const { return rows_ == cols_; }

  bool is_symmetric() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  friend IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b) {
    if (a.cols_ != b.rows_) throw InputError("matrix product shape mismatch");
    IntegerMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend bool operator==(const IntegerMatrix& a, const IntegerMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  // Elementary operations, used by the normal-form code and by tests that
  // build random unimodular transforms.
  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, i), (*this)(r, j));
  }
  // row[dst] += factor * row[src]
  void add_row(std::size_t dst, std::size_t src, const Integer& factor) {
    if (factor == 0) return;
    for (std::size_t c = 0; c < cols_; ++c) (*this)(dst, c) += factor * (*this)(src, c);
  }
  // col[dst] += factor * col[src]
  void add_col(std::size_t dst, std::size_t src, const Integer& factor) {
    if (factor == 0) return;
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, dst) += factor * (*this)(r, src);
  }
  void negate_row(std::size_t i) {
    for (std::size_t c = 0; c < cols_; ++c) (*this)(i, c) = -(*this)(i, c);
  }

  std::string str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i) os << ", ";
      os << '[';
      for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j);
      os << ']';
    }
    os << ']';
    return os.str();
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

/// Fraction-free (Bareiss) determinant of a square matrix. det of 0x0 is 1.
inline Integer determinant(const IntegerMatrix& m) {
  if (!m.is_square()) throw InputError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  IntegerMatrix a = m;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return n == 0 ? Integer(1) : Integer(sign * a(n - 1, n - 1));
}

/// Inverse of a matrix with determinant +-1, or nullopt if it is not unimodular.
inline std::optional<IntegerMatrix> unimodular_inverse(const IntegerMatrix& m) {
  if (!m.is_square()) return std::nullopt;
  const std::size_t n = m.rows();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = Rational(m(i, j));
    a[i][n + i] = 1;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    while (p < n && a[p][col] == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(a[p], a[col]);
    const Rational pivot = a[col][col];
    for (auto& x : a[col]) x /= pivot;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a[i][col] == 0) continue;
      const Rational f = a[i][col];
      for (std::size_t j = 0; j < 2 * n; ++j) a[i][j] -= f * a[col][j];
    }
  }
  IntegerMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& x = a[i][n + j];
      if (boost::multiprecision::denominator(x) != 1) return std::nullopt;
      inv(i, j) = boost::multiprecision::numerator(x);
    }
  return inv;
}

struct SmithForm {
  // Nonzero diagonal entries d1 | d2 | ... (all positive, 1s included).
  std::vector<Integer> invariant_factors;
  // Free rank of Z^cols / rowspan(m), i.e. cols - rank(m).
  std::size_t free_rank_of_cokernel = 0;

  std::size_t rank() const { return invariant_factors.size(); }
};

namespace detail {

inline bool find_min_pivot(const IntegerMatrix& a, std::size_t t, std::size_t& pi, std::size_t& pj) {
  bool found = false;
  Integer best;
  for (std::size_t i = t; i < a.rows(); ++i)
    for (std::size_t j = t; j < a.cols(); ++j) {
      if (a(i, j) == 0) continue;
      Integer v = abs_value(a(i, j));
      if (!found || v < best) {
        best = std::move(v);
        pi = i;
        pj = j;
        found = true;
        if (best == 1) return true;
      }
    }
  return found;
}

}  // namespace detail

/// Invariant factors of m and the free rank of its cokernel (row convention).
inline SmithForm smith_normal_form(const IntegerMatrix& m) {
  IntegerMatrix a = m;
  const std::size_t diag = std::min(a.rows(), a.cols());
  SmithForm out;
  std::size_t t = 0;
  for (; t < diag; ++t) {
    std::size_t pi = 0, pj = 0;
    if (!detail::find_min_pivot(a, t, pi, pj)) break;
    for (;;) {
      a.swap_rows(t, pi);
      a.swap_cols(t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < a.rows(); ++i) {
        if (a(i, t) == 0) continue;
        a.add_row(i, t, -(a(i, t) / a(t, t)));
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < a.cols(); ++j) {
        if (a(t, j) == 0) continue;
        a.add_col(j, t, -(a(t, j) / a(t, t)));
        if (a(t, j) != 0) clean = false;
      }
      if (clean) {
        // Pivot must divide the whole remaining block; otherwise fold the
        // offending row into row t and reduce again.
        std::size_t bad_row = a.rows();
        for (std::size_t i = t + 1; i < a.rows() && bad_row == a.rows(); ++i)
          for (std::size_t j = t + 1; j < a.cols(); ++j)
            if (a(i, j) % a(t, t) != 0) {
              bad_row = i;
              break;
            }
        if (bad_row == a.rows()) break;
        a.add_row(t, bad_row, 1);
      }
      detail::find_min_pivot(a, t, pi, pj);
    }
    out.invariant_factors.push_back(abs_value(a(t, t)));
  }
  out.free_rank_of_cokernel = a.cols() - out.invariant_factors.size();
  return out;
}

// Finitely generated abelian group Z^free_rank + Z/d1 + ... + Z/dk with
// d1 | d2 | ... | dk and every di >= 2.
class AbelianGroup {
 public:
  AbelianGroup() = default;
  AbelianGroup(std::size_t free_rank, std::vector<Integer> torsion)
      : free_rank_(free_rank), torsion_(std::move(torsion)) {
    for (std::size_t i = 0; i < torsion_.size(); ++i) {
      if (torsion_[i] < 2) throw InputError("torsion factors must be >= 2");
      if (i + 1 < torsion_.size() && torsion_[i + 1] % torsion_[i] != 0)
        throw InputError("torsion factors must form a divisibility chain");
    }
  }

  static AbelianGroup free(std::size_t rank) { return AbelianGroup(rank, {}); }

  std::size_t free_rank() const { return free_rank_; }
  const std::vector<Integer>& torsion() const { return torsion_; }
  // Number of coordinates a class in this group is written with.
  std::size_t coordinate_count() const { return free_rank_ + torsion_.size(); }
  bool is_trivial() const { return free_rank_ == 0 && torsion_.empty(); }
  bool is_finite() const { return free_rank_ == 0; }

  Integer order() const {
    if (!is_finite()) return 0;
    Integer n = 1;
    for (const auto& d : torsion_) n *= d;
    return n;
  }

  // "0", "Z", "Z^2 + Z/3", "Z/2 + Z/4".
  std::string str() const {
    if (is_trivial()) return "0";
    std::string s;
    if (free_rank_ == 1) s = "Z";
    else if (free_rank_ > 1) s = "Z^" + std::to_string(free_rank_);
    for (const auto& d : torsion_) {
      if (!s.empty()) s += " + ";
      s += "Z/" + d.str();
    }
    return s;
  }

  friend bool operator==(const AbelianGroup&, const AbelianGroup&) = default;

 private:
  std::size_t free_rank_ = 0;
  std::vector<Integer> torsion_;
};

/// Z^cols / rowspan(m) in invariant-factor form.
inline AbelianGroup cokernel(const IntegerMatrix& m) {
  const SmithForm snf = smith_normal_form(m);
  std::vector<Integer> torsion;
  for (const auto& d : snf.invariant_factors)
    if (d != 1) torsion.push_back(d);
  return AbelianGroup(snf.free_rank_of_cokernel, std::move(torsion));
}

/// Largest k with the free part of v equal to k times an integral class;
/// 0 when the free part vanishes. Coordinates are free ones first, then torsion.
inline Integer divisibility(std::span<const Integer> v, const AbelianGroup& ambient) {
  if (v.size() != ambient.coordinate_count())
    throw InputError("class has " + std::to_string(v.size()) + " coordinates, ambient group needs " +
                     std::to_string(ambient.coordinate_count()));
  Integer g = 0;
  for (std::size_t i = 0; i < ambient.free_rank(); ++i) g = gcd(g, v[i]);
  return g;
}

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

// All integer vectors with lo[i] <= x[i] <= hi[i], in lexicographic order
// (last coordinate varies fastest). Construction refuses boxes larger than
// the budget.
class BoxRange {
 public:
  using Point = std::vector<std::int64_t>;

  BoxRange(Point lo, Point hi, std::uint64_t budget = kDefaultEnumerationBudget)
      : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.size() != hi_.size()) throw InputError("box bounds of different dimensions");
    Integer count = 1;
    for (std::size_t i = 0; i < lo_.size(); ++i) {
      if (hi_[i] < lo_[i]) {
        count = 0;
        break;
      }
      count *= Integer(hi_[i]) - lo_[i] + 1;
    }
    if (count > budget)
      throw BudgetExceeded("box enumeration of " + count.str() + " vectors exceeds budget " + std::to_string(budget));
    size_ = static_cast<std::uint64_t>(count);
  }

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Point;
    using difference_type = std::ptrdiff_t;
    using pointer = const Point*;
    using reference = const Point&;

    iterator() = default;
    iterator(const BoxRange* box, std::uint64_t index) : box_(box), index_(index) {
      if (box_ && index_ < box_->size_) current_ = box_->lo_;
    }
    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }
    iterator& operator++() {
      ++index_;
      for (std::size_t i = current_.size(); i-- > 0;) {
        if (current_[i] < box_->hi_[i]) {
          ++current_[i];
          return *this;
        }
        current_[i] = box_->lo_[i];
      }
      return *this;
    }
    void operator++(int) { ++*this; }
    friend bool operator==(const iterator& a, const iterator& b) { return a.index_ == b.index_; }

   private:
    const BoxRange* box_ = nullptr;
    std::uint64_t index_ = 0;
    Point current_;
  };

  iterator begin() const { return iterator(this, 0); }
  iterator end() const { return iterator(this, size_); }
  std::uint64_t size() const { return size_; }

 private:
  Point lo_, hi_;
  std::uint64_t size_ = 0;
};

/// Every vector in [-bound, bound]^dim, each exactly once.
inline BoxRange enumerate_box(std::size_t dim, std::int64_t bound,
                              std::uint64_t budget = kDefaultEnumerationBudget) {
  if (bound < 0) throw InputError("box bound must be nonnegative");
  return BoxRange(BoxRange::Point(dim, -bound), BoxRange::Point(dim, bound), budget);
}

}  // namespace singfib
