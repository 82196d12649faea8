#pragma once

#include "matlen/error.hpp"
#include "matlen/field.hpp"

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace matlen {

namespace detail {

// In-place Gauss-Jordan on a row-major rows x cols block. Pivots are scaled
// to 1 and cleared above and below. Only columns < pivot_limit may hold a
// pivot. Returns the pivot columns in increasing order.
inline std::vector<std::size_t> gauss_jordan(std::vector<Elem> &a, std::size_t rows,
                                             std::size_t cols, std::size_t pivot_limit,
                                             const PrimeField &f) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < pivot_limit && r < rows; ++c) {
    std::size_t sel = r;
    while (sel < rows && a[sel * cols + c] == 0) ++sel;
    if (sel == rows) continue;
    if (sel != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(a[sel * cols + j], a[r * cols + j]);
    Elem scale = f.inv(a[r * cols + c]);
    for (std::size_t j = c; j < cols; ++j) a[r * cols + j] = f.mul(a[r * cols + j], scale);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      Elem factor = a[i * cols + c];
      if (factor == 0) continue;
      for (std::size_t j = c; j < cols; ++j)
        a[i * cols + j] = f.sub(a[i * cols + j], f.mul(factor, a[r * cols + j]));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

} // namespace detail

/// Dense square matrix over F_p, row-major.
class Matrix {
public:
  Matrix(std::size_t n, PrimeField field) : field_(field), n_(n), a_(n * n, 0) {
    if (n == 0) throw Error(ErrorCode::DimensionMismatch, "matrix order must be >= 1");
  }

  /// Entries are reduced mod p, so negative literals are accepted.
  Matrix(PrimeField field, std::initializer_list<std::initializer_list<std::int64_t>> rows)
      : Matrix(rows.size(), field) {
    std::size_t i = 0;
    for (const auto &row : rows) {
      if (row.size() != n_)
        throw Error(ErrorCode::DimensionMismatch,
                    "row " + std::to_string(i) + " has " + std::to_string(row.size()) +
                        " entries, expected " + std::to_string(n_));
      std::size_t j = 0;
      for (auto v : row) a_[i * n_ + j++] = field_.reduce(v);
      ++i;
    }
  }

  static Matrix identity(std::size_t n, PrimeField f) {
    Matrix m(n, f);
    for (std::size_t i = 0; i < n; ++i) m.a_[i * n + i] = 1;
    return m;
  }
  static Matrix scalar(std::size_t n, PrimeField f, Elem v) {
    Matrix m(n, f);
    for (std::size_t i = 0; i < n; ++i) m.a_[i * n + i] = v % f.modulus();
    return m;
  }
  /// Matrix unit with a single 1 at (row, col), zero-based.
  static Matrix unit(std::size_t n, PrimeField f, std::size_t row, std::size_t col) {
    Matrix m(n, f);
    m.a_.at(row * n + col) = 1;
    return m;
  }
  /// Builds from a row-major vectorization of length n*n.
  static Matrix from_vector(std::size_t n, PrimeField f, std::span<const Elem> v) {
    if (v.size() != n * n)
      throw Error(ErrorCode::DimensionMismatch, "vector length is not n^2");
    Matrix m(n, f);
    for (std::size_t k = 0; k < v.size(); ++k) m.a_[k] = v[k] % f.modulus();
    return m;
  }

  std::size_t order() const noexcept { return n_; }
  const PrimeField &field() const noexcept { return field_; }

  Elem operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, Elem v) { a_[i * n_ + j] = v % field_.modulus(); }

  /// Row-major vectorization in F_p^{n^2}.
  std::span<const Elem> entries() const noexcept { return a_; }

  bool is_zero() const noexcept {
    for (auto v : a_)
      if (v) return false;
    return true;
  }

  Matrix &operator+=(const Matrix &o) {
    check_compatible(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] = field_.add(a_[k], o.a_[k]);
    return *this;
  }
  Matrix &operator-=(const Matrix &o) {
    check_compatible(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] = field_.sub(a_[k], o.a_[k]);
    return *this;
  }
  Matrix &scale(Elem c) {
    for (auto &v : a_) v = field_.mul(v, c);
    return *this;
  }
  /// Adds c * I.
  Matrix &shift(Elem c) {
    for (std::size_t i = 0; i < n_; ++i) a_[i * n_ + i] = field_.add(a_[i * n_ + i], c);
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix &b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix &b) { return a -= b; }

  friend Matrix operator*(const Matrix &a, const Matrix &b) {
    a.check_compatible(b);
    const std::size_t n = a.n_;
    const std::uint64_t p = a.field_.modulus();
    Matrix c(n, a.field_);
    // Each product is < 2^40; reducing every 16 terms keeps acc below 2^45.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k < n; ++k) {
          acc += std::uint64_t{a.a_[i * n + k]} * b.a_[k * n + j];
          if ((k & 15) == 15) acc %= p;
        }
        c.a_[i * n + j] = static_cast<Elem>(acc % p);
      }
    }
    return c;
  }

  friend bool operator==(const Matrix &, const Matrix &) = default;

  void check_compatible(const Matrix &o) const {
    if (!(field_ == o.field_))
      throw Error(ErrorCode::FieldMismatch, "matrices live over different prime fields");
    if (n_ != o.n_)
      throw Error(ErrorCode::DimensionMismatch,
                  "orders " + std::to_string(n_) + " and " + std::to_string(o.n_) + " differ");
  }

private:
  PrimeField field_;
  std::size_t n_;
  std::vector<Elem> a_;
};

inline Matrix mat_mul(const Matrix &a, const Matrix &b) { return a * b; }

struct RrefResult {
  Matrix form;
  std::vector<std::size_t> pivots;
};

inline RrefResult rref(const Matrix &a) {
  const std::size_t n = a.order();
  std::vector<Elem> buf(a.entries().begin(), a.entries().end());
  auto pivots = detail::gauss_jordan(buf, n, n, n, a.field());
  return {Matrix::from_vector(n, a.field(), buf), std::move(pivots)};
}

inline std::size_t rank(const Matrix &a) { return rref(a).pivots.size(); }

inline Matrix mat_inverse(const Matrix &a) {
  const std::size_t n = a.order();
  const std::size_t w = 2 * n;
  std::vector<Elem> buf(n * w, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) buf[i * w + j] = a(i, j);
    buf[i * w + n + i] = 1;
  }
  auto pivots = detail::gauss_jordan(buf, n, w, n, a.field());
  if (pivots.size() < n)
    throw Error(ErrorCode::Singular, "matrix has rank " + std::to_string(pivots.size()) +
                                         " < " + std::to_string(n));
  Matrix inv(n, a.field());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv.set(i, j, buf[i * w + n + j]);
  return inv;
}

/// P * A * P^{-1}.
inline Matrix conjugate(const Matrix &p, const Matrix &a) {
  p.check_compatible(a);
  return p * a * mat_inverse(p);
}

inline Matrix power(const Matrix &a, std::size_t e) {
  Matrix result = Matrix::identity(a.order(), a.field());
  for (std::size_t i = 0; i < e; ++i) result = result * a;
  return result;
}

struct MatrixHash {
  std::size_t operator()(const Matrix &m) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto v : m.entries()) {
      h ^= v;
      h *= 1099511628211ull;
    }
    return h;
  }
};

} // namespace matlen
