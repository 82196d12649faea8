#pragma once

#include "matlen/error.hpp"
#include "matlen/field.hpp"
#include "matlen/matrix.hpp"

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace matlen {

/// Subspace of F_p^d kept in reduced row-echelon form.
///
/// Each row may carry `tag_dim` trailing coordinates that ride along with
/// every row operation but never hold a pivot. Tagging an inserted vector
/// with a unit vector e_i makes the tag of any residue record which
/// combination of inserted vectors produced it; the minimal polynomial uses
/// this to read off the first Krylov dependence.
class SpanBasis {
public:
  SpanBasis(std::size_t ambient_dim, PrimeField field, std::size_t tag_dim = 0)
      : field_(field), ambient_(ambient_dim), tag_dim_(tag_dim) {}

  std::size_t ambient_dim() const noexcept { return ambient_; }
  std::size_t tag_dim() const noexcept { return tag_dim_; }
  std::size_t dim() const noexcept { return pivots_.size(); }
  bool full() const noexcept { return dim() == ambient_; }
  const std::vector<std::size_t> &pivot_cols() const noexcept { return pivots_; }
  /// Row k restricted to the ambient coordinates.
  std::span<const Elem> row(std::size_t k) const {
    return std::span<const Elem>(rows_[k]).first(ambient_);
  }
  std::span<const Elem> row_tag(std::size_t k) const {
    return std::span<const Elem>(rows_[k]).subspan(ambient_);
  }

  /// Reduces `v` (ambient coordinates followed by tag coordinates) against
  /// the basis in place. Returns true when the ambient part is zero.
  bool reduce(std::vector<Elem> &v) const {
    check_width(v.size());
    const std::size_t w = ambient_ + tag_dim_;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      Elem factor = v[pivots_[k]];
      if (factor == 0) continue;
      const auto &r = rows_[k];
      for (std::size_t j = pivots_[k]; j < w; ++j)
        if (r[j]) v[j] = field_.sub(v[j], field_.mul(factor, r[j]));
    }
    return std::all_of(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(ambient_),
                       [](Elem e) { return e == 0; });
  }

  bool contains(std::span<const Elem> v) const {
    std::vector<Elem> w(v.begin(), v.end());
    w.resize(ambient_ + tag_dim_, 0);
    return reduce(w);
  }
  bool contains(const Matrix &m) const {
    check_matrix(m);
    return contains(m.entries());
  }

  /// Inserts a vector (ambient plus tag coordinates). Returns true iff the
  /// span grew; `v` is left holding the reduced residue either way.
  bool insert(std::vector<Elem> &v) {
    if (reduce(v)) return false;
    const std::size_t w = ambient_ + tag_dim_;
    std::size_t piv = 0;
    while (v[piv] == 0) ++piv;
    Elem s = field_.inv(v[piv]);
    for (std::size_t j = piv; j < w; ++j) v[j] = field_.mul(v[j], s);
    for (auto &r : rows_) {
      Elem factor = r[piv];
      if (factor == 0) continue;
      for (std::size_t j = piv; j < w; ++j)
        if (v[j]) r[j] = field_.sub(r[j], field_.mul(factor, v[j]));
    }
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), piv) - pivots_.begin();
    pivots_.insert(pivots_.begin() + pos, piv);
    rows_.insert(rows_.begin() + pos, v);
    return true;
  }

  /// Vectorizes m row-major and inserts it (tag coordinates zero).
  bool insert(const Matrix &m) {
    check_matrix(m);
    std::vector<Elem> v(m.entries().begin(), m.entries().end());
    v.resize(ambient_ + tag_dim_, 0);
    return insert(v);
  }

private:
  void check_width(std::size_t size) const {
    if (size != ambient_ + tag_dim_)
      throw Error(ErrorCode::DimensionMismatch,
                  "vector of length " + std::to_string(size) + " does not match basis width " +
                      std::to_string(ambient_ + tag_dim_));
  }
  void check_matrix(const Matrix &m) const {
    if (m.order() * m.order() != ambient_)
      throw Error(ErrorCode::DimensionMismatch,
                  "matrix of order " + std::to_string(m.order()) + " in a span of dimension " +
                      std::to_string(ambient_));
    if (!(m.field() == field_))
      throw Error(ErrorCode::FieldMismatch, "matrix field differs from basis field");
  }

  PrimeField field_;
  std::size_t ambient_;
  std::size_t tag_dim_;
  std::vector<std::vector<Elem>> rows_;
  std::vector<std::size_t> pivots_;
};

inline bool span_insert(SpanBasis &basis, const Matrix &m) { return basis.insert(m); }

} // namespace matlen
