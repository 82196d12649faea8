#pragma once

#include "matlen/field.hpp"
#include "matlen/matrix.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace matlen {

/// Univariate polynomial over F_p, coefficients in ascending degree.
/// The zero polynomial has no coefficients and degree -1.
class Polynomial {
public:
  explicit Polynomial(PrimeField f) : field_(f) {}
  Polynomial(PrimeField f, std::vector<Elem> coeffs) : field_(f), c_(std::move(coeffs)) {
    for (auto &v : c_) v %= f.modulus();
    trim();
  }

  static Polynomial constant(PrimeField f, Elem v) { return Polynomial(f, {v}); }
  /// x - root
  static Polynomial linear(PrimeField f, Elem root) { return Polynomial(f, {f.neg(root), 1}); }

  const PrimeField &field() const noexcept { return field_; }
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  const std::vector<Elem> &coeffs() const noexcept { return c_; }
  Elem coeff(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
  Elem leading() const noexcept { return c_.empty() ? 0 : c_.back(); }
  bool is_monic() const noexcept { return !c_.empty() && c_.back() == 1; }

  Elem eval(Elem x) const noexcept {
    Elem acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = field_.add(field_.mul(acc, x), *it);
    return acc;
  }

  friend Polynomial operator*(const Polynomial &a, const Polynomial &b) {
    const auto &f = a.field_;
    if (a.is_zero() || b.is_zero()) return Polynomial(f);
    std::vector<Elem> out(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        out[i + j] = f.add(out[i + j], f.mul(a.c_[i], b.c_[j]));
    return Polynomial(f, std::move(out));
  }

  friend Polynomial operator+(const Polynomial &a, const Polynomial &b) {
    std::vector<Elem> out(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.field_.add(a.coeff(i), b.coeff(i));
    return Polynomial(a.field_, std::move(out));
  }

  /// Synthetic division by (x - root). Returns (quotient, remainder).
  std::pair<Polynomial, Elem> divide_linear(Elem root) const {
    if (c_.empty()) return {Polynomial(field_), 0};
    std::vector<Elem> q(c_.size() - 1, 0);
    Elem carry = 0;
    for (std::size_t i = c_.size(); i-- > 0;) {
      Elem v = field_.add(c_[i], field_.mul(carry, root));
      if (i == 0) return {Polynomial(field_, std::move(q)), v};
      q[i - 1] = v;
      carry = v;
    }
    return {Polynomial(field_, std::move(q)), 0};
  }

  friend bool operator==(const Polynomial &, const Polynomial &) = default;

  std::string to_string() const {
    if (c_.empty()) return "0";
    std::string s;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (c_[i] == 0) continue;
      if (!s.empty()) s += " + ";
      if (c_[i] != 1 || i == 0) s += std::to_string(c_[i]);
      if (i >= 1) s += "x";
      if (i >= 2) s += "^" + std::to_string(i);
    }
    return s;
  }

private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  PrimeField field_;
  std::vector<Elem> c_;
};

/// Horner evaluation q(A); the constant term multiplies I_n.
inline Matrix poly_eval(const Polynomial &q, const Matrix &a) {
  if (!(q.field() == a.field()))
    throw Error(ErrorCode::FieldMismatch, "polynomial and matrix over different fields");
  Matrix acc(a.order(), a.field());
  const auto &c = q.coeffs();
  for (std::size_t i = c.size(); i-- > 0;) {
    acc = acc * a;
    acc.shift(c[i]);
  }
  return acc;
}

} // namespace matlen
