#pragma once

#include "matlen/error.hpp"
#include "matlen/matrix.hpp"
#include "matlen/polynomial.hpp"
#include "matlen/spectral.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace matlen {

/// A divisor-form product prod (A - lambda I)^{a_lambda} of low rank. Since
/// it is a polynomial in A of degree sum(a_lambda), it lies in L_degree(S)
/// for any S containing A.
struct RankCertificate {
  std::map<Elem, int> exponents; // eigenvalue -> a_lambda, zero exponents omitted
  int degree = 0;
  std::size_t achieved_rank = 0;
  Matrix witness;

  /// The certified polynomial prod (x - lambda)^{a_lambda}.
  Polynomial polynomial(PrimeField f) const {
    Polynomial acc = Polynomial::constant(f, 1);
    for (const auto &[lambda, a] : exponents)
      for (int i = 0; i < a; ++i) acc = acc * Polynomial::linear(f, lambda);
    return acc;
  }
};

/// Searches exponent vectors 0 <= a_lambda <= e_lambda (excluding all-zero
/// and the full minimal polynomial) by increasing total degree, ties broken
/// lexicographically over ascending eigenvalues, and returns the first
/// product that is nonzero with rank <= r_max.
inline std::optional<RankCertificate> find_rank_reduction(const Matrix &a, const Spectrum &spec,
                                                          std::size_t r_max) {
  if (r_max < 1) throw Error(ErrorCode::InvalidArgument, "r_max must be >= 1");
  const std::size_t n = a.order();
  const auto &f = a.field();
  const std::size_t s = spec.roots.size();
  if (s == 0) return std::nullopt;

  // powers[k][j] = (A - lambda_k I)^j
  std::vector<std::vector<Matrix>> powers(s);
  for (std::size_t k = 0; k < s; ++k) {
    Matrix shifted = a;
    shifted.shift(f.neg(spec.roots[k].value));
    powers[k].push_back(Matrix::identity(n, f));
    for (int j = 1; j <= spec.roots[k].multiplicity; ++j)
      powers[k].push_back(powers[k].back() * shifted);
  }

  std::vector<std::vector<int>> candidates;
  std::vector<int> cur(s, 0);
  for (;;) {
    bool all_zero = true, all_full = true;
    for (std::size_t k = 0; k < s; ++k) {
      all_zero &= cur[k] == 0;
      all_full &= cur[k] == spec.roots[k].multiplicity;
    }
    if (!all_zero && !all_full) candidates.push_back(cur);
    std::size_t k = s;
    while (k-- > 0) {
      if (cur[k] < spec.roots[k].multiplicity) {
        ++cur[k];
        break;
      }
      cur[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  auto total = [](const std::vector<int> &v) {
    int d = 0;
    for (int x : v) d += x;
    return d;
  };
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](const auto &x, const auto &y) {
                     int dx = total(x), dy = total(y);
                     return dx != dy ? dx < dy : x < y;
                   });

  for (const auto &exps : candidates) {
    Matrix w = Matrix::identity(n, f);
    for (std::size_t k = 0; k < s; ++k)
      if (exps[k]) w = w * powers[k][static_cast<std::size_t>(exps[k])];
    if (w.is_zero()) continue;
    const std::size_t r = rank(w);
    if (r > r_max) continue;
    RankCertificate cert{{}, total(exps), r, std::move(w)};
    for (std::size_t k = 0; k < s; ++k)
      if (exps[k]) cert.exponents[spec.roots[k].value] = exps[k];
    return cert;
  }
  return std::nullopt;
}

/// Re-derives the witness from the exponent map through polynomial
/// multiplication and Horner evaluation, independent of the search loop.
inline bool verify_certificate(const RankCertificate &cert, const Matrix &a) {
  Matrix w = poly_eval(cert.polynomial(a.field()), a);
  int deg = 0;
  for (const auto &[lambda, e] : cert.exponents) deg += e;
  return w == cert.witness && !w.is_zero() && rank(w) == cert.achieved_rank &&
         deg == cert.degree;
}

} // namespace matlen
