#pragma once

#include "matlen/error.hpp"
#include "matlen/field.hpp"
#include "matlen/matrix.hpp"
#include "matlen/polynomial.hpp"
#include "matlen/span_basis.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace matlen {

struct MinimalPolynomial {
  Polynomial poly;
  int degree() const noexcept { return poly.degree(); }
};

struct Root {
  Elem value;
  int multiplicity;
  friend bool operator==(const Root &, const Root &) = default;
};

/// Roots of the minimal polynomial in increasing order of value, with the
/// multiplicity of (x - value) in it.
struct Spectrum {
  std::vector<Root> roots;

  int degree() const noexcept {
    int d = 0;
    for (const auto &r : roots) d += r.multiplicity;
    return d;
  }
  Polynomial product(PrimeField f) const {
    Polynomial acc = Polynomial::constant(f, 1);
    for (const auto &r : roots)
      for (int i = 0; i < r.multiplicity; ++i) acc = acc * Polynomial::linear(f, r.value);
    return acc;
  }
  friend bool operator==(const Spectrum &, const Spectrum &) = default;
};

/// Block sizes per eigenvalue, each list sorted descending.
struct JordanProfile {
  std::map<Elem, std::vector<int>> blocks;

  int total_size() const {
    int s = 0;
    for (const auto &[lambda, sizes] : blocks)
      for (int b : sizes) s += b;
    return s;
  }
  friend bool operator==(const JordanProfile &, const JordanProfile &) = default;
};

/// Inserts vec(I), vec(A), vec(A^2), ... into a tagged span until the first
/// dependence; the tag of the vanishing residue is the annihilator.
inline MinimalPolynomial minimal_polynomial(const Matrix &a) {
  const std::size_t n = a.order();
  const auto &f = a.field();
  const std::size_t width = n * n;
  SpanBasis basis(width, f, n + 1);
  Matrix pw = Matrix::identity(n, f);
  for (std::size_t d = 0; d <= n; ++d) {
    std::vector<Elem> v(pw.entries().begin(), pw.entries().end());
    v.resize(width + n + 1, 0);
    v[width + d] = 1;
    if (!basis.insert(v)) {
      // residue tag = e_d - sum c_i e_i with vec(A^d) = sum c_i vec(A^i)
      std::vector<Elem> coeffs(v.begin() + static_cast<std::ptrdiff_t>(width),
                               v.begin() + static_cast<std::ptrdiff_t>(width + d + 1));
      return {Polynomial(f, std::move(coeffs))};
    }
    pw = pw * a;
  }
  // Cayley-Hamilton bounds the degree by n.
  throw Error(ErrorCode::InvalidArgument, "no Krylov dependence up to degree n");
}

inline int degree_of(const Matrix &a) { return minimal_polynomial(a).degree(); }

inline int m_of_s(std::span<const Matrix> gens) {
  if (gens.empty()) throw Error(ErrorCode::EmptySet, "m(S) of an empty set");
  int m = 0;
  for (const auto &g : gens) m = std::max(m, degree_of(g));
  return m;
}

/// Exhaustive root scan with repeated synthetic division. Throws NotSplit
/// when a factor of degree >= 2 is left over.
inline Spectrum split_roots(const Polynomial &mp) {
  const auto &f = mp.field();
  if (f.modulus() > kMaxModulus)
    throw Error(ErrorCode::ModulusTooLarge, "root scan needs p <= 2^20");
  Spectrum spec;
  Polynomial rest = mp;
  for (std::uint64_t x = 0; x < f.modulus() && rest.degree() > 0; ++x) {
    const Elem r = static_cast<Elem>(x);
    int mult = 0;
    for (;;) {
      auto [q, rem] = rest.divide_linear(r);
      if (rem != 0) break;
      rest = std::move(q);
      ++mult;
    }
    if (mult) spec.roots.push_back({r, mult});
  }
  if (rest.degree() > 0)
    throw Error(ErrorCode::NotSplit,
                "factor " + rest.to_string() + " of " + mp.to_string() + " has no roots in F_" +
                    std::to_string(f.modulus()));
  return spec;
}

inline Spectrum split_roots(const MinimalPolynomial &mp) { return split_roots(mp.poly); }

/// Block sizes from the rank sequence r_j = rank((A - lambda I)^j): the
/// number of blocks of size >= j is r_{j-1} - r_j.
inline JordanProfile jordan_profile(const Matrix &a, const Spectrum &spec) {
  const std::size_t n = a.order();
  const auto &f = a.field();
  JordanProfile prof;
  for (const auto &root : spec.roots) {
    Matrix shifted = a;
    shifted.shift(f.neg(root.value));
    std::vector<int> ranks{static_cast<int>(n)};
    Matrix pw = Matrix::identity(n, f);
    for (int j = 1; j <= root.multiplicity + 1; ++j) {
      pw = pw * shifted;
      ranks.push_back(static_cast<int>(rank(pw)));
    }
    std::vector<int> sizes;
    for (int j = 1; j <= root.multiplicity; ++j) {
      int at_least_j = ranks[j - 1] - ranks[j];
      int at_least_next = ranks[j] - ranks[j + 1];
      for (int c = 0; c < at_least_j - at_least_next; ++c) sizes.push_back(j);
    }
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    prof.blocks[root.value] = std::move(sizes);
  }
  if (prof.total_size() != static_cast<int>(n))
    throw Error(ErrorCode::CharPolyNotSplit,
                "Jordan blocks cover " + std::to_string(prof.total_size()) + " of " +
                    std::to_string(n) + " dimensions");
  return prof;
}

inline bool is_nonderogatory(const Matrix &a) {
  return degree_of(a) == static_cast<int>(a.order());
}

struct MaxBlock {
  Elem eigenvalue;
  int size;
  friend bool operator==(const MaxBlock &, const MaxBlock &) = default;
};

/// The first eigenvalue (in increasing order) whose largest Jordan block
/// occurs exactly once.
inline std::optional<MaxBlock> unique_max_block(const JordanProfile &profile) {
  for (const auto &[lambda, sizes] : profile.blocks) {
    if (sizes.empty()) continue;
    if (sizes.size() == 1 || sizes[1] < sizes[0]) return MaxBlock{lambda, sizes[0]};
  }
  return std::nullopt;
}

/// Everything the bound checks need to know about one generator.
struct GeneratorSpectrum {
  MinimalPolynomial minpoly;
  std::optional<Spectrum> spectrum;
  std::optional<JordanProfile> profile;
  std::string note; // why spectrum/profile are missing
};

inline GeneratorSpectrum analyze_generator(const Matrix &a) {
  GeneratorSpectrum g{minimal_polynomial(a), std::nullopt, std::nullopt, {}};
  try {
    g.spectrum = split_roots(g.minpoly);
    g.profile = jordan_profile(a, *g.spectrum);
  } catch (const Error &e) {
    if (e.code() != ErrorCode::NotSplit && e.code() != ErrorCode::CharPolyNotSplit) throw;
    g.spectrum.reset();
    g.note = e.what();
  }
  return g;
}

} // namespace matlen
