#pragma once

#include "matlen/error.hpp"

#include <cstdint>
#include <string>

namespace matlen {

/// Canonical residue in [0, p).
using Elem = std::uint32_t;

/// Largest admissible modulus; root scanning walks the whole field.
inline constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 20;

constexpr bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  if (v < 4) return true;
  if (v % 2 == 0 || v % 3 == 0) return false;
  for (std::uint64_t d = 5; d * d <= v; d += 6)
    if (v % d == 0 || v % (d + 2) == 0) return false;
  return true;
}

/// The prime field F_p. Arithmetic goes through 64-bit intermediates, so
/// products of two residues never overflow.
class PrimeField {
public:
  explicit PrimeField(std::uint64_t p) : p_(static_cast<Elem>(p)) {
    if (p > kMaxModulus)
      throw Error(ErrorCode::ModulusTooLarge,
                  "modulus " + std::to_string(p) + " exceeds 2^20");
    if (!is_prime(p))
      throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  }

  Elem modulus() const noexcept { return p_; }

  Elem reduce(std::int64_t v) const noexcept {
    auto r = v % static_cast<std::int64_t>(p_);
    return static_cast<Elem>(r < 0 ? r + p_ : r);
  }
  Elem add(Elem a, Elem b) const noexcept {
    Elem s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Elem sub(Elem a, Elem b) const noexcept { return a >= b ? a - b : a + p_ - b; }
  Elem neg(Elem a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Elem mul(Elem a, Elem b) const noexcept {
    return static_cast<Elem>(std::uint64_t{a} * b % p_);
  }
  Elem pow(Elem a, std::uint64_t e) const noexcept {
    std::uint64_t result = 1 % p_, base = a;
    while (e) {
      if (e & 1) result = result * base % p_;
      base = base * base % p_;
      e >>= 1;
    }
    return static_cast<Elem>(result);
  }
  Elem inv(Elem a) const {
    if (a == 0) throw Error(ErrorCode::Singular, "inverse of zero in F_p");
    return pow(a, p_ - 2);
  }

  friend bool operator==(const PrimeField &, const PrimeField &) = default;

private:
  Elem p_;
};

} // namespace matlen
