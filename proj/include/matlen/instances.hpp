#pragma once

#include "matlen/bounds.hpp"
#include "matlen/error.hpp"
#include "matlen/length.hpp"
#include "matlen/matrix.hpp"
#include "matlen/random.hpp"
#include "matlen/spectral.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace matlen {

struct JordanBlock {
  Elem eigenvalue;
  int size;
  friend bool operator==(const JordanBlock &, const JordanBlock &) = default;
};

/// Blocks in diagonal order.
struct JordanSpec {
  std::vector<JordanBlock> blocks;

  int total_size() const {
    int s = 0;
    for (const auto &b : blocks) s += b.size;
    return s;
  }
  /// The multiset view, comparable with jordan_profile().
  JordanProfile profile() const {
    JordanProfile p;
    for (const auto &b : blocks) p.blocks[b.eigenvalue].push_back(b.size);
    for (auto &[lambda, sizes] : p.blocks) std::sort(sizes.begin(), sizes.end(), std::greater<>());
    return p;
  }
  /// Sum over distinct eigenvalues of the largest block size.
  int minpoly_degree() const {
    int d = 0;
    for (const auto &[lambda, sizes] : profile().blocks) d += sizes.front();
    return d;
  }
  friend bool operator==(const JordanSpec &, const JordanSpec &) = default;
};

inline Matrix jordan_matrix(const JordanSpec &spec, PrimeField f, std::size_t n) {
  if (spec.total_size() != static_cast<int>(n))
    throw Error(ErrorCode::SizeMismatch, "block sizes sum to " +
                                             std::to_string(spec.total_size()) + ", expected " +
                                             std::to_string(n));
  Matrix m(n, f);
  std::size_t at = 0;
  for (const auto &b : spec.blocks) {
    if (b.size < 1) throw Error(ErrorCode::SizeMismatch, "block size must be >= 1");
    for (int i = 0; i < b.size; ++i) {
      m.set(at + i, at + i, b.eigenvalue);
      if (i + 1 < b.size) m.set(at + i, at + i + 1, 1);
    }
    at += static_cast<std::size_t>(b.size);
  }
  return m;
}

inline Matrix jordan_matrix(const JordanSpec &spec, PrimeField f) {
  return jordan_matrix(spec, f, static_cast<std::size_t>(std::max(spec.total_size(), 1)));
}

inline Matrix random_matrix(std::size_t n, PrimeField f, Xoshiro256 &rng) {
  Matrix m(n, f);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.set(i, j, static_cast<Elem>(rng.below(f.modulus())));
  return m;
}

inline Matrix random_invertible(std::size_t n, PrimeField f, Xoshiro256 &rng) {
  for (;;) {
    Matrix m = random_matrix(n, f, rng);
    if (rank(m) == n) return m;
  }
}

inline Matrix random_invertible(std::size_t n, PrimeField f, std::uint64_t seed) {
  Xoshiro256 rng(seed);
  return random_invertible(n, f, rng);
}

/// `count` distinct field elements in random order.
inline std::vector<Elem> random_distinct(std::size_t count, PrimeField f, Xoshiro256 &rng) {
  if (count > f.modulus())
    throw Error(ErrorCode::InvalidArgument, "F_" + std::to_string(f.modulus()) + " has fewer than " +
                                                std::to_string(count) + " elements");
  std::vector<Elem> out;
  while (out.size() < count) {
    auto v = static_cast<Elem>(rng.below(f.modulus()));
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

/// A random split Jordan structure on n with minimal polynomial degree
/// exactly `degree`: the degree is partitioned into the largest block of
/// each eigenvalue, and the rest of n is filled with blocks no larger.
inline JordanSpec random_jordan_spec(int n, int degree, PrimeField f, Xoshiro256 &rng) {
  if (degree < 1 || degree > n)
    throw Error(ErrorCode::InvalidArgument, "degree must lie in [1, n]");
  const int max_s = std::min<int>(degree, static_cast<int>(std::min<std::uint64_t>(f.modulus(), 64)));
  const int s = static_cast<int>(rng.between(1, max_s));
  // random composition of `degree` into s positive parts
  std::vector<int> cuts;
  for (int i = 1; i < degree; ++i) cuts.push_back(i);
  for (std::size_t i = cuts.size(); i > 1; --i) std::swap(cuts[i - 1], cuts[rng.below(i)]);
  cuts.resize(static_cast<std::size_t>(s - 1));
  std::sort(cuts.begin(), cuts.end());
  std::vector<int> largest;
  int prev = 0;
  for (int c : cuts) {
    largest.push_back(c - prev);
    prev = c;
  }
  largest.push_back(degree - prev);

  auto eig = random_distinct(static_cast<std::size_t>(s), f, rng);
  JordanSpec spec;
  for (int j = 0; j < s; ++j) spec.blocks.push_back({eig[j], largest[j]});
  int rest = n - degree;
  while (rest > 0) {
    const auto j = rng.below(static_cast<std::uint64_t>(s));
    const int size = static_cast<int>(rng.between(1, std::min(largest[j], rest)));
    spec.blocks.push_back({eig[j], size});
    rest -= size;
  }
  for (std::size_t i = spec.blocks.size(); i > 1; --i)
    std::swap(spec.blocks[i - 1], spec.blocks[rng.below(i)]);
  return spec;
}

/// J_t(lambda) + J_t(lambda) padded with blocks of size <= t at lambda.
inline JordanSpec double_block_spec(int n, int t, Elem lambda, Xoshiro256 &rng) {
  if (2 * t > n) throw Error(ErrorCode::InvalidArgument, "2t exceeds n");
  JordanSpec spec{{{lambda, t}, {lambda, t}}};
  int rest = n - 2 * t;
  while (rest > 0) {
    const int size = static_cast<int>(rng.between(1, std::min(t, rest)));
    spec.blocks.push_back({lambda, size});
    rest -= size;
  }
  return spec;
}

enum class Family { T10, T11, T12, THM39, RANDOM };

constexpr std::string_view to_string(Family f) {
  switch (f) {
  case Family::T10: return "T10";
  case Family::T11: return "T11";
  case Family::T12: return "T12";
  case Family::THM39: return "THM39";
  case Family::RANDOM: return "RANDOM";
  }
  return "RANDOM";
}

inline std::optional<Family> parse_family(std::string_view s) {
  for (auto f : {Family::T10, Family::T11, Family::T12, Family::THM39, Family::RANDOM})
    if (to_string(f) == s) return f;
  return std::nullopt;
}

struct InstanceSpec {
  std::size_t n = 0;
  std::uint64_t p = 101;
  JordanSpec jordan;   // the distinguished generator A (unused for RANDOM)
  std::size_t extra_gens = 1;
  std::uint64_t seed = 0;
  Family family = Family::RANDOM;
};

inline constexpr int kCompanionRetries = 64;

namespace detail {

inline void check_family(const InstanceSpec &spec, const Matrix &a) {
  const int n = static_cast<int>(spec.n);
  const int m = degree_of(a);
  bool ok = true;
  std::string why;
  switch (spec.family) {
  case Family::T10:
    ok = n % 2 == 0 && t10_t11_hypothesis(n, m).has_value();
    why = "needs n = 2t and t < m <= 2t";
    break;
  case Family::T11:
    ok = n % 2 == 1 && t10_t11_hypothesis(n, m).has_value();
    why = "needs n = 2t+1 and t < m <= 2t+1";
    break;
  case Family::T12:
    ok = t12_hypothesis(n, m);
    why = "needs 2m <= n <= 3m-1";
    break;
  case Family::THM39: {
    auto g = analyze_generator(a);
    ok = g.profile && is_double_equal_block(n, *g.profile);
    why = "needs A similar to J_{n/2}(l) + J_{n/2}(l)";
    break;
  }
  case Family::RANDOM: break;
  }
  if (!ok)
    throw Error(ErrorCode::FamilyHypothesisViolated,
                std::string(to_string(spec.family)) + " " + why + "; got n = " + std::to_string(n) +
                    ", deg A = " + std::to_string(m));
}

// Diagonalizable Q D Q^{-1} with at most `degree` distinct eigenvalues, so
// it never raises m(S) above the distinguished generator's degree.
inline Matrix bounded_degree_companion(std::size_t n, PrimeField f, int degree,
                                       Xoshiro256 &rng) {
  const auto d = static_cast<std::size_t>(std::min<int>(degree, static_cast<int>(n)));
  auto values = random_distinct(d, f, rng);
  // balanced eigenspaces; a large one would share an eigenvector with A
  std::vector<Elem> diag;
  for (std::size_t i = 0; i < n; ++i) diag.push_back(values[i % d]);
  for (std::size_t i = diag.size(); i > 1; --i) std::swap(diag[i - 1], diag[rng.below(i)]);
  Matrix dm(n, f);
  for (std::size_t i = 0; i < n; ++i) dm.set(i, i, diag[i]);
  return conjugate(random_invertible(n, f, rng), dm);
}

} // namespace detail

struct RandomSetResult {
  GeneratingSet set;
  int retries;
};

inline RandomSetResult random_generating_set_with_retries(std::size_t n, PrimeField f,
                                                          std::size_t count, std::uint64_t seed);

namespace detail {

inline GeneratingSet build_instance_counted(const InstanceSpec &spec, int &draws) {
  const PrimeField f(spec.p);
  const std::size_t n = spec.n;
  if (spec.family == Family::RANDOM) {
    auto r = random_generating_set_with_retries(n, f, spec.extra_gens, spec.seed);
    draws += r.retries + 1;
    return std::move(r.set);
  }
  Xoshiro256 rng(spec.seed);
  Matrix a = conjugate(random_invertible(n, f, rng), jordan_matrix(spec.jordan, f, n));
  check_family(spec, a);
  const int deg_a = degree_of(a);
  const bool bounded = spec.family == Family::T10 || spec.family == Family::T11 ||
                       spec.family == Family::T12;

  for (int attempt = 0; attempt < kCompanionRetries; ++attempt) {
    ++draws;
    std::vector<Matrix> gens{a};
    for (std::size_t i = 0; i < spec.extra_gens; ++i)
      gens.push_back(bounded ? bounded_degree_companion(n, f, deg_a, rng)
                             : random_matrix(n, f, rng));
    GeneratingSet s(n, f, std::move(gens));
    if (is_generating(s)) return s;
  }
  throw Error(ErrorCode::GenerationRetriesExhausted,
              std::to_string(kCompanionRetries) + " companion draws failed to generate M_" +
                  std::to_string(n));
}

} // namespace detail

/// A = P J P^{-1} for the prescribed Jordan structure and a seeded random
/// P, followed by `extra_gens` companions. Only the companions are redrawn
/// until the set generates M_n. For RANDOM, `extra_gens` is the number of
/// uniform random generators and `jordan` is ignored.
///
/// Companions of T10/T11/T12 instances are diagonalizable with at most
/// deg A distinct eigenvalues so that m(S) = deg A.
inline GeneratingSet build_instance(const InstanceSpec &spec) {
  int draws = 0;
  return detail::build_instance_counted(spec, draws);
}

struct BuiltInstance {
  GeneratingSet set;
  InstanceSpec spec; // as built, after any companion escalation
  int companion_draws = 0;
};

inline constexpr std::size_t kMaxCompanions = 3;

/// build_instance, retried with one more companion while the plan's
/// companion count cannot generate (e.g. only two degree-2 generators).
inline BuiltInstance build_with_escalation(InstanceSpec spec) {
  int draws = 0;
  for (;;) {
    try {
      auto set = detail::build_instance_counted(spec, draws);
      return {std::move(set), spec, draws};
    } catch (const Error &e) {
      if (e.code() != ErrorCode::GenerationRetriesExhausted || spec.family == Family::RANDOM ||
          spec.extra_gens >= kMaxCompanions)
        throw;
      ++spec.extra_gens;
    }
  }
}


inline RandomSetResult random_generating_set_with_retries(std::size_t n, PrimeField f,
                                                          std::size_t count, std::uint64_t seed) {
  if (n >= 2 && count < 2)
    throw Error(ErrorCode::InvalidArgument,
                "a single matrix spans a commutative algebra and cannot generate M_n for n >= 2");
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "count must be >= 1");
  Xoshiro256 rng(seed);
  for (int attempt = 0; attempt < kCompanionRetries; ++attempt) {
    std::vector<Matrix> gens;
    for (std::size_t i = 0; i < count; ++i) {
      Matrix m = random_matrix(n, f, rng);
      // M_1 = F is generated by anything; keep the degenerate case nonzero
      if (n == 1 && m.is_zero()) m.set(0, 0, 1);
      gens.push_back(std::move(m));
    }
    GeneratingSet s(n, f, std::move(gens));
    if (is_generating(s)) return {std::move(s), attempt};
  }
  throw Error(ErrorCode::GenerationRetriesExhausted,
              "random sets failed to generate M_" + std::to_string(n));
}

inline GeneratingSet random_generating_set(std::size_t n, PrimeField f, std::size_t count,
                                           std::uint64_t seed) {
  return random_generating_set_with_retries(n, f, count, seed).set;
}

/// Orders t with 2t <= n <= 3t - 1, excluding t = 1 (m(S) = 1 means every
/// generator is scalar).
inline std::vector<int> admissible_t12_orders(int n) {
  std::vector<int> ts;
  for (int t = 2; 2 * t <= n; ++t)
    if (n <= 3 * t - 1) ts.push_back(t);
  return ts;
}

inline bool family_supports(Family fam, int n) {
  switch (fam) {
  case Family::T10: return n >= 2 && n % 2 == 0;
  case Family::T11: return n >= 3 && n % 2 == 1;
  case Family::T12: return !admissible_t12_orders(n).empty();
  case Family::THM39: return n >= 4 && n % 2 == 0;
  case Family::RANDOM: return n >= 1;
  }
  return false;
}

/// Deterministic plan for the `variant`-th instance of a family on order n.
/// T10/T11 cycle through every admissible k; T12 cycles through admissible
/// t (unless pinned) and alternates generic structures with the
/// J_t + J_t subfamily.
inline InstanceSpec plan_instance(Family fam, int n, std::uint64_t p, std::uint64_t seed,
                                  std::size_t variant, std::optional<int> t12_order = {}) {
  if (!family_supports(fam, n))
    throw Error(ErrorCode::InvalidArgument, std::string(to_string(fam)) +
                                                " has no instances of order " + std::to_string(n));
  InstanceSpec spec;
  spec.n = static_cast<std::size_t>(n);
  spec.p = p;
  spec.family = fam;
  spec.extra_gens = fam == Family::RANDOM ? 2 : 1;
  spec.seed = seed;
  const PrimeField f(p);
  Xoshiro256 rng(derive_seed(seed, 0x5eed));
  switch (fam) {
  case Family::T10:
  case Family::T11: {
    const int t = n / 2;
    const int kmax = fam == Family::T10 ? t : t + 1;
    const int k = 1 + static_cast<int>(variant % static_cast<std::size_t>(kmax));
    spec.jordan = random_jordan_spec(n, t + k, f, rng);
    break;
  }
  case Family::T12: {
    int t = 0;
    if (t12_order) {
      t = *t12_order;
      if (!t12_hypothesis(n, t))
        throw Error(ErrorCode::InvalidArgument, "2t <= n <= 3t-1 fails");
    } else {
      auto ts = admissible_t12_orders(n);
      t = ts[(variant / 2) % ts.size()];
    }
    if (variant % 2 == 1)
      spec.jordan = double_block_spec(n, t, static_cast<Elem>(rng.below(p)), rng);
    else
      spec.jordan = random_jordan_spec(n, t, f, rng);
    break;
  }
  case Family::THM39:
    spec.jordan = double_block_spec(n, n / 2, static_cast<Elem>(rng.below(p)), rng);
    break;
  case Family::RANDOM: break;
  }
  return spec;
}

} // namespace matlen
