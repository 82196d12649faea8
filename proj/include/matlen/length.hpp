#pragma once

#include "matlen/error.hpp"
#include "matlen/matrix.hpp"
#include "matlen/span_basis.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace matlen {

/// A finite set S of n x n matrices over one prime field.
class GeneratingSet {
public:
  GeneratingSet(std::size_t n, PrimeField field, std::vector<Matrix> gens)
      : n_(n), field_(field), gens_(std::move(gens)) {
    if (gens_.empty()) throw Error(ErrorCode::EmptySet, "generating set has no matrices");
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      if (gens_[i].order() != n_)
        throw Error(ErrorCode::DimensionMismatch, "generator " + std::to_string(i) +
                                                      " has order " +
                                                      std::to_string(gens_[i].order()));
      if (!(gens_[i].field() == field_))
        throw Error(ErrorCode::FieldMismatch,
                    "generator " + std::to_string(i) + " is over a different field");
    }
  }
  explicit GeneratingSet(std::vector<Matrix> gens)
      : GeneratingSet(gens.empty() ? 1 : gens.front().order(),
                      gens.empty() ? PrimeField(2) : gens.front().field(), std::move(gens)) {}

  std::size_t order() const noexcept { return n_; }
  const PrimeField &field() const noexcept { return field_; }
  const std::vector<Matrix> &gens() const noexcept { return gens_; }
  std::size_t size() const noexcept { return gens_.size(); }

  friend bool operator==(const GeneratingSet &, const GeneratingSet &) = default;

private:
  std::size_t n_;
  PrimeField field_;
  std::vector<Matrix> gens_;
};

/// dims[i] = dim L_i(S). `length` is set iff the words span all of M_n.
struct LengthReport {
  std::size_t n = 0;
  std::vector<std::size_t> dims;
  std::optional<std::size_t> length;
  std::size_t generated_dim = 0;
  bool is_generating = false;
  /// Set when a level cap stopped the growth before it resolved.
  bool truncated = false;

  friend bool operator==(const LengthReport &, const LengthReport &) = default;
};

/// Level-by-level span growth. Level i+1 candidates are g * w for every
/// generator g and every word w of length i that enlarged the span.
/// Every word of length i+1 is g * (word of length i), and a word that did
/// not enlarge L_i is already a combination of shorter words and frontier
/// words of its own level, so the frontier is enough.
inline LengthReport compute_length(const GeneratingSet &s,
                                   std::optional<std::size_t> max_level = std::nullopt) {
  const std::size_t n = s.order();
  const std::size_t full = n * n;
  const std::size_t cap = std::min(max_level.value_or(full), full);
  LengthReport rep;
  rep.n = n;

  SpanBasis basis(full, s.field());
  Matrix id = Matrix::identity(n, s.field());
  basis.insert(id);
  rep.dims.push_back(basis.dim());
  std::vector<Matrix> frontier{id};

  std::size_t level = 0;
  while (!basis.full() && !frontier.empty() && level < cap) {
    ++level;
    std::vector<Matrix> next;
    std::unordered_set<Matrix, MatrixHash> seen;
    for (const auto &w : frontier) {
      for (const auto &g : s.gens()) {
        Matrix cand = g * w;
        if (!seen.insert(cand).second) continue;
        if (basis.insert(cand)) next.push_back(std::move(cand));
        if (basis.full()) break;
      }
      if (basis.full()) break;
    }
    rep.dims.push_back(basis.dim());
    frontier = std::move(next);
  }

  rep.generated_dim = basis.dim();
  rep.is_generating = basis.full();
  if (rep.is_generating) rep.length = rep.dims.size() - 1;
  rep.truncated = !rep.is_generating && !frontier.empty();
  return rep;
}

inline bool is_generating(const GeneratingSet &s) { return compute_length(s).is_generating; }

inline constexpr std::uint64_t kBruteForceWordBudget = 1'000'000;

struct BruteForceOptions {
  /// Keep building levels after the chain stabilizes (up to max_len).
  bool stop_at_stabilization = true;
};

/// Independent oracle: enumerates every word of each exact length as the
/// full cartesian product of the generators and rebuilds L_i from scratch
/// at every level.
inline LengthReport brute_force_length(const GeneratingSet &s, std::size_t max_len,
                                       BruteForceOptions opt = {}) {
  const std::uint64_t k = s.size();
  std::uint64_t words = 1;
  for (std::size_t i = 0; i < max_len; ++i) {
    if (words > kBruteForceWordBudget / k) {
      words = kBruteForceWordBudget + 1;
      break;
    }
    words *= k;
  }
  if (words > kBruteForceWordBudget)
    throw Error(ErrorCode::BudgetExceeded, std::to_string(k) + "^" + std::to_string(max_len) +
                                               " words exceed the 10^6 budget");

  const std::size_t n = s.order();
  const std::size_t full = n * n;
  LengthReport rep;
  rep.n = n;

  std::vector<std::vector<Matrix>> by_length{{Matrix::identity(n, s.field())}};
  auto span_dim = [&](std::size_t upto) {
    SpanBasis basis(full, s.field());
    for (std::size_t len = 0; len <= upto; ++len)
      for (const auto &w : by_length[len]) basis.insert(w);
    return basis.dim();
  };

  rep.dims.push_back(span_dim(0));
  bool stabilized = false;
  for (std::size_t len = 1; len <= max_len && rep.dims.back() < full; ++len) {
    if (stabilized && opt.stop_at_stabilization) break;
    std::vector<Matrix> level;
    level.reserve(by_length.back().size() * s.size());
    for (const auto &w : by_length.back())
      for (const auto &g : s.gens()) level.push_back(w * g);
    by_length.push_back(std::move(level));
    rep.dims.push_back(span_dim(len));
    if (rep.dims[len] == rep.dims[len - 1]) stabilized = true;
    if (stabilized && opt.stop_at_stabilization) break;
  }

  rep.generated_dim = rep.dims.back();
  rep.is_generating = rep.generated_dim == full;
  if (rep.is_generating) {
    std::size_t first = 0;
    while (rep.dims[first] < full) ++first;
    rep.length = first;
  }
  rep.truncated = !rep.is_generating && !stabilized;
  return rep;
}

} // namespace matlen
