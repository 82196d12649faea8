#pragma once

// Test-only reference computations. None of these call into the library's
// elimination, span or search code; they work on plain integer arrays.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace oracle {

using Mat = std::vector<std::vector<std::int64_t>>;

inline Mat schoolbook_mul(const Mat &a, const Mat &b, std::int64_t p) {
  const std::size_t n = a.size();
  Mat c(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::int64_t acc = 0;
      for (std::size_t k = 0; k < n; ++k) acc = (acc + a[i][k] * b[k][j]) % p;
      c[i][j] = acc;
    }
  return c;
}

inline Mat identity(std::size_t n) {
  Mat m(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
  // extended Euclid
  std::int64_t t = 0, nt = 1, r = p, nr = ((a % p) + p) % p;
  while (nr) {
    std::int64_t q = r / nr;
    std::int64_t tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  return ((t % p) + p) % p;
}

/// Rank of a list of vectors by naive forward elimination (no RREF).
inline std::size_t rank_of_rows(std::vector<std::vector<std::int64_t>> rows, std::int64_t p) {
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t sel = rank;
    while (sel < rows.size() && rows[sel][c] % p == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[sel], rows[rank]);
    const std::int64_t iv = inv_mod(rows[rank][c], p);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      const std::int64_t f = rows[r][c] % p * iv % p;
      for (std::size_t j = c; j < cols; ++j)
        rows[r][j] = ((rows[r][j] - f * rows[rank][j]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

inline std::size_t rank(const Mat &m, std::int64_t p) { return rank_of_rows(m, p); }

inline std::vector<std::int64_t> flatten(const Mat &m) {
  std::vector<std::int64_t> v;
  for (const auto &row : m) v.insert(v.end(), row.begin(), row.end());
  return v;
}

/// dim of the span of all words of length <= max_len, by explicit
/// enumeration of every word, for each level.
inline std::vector<std::size_t> word_span_dims(const std::vector<Mat> &gens, std::size_t max_len,
                                               std::int64_t p) {
  const std::size_t n = gens.front().size();
  std::vector<Mat> all{identity(n)};
  std::vector<Mat> last{identity(n)};
  std::vector<std::size_t> dims;
  auto dim_of = [&] {
    std::vector<std::vector<std::int64_t>> rows;
    for (const auto &w : all) rows.push_back(flatten(w));
    return rank_of_rows(rows, p);
  };
  dims.push_back(dim_of());
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<Mat> next;
    for (const auto &g : gens)
      for (const auto &w : last) next.push_back(schoolbook_mul(g, w, p));
    all.insert(all.end(), next.begin(), next.end());
    last = std::move(next);
    dims.push_back(dim_of());
  }
  return dims;
}

inline Mat shifted(const Mat &a, std::int64_t lambda, std::int64_t p) {
  Mat m = a;
  for (std::size_t i = 0; i < m.size(); ++i) m[i][i] = ((m[i][i] - lambda) % p + p) % p;
  return m;
}

inline Mat mat_pow(const Mat &a, int e, std::int64_t p) {
  Mat r = identity(a.size());
  for (int i = 0; i < e; ++i) r = schoolbook_mul(r, a, p);
  return r;
}

struct Best {
  std::map<std::int64_t, int> exponents;
  int degree;
  std::size_t rank;
};

/// Exhausts every exponent vector, picking the smallest degree with the
/// lexicographically smallest vector among ties.
inline std::optional<Best> best_rank_reduction(const Mat &a,
                                               const std::vector<std::pair<std::int64_t, int>> &roots,
                                               std::size_t r_max, std::int64_t p) {
  std::optional<Best> best;
  std::vector<int> best_vec;
  std::vector<int> cur(roots.size(), 0);
  for (;;) {
    bool all_zero = true, all_full = true;
    int deg = 0;
    for (std::size_t k = 0; k < roots.size(); ++k) {
      all_zero &= cur[k] == 0;
      all_full &= cur[k] == roots[k].second;
      deg += cur[k];
    }
    if (!all_zero && !all_full) {
      Mat w = identity(a.size());
      for (std::size_t k = 0; k < roots.size(); ++k)
        w = schoolbook_mul(w, mat_pow(shifted(a, roots[k].first, p), cur[k], p), p);
      const std::size_t r = rank(w, p);
      if (r >= 1 && r <= r_max) {
        if (!best || deg < best->degree || (deg == best->degree && cur < best_vec)) {
          Best b{{}, deg, r};
          for (std::size_t k = 0; k < roots.size(); ++k)
            if (cur[k]) b.exponents[roots[k].first] = cur[k];
          best = b;
          best_vec = cur;
        }
      }
    }
    std::size_t k = 0;
    while (k < roots.size() && cur[k] == roots[k].second) cur[k++] = 0;
    if (k == roots.size()) break;
    ++cur[k];
  }
  return best;
}

} // namespace oracle
