#pragma once

#include "matlen/certificates.hpp"
#include "matlen/error.hpp"
#include "matlen/length.hpp"
#include "matlen/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace matlen {

// Bound formulas. All return exact integers; logarithmic ones are rounded up.

constexpr std::int64_t paz_bound(std::int64_t n) { return (n * n + 2 + 2) / 3; }

inline std::int64_t shitov_log_bound(std::int64_t n) {
  const double v = 2.0 * n * std::log2(static_cast<double>(n)) + 4.0 * n - 4.0;
  return static_cast<std::int64_t>(std::ceil(v - 1e-9));
}

inline std::int64_t degree_two_bound(std::int64_t n) {
  return static_cast<std::int64_t>(std::ceil(2.0 * std::log2(static_cast<double>(n)) - 1e-9));
}

constexpr std::int64_t pappacena_bound(std::int64_t r, std::int64_t k, std::int64_t n) {
  return r * n + n - r + k - 1;
}

inline std::int64_t shitov_rank1_bound(std::int64_t k, std::int64_t n) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "InvalidK: k must be >= 2");
  return 2 * n + k - 4;
}

constexpr std::int64_t markova_bound(std::int64_t n, std::int64_t deg) { return 2 * n + deg - 3; }
constexpr std::int64_t half_degree_bound(std::int64_t n) { return 3 * n - 5; }
constexpr std::int64_t third_degree_bound(std::int64_t n) { return 7 * n / 2 - 4; }

struct HalfDegreeSplit {
  int t;
  int k;
  friend bool operator==(const HalfDegreeSplit &, const HalfDegreeSplit &) = default;
};

/// n = 2t with m = t + k, k in 1..t; or n = 2t + 1 with k in 1..t+1.
/// Equivalently m > n / 2.
constexpr std::optional<HalfDegreeSplit> t10_t11_hypothesis(int n, int m) {
  if (n < 2 || m < 1 || m > n) return std::nullopt;
  const int t = n / 2;
  const int kmax = n % 2 == 0 ? t : t + 1;
  const int k = m - t;
  if (k < 1 || k > kmax) return std::nullopt;
  return HalfDegreeSplit{t, k};
}

constexpr bool t12_hypothesis(int n, int m) { return 2 * m <= n && n <= 3 * m - 1; }

/// k = n - m with 2k < n, and every eigenvalue's block n_lambda satisfies
/// 2 (n_lambda - deg_lambda) < n_lambda.
inline std::optional<int> thm38_hypothesis(int n, const JordanProfile &profile, int m) {
  const int k = n - m;
  if (k < 0 || 2 * k >= n) return std::nullopt;
  for (const auto &[lambda, sizes] : profile.blocks) {
    if (sizes.empty()) continue;
    int n_lambda = 0;
    for (int b : sizes) n_lambda += b;
    const int deg_lambda = sizes.front();
    if (2 * (n_lambda - deg_lambda) >= n_lambda) return std::nullopt;
  }
  return k;
}

/// Profile {lambda: [n/2, n/2]}.
inline bool is_double_equal_block(int n, const JordanProfile &profile) {
  if (n % 2 != 0 || profile.blocks.size() != 1) return false;
  const auto &sizes = profile.blocks.begin()->second;
  return sizes.size() == 2 && sizes[0] == n / 2 && sizes[1] == n / 2;
}

struct GeneratorCertificates {
  std::optional<RankCertificate> rank1; // r_max = 1
  std::optional<RankCertificate> rank2; // r_max = 2
};

/// Per-generator spectral data and best certificates for one set.
struct SetAnalysis {
  std::size_t n = 0;
  int m = 0;
  std::vector<GeneratorSpectrum> generators;
  std::vector<GeneratorCertificates> certificates;
};

inline SetAnalysis analyze_set(const GeneratingSet &s) {
  SetAnalysis out;
  out.n = s.order();
  for (const auto &g : s.gens()) {
    auto spec = analyze_generator(g);
    GeneratorCertificates certs;
    if (spec.spectrum) {
      certs.rank1 = find_rank_reduction(g, *spec.spectrum, 1);
      certs.rank2 = find_rank_reduction(g, *spec.spectrum, 2);
    }
    out.m = std::max(out.m, spec.minpoly.degree());
    out.generators.push_back(std::move(spec));
    out.certificates.push_back(std::move(certs));
  }
  return out;
}

struct BoundEntry {
  std::string name;
  std::int64_t bound = 0;
  bool applicable = false;
  /// False when a Jordan-dependent hypothesis could not be decided because
  /// a spectrum does not split over F_p.
  bool decidable = true;
  std::string note;
};

struct BoundLedger {
  std::vector<BoundEntry> entries;

  std::optional<std::int64_t> tightest() const {
    std::optional<std::int64_t> best;
    for (const auto &e : entries)
      if (e.applicable && (!best || e.bound < *best)) best = e.bound;
    return best;
  }
  const BoundEntry *find(const std::string &name) const {
    for (const auto &e : entries)
      if (e.name == name) return &e;
    return nullptr;
  }
};

namespace detail {

inline std::string gen_label(std::size_t i) { return "g" + std::to_string(i); }

// Collects per-generator outcomes of a Jordan-dependent hypothesis into one
// ledger row holding the smallest bound among qualifying generators.
struct Aggregate {
  BoundEntry entry;
  std::vector<std::string> failures;
  bool undecided = false;

  explicit Aggregate(std::string name) { entry.name = std::move(name); }

  void qualify(std::int64_t bound, const std::string &why) {
    if (!entry.applicable || bound < entry.bound) {
      entry.bound = bound;
      entry.note = why;
    }
    entry.applicable = true;
  }
  void fail(const std::string &why) { failures.push_back(why); }
  void undecidable(const std::string &why) {
    undecided = true;
    failures.push_back("undecidable: " + why);
  }
  BoundEntry finish(std::int64_t fallback_bound) && {
    if (!entry.applicable) {
      entry.bound = fallback_bound;
      entry.decidable = !undecided;
      for (std::size_t i = 0; i < failures.size(); ++i)
        entry.note += (i ? "; " : "") + failures[i];
    }
    return std::move(entry);
  }
};

} // namespace detail

inline BoundLedger bound_ledger(const GeneratingSet &s, const SetAnalysis &an) {
  const int n = static_cast<int>(s.order());
  const int m = an.m;
  BoundLedger led;
  auto &out = led.entries;

  out.push_back({"paz_ceiling", paz_bound(n), true, true, "ceil((n^2+2)/3), every generating set"});
  out.push_back({"shitov_log", shitov_log_bound(n), true, true,
                 "ceil(2n log2 n + 4n - 4), every generating set"});

  {
    BoundEntry e{"degree_two_log", degree_two_bound(n), m <= 2, true, {}};
    e.note = m <= 2 ? "every generator has minimal polynomial degree <= 2"
                    : "m(S) = " + std::to_string(m) + " > 2";
    out.push_back(std::move(e));
  }

  {
    detail::Aggregate nd("nonderogatory"), nm1("degree_n_minus_1");
    for (std::size_t i = 0; i < an.generators.size(); ++i) {
      const int d = an.generators[i].minpoly.degree();
      if (d == n) nd.qualify(2 * n - 2, detail::gen_label(i) + " is nonderogatory");
      if (d == n - 1) nm1.qualify(2 * n - 2, detail::gen_label(i) + " has degree n-1");
    }
    if (!nd.entry.applicable) nd.fail("no generator has minimal polynomial degree n");
    if (!nm1.entry.applicable) nm1.fail("no generator has minimal polynomial degree n-1");
    out.push_back(std::move(nd).finish(2 * n - 2));
    out.push_back(std::move(nm1).finish(2 * n - 2));
  }

  {
    detail::Aggregate uniq("unique_max_block"), bal("degree_n_minus_k_balanced"),
        dbl("double_equal_block");
    for (std::size_t i = 0; i < an.generators.size(); ++i) {
      const auto &g = an.generators[i];
      const auto label = detail::gen_label(i);
      if (!g.profile) {
        uniq.undecidable(label + " spectrum does not split");
        bal.undecidable(label + " spectrum does not split");
        dbl.undecidable(label + " spectrum does not split");
        continue;
      }
      const int d = g.minpoly.degree();
      if (auto mb = unique_max_block(*g.profile))
        uniq.qualify(markova_bound(n, d), label + ": eigenvalue " + std::to_string(mb->eigenvalue) +
                                              " has a unique block of size " +
                                              std::to_string(mb->size));
      if (auto k = thm38_hypothesis(n, *g.profile, d))
        bal.qualify(2 * n - 2 + *k, label + ": k = " + std::to_string(*k) +
                                        " with 2k < n and 2k_lambda < n_lambda");
      if (is_double_equal_block(n, *g.profile))
        dbl.qualify(5 * n / 2 - 2, label + " is similar to J_{n/2}(l) + J_{n/2}(l)");
    }
    if (!uniq.entry.applicable) uniq.fail("no generator has an eigenvalue with a unique maximal block");
    if (!bal.entry.applicable) bal.fail("no generator with 2(n - deg) < n balanced per eigenvalue");
    if (!dbl.entry.applicable) dbl.fail("no generator similar to J_{n/2}(l) + J_{n/2}(l)");
    out.push_back(std::move(uniq).finish(markova_bound(n, m)));
    out.push_back(std::move(bal).finish(2 * n - 2 + (n - m)));
    out.push_back(std::move(dbl).finish(n % 2 == 0 ? 5 * n / 2 - 2 : 0));
  }

  {
    auto h = t10_t11_hypothesis(n, m);
    BoundEntry e{"degree_above_half", half_degree_bound(n), h.has_value(), true, {}};
    e.note = h ? "m(S) = t + k with t = " + std::to_string(h->t) + ", k = " + std::to_string(h->k)
               : "m(S) = " + std::to_string(m) + " is not > n/2";
    out.push_back(std::move(e));
  }
  {
    const bool ok = t12_hypothesis(n, m);
    BoundEntry e{"degree_third_to_half", third_degree_bound(n), ok, true, {}};
    e.note = ok ? "2t <= n <= 3t-1 with t = m(S) = " + std::to_string(m) +
                      "; the rank<=2 route gives rn+n-r+k-1 = 3n+t-4 at r=2, k=t-1"
                : "2t <= n <= 3t-1 fails for t = m(S) = " + std::to_string(m);
    out.push_back(std::move(e));
  }

  for (std::size_t i = 0; i < an.generators.size(); ++i) {
    const auto label = detail::gen_label(i);
    if (!an.generators[i].spectrum) {
      out.push_back({"rank_reduction[" + label + "]", 0, false, false,
                     "undecidable: " + label + " spectrum does not split"});
      continue;
    }
    const auto &c = an.certificates[i];
    auto add_pappacena = [&](const std::optional<RankCertificate> &cert, int r_max) {
      const std::string name = "rank_reduction[" + label + ",r<=" + std::to_string(r_max) + "]";
      if (!cert) {
        out.push_back({name, 0, false, true, "no divisor-form product of rank <= " +
                                                 std::to_string(r_max)});
        return;
      }
      const auto r = static_cast<std::int64_t>(cert->achieved_rank);
      out.push_back({name, pappacena_bound(r, cert->degree, n), true, true,
                     "rank " + std::to_string(r) + " in L_" + std::to_string(cert->degree) +
                         ": rn+n-r+k-1"});
    };
    add_pappacena(c.rank1, 1);
    add_pappacena(c.rank2, 2);
    if (c.rank1) {
      const int k = std::max(c.rank1->degree, 2);
      out.push_back({"rank_one[" + label + "]", shitov_rank1_bound(k, n), true, true,
                     "rank one in L_" + std::to_string(c.rank1->degree) + ": 2n+k-4 with k = " +
                         std::to_string(k)});
    }
  }
  return led;
}

inline BoundLedger bound_ledger(const GeneratingSet &s) { return bound_ledger(s, analyze_set(s)); }

struct Violation {
  std::string bound_name;
  std::int64_t bound = 0;
  std::size_t length = 0;
};

/// Every applicable bound must be >= the computed length.
inline std::vector<Violation> find_violations(const LengthReport &rep, const BoundLedger &led) {
  std::vector<Violation> v;
  if (!rep.length) return v;
  for (const auto &e : led.entries)
    if (e.applicable && e.bound < static_cast<std::int64_t>(*rep.length))
      v.push_back({e.name, e.bound, *rep.length});
  return v;
}

} // namespace matlen
