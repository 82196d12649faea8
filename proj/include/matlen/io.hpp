#pragma once

#include "matlen/bounds.hpp"
#include "matlen/error.hpp"
#include "matlen/instances.hpp"
#include "matlen/length.hpp"
#include "matlen/spectral.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace matlen {

using json = nlohmann::json;

inline constexpr int kInstanceSchema = 1;
inline constexpr int kReportSchema = 1;

/// Instance file contents plus optional provenance (family, seed) that the
/// generator writes alongside the bit-exact fields.
struct InstanceFile {
  GeneratingSet set;
  json provenance; // null when absent
};

namespace detail {

inline std::uint64_t required_uint(const json &j, const char *key, const std::string &where) {
  if (!j.contains(key)) throw Error(ErrorCode::ParseError, where + ": missing \"" + key + "\"");
  const auto &v = j.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
    throw Error(ErrorCode::ParseError, where + ": \"" + key + "\" must be a non-negative integer");
  return v.get<std::uint64_t>();
}

} // namespace detail

inline json matrix_to_json(const Matrix &m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.order(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.order(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const json &rows, std::size_t n, PrimeField f,
                               const std::string &where) {
  if (!rows.is_array() || rows.size() != n)
    throw Error(ErrorCode::ParseError, where + ": expected an array of " + std::to_string(n) +
                                           " rows");
  Matrix m(n, f);
  for (std::size_t i = 0; i < n; ++i) {
    const auto &row = rows[i];
    if (!row.is_array() || row.size() != n)
      throw Error(ErrorCode::ParseError,
                  where + " row " + std::to_string(i) + ": expected " + std::to_string(n) +
                      " entries, got " + (row.is_array() ? std::to_string(row.size()) : "non-array"));
    for (std::size_t j = 0; j < n; ++j) {
      const auto &v = row[j];
      if (!v.is_number_integer())
        throw Error(ErrorCode::ParseError, where + " row " + std::to_string(i) + " col " +
                                               std::to_string(j) + ": not an integer");
      const auto x = v.get<std::int64_t>();
      if (x < 0 || static_cast<std::uint64_t>(x) >= f.modulus())
        throw Error(ErrorCode::ParseError, where + " row " + std::to_string(i) + " col " +
                                               std::to_string(j) + ": entry " + std::to_string(x) +
                                               " outside [0, p)");
      m.set(i, j, static_cast<Elem>(x));
    }
  }
  return m;
}

inline json instance_to_json(const GeneratingSet &s, const json &provenance = nullptr) {
  json j;
  j["schema"] = kInstanceSchema;
  j["p"] = s.field().modulus();
  j["n"] = s.order();
  j["matrices"] = json::array();
  for (const auto &g : s.gens()) j["matrices"].push_back(matrix_to_json(g));
  if (!provenance.is_null()) j["provenance"] = provenance;
  return j;
}

/// {"schema": 1, "p": p, "n": n, "matrices": [[[row]...]...]}. Entries
/// outside [0, p) are rejected rather than reduced.
inline InstanceFile instance_from_json(const json &j, const std::string &where = "instance") {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, where + ": expected a JSON object");
  const auto schema = detail::required_uint(j, "schema", where);
  if (schema != kInstanceSchema)
    throw Error(ErrorCode::ParseError, where + ": unsupported schema " + std::to_string(schema));
  const auto p = detail::required_uint(j, "p", where);
  const auto n = detail::required_uint(j, "n", where);
  if (n < 1) throw Error(ErrorCode::ParseError, where + ": n must be >= 1");
  const PrimeField f(p); // NotPrime / ModulusTooLarge
  if (!j.contains("matrices") || !j.at("matrices").is_array() || j.at("matrices").empty())
    throw Error(ErrorCode::ParseError, where + ": \"matrices\" must be a nonempty array");
  std::vector<Matrix> gens;
  const auto &ms = j.at("matrices");
  for (std::size_t k = 0; k < ms.size(); ++k)
    gens.push_back(matrix_from_json(ms[k], n, f, where + " matrix " + std::to_string(k)));
  return {GeneratingSet(n, f, std::move(gens)), j.value("provenance", json(nullptr))};
}

inline json parse_json_text(const std::string &text, const std::string &where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    throw Error(ErrorCode::ParseError, where + ": " + e.what());
  }
}

inline std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// A file holds one instance object or an array of them.
inline std::vector<InstanceFile> load_instances(const std::string &path) {
  const json j = parse_json_text(read_file(path), path);
  std::vector<InstanceFile> out;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      out.push_back(instance_from_json(j[i], path + " instance " + std::to_string(i)));
  } else {
    out.push_back(instance_from_json(j, path));
  }
  return out;
}

inline json to_json(const LengthReport &r) {
  json j;
  j["n"] = r.n;
  j["dims"] = r.dims;
  j["length"] = r.length ? json(*r.length) : json(nullptr);
  j["generated_dim"] = r.generated_dim;
  j["is_generating"] = r.is_generating;
  j["truncated"] = r.truncated;
  return j;
}

inline json to_json(const Polynomial &p) { return p.coeffs(); }

inline json to_json(const JordanProfile &p) {
  json j = json::object();
  for (const auto &[lambda, sizes] : p.blocks) j[std::to_string(lambda)] = sizes;
  return j;
}

inline json to_json(const JordanSpec &s) {
  json j = json::array();
  for (const auto &b : s.blocks) j.push_back({{"eigenvalue", b.eigenvalue}, {"size", b.size}});
  return j;
}

inline JordanSpec jordan_spec_from_json(const json &j) {
  JordanSpec s;
  for (const auto &b : j) s.blocks.push_back({b.at("eigenvalue").get<Elem>(), b.at("size").get<int>()});
  return s;
}

inline json to_json(const GeneratorSpectrum &g) {
  json j;
  j["minimal_polynomial"] = to_json(g.minpoly.poly);
  j["degree"] = g.minpoly.degree();
  if (g.spectrum) {
    json roots = json::array();
    for (const auto &r : g.spectrum->roots)
      roots.push_back({{"eigenvalue", r.value}, {"multiplicity", r.multiplicity}});
    j["spectrum"] = roots;
  } else {
    j["spectrum"] = nullptr;
  }
  j["jordan_profile"] = g.profile ? to_json(*g.profile) : json(nullptr);
  if (!g.note.empty()) j["note"] = g.note;
  return j;
}

inline json to_json(const RankCertificate &c, const Matrix &a) {
  json j;
  json ex = json::object();
  for (const auto &[lambda, e] : c.exponents) ex[std::to_string(lambda)] = e;
  j["exponents"] = ex;
  j["degree"] = c.degree;
  j["achieved_rank"] = c.achieved_rank;
  j["witness"] = matrix_to_json(c.witness);
  j["sound"] = verify_certificate(c, a);
  return j;
}

inline json to_json(const BoundEntry &e) {
  return {{"name", e.name}, {"bound", e.bound}, {"applicable", e.applicable},
          {"decidable", e.decidable}, {"hypothesis_note", e.note}};
}

inline json to_json(const BoundLedger &l) {
  json j = json::array();
  for (const auto &e : l.entries) j.push_back(to_json(e));
  return j;
}

inline BoundLedger ledger_from_json(const json &j) {
  BoundLedger l;
  for (const auto &e : j)
    l.entries.push_back({e.at("name").get<std::string>(), e.at("bound").get<std::int64_t>(),
                         e.at("applicable").get<bool>(), e.value("decidable", true),
                         e.value("hypothesis_note", std::string())});
  return l;
}

inline LengthReport length_report_from_json(const json &j) {
  LengthReport r;
  r.n = j.at("n").get<std::size_t>();
  r.dims = j.at("dims").get<std::vector<std::size_t>>();
  if (!j.at("length").is_null()) r.length = j.at("length").get<std::size_t>();
  r.generated_dim = j.at("generated_dim").get<std::size_t>();
  r.is_generating = j.at("is_generating").get<bool>();
  r.truncated = j.value("truncated", false);
  return r;
}

inline json to_json(const Violation &v) {
  return {{"bound_name", v.bound_name}, {"bound", v.bound}, {"length", v.length}};
}

/// Keys are sorted (nlohmann's default object is an ordered map) and no
/// timestamps appear, so equal inputs give byte-identical text.
inline std::string canonical_dump(const json &j) { return j.dump(2) + "\n"; }

} // namespace matlen
