#pragma once

#include "matlen/bounds.hpp"
#include "matlen/certificates.hpp"
#include "matlen/error.hpp"
#include "matlen/instances.hpp"
#include "matlen/io.hpp"
#include "matlen/length.hpp"
#include "matlen/random.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace matlen {

/// Length, spectral analysis, ledger and violations of one set.
struct InstanceResult {
  LengthReport length;
  SetAnalysis analysis;
  BoundLedger ledger;
  std::vector<Violation> violations;

  bool within_2n_minus_2() const {
    return !length.length || *length.length + 2 <= 2 * std::max<std::size_t>(length.n, 1);
  }
};

inline InstanceResult evaluate_instance(const GeneratingSet &s,
                                        std::optional<std::size_t> max_level = std::nullopt) {
  InstanceResult r{compute_length(s, max_level), analyze_set(s), {}, {}};
  r.ledger = bound_ledger(s, r.analysis);
  r.violations = find_violations(r.length, r.ledger);
  return r;
}

inline json certificates_json(const GeneratingSet &s, const SetAnalysis &an) {
  json out = json::array();
  for (std::size_t i = 0; i < an.certificates.size(); ++i) {
    const auto &c = an.certificates[i];
    for (auto [cert, r_max] : {std::pair{&c.rank1, 1}, std::pair{&c.rank2, 2}}) {
      if (!*cert) continue;
      json j = to_json(**cert, s.gens()[i]);
      j["generator"] = i;
      j["r_max"] = r_max;
      out.push_back(std::move(j));
    }
  }
  return out;
}

inline json generators_json(const SetAnalysis &an) {
  json out = json::array();
  for (const auto &g : an.generators) out.push_back(to_json(g));
  return out;
}

inline json record_json(std::size_t id, const json &instance_echo, const GeneratingSet &s,
                        const InstanceResult &r) {
  json j;
  j["id"] = id;
  j["status"] = "evaluated";
  j["instance"] = instance_echo;
  j["length"] = to_json(r.length);
  j["m_S"] = r.analysis.m;
  j["generators"] = generators_json(r.analysis);
  j["ledger"] = to_json(r.ledger);
  j["certificates"] = certificates_json(s, r.analysis);
  auto tight = r.ledger.tightest();
  j["tightest_applicable_bound"] = tight ? json(*tight) : json(nullptr);
  j["within_2n_minus_2"] = r.within_2n_minus_2();
  j["violations"] = json::array();
  for (const auto &v : r.violations) j["violations"].push_back(to_json(v));
  return j;
}

// ---------------------------------------------------------------------------
// Campaigns

struct CampaignConfig {
  std::vector<Family> families{Family::RANDOM};
  std::vector<int> orders{2, 3, 4, 5};
  std::size_t count = 100; // per (order, family) pair
  std::uint64_t p = 101;
  std::uint64_t seed = 7;
  std::size_t jobs = 1;
  std::optional<int> t12_order;
  std::optional<std::size_t> max_level;
};

struct CampaignTask {
  std::size_t id;
  Family family;
  int n;
  std::size_t variant;
  std::uint64_t seed;
};

struct TaskOutcome {
  CampaignTask task;
  std::optional<BuiltInstance> built;
  std::optional<InstanceResult> result;
  std::string skip_reason;
  json record;
};

struct CampaignResult {
  std::vector<TaskOutcome> outcomes;
  json report;
  std::size_t violations = 0;
};

inline std::vector<CampaignTask> plan_campaign(const CampaignConfig &cfg) {
  if (cfg.count < 1) throw Error(ErrorCode::InvalidArgument, "count must be >= 1");
  if (cfg.jobs < 1) throw Error(ErrorCode::InvalidArgument, "jobs must be >= 1");
  std::vector<CampaignTask> tasks;
  for (int n : cfg.orders)
    for (auto fam : cfg.families) {
      if (!family_supports(fam, n)) continue;
      if (fam == Family::T12 && cfg.t12_order && !t12_hypothesis(n, *cfg.t12_order)) continue;
      for (std::size_t v = 0; v < cfg.count; ++v) {
        const std::size_t id = tasks.size();
        tasks.push_back({id, fam, n, v, derive_seed(cfg.seed, id)});
      }
    }
  return tasks;
}

inline json spec_echo(const InstanceSpec &spec, std::size_t variant, int companion_draws) {
  return {{"family", std::string(to_string(spec.family))},
          {"n", spec.n},
          {"p", spec.p},
          {"seed", spec.seed},
          {"variant", variant},
          {"extra_gens", spec.extra_gens},
          {"jordan", to_json(spec.jordan)},
          {"companion_draws", companion_draws}};
}

inline TaskOutcome run_task(const CampaignTask &task, const CampaignConfig &cfg) {
  TaskOutcome out{task, std::nullopt, std::nullopt, {}, {}};
  InstanceSpec plan;
  try {
    plan = plan_instance(task.family, task.n, cfg.p, task.seed, task.variant, cfg.t12_order);
    out.built = build_with_escalation(plan);
  } catch (const Error &e) {
    if (e.code() != ErrorCode::GenerationRetriesExhausted &&
        e.code() != ErrorCode::FamilyHypothesisViolated)
      throw;
    out.skip_reason = e.what();
    out.record = {{"id", task.id},
                  {"status", "skipped"},
                  {"instance", spec_echo(plan, task.variant, 0)},
                  {"skip_reason", out.skip_reason}};
    return out;
  }
  out.result = evaluate_instance(out.built->set, cfg.max_level);
  json echo = spec_echo(out.built->spec, task.variant, out.built->companion_draws);
  echo["matrices"] = instance_to_json(out.built->set)["matrices"];
  out.record = record_json(task.id, echo, out.built->set, *out.result);
  return out;
}

inline json summarize(const std::vector<json> &records) {
  std::size_t evaluated = 0, skipped = 0, generating = 0, violations = 0, violating = 0,
              conj_failures = 0, draws = 0, escalated = 0;
  std::map<std::string, std::size_t> max_len;
  json conj_ids = json::array();
  for (const auto &r : records) {
    if (r.at("status") == "skipped") {
      ++skipped;
      continue;
    }
    ++evaluated;
    const auto &inst = r.at("instance");
    draws += inst.value("companion_draws", 0);
    if (inst.contains("family") && inst.at("family") != "RANDOM" && inst.value("extra_gens", 1) > 1)
      ++escalated;
    const auto &len = r.at("length");
    if (len.at("is_generating").get<bool>()) {
      ++generating;
      const auto key = std::to_string(len.at("n").get<std::size_t>());
      max_len[key] = std::max(max_len[key], len.at("length").get<std::size_t>());
    }
    const auto nv = r.at("violations").size();
    violations += nv;
    violating += nv ? 1 : 0;
    if (!r.value("within_2n_minus_2", true)) {
      ++conj_failures;
      conj_ids.push_back(r.at("id"));
    }
  }
  json s;
  s["instances"] = records.size();
  s["evaluated"] = evaluated;
  s["skipped"] = skipped;
  s["generating"] = generating;
  s["violations"] = violations;
  s["violating_instances"] = violating;
  s["max_length_per_n"] = max_len;
  s["companion_draws"] = draws;
  s["companion_escalations"] = escalated;
  // Observational only; the literature settles 2n-2 for n <= 7.
  s["exceeds_2n_minus_2"] = {{"count", conj_failures}, {"ids", conj_ids},
                             {"flag", conj_failures ? "LENGTH ABOVE 2n-2 OBSERVED" : "none"}};
  return s;
}

inline json campaign_config_json(const CampaignConfig &cfg) {
  json fams = json::array();
  for (auto f : cfg.families) fams.push_back(std::string(to_string(f)));
  json j{{"families", fams}, {"orders", cfg.orders}, {"count", cfg.count},
         {"p", cfg.p},       {"seed", cfg.seed}};
  j["t12_order"] = cfg.t12_order ? json(*cfg.t12_order) : json(nullptr);
  j["max_level"] = cfg.max_level ? json(*cfg.max_level) : json(nullptr);
  return j;
}

/// Fans tasks out over `cfg.jobs` workers; results are merged by task id so
/// the report does not depend on completion order or worker count.
inline CampaignResult run_campaign(const CampaignConfig &cfg) {
  const auto tasks = plan_campaign(cfg);
  CampaignResult res;
  res.outcomes.resize(tasks.size(), TaskOutcome{{}, std::nullopt, std::nullopt, {}, {}});
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        res.outcomes[i] = run_task(tasks[i], cfg);
      } catch (...) {
        std::lock_guard lk(failure_mu);
        if (!failure) failure = std::current_exception();
        next = tasks.size();
      }
    }
  };
  const std::size_t width = std::min(cfg.jobs, std::max<std::size_t>(tasks.size(), 1));
  if (width <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < width; ++w) pool.emplace_back(worker);
    for (auto &t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<json> records;
  for (const auto &o : res.outcomes) {
    records.push_back(o.record);
    if (o.result) res.violations += o.result->violations.size();
  }
  res.report = {{"schema_version", kReportSchema},
                {"command", "fuzz"},
                {"config", campaign_config_json(cfg)},
                {"records", records},
                {"summary", summarize(records)}};
  return res;
}

// ---------------------------------------------------------------------------
// CSV summary

inline std::string csv_summary(const json &report) {
  std::ostringstream out;
  out << "instance_id,family,n,p,seed,m_S,length,tightest_applicable_bound,violation\n";
  for (const auto &r : report.at("records")) {
    const auto &inst = r.value("instance", json::object());
    auto field = [](const json &j) -> std::string {
      if (j.is_null()) return "";
      if (j.is_string()) return j.get<std::string>();
      return j.dump();
    };
    out << r.at("id").get<std::size_t>() << ',' << field(inst.value("family", json(nullptr))) << ','
        << field(inst.value("n", json(nullptr))) << ',' << field(inst.value("p", json(nullptr)))
        << ',' << field(inst.value("seed", json(nullptr))) << ',';
    if (r.at("status") == "skipped") {
      out << ",,,skipped\n";
      continue;
    }
    out << r.at("m_S").get<int>() << ',' << field(r.at("length").at("length")) << ','
        << field(r.at("tightest_applicable_bound")) << ','
        << (r.at("violations").empty() ? "0" : "1") << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Commands. Each returns the canonical report body and an exit code:
// 0 success / no violation, 1 violation or mismatch found.

struct CommandResult {
  json body;
  int exit_code = 0;
  std::vector<std::string> warnings;
};

inline json instance_echo(const InstanceFile &f) {
  json echo = instance_to_json(f.set, f.provenance);
  echo.erase("schema");
  return echo;
}

inline CommandResult cmd_length(const std::vector<InstanceFile> &inputs,
                                std::optional<std::size_t> max_level = std::nullopt) {
  CommandResult out;
  json records = json::array();
  for (std::size_t i = 0; i < inputs.size(); ++i)
    records.push_back({{"id", i},
                       {"instance", instance_echo(inputs[i])},
                       {"length", to_json(compute_length(inputs[i].set, max_level))}});
  out.body = {{"schema_version", kReportSchema}, {"command", "length"}, {"records", records}};
  return out;
}

inline CommandResult cmd_analyze(const std::vector<InstanceFile> &inputs) {
  CommandResult out;
  json records = json::array();
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto &s = inputs[i].set;
    auto an = analyze_set(s);
    auto led = bound_ledger(s, an);
    for (std::size_t g = 0; g < an.generators.size(); ++g)
      if (!an.generators[g].spectrum)
        out.warnings.push_back("instance " + std::to_string(i) + " generator " +
                               std::to_string(g) + ": " + an.generators[g].note +
                               "; Jordan-dependent ledger rows are undecidable");
    records.push_back({{"id", i},
                       {"instance", instance_echo(inputs[i])},
                       {"m_S", an.m},
                       {"generators", generators_json(an)},
                       {"ledger", to_json(led)},
                       {"certificates", certificates_json(s, an)}});
  }
  out.body = {{"schema_version", kReportSchema}, {"command", "analyze"}, {"records", records}};
  return out;
}

inline CommandResult cmd_verify(const std::vector<InstanceFile> &inputs,
                                std::optional<std::size_t> max_level = std::nullopt) {
  CommandResult out;
  std::vector<json> records;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    auto r = evaluate_instance(inputs[i].set, max_level);
    if (!r.length.is_generating)
      out.warnings.push_back("instance " + std::to_string(i) +
                             " does not generate M_n; bounds are not checked");
    records.push_back(record_json(i, instance_echo(inputs[i]), inputs[i].set, r));
    if (!r.violations.empty()) out.exit_code = 1;
  }
  out.body = {{"schema_version", kReportSchema},
              {"command", "verify"},
              {"records", records},
              {"summary", summarize(records)}};
  return out;
}

inline CommandResult cmd_fuzz(const CampaignConfig &cfg) {
  auto res = run_campaign(cfg);
  CommandResult out{std::move(res.report), res.violations ? 1 : 0, {}};
  const auto skipped = out.body.at("summary").at("skipped").get<std::size_t>();
  if (skipped) out.warnings.push_back(std::to_string(skipped) + " instances skipped");
  const auto &conj = out.body.at("summary").at("exceeds_2n_minus_2");
  if (conj.at("count").get<std::size_t>())
    out.warnings.push_back("LENGTH ABOVE 2n-2 OBSERVED on " + conj.at("count").dump() +
                           " instances");
  return out;
}

/// Re-derives violations from the lengths and ledgers stored in a report.
inline CommandResult cmd_check_report(const json &report) {
  CommandResult out;
  json records = json::array();
  std::size_t total = 0;
  for (const auto &r : report.at("records")) {
    if (!r.contains("length") || !r.contains("ledger")) continue;
    auto v = find_violations(length_report_from_json(r.at("length")),
                             ledger_from_json(r.at("ledger")));
    json vs = json::array();
    for (const auto &x : v) vs.push_back(to_json(x));
    total += v.size();
    records.push_back({{"id", r.at("id")}, {"violations", vs}});
  }
  out.body = {{"schema_version", kReportSchema},
              {"command", "check-report"},
              {"records", records},
              {"violations", total}};
  out.exit_code = total ? 1 : 0;
  return out;
}

inline constexpr std::size_t kOracleMaxOrder = 3;
inline constexpr std::size_t kOracleMaxGenerators = 3;

inline std::size_t oracle_max_len(std::size_t n) { return n * n - 1; }

/// compute_length against brute_force_length, record for record.
inline CommandResult cmd_oracle_check(const std::vector<InstanceFile> &inputs) {
  CommandResult out;
  json records = json::array();
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto &s = inputs[i].set;
    if (s.order() > kOracleMaxOrder || s.size() > kOracleMaxGenerators)
      throw Error(ErrorCode::InvalidArgument,
                  "instance " + std::to_string(i) + ": oracle check needs n <= 3 and |S| <= 3");
  }
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto &s = inputs[i].set;
    auto fast = compute_length(s);
    auto slow = brute_force_length(s, oracle_max_len(s.order()));
    const bool same = fast == slow;
    mismatches += same ? 0 : 1;
    records.push_back({{"id", i},
                       {"engine", to_json(fast)},
                       {"oracle", to_json(slow)},
                       {"identical", same}});
  }
  out.body = {{"schema_version", kReportSchema},
              {"command", "oracle-check"},
              {"records", records},
              {"mismatches", mismatches}};
  out.exit_code = mismatches ? 1 : 0;
  return out;
}

/// Seeded random inputs for oracle-check when no file is given; alternates
/// between two and three generators.
inline std::vector<InstanceFile> random_oracle_inputs(const std::vector<int> &orders,
                                                      std::size_t count, std::uint64_t p,
                                                      std::uint64_t seed) {
  std::vector<InstanceFile> out;
  const PrimeField f(p);
  std::size_t id = 0;
  for (int n : orders)
    for (std::size_t i = 0; i < count; ++i, ++id) {
      const std::size_t k = 2 + i % 2;
      const auto s = derive_seed(seed, id);
      out.push_back({random_generating_set(static_cast<std::size_t>(n), f, k, s),
                     {{"family", "RANDOM"}, {"seed", s}}});
    }
  return out;
}

} // namespace matlen
