// matlen: lengths of generating sets of M_n(F_p), bound ledgers and fuzz
// campaigns.
//
// Exit codes: 0 success / no violation, 1 violation or oracle mismatch,
// 2 usage or parse error, 3 unsupported instance (modulus not prime or
// above 2^20).

#include "matlen/matlen.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace matlen;

struct RunConfig {
  std::string command;
  std::string input;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 7;
  std::size_t count = 100;
  std::string families = "RANDOM";
  std::string orders = "2-5";
  std::uint64_t p = 101;
  std::optional<std::size_t> jobs;
  std::optional<std::size_t> max_level;
  std::optional<int> t12_order;
  std::size_t variant = 0;
};

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) parts.push_back(item);
  return parts;
}

// "4", "2,3,5" or "2-6"
std::vector<int> parse_orders(const std::string &s) {
  std::vector<int> out;
  try {
    for (const auto &part : split(s, ',')) {
      auto dash = part.find('-');
      if (dash == std::string::npos) {
        out.push_back(std::stoi(part));
        continue;
      }
      const int lo = std::stoi(part.substr(0, dash)), hi = std::stoi(part.substr(dash + 1));
      for (int n = lo; n <= hi; ++n) out.push_back(n);
    }
  } catch (const std::exception &) {
    throw Error(ErrorCode::InvalidArgument, "cannot parse --n '" + s + "'");
  }
  for (int n : out)
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "orders must be >= 1");
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "--n is empty");
  return out;
}

std::vector<Family> parse_families(const std::string &s) {
  if (s == "ALL")
    return {Family::RANDOM, Family::T10, Family::T11, Family::T12, Family::THM39};
  std::vector<Family> out;
  for (const auto &part : split(s, ',')) {
    auto f = parse_family(part);
    if (!f) throw Error(ErrorCode::InvalidArgument, "unknown family '" + part + "'");
    out.push_back(*f);
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "--family is empty");
  return out;
}

std::size_t resolve_jobs(const RunConfig &cfg) {
  if (cfg.jobs) return *cfg.jobs;
  if (const char *env = std::getenv("MATLEN_JOBS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception &) {
    }
  }
  return 1;
}

std::vector<InstanceFile> require_input(const RunConfig &cfg) {
  if (cfg.input.empty()) throw Error(ErrorCode::InvalidArgument, "--input is required");
  return load_instances(cfg.input);
}

CampaignConfig campaign_of(const RunConfig &cfg) {
  CampaignConfig c;
  c.families = parse_families(cfg.families);
  c.orders = parse_orders(cfg.orders);
  c.count = cfg.count;
  c.p = cfg.p;
  c.seed = cfg.seed;
  c.jobs = resolve_jobs(cfg);
  c.t12_order = cfg.t12_order;
  c.max_level = cfg.max_level;
  return c;
}

CommandResult dispatch(const RunConfig &cfg) {
  (void)PrimeField(cfg.p);
  if (cfg.command == "length") return cmd_length(require_input(cfg), cfg.max_level);
  if (cfg.command == "analyze") return cmd_analyze(require_input(cfg));
  if (cfg.command == "verify") return cmd_verify(require_input(cfg), cfg.max_level);
  if (cfg.command == "fuzz") {
    if (!cfg.input.empty())
      throw Error(ErrorCode::InvalidArgument, "fuzz generates its own instances; drop --input");
    return cmd_fuzz(campaign_of(cfg));
  }
  if (cfg.command == "oracle-check") {
    if (!cfg.input.empty()) return cmd_oracle_check(require_input(cfg));
    if (cfg.count < 1) throw Error(ErrorCode::InvalidArgument, "count must be >= 1");
    auto orders = parse_orders(cfg.orders);
    for (int n : orders)
      if (n > static_cast<int>(kOracleMaxOrder))
        throw Error(ErrorCode::InvalidArgument, "oracle check needs n <= 3");
    return cmd_oracle_check(random_oracle_inputs(orders, cfg.count, cfg.p, cfg.seed));
  }
  if (cfg.command == "check-report") {
    if (cfg.input.empty()) throw Error(ErrorCode::InvalidArgument, "--input is required");
    return cmd_check_report(parse_json_text(read_file(cfg.input), cfg.input));
  }
  if (cfg.command == "generate") {
    auto fams = parse_families(cfg.families);
    auto orders = parse_orders(cfg.orders);
    if (fams.size() != 1 || orders.size() != 1)
      throw Error(ErrorCode::InvalidArgument, "generate takes exactly one --family and one --n");
    auto spec = plan_instance(fams[0], orders[0], cfg.p, cfg.seed, cfg.variant, cfg.t12_order);
    auto built = build_with_escalation(spec);
    return {instance_to_json(built.set, spec_echo(built.spec, cfg.variant, built.companion_draws)),
            0,
            {}};
  }
  throw Error(ErrorCode::InvalidArgument, "unknown command " + cfg.command);
}

int exit_code_for(ErrorCode code) {
  switch (code) {
  case ErrorCode::NotPrime:
  case ErrorCode::ModulusTooLarge: return 3;
  default: return 2;
  }
}

std::string iso_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void emit(const RunConfig &cfg, const CommandResult &res, double elapsed_ms) {
  std::string text;
  if (cfg.format == "csv" && res.body.contains("records") && res.body.contains("summary"))
    text = csv_summary(res.body);
  else
    text = canonical_dump(res.body);
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream(cfg.out, std::ios::binary) << text;
  // timestamps live only in the sidecar so the report body stays canonical
  json meta{{"generated_at", iso_now()}, {"elapsed_ms", elapsed_ms}, {"command", cfg.command}};
  std::ofstream(cfg.out + ".meta.json", std::ios::binary) << canonical_dump(meta);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Lengths of generating systems of full matrix algebras over prime fields"};
  app.require_subcommand(1);
  RunConfig cfg;

  struct Sub {
    const char *name;
    const char *help;
  };
  const Sub subs[] = {
      {"length", "dimension trace and length of an instance file"},
      {"analyze", "minimal polynomials, Jordan profiles, bound ledger and certificates"},
      {"verify", "check every applicable bound against the computed length"},
      {"fuzz", "seeded campaign over instance families"},
      {"oracle-check", "frontier engine against all-words enumeration (n <= 3, |S| <= 3)"},
      {"check-report", "re-derive violations from a saved report"},
      {"generate", "emit one seeded family instance as an instance file"},
  };
  for (const auto &s : subs) {
    auto *sc = app.add_subcommand(s.name, s.help);
    sc->add_option("--input", cfg.input, "instance file (object or array of objects)");
    sc->add_option("--out", cfg.out, "write the report here instead of stdout");
    sc->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sc->add_option("--seed", cfg.seed, "campaign seed");
    sc->add_option("--count", cfg.count, "instances per (order, family)");
    sc->add_option("--family", cfg.families, "RANDOM, T10, T11, T12, THM39, comma list or ALL");
    sc->add_option("--n", cfg.orders, "orders, e.g. 4 or 2-6 or 4,6");
    sc->add_option("--p", cfg.p, "prime modulus");
    sc->add_option("--jobs", cfg.jobs, "worker threads (default: $MATLEN_JOBS or 1)");
    sc->add_option("--max-level", cfg.max_level, "cap on word length levels");
    sc->add_option("--t", cfg.t12_order, "pin the T12 degree t");
    sc->add_option("--variant", cfg.variant, "variant index for generate");
    sc->callback([&cfg, sc] { cfg.command = sc->get_name(); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (cfg.jobs && *cfg.jobs < 1) throw Error(ErrorCode::InvalidArgument, "--jobs must be >= 1");
    const auto start = std::chrono::steady_clock::now();
    auto res = dispatch(cfg);
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    for (const auto &w : res.warnings) std::cerr << "warning: " << w << '\n';
    emit(cfg, res, ms);
    return res.exit_code;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
