// pcb: bounds on probabilities of causation from experimental and observational data.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "pcb/dataset_io.hpp"
#include "pcb/engine.hpp"
#include "pcb/oracle.hpp"
#include "pcb/query.hpp"
#include "pcb/simgen.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kFailed = 2;

constexpr double kReferenceGap = 0.228;
constexpr double kGapTolerance = 0.03;

fs::path executable_dir(const char* argv0) {
  std::error_code ec;
  fs::path self = fs::read_symlink("/proc/self/exe", ec);
  if (ec) self = fs::absolute(argv0, ec);
  return self.parent_path();
}

// PCB_DATA_DIR, then next to the installed binary, then the source tree.
fs::path fixture_dir(const fs::path& exeDir) {
  if (const char* env = std::getenv("PCB_DATA_DIR"); env && *env) return env;
  for (const fs::path& candidate : {exeDir / "../share/pcbounds/data", exeDir / "data"}) {
    if (fs::exists(candidate / "treatment.json")) return candidate;
  }
  return PCB_SOURCE_DATA_DIR;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw pcb::Error(pcb::ErrorCode::IoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string fixed(double v, int precision) { return fmt::format("{:.{}f}", v, precision); }

void print_violations(const pcb::ValidationReport& report, std::ostream& out) {
  for (const auto& v : report.violations) {
    if (v.treatment >= 0 && v.outcome >= 0) {
      out << fmt::format("  {:<8} x{} y{}  magnitude {:.3g}\n", pcb::to_string(v.kind), v.treatment + 1,
                         v.outcome + 1, v.magnitude);
    } else if (v.treatment >= 0) {
      out << fmt::format("  {:<8} x{}     magnitude {:.3g}\n", pcb::to_string(v.kind), v.treatment + 1,
                         v.magnitude);
    } else {
      out << fmt::format("  {:<8}        magnitude {:.3g}\n", pcb::to_string(v.kind), v.magnitude);
    }
  }
}

struct BoundArgs {
  std::string data;
  std::string query;
  bool trace = false;
  bool oracle = false;
  bool strict = false;
};

int cmd_bound(const BoundArgs& args) {
  const pcb::Dataset dataset = pcb::load_dataset(args.data);
  if (args.strict && !dataset.validation().ok()) {
    std::cerr << "dataset fails validation:\n";
    print_violations(dataset.validation(), std::cerr);
    return kFailed;
  }
  const pcb::Query query = pcb::parse_query(args.query, dataset.space());
  pcb::EngineOptions options;
  options.strict = args.strict;
  const pcb::BoundResult result = pcb::bound(dataset, query, options);

  std::cout << pcb::format_query(query) << " = " << pcb::to_string(result.interval) << "\n";
  std::cout << fmt::format("subqueries evaluated: {} (2^(k+2) = {})\n", result.statsEvaluated,
                           result.recursion_budget());
  if (result.evidenceProbability) {
    std::cout << fmt::format("evidence probability: {}\n", fixed(*result.evidenceProbability, 6));
  }
  if (args.oracle) {
    const pcb::Interval tight = pcb::tight_bounds(dataset, result.query);
    const bool inside = result.interval.contains(tight, pcb::kIntervalEpsilon);
    std::cout << "oracle " << pcb::to_string(tight) << (inside ? " contained" : " NOT contained") << "\n";
  }
  if (args.trace) std::cout << pcb::trace_to_json(*result.trace) << "\n";
  return kOk;
}

int cmd_oracle(const std::string& data, const std::string& text, const std::string& lpPath) {
  const pcb::Dataset dataset = pcb::load_dataset(data);
  const pcb::Query query = pcb::parse_query(text, dataset.space());
  const pcb::CanonicalQuery canonical = pcb::canonicalize(query);
  const pcb::ResponseTypeOracle oracle(dataset);
  if (!lpPath.empty()) {
    std::ofstream out(lpPath);
    if (!out) throw pcb::Error(pcb::ErrorCode::IoError, "cannot open " + lpPath + " for writing");
    out << pcb::write_lp(oracle.program(canonical));
  }
  if (!oracle.feasible()) {
    std::cerr << "dataset admits no joint distribution of response types (inconsistent data)\n";
    return kError;
  }
  std::cout << pcb::format_query(query) << " = " << pcb::to_string(oracle.bounds(canonical))
            << (oracle.exact() ? " (exact)" : " (floating point)") << "\n";
  return kOk;
}

int cmd_validate(const std::string& data) {
  const pcb::Dataset dataset = pcb::load_dataset(data);
  const auto& report = dataset.validation();
  if (report.ok()) {
    std::cout << fmt::format("ok: {} treatments x {} outcomes satisfy P(x,y) <= P(y_x) <= P(x,y) + 1 - P(x)\n",
                             dataset.treatments(), dataset.outcomes());
    return kOk;
  }
  std::cout << fmt::format("{} violation(s):\n", report.violations.size());
  print_violations(report, std::cout);
  return kFailed;
}

int simulate(std::size_t samples, std::uint64_t seed, const std::string& out, unsigned threads) {
  const auto start = std::chrono::steady_clock::now();
  pcb::SimulationOptions options;
  options.threads = threads;
  const pcb::SimulationSummary summary = pcb::run_simulation(samples, seed, options);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!out.empty()) pcb::export_csv(summary.records, fs::path(out));
  std::cout << fmt::format("samples:          {}\n", summary.numSamples);
  std::cout << fmt::format("seed:             {}\n", seed);
  std::cout << fmt::format("average gap:      {}\n", fixed(summary.averageGap, 6));
  std::cout << fmt::format("containment rate: {}\n", fixed(summary.containmentRate, 6));
  std::cout << fmt::format("elapsed:          {:.2f} s\n", seconds);
  if (!out.empty()) std::cout << fmt::format("csv:              {}\n", out);
  return kOk;
}

int reproduce_dataset(const fs::path& path) {
  const std::string text = read_file(path);
  const pcb::Dataset dataset = pcb::parse_dataset_json(text);
  const auto doc = nlohmann::json::parse(text);
  if (!doc.contains("expected")) throw pcb::Error(pcb::ErrorCode::InvalidData, path.string() + " lists no expected values");

  std::cout << fmt::format("{:<32} {:<24} {:<16} {}\n", "query", "computed", "expected", "status");
  int mismatches = 0;
  for (const auto& entry : doc["expected"]) {
    const std::string q = entry.at("query").get<std::string>();
    const pcb::Interval iv = pcb::bound(dataset, pcb::parse_query(q, dataset.space())).interval;
    const std::string lo3 = fixed(iv.lo(), 3);
    const std::string hi3 = fixed(iv.hi(), 3);
    const std::string wantLo = fixed(entry.at("lo").get<double>(), 3);
    const std::string wantHi = fixed(entry.at("hi").get<double>(), 3);
    const bool match = lo3 == wantLo && hi3 == wantHi;
    mismatches += match ? 0 : 1;
    std::cout << fmt::format("{:<32} {:<24} {:<16} {}\n", q, pcb::to_string(iv), "[" + wantLo + ", " + wantHi + "]",
                             match ? "match" : fmt::format("MISMATCH (got [{}, {}])", lo3, hi3));
  }
  if (mismatches) {
    std::cout << fmt::format("{} of {} values differ at 3 decimals\n", mismatches, doc["expected"].size());
    return kFailed;
  }
  std::cout << fmt::format("all {} values match at 3 decimals\n", doc["expected"].size());
  return kOk;
}

int cmd_reproduce(const std::string& example, const fs::path& exeDir, const std::string& out) {
  if (example == "simulation") {
    pcb::SimulationOptions options;
    const pcb::SimulationSummary summary = pcb::run_simulation(1000, pcb::kDefaultSeed, options);
    if (!out.empty()) pcb::export_csv(summary.records, fs::path(out));
    const bool ok = std::abs(summary.averageGap - kReferenceGap) <= kGapTolerance;
    std::cout << fmt::format("samples:          {}\n", summary.numSamples);
    std::cout << fmt::format("average gap:      {} (expected {} +/- {})\n", fixed(summary.averageGap, 6),
                             fixed(kReferenceGap, 3), fixed(kGapTolerance, 2));
    std::cout << fmt::format("containment rate: {}\n", fixed(summary.containmentRate, 6));
    std::cout << (ok ? "average gap within tolerance\n" : "MISMATCH: average gap outside tolerance\n");
    return ok ? kOk : kFailed;
  }
  return reproduce_dataset(fixture_dir(exeDir) / (example + ".json"));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounds on probabilities of causation for multivalued treatments and outcomes"};
  app.require_subcommand(1);

  BoundArgs boundArgs;
  auto* bound = app.add_subcommand("bound", "Bound a counterfactual query");
  bound->add_option("--data", boundArgs.data, "Dataset JSON file")->required()->check(CLI::ExistingFile);
  bound->add_option("--query", boundArgs.query, "Query, e.g. \"P(y3_x1, y1_x2 | x3)\"")->required();
  bound->add_flag("--trace", boundArgs.trace, "Print the derivation tree as JSON");
  bound->add_flag("--oracle", boundArgs.oracle, "Also solve the response-type LP and check containment");
  bound->add_flag("--strict", boundArgs.strict, "Refuse datasets that fail validation (exit 2)");

  std::string oracleData, oracleQuery, lpPath;
  auto* oracle = app.add_subcommand("oracle", "Tight bounds from the response-type linear program");
  oracle->add_option("--data", oracleData, "Dataset JSON file")->required()->check(CLI::ExistingFile);
  oracle->add_option("--query", oracleQuery, "Query")->required();
  oracle->add_option("--lp", lpPath, "Write the LP in plain text to this file");

  std::size_t samples = 1000;
  std::uint64_t seed = pcb::kDefaultSeed;
  std::string csvPath;
  unsigned threads = 1;
  auto* sim = app.add_subcommand("simulate", "Run the random-dataset simulation study");
  sim->add_option("--samples", samples, "Number of accepted samples")->check(CLI::PositiveNumber);
  sim->add_option("--seed", seed, "Random seed");
  sim->add_option("--out", csvPath, "CSV output file");
  sim->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  std::string validateData;
  auto* val = app.add_subcommand("validate", "Check experimental/observational consistency");
  val->add_option("--data", validateData, "Dataset JSON file")->required()->check(CLI::ExistingFile);

  std::string example;
  std::string reproduceOut;
  auto* rep = app.add_subcommand("reproduce", "Recompute a bundled example and compare at 3 decimals");
  rep->add_option("--example", example, "Example name")
      ->required()
      ->check(CLI::IsMember({"treatment", "institute", "vaccine", "simulation"}));
  rep->add_option("--out", reproduceOut, "CSV output file (simulation only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  try {
    if (*bound) return cmd_bound(boundArgs);
    if (*oracle) return cmd_oracle(oracleData, oracleQuery, lpPath);
    if (*sim) return simulate(samples, seed, csvPath, threads);
    if (*val) return cmd_validate(validateData);
    if (*rep) return cmd_reproduce(example, executable_dir(argv[0]), reproduceOut);
  } catch (const pcb::Error& e) {
    std::cerr << "error [" << pcb::to_string(e.code()) << "]: " << e.what() << "\n";
    return e.code() == pcb::ErrorCode::InconsistentDataset ? kFailed : kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
