// Copyright 2026 The parqc Authors
// Licensed under the Apache License, Version 2.0

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "parqc/bench.hpp"
#include "parqc/seq_runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string bench = "all";
  std::vector<int> cores = {1};
  std::string shrink = "seq";
  std::string size = "stride";
  int reps = 5;
  int pairs = 20;
  std::optional<int> tests;
  std::string seed_text;
  bool plant_bug = false;
  std::string csv = "-";
  bool chatty = false;
};

std::int64_t elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - start)
      .count();
}

std::string hex16(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << v;
  return out.str();
}

/// Walls per (benchmark, cores, phase), in insertion order for the summary.
class MedianBook {
 public:
  void add(const std::string& bench, int cores, const std::string& phase,
           double wall_ms) {
    const Key key{bench, cores, phase};
    if (walls_.find(key) == walls_.end()) order_.push_back(key);
    walls_[key].push_back(wall_ms);
  }

  void print(std::ostream& out) const {
    for (const Key& key : order_) {
      out << "median " << std::get<0>(key) << " cores=" << std::get<1>(key)
          << " phase=" << std::get<2>(key) << ": "
          << parqc::bench::median(walls_.at(key)) << " ms\n";
    }
  }

 private:
  using Key = std::tuple<std::string, int, std::string>;
  std::map<Key, std::vector<double>> walls_;
  std::vector<Key> order_;
};

int run(const Options& opt) {
  using namespace parqc;
  using namespace parqc::bench;

  ShrinkStrategy shrink_strategy = ShrinkStrategy::Sequential;
  if (opt.shrink == "det") shrink_strategy = ShrinkStrategy::Deterministic;
  if (opt.shrink == "greedy") shrink_strategy = ShrinkStrategy::Greedy;
  const SizeStrategy size_strategy =
      opt.size == "offset" ? SizeStrategy::Offset : SizeStrategy::Stride;

  std::vector<const BenchCase*> selected;
  if (opt.bench == "all") {
    for (const BenchCase* c : all_cases()) {
      if (opt.plant_bug && !c->supports_bug()) {
        std::cerr << "note: skipping " << c->name()
                  << " (no planted bug)\n";
        continue;
      }
      selected.push_back(c);
    }
  } else {
    const BenchCase* c = find_case(opt.bench);
    if (c == nullptr) {
      std::cerr << "unknown benchmark: " << opt.bench << " (available:";
      for (const BenchCase* known : all_cases())
        std::cerr << ' ' << known->name();
      std::cerr << " all)\n";
      return kExitUsage;
    }
    if (opt.plant_bug && !c->supports_bug()) {
      std::cerr << opt.bench << " has no planted bug\n";
      return kExitUsage;
    }
    selected.push_back(c);
  }
  for (const int c : opt.cores) {
    if (c < 0) {
      std::cerr << "cores values must be >= 0 (0 runs the single-threaded "
                   "driver)\n";
      return kExitUsage;
    }
  }

  Seed root;
  std::string seed_text = opt.seed_text;
  if (seed_text.empty()) {
    if (const char* env = std::getenv("PARQC_SEED")) seed_text = env;
  }
  if (!seed_text.empty()) {
    const std::optional<Seed> parsed = parse_seed(seed_text);
    if (!parsed) {
      std::cerr << "malformed seed '" << seed_text
                << "' (expected <state>:<gamma> with odd gamma)\n";
      return kExitUsage;
    }
    root = *parsed;
  } else {
    root = entropy_seed();
  }

  std::ofstream csv_file;
  std::ostream* csv = &std::cout;
  if (opt.csv != "-") {
    csv_file.open(opt.csv, std::ios::trunc);
    if (!csv_file) {
      std::cerr << "cannot open " << opt.csv << " for writing\n";
      return kExitRuntime;
    }
    csv = &csv_file;
  }
  std::ostream& summary = (csv == &std::cout) ? std::cerr : std::cout;
  summary << "root seed: " << format_seed(root) << "\n";

  // Repetition seeds are derived by registry position, so a run of one
  // benchmark reproduces the seeds it gets inside a run of all of them.
  const int registry_size = static_cast<int>(all_cases().size());
  const std::vector<Seed> rep_seeds =
      derive_tester_seeds(root, registry_size * opt.reps);
  const auto registry_index = [](const BenchCase* c) {
    const auto& cases = all_cases();
    for (std::size_t i = 0; i < cases.size(); ++i)
      if (cases[i] == c) return static_cast<int>(i);
    return 0;
  };

  *csv << csv_header() << "\n";
  std::int64_t rows = 0;
  MedianBook medians;

  for (const BenchCase* bench : selected) {
    for (int rep = 0; rep < opt.reps; ++rep) {
      const Seed rep_root =
          rep_seeds[static_cast<std::size_t>(registry_index(bench) * opt.reps +
                                             rep)];
      PhaseRow base;
      base.benchmark = std::string(bench->name());
      base.size_strategy = opt.size;
      base.shrink_strategy = opt.shrink;
      base.repetition = rep;

      RunSettings settings;
      settings.size_strategy = size_strategy;
      settings.shrink_strategy = shrink_strategy;
      settings.root = rep_root;
      settings.plant_bug = opt.plant_bug;
      settings.chatty = opt.chatty;
      settings.max_success = opt.tests;
      settings.sink = [&summary](const std::string& line) {
        summary << line << "\n";
      };

      if (!opt.plant_bug) {
        for (const int c : opt.cores) {
          settings.cores = c;
          const auto start = std::chrono::steady_clock::now();
          const RunOutcome out = bench->run_tests(settings);
          const std::int64_t wall = elapsed_ms(start);
          if (out.verdict == Verdict::InternalError) {
            std::cerr << bench->name() << ": internal error: " << out.error
                      << "\n";
            return kExitRuntime;
          }
          if (out.verdict != Verdict::Success) {
            std::cerr << "warning: " << bench->name() << " cores=" << c
                      << " rep=" << rep << " ended in "
                      << verdict_name(out.verdict) << "\n";
          }
          PhaseRow row = base;
          row.cores = c;
          row.phase = "test";
          row.wall_ms = wall;
          row.tests_run = out.tests_run;
          *csv << csv_row(row) << "\n";
          ++rows;
          medians.add(row.benchmark, c, row.phase,
                      static_cast<double>(wall));
        }
        continue;
      }

      for (const int c : opt.cores) {
        settings.cores = c;
        const auto start = std::chrono::steady_clock::now();
        const RunOutcome out = bench->run_tests(settings);
        const std::int64_t wall = elapsed_ms(start);
        if (out.verdict == Verdict::InternalError) {
          std::cerr << bench->name() << ": internal error: " << out.error
                    << "\n";
          return kExitRuntime;
        }
        if (out.verdict != Verdict::Failure) {
          std::cerr << "warning: " << bench->name() << " cores=" << c
                    << " rep=" << rep << " did not reach the planted bug ("
                    << verdict_name(out.verdict) << ")\n";
        }
        PhaseRow row = base;
        row.cores = c;
        row.phase = "find_bug";
        row.wall_ms = wall;
        row.tests_run = out.tests_run;
        row.result_size = out.result_size;
        *csv << csv_row(row) << "\n";
        ++rows;
        medians.add(row.benchmark, c, row.phase, static_cast<double>(wall));
      }

      // The shrink phase replays the same recorded failures for every
      // cores value, so the workload is identical across the comparison.
      const std::vector<ReplaySpec> pairs =
          bench->collect_failing_seeds(rep_root, opt.pairs, 100);
      for (const int c : opt.cores) {
        settings.cores = c;
        PhaseRow row = base;
        row.cores = c;
        row.phase = "shrink";
        row.tests_run = static_cast<std::int64_t>(pairs.size());
        std::string hash_input;
        const auto start = std::chrono::steady_clock::now();
        for (const ReplaySpec& spec : pairs) {
          const RunOutcome out = bench->shrink_one(spec, settings);
          row.shrink_steps += out.shrink_steps;
          row.candidates_evaluated += out.candidates_evaluated;
          row.abandoned += out.abandoned;
          row.result_size += out.result_size;
          hash_input += out.counterexample;
          hash_input += '\n';
        }
        row.wall_ms = elapsed_ms(start);
        if (row.candidates_evaluated > 0) {
          row.efficiency = static_cast<double>(row.shrink_steps) /
                           static_cast<double>(row.candidates_evaluated);
        }
        *csv << csv_row(row) << "\n";
        ++rows;
        medians.add(row.benchmark, c, row.phase,
                    static_cast<double>(row.wall_ms));
        summary << "cex_hash " << bench->name() << " cores=" << c
                << " rep=" << rep << ": " << hex16(fnv1a64(hash_input))
                << "\n";
      }
    }
  }

  csv->flush();
  medians.print(summary);
  if (csv == &csv_file) {
    summary << rows << " rows written to " << opt.csv << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{
      "Benchmark harness for the parqc property-testing runtime.\n"
      "Runs the built-in workloads across core counts and emits one CSV row\n"
      "per phase. With --plant-bug each repetition times finding the bug\n"
      "and shrinking a fixed set of recorded failures."};
  app.add_option("--bench", opt.bench,
                 "Benchmark name, or 'all' (constant, slow_pure, expr_bug, "
                 "effectful_tmp)");
  app.add_option("--cores", opt.cores,
                 "Core counts to sweep; 0 runs the single-threaded driver")
      ->delimiter(',');
  app.add_option("--shrink", opt.shrink, "Shrink strategy")
      ->check(CLI::IsMember({"seq", "det", "greedy"}));
  app.add_option("--size", opt.size, "Size assignment strategy")
      ->check(CLI::IsMember({"stride", "offset"}));
  app.add_option("--reps", opt.reps, "Repetitions per configuration")
      ->check(CLI::PositiveNumber);
  app.add_option("--pairs", opt.pairs,
                 "Recorded failures shrunk per repetition (with --plant-bug)")
      ->check(CLI::PositiveNumber);
  int tests_flag = 0;
  auto* tests_opt =
      app.add_option("--tests", tests_flag,
                     "Override the per-case number of successful tests")
          ->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed_text,
                 "Root seed as <state>:<gamma>; falls back to the PARQC_SEED "
                 "environment variable, then to OS entropy");
  app.add_flag("--plant-bug", opt.plant_bug,
               "Enable each workload's planted defect and time the "
               "find/shrink phases");
  app.add_option("--csv", opt.csv, "CSV destination path, or '-' for stdout");
  app.add_flag("--chatty", opt.chatty,
               "Stream progress lines (to stderr when the CSV goes to "
               "stdout)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (tests_opt->count() > 0) opt.tests = tests_flag;
  if (opt.cores.empty()) {
    std::cerr << "at least one --cores value is required\n";
    return kExitUsage;
  }

  try {
    return run(opt);
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
