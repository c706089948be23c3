// Copyright 2026 The parqc Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "parqc/config.hpp"
#include "parqc/expr.hpp"
#include "parqc/gen.hpp"
#include "parqc/progress.hpp"
#include "parqc/property.hpp"
#include "parqc/run_report.hpp"
#include "parqc/seed.hpp"

namespace parqc::bench {

/// Rewrites an expression to an equivalent one: folds constant arithmetic,
/// prunes additive and multiplicative identities, drops multiplication by
/// zero, and resolves if-zero on constant conditions. Never changes the
/// value under any environment and never grows the node count.
Expr simplify(const Expr& e);

/// The same rewrite with one planted defect: an if-zero whose condition
/// folded to a constant always takes the then branch, even when the
/// condition is nonzero.
Expr simplify_buggy(const Expr& e);

/// Environment the expression benchmark evaluates under.
std::span<const std::int64_t> bench_env();

/// Lowest-first median; the even case averages the two middle values.
/// Throws std::invalid_argument on an empty set.
double median(std::vector<double> values);

/// FNV-1a over the bytes of the string; used to fingerprint shrunk
/// counterexamples for cross-run comparison.
std::uint64_t fnv1a64(std::string_view text);

/// Bookkeeping for the effectful benchmark: every started action must end
/// in exactly one completion or one cleanup-handler run.
struct EffectfulStats {
  std::atomic<std::int64_t> started{0};
  std::atomic<std::int64_t> completed{0};
  std::atomic<std::int64_t> handlers{0};
};

/// Writes the list to a fresh file under `dir` chunk by chunk with a
/// cancellation poll between chunks, verifies the round trip, and removes
/// the file, all inside one graceful action whose cleanup handler removes
/// the partial file on abort. With the bug planted, lists of length >= 3
/// with an even head fail (after the file work).
Property<std::vector<std::int64_t>> effectful_property(
    const std::filesystem::path& dir, EffectfulStats* stats, bool plant_bug);

/// One row of the benchmark CSV.
struct PhaseRow {
  std::string benchmark;
  int cores = 0;  // 0 means the sequential runner
  std::string size_strategy;
  std::string shrink_strategy;
  int repetition = 0;
  std::string phase;  // test | find_bug | shrink
  std::int64_t wall_ms = 0;
  std::int64_t tests_run = 0;
  std::int64_t shrink_steps = 0;
  std::int64_t candidates_evaluated = 0;
  std::int64_t abandoned = 0;
  std::optional<double> efficiency;  // empty CSV field when absent
  std::int64_t result_size = 0;
};

std::string csv_header();
std::string csv_row(const PhaseRow& row);

/// Condensed result of one benchmark activity.
struct RunOutcome {
  Verdict verdict = Verdict::Success;
  std::int64_t tests_run = 0;
  std::int64_t total_discards = 0;
  std::int64_t shrink_steps = 0;
  std::int64_t candidates_evaluated = 0;
  std::int64_t abandoned = 0;
  std::optional<double> efficiency;
  std::int64_t result_size = 0;   // constructor count of the shrunk value
  std::string counterexample;     // shown shrunk value; empty when none
  std::string error;              // internal error message, if any
};

struct RunSettings {
  int cores = 1;  // 0 runs the single-threaded driver
  SizeStrategy size_strategy = SizeStrategy::Stride;
  ShrinkStrategy shrink_strategy = ShrinkStrategy::Sequential;
  Seed root;
  bool plant_bug = false;
  bool chatty = false;
  std::optional<int> max_success;  // overrides the case default
  OutputSink sink;                 // chatty output; stdout when empty
};

class BenchCase {
 public:
  virtual ~BenchCase() = default;

  virtual std::string_view name() const = 0;
  virtual bool supports_bug() const = 0;
  virtual int default_max_success() const = 0;

  /// One full testing run. With the bug planted the shrinker is disabled,
  /// so the outcome isolates the time to find a failure.
  virtual RunOutcome run_tests(const RunSettings& settings) const = 0;

  /// Scans the planted-bug generator stream for `count` distinct failing
  /// tests, cycling sizes 0..max_size-1. Deterministic in `root`. Throws
  /// std::runtime_error when the attempt budget runs out and
  /// std::logic_error when the case has no planted bug.
  virtual std::vector<ReplaySpec> collect_failing_seeds(Seed root, int count,
                                                        int max_size) const = 0;

  /// Regenerates one recorded failure and shrinks it with the configured
  /// strategy. Throws std::logic_error if the recorded test does not fail.
  virtual RunOutcome shrink_one(const ReplaySpec& spec,
                                const RunSettings& settings) const = 0;
};

/// The four benchmark cases: constant, slow_pure, expr_bug, effectful_tmp.
const std::vector<const BenchCase*>& all_cases();

/// Case by name, or null.
const BenchCase* find_case(std::string_view name);

}  // namespace parqc::bench
