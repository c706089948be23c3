// Copyright 2026 The parqc Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "parqc/config.hpp"
#include "parqc/gen.hpp"
#include "parqc/par_shrink.hpp"
#include "parqc/progress.hpp"
#include "parqc/property.hpp"
#include "parqc/run_report.hpp"
#include "parqc/seed.hpp"
#include "parqc/shrink.hpp"

namespace parqc {

/// Test size for the next trial: grows linearly with passes, bumps once
/// per ten consecutive discards, and never reaches max_size.
int compute_size(std::int64_t passed, std::int64_t discards_since_last_pass,
                 const Config& cfg);

/// Independent per-tester seed streams. Tester 0's stream is the same for
/// every tester count, so a one-tester run reproduces the sequential run.
std::vector<Seed> derive_tester_seeds(Seed root, int num_testers);

/// Optional observers for a run; absent members fall back to defaults
/// (stdout for output, a "(no printer)" placeholder for values).
template <typename T>
struct RunHooks {
  std::function<std::string(const T&)> show;
  OutputSink sink;
};

namespace detail {

template <typename T>
ShrinkReport<T> dispatch_shrink(const Property<T>& prop,
                                const Shrinker<T>& shrinker, const T& origin,
                                const Config& cfg, RunCounters* counters) {
  switch (cfg.shrink_strategy) {
    case ShrinkStrategy::Sequential:
      return shrink_sequential(prop, shrinker, origin, counters);
    case ShrinkStrategy::Deterministic:
      return shrink_deterministic(prop, shrinker, origin, cfg.num_testers,
                                  counters);
    case ShrinkStrategy::Greedy:
      return shrink_greedy(prop, shrinker, origin, cfg.num_testers, counters);
  }
  throw std::logic_error("unknown shrink strategy");
}

/// Runs `body(counters)` with the chatty progress reporter and final
/// summary wrapped around it. A throwing sink never disturbs the run.
template <typename T, typename Body>
RunReport<T> with_reporting(const Config& cfg, const RunHooks<T>& hooks,
                            Body&& body) {
  RunCounters counters;
  OutputSink sink = hooks.sink ? hooks.sink : stdout_sink();
  std::optional<ProgressReporter> reporter;
  if (cfg.chatty) {
    reporter.emplace(&counters, cfg.progress_period_ms, sink);
  }
  RunReport<T> report = body(&counters);
  if (reporter) reporter->stop();
  if (cfg.chatty) {
    try {
      for (const std::string& line : render_run_report(report, hooks.show)) {
        sink(line);
      }
    } catch (...) {
      // Reporting is best effort; the run's result stands regardless.
    }
  }
  return report;
}

template <typename T>
void fill_failure(RunReport<T>& report, const Property<T>& prop,
                  const Shrinker<T>& shrinker, Seed test_seed, int size,
                  T value, std::string reason, const Config& cfg,
                  RunCounters* counters) {
  report.verdict = Verdict::Failure;
  counters->phase.store(static_cast<int>(RunPhase::Shrinking),
                        std::memory_order_relaxed);
  FailureInfo<T> failure;
  failure.seed = test_seed;
  failure.size = size;
  failure.original = value;
  failure.reason = std::move(reason);
  failure.shrink = dispatch_shrink(prop, shrinker, value, cfg, counters);
  report.failure = std::move(failure);
}

/// Replay mode: exactly one trial at the recorded (seed, size).
template <typename T>
RunReport<T> run_replay(const Property<T>& prop, const Gen<T>& gen,
                        const Shrinker<T>& shrinker, const Config& cfg,
                        RunCounters* counters) {
  RunReport<T> report;
  report.per_tester_counts = {0};
  report.stolen_runs = {0};
  const ReplaySpec spec = *cfg.replay;
  try {
    T value = gen.run(spec.seed, spec.size);
    const EvalResult result = evaluate_property(prop, value);
    switch (result.outcome.kind) {
      case Outcome::Kind::Pass:
        report.verdict = Verdict::Success;
        report.tests_run = 1;
        report.per_tester_counts[0] = 1;
        report.sizes_used.insert(spec.size);
        counters->passed.fetch_add(1, std::memory_order_relaxed);
        break;
      case Outcome::Kind::Discard:
        report.verdict = Verdict::GaveUp;
        report.total_discards = 1;
        counters->discarded.fetch_add(1, std::memory_order_relaxed);
        break;
      case Outcome::Kind::Fail:
        report.tests_run = 1;
        report.per_tester_counts[0] = 1;
        report.sizes_used.insert(spec.size);
        fill_failure(report, prop, shrinker, spec.seed, spec.size,
                     std::move(value), result.outcome.reason, cfg, counters);
        break;
    }
  } catch (const std::exception& e) {
    report.verdict = Verdict::InternalError;
    report.internal_error = e.what();
  } catch (...) {
    report.verdict = Verdict::InternalError;
    report.internal_error = "unknown error";
  }
  return report;
}

template <typename T>
RunReport<T> run_sequential_loop(const Property<T>& prop, const Gen<T>& gen,
                                 const Shrinker<T>& shrinker,
                                 const Config& cfg, RunCounters* counters) {
  RunReport<T> report;
  report.per_tester_counts = {0};
  report.stolen_runs = {0};
  const Seed root = cfg.root_seed ? *cfg.root_seed : entropy_seed();
  Seed stream = derive_tester_seeds(root, 1)[0];
  const std::int64_t discard_bound =
      static_cast<std::int64_t>(cfg.max_discard_ratio) * cfg.max_success;
  std::int64_t passed = 0;
  std::int64_t discards_since = 0;
  try {
    while (passed < cfg.max_success) {
      if (report.total_discards >= discard_bound) {
        report.verdict = Verdict::GaveUp;
        break;
      }
      const int size =
          compute_size(passed, discards_since, cfg);
      const SplitPair pair = split(stream);
      stream = pair.left;
      const Seed test_seed = pair.right;
      T value = gen.run(test_seed, size);
      const EvalResult result = evaluate_property(prop, value);
      switch (result.outcome.kind) {
        case Outcome::Kind::Pass:
          ++passed;
          discards_since = 0;
          report.sizes_used.insert(size);
          counters->passed.fetch_add(1, std::memory_order_relaxed);
          break;
        case Outcome::Kind::Discard:
          ++discards_since;
          ++report.total_discards;
          counters->discarded.fetch_add(1, std::memory_order_relaxed);
          break;
        case Outcome::Kind::Fail: {
          report.tests_run = passed + 1;
          report.per_tester_counts[0] = passed + 1;
          report.sizes_used.insert(size);
          try {
            fill_failure(report, prop, shrinker, test_seed, size,
                         std::move(value), result.outcome.reason, cfg,
                         counters);
          } catch (const std::exception& e) {
            report.verdict = Verdict::InternalError;
            report.internal_error = std::string("shrink failed: ") + e.what();
            report.failure.reset();
          } catch (...) {
            report.verdict = Verdict::InternalError;
            report.internal_error = "shrink failed: unknown error";
            report.failure.reset();
          }
          return report;
        }
      }
    }
  } catch (const std::exception& e) {
    report.verdict = Verdict::InternalError;
    report.internal_error = e.what();
  } catch (...) {
    report.verdict = Verdict::InternalError;
    report.internal_error = "unknown error";
  }
  report.tests_run = passed;
  report.per_tester_counts[0] = passed;
  return report;
}

}  // namespace detail

/// Single-threaded driver: runs trials until max_success passes, the
/// discard budget is exhausted, or a failure is found and shrunk.
template <typename T>
RunReport<T> run_sequential(const Property<T>& prop, const Gen<T>& gen,
                            const Shrinker<T>& shrinker, const Config& cfg,
                            const RunHooks<T>& hooks = {}) {
  cfg.validate();
  return detail::with_reporting<T>(cfg, hooks, [&](RunCounters* counters) {
    if (cfg.replay) {
      return detail::run_replay(prop, gen, shrinker, cfg, counters);
    }
    return detail::run_sequential_loop(prop, gen, shrinker, cfg, counters);
  });
}

}  // namespace parqc
