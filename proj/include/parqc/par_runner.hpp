// Copyright 2026 The parqc Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "parqc/seq_runner.hpp"

namespace parqc {

/// Test size for tester `tester_index`'s next trial, anchored at its local
/// pass count so the union over all testers covers the same schedule the
/// sequential runner walks.
int assign_size(int tester_index, std::int64_t local_passed,
                std::int64_t discards_since_last_pass, const Config& cfg);

/// One tester's share of the success budget, cache-line padded so CAS
/// traffic on neighbours stays off each other's line.
struct alignas(64) BudgetSlot {
  std::atomic<std::int64_t> remaining{0};
};

/// Atomically takes one unit, failing once the slot is empty.
inline bool try_take_budget(std::atomic<std::int64_t>& remaining) {
  std::int64_t n = remaining.load(std::memory_order_relaxed);
  while (n > 0) {
    if (remaining.compare_exchange_weak(n, n - 1, std::memory_order_acq_rel,
                                        std::memory_order_relaxed)) {
      return true;
    }
  }
  return false;
}

/// Round-robin scan of the other testers' budgets starting at self + 1.
inline bool steal_one(std::vector<BudgetSlot>& budgets, int self) {
  const int k = static_cast<int>(budgets.size());
  for (int off = 1; off < k; ++off) {
    if (try_take_budget(budgets[(self + off) % k].remaining)) return true;
  }
  return false;
}

namespace detail {

/// First-writer-wins cell for the failure that stops the run.
template <typename T>
struct AbortCell {
  std::mutex mu;
  bool committed = false;
  int origin = -1;
  Seed seed;
  int size = 0;
  T value{};
  std::string reason;
};

struct TesterLocal {
  Seed stream;
  std::int64_t passed = 0;           // local passes, drives the size schedule
  std::int64_t committed_tests = 0;  // passes plus a committed failure
  std::int64_t discards_since = 0;
  std::int64_t stolen = 0;
  std::vector<int> sizes;
};

template <typename T>
RunReport<T> run_parallel_loop(const Property<T>& prop, const Gen<T>& gen,
                               const Shrinker<T>& shrinker, const Config& cfg,
                               RunCounters* counters) {
  const int k = cfg.num_testers;
  const std::int64_t discard_bound =
      static_cast<std::int64_t>(cfg.max_discard_ratio) * cfg.max_success;

  std::vector<BudgetSlot> budgets(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    budgets[i].remaining.store(cfg.max_success / k +
                                   (i < cfg.max_success % k ? 1 : 0),
                               std::memory_order_relaxed);
  }

  std::atomic<std::uint64_t> stop_epoch{0};
  std::atomic<std::int64_t> total_discards{0};
  std::atomic<bool> gave_up{false};
  AbortCell<T> abort;
  std::mutex error_mu;
  std::string internal_error;
  bool internal_failed = false;

  const Seed root = cfg.root_seed ? *cfg.root_seed : entropy_seed();
  const std::vector<Seed> streams = derive_tester_seeds(root, k);
  std::vector<TesterLocal> locals(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) locals[i].stream = streams[i];

  const auto worker = [&](int self) {
    TesterLocal& local = locals[self];
    try {
      while (stop_epoch.load(std::memory_order_acquire) == 0) {
        bool have = try_take_budget(budgets[self].remaining);
        if (!have && cfg.steal_enabled && steal_one(budgets, self)) {
          have = true;
          ++local.stolen;
        }
        if (!have) return;  // every obligation everywhere is taken
        // One obligation: run trials until one passes. Discards retry with
        // a fresh seed and size and never consume budget.
        for (;;) {
          if (stop_epoch.load(std::memory_order_acquire) != 0) return;
          if (total_discards.load(std::memory_order_relaxed) >=
              discard_bound) {
            gave_up.store(true, std::memory_order_relaxed);
            stop_epoch.store(1, std::memory_order_release);
            return;
          }
          const int size =
              assign_size(self, local.passed, local.discards_since, cfg);
          const SplitPair pair = split(local.stream);
          local.stream = pair.left;
          T value = gen.run(pair.right, size);
          const EvalResult result =
              evaluate_property(prop, value, &stop_epoch, 0);
          if (result.aborted) return;  // in-flight at stop; result dropped
          if (result.outcome.kind == Outcome::Kind::Pass) {
            ++local.passed;
            local.discards_since = 0;
            ++local.committed_tests;
            local.sizes.push_back(size);
            counters->passed.fetch_add(1, std::memory_order_relaxed);
            break;
          }
          if (result.outcome.kind == Outcome::Kind::Discard) {
            ++local.discards_since;
            counters->discarded.fetch_add(1, std::memory_order_relaxed);
            const std::int64_t seen =
                total_discards.fetch_add(1, std::memory_order_relaxed) + 1;
            if (seen >= discard_bound) {
              gave_up.store(true, std::memory_order_relaxed);
              stop_epoch.store(1, std::memory_order_release);
              return;
            }
            continue;
          }
          // Fail: first writer wins; a failure losing the race is dropped.
          bool won = false;
          {
            std::lock_guard<std::mutex> lock(abort.mu);
            if (!abort.committed) {
              abort.committed = true;
              abort.origin = self;
              abort.seed = pair.right;
              abort.size = size;
              abort.value = std::move(value);
              abort.reason = result.outcome.reason;
              won = true;
            }
          }
          stop_epoch.store(1, std::memory_order_release);
          if (won) {
            ++local.committed_tests;
            local.sizes.push_back(size);
          }
          return;
        }
      }
    } catch (const std::exception& e) {
      {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!internal_failed) {
          internal_failed = true;
          internal_error = e.what();
        }
      }
      stop_epoch.store(1, std::memory_order_release);
    } catch (...) {
      {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!internal_failed) {
          internal_failed = true;
          internal_error = "unknown error";
        }
      }
      stop_epoch.store(1, std::memory_order_release);
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) pool.emplace_back(worker, i);
  for (auto& t : pool) t.join();
  // All testers have returned: every graceful cleanup handler has finished
  // before any shrinking below touches shared state.

  RunReport<T> report;
  report.per_tester_counts.resize(static_cast<std::size_t>(k));
  report.stolen_runs.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    report.per_tester_counts[i] = locals[i].committed_tests;
    report.stolen_runs[i] = locals[i].stolen;
    report.tests_run += locals[i].committed_tests;
    for (int size : locals[i].sizes) report.sizes_used.insert(size);
  }
  report.total_discards = total_discards.load(std::memory_order_relaxed);

  if (internal_failed) {
    report.verdict = Verdict::InternalError;
    report.internal_error = internal_error;
    return report;
  }
  if (abort.committed) {
    try {
      fill_failure(report, prop, shrinker, abort.seed, abort.size,
                   std::move(abort.value), std::move(abort.reason), cfg,
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
  if (gave_up.load(std::memory_order_relaxed)) {
    report.verdict = Verdict::GaveUp;
    return report;
  }
  report.verdict = Verdict::Success;
  return report;
}

}  // namespace detail

/// Multi-threaded driver: num_testers threads share the success budget
/// (with optional work stealing) and stop together on the first failure,
/// which is then shrunk by the configured strategy.
template <typename T>
RunReport<T> run_parallel(const Property<T>& prop, const Gen<T>& gen,
                          const Shrinker<T>& shrinker, const Config& cfg,
                          const RunHooks<T>& hooks = {}) {
  cfg.validate();
  return detail::with_reporting<T>(cfg, hooks, [&](RunCounters* counters) {
    if (cfg.replay) {
      return detail::run_replay(prop, gen, shrinker, cfg, counters);
    }
    return detail::run_parallel_loop(prop, gen, shrinker, cfg, counters);
  });
}

}  // namespace parqc
