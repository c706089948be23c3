// Copyright 2026 The parqc Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "parqc/seed.hpp"
#include "parqc/shrink.hpp"

namespace parqc {

enum class Verdict { Success, GaveUp, Failure, InternalError };

std::string_view verdict_name(Verdict v);

/// Everything needed to reproduce and report one failing test.
/// Replaying (seed, size) through the generator rebuilds `original`;
/// `shrink.final` is the minimized counterexample actually reported.
template <typename T>
struct FailureInfo {
  Seed seed;
  int size = 0;
  T original{};
  std::string reason;
  ShrinkReport<T> shrink;

  friend bool operator==(const FailureInfo&, const FailureInfo&) = default;
};

template <typename T>
struct RunReport {
  Verdict verdict = Verdict::Success;
  std::int64_t tests_run = 0;
  std::int64_t total_discards = 0;
  std::vector<std::int64_t> per_tester_counts;  // sums to tests_run
  std::vector<std::int64_t> stolen_runs;        // per tester, thief's tally
  std::multiset<int> sizes_used;                // one entry per counted test
  std::optional<FailureInfo<T>> failure;
  std::string internal_error;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// Renders the human-readable summary, one line per vector entry.
/// `show` pretty-prints the minimized counterexample on failure.
template <typename T>
std::vector<std::string> render_run_report(
    const RunReport<T>& report,
    const std::function<std::string(const T&)>& show) {
  std::vector<std::string> lines;
  switch (report.verdict) {
    case Verdict::Success: {
      lines.push_back("+++ OK! Passed " + std::to_string(report.tests_run) +
                      " tests.");
      for (std::size_t i = 0; i < report.per_tester_counts.size(); ++i) {
        lines.push_back("  tester " + std::to_string(i) + ": " +
                        std::to_string(report.per_tester_counts[i]));
      }
      break;
    }
    case Verdict::GaveUp: {
      lines.push_back("*** Gave up! Passed only " +
                      std::to_string(report.tests_run) + " tests; discarded " +
                      std::to_string(report.total_discards) + ".");
      break;
    }
    case Verdict::Failure: {
      const auto& f = *report.failure;
      std::string reason = f.reason.empty() ? "Falsified" : f.reason;
      lines.push_back("*** Failed! " + reason + " (after " +
                      std::to_string(report.tests_run) + " tests):");
      lines.push_back(show ? show(f.shrink.final)
                           : std::string("(no printer)"));
      lines.push_back("Replay: " + format_seed(f.seed) + " size " +
                      std::to_string(f.size));
      break;
    }
    case Verdict::InternalError: {
      lines.push_back("*** Internal error! " + report.internal_error);
      break;
    }
  }
  return lines;
}

}  // namespace parqc
