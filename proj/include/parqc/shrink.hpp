// Copyright 2026 The parqc Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "parqc/gen.hpp"
#include "parqc/progress.hpp"
#include "parqc/property.hpp"

namespace parqc {

/// successful / evaluated; absent when nothing was evaluated.
/// Throws std::invalid_argument on negative counts or successful > evaluated.
inline std::optional<double> shrink_efficiency(std::int64_t successful,
                                               std::int64_t evaluated) {
  if (successful < 0 || evaluated < 0 || successful > evaluated) {
    throw std::invalid_argument(
        "shrink_efficiency: successes must lie in [0, evaluations]");
  }
  if (evaluated == 0) return std::nullopt;
  return static_cast<double>(successful) / static_cast<double>(evaluated);
}

/// Outcome of one shrink search. candidates_evaluated counts completed
/// evaluations only; cancelled in-flight work lands in abandoned_evaluations.
template <typename T>
struct ShrinkReport {
  T final{};
  std::int64_t successful_shrinks = 0;
  std::int64_t candidates_evaluated = 0;
  std::int64_t abandoned_evaluations = 0;
  std::vector<T> committed_path;  // every accepted candidate, in commit order

  std::optional<double> efficiency() const {
    return shrink_efficiency(successful_shrinks, candidates_evaluated);
  }

  friend bool operator==(const ShrinkReport&, const ShrinkReport&) = default;
};

/// Classic greedy left-to-right shrink loop: walk the candidates of the
/// current value in order, restart from the first that still fails, stop
/// once a full pass finds none. The result is locally minimal.
template <typename T>
ShrinkReport<T> shrink_sequential(const Property<T>& prop,
                                  const Shrinker<T>& shrinker, const T& origin,
                                  RunCounters* counters = nullptr) {
  ShrinkReport<T> report;
  report.final = origin;
  bool progressed = true;
  while (progressed) {
    progressed = false;
    for (const T& candidate : shrinker.shrink(report.final)) {
      const EvalResult result = evaluate_property(prop, candidate);
      ++report.candidates_evaluated;
      if (result.outcome.kind == Outcome::Kind::Fail) {
        report.final = candidate;
        report.committed_path.push_back(candidate);
        ++report.successful_shrinks;
        if (counters != nullptr) {
          counters->shrink_steps.fetch_add(1, std::memory_order_relaxed);
        }
        progressed = true;
        break;
      }
    }
  }
  return report;
}

}  // namespace parqc
