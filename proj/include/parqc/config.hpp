// Copyright 2026 The parqc Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <optional>

#include "parqc/seed.hpp"

namespace parqc {

/// How concurrent testers map their local pass count onto the shared size
/// schedule: Stride interleaves (tester i takes sizes i, i+k, i+2k, ...),
/// Offset hands each tester a contiguous block.
enum class SizeStrategy { Stride, Offset };

enum class ShrinkStrategy { Sequential, Deterministic, Greedy };

/// A recorded test: replaying (seed, size) regenerates the value bit for bit.
struct ReplaySpec {
  Seed seed;
  int size = 0;

  friend bool operator==(const ReplaySpec&, const ReplaySpec&) = default;
};

struct Config {
  int max_success = 100;
  int max_size = 100;
  int max_discard_ratio = 10;
  int num_testers = 1;
  bool steal_enabled = true;
  SizeStrategy size_strategy = SizeStrategy::Stride;
  ShrinkStrategy shrink_strategy = ShrinkStrategy::Sequential;
  bool chatty = false;
  int progress_period_ms = 200;
  std::optional<Seed> root_seed;  // fresh entropy when absent
  std::optional<ReplaySpec> replay;

  /// Throws std::invalid_argument on nonsense; in particular num_testers
  /// must lie in [1, max_success].
  void validate() const;
};

}  // namespace parqc
