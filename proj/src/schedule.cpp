// Copyright 2026 The parqc Authors
// Licensed under the Apache License, Version 2.0

#include <algorithm>

#include "parqc/par_runner.hpp"
#include "parqc/seq_runner.hpp"

namespace parqc {

int compute_size(std::int64_t passed, std::int64_t discards_since_last_pass,
                 const Config& cfg) {
  const std::int64_t raw = passed * cfg.max_size / cfg.max_success +
                           discards_since_last_pass / 10;
  return static_cast<int>(
      std::min<std::int64_t>(cfg.max_size - 1, raw));
}

int assign_size(int tester_index, std::int64_t local_passed,
                std::int64_t discards_since_last_pass, const Config& cfg) {
  const int k = cfg.num_testers;
  const std::int64_t effective =
      cfg.size_strategy == SizeStrategy::Stride
          ? tester_index + local_passed * k
          : static_cast<std::int64_t>(tester_index) * (cfg.max_success / k) +
                local_passed;
  return compute_size(effective, discards_since_last_pass, cfg);
}

std::vector<Seed> derive_tester_seeds(Seed root, int num_testers) {
  std::vector<Seed> seeds;
  seeds.reserve(static_cast<std::size_t>(num_testers));
  for (int i = 0; i < num_testers; ++i) {
    const SplitPair pair = split(root);
    root = pair.left;
    seeds.push_back(pair.right);
  }
  return seeds;
}

}  // namespace parqc
