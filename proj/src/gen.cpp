// Copyright 2026 The parqc Authors
// Licensed under the Apache License, Version 2.0

#include "parqc/gen.hpp"

#include <limits>

namespace parqc {

Gen<std::int64_t> gen_int(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("gen_int: lo > hi");
  return {[lo, hi](Seed s, int) { return bounded(s, lo, hi).value; }};
}

std::uint64_t int_measure(std::int64_t n) {
  const std::uint64_t mag =
      n < 0 ? 0 - static_cast<std::uint64_t>(n) : static_cast<std::uint64_t>(n);
  return mag + (n < 0 ? 1 : 0);
}

std::vector<std::int64_t> shrink_int(std::int64_t n) {
  std::vector<std::int64_t> out;
  if (n == 0) return out;
  if (n < 0 && n != std::numeric_limits<std::int64_t>::min())
    out.push_back(-n);
  for (std::int64_t step = n; step != 0; step /= 2) out.push_back(n - step);
  return out;
}

Shrinker<std::int64_t> int_shrinker() {
  return {[](const std::int64_t& n) { return shrink_int(n); }};
}

}  // namespace parqc
