// Copyright 2026 The parqc Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>

// Straight port of the published SplitMix64 reference next(), kept separate
// from the library implementation so tests have an independent oracle.
namespace parqc_test {

struct SplitMix64Reference {
  std::uint64_t x;

  std::uint64_t next() {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
};

}  // namespace parqc_test
