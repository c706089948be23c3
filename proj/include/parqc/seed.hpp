// Copyright 2026 The parqc Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace parqc {

/// Splittable pseudorandom seed: a 64-bit state plus an odd 64-bit stream
/// increment (gamma). Equal (state, gamma) pairs produce identical streams;
/// every operation is pure and O(1).
struct Seed {
  static constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ull;

  std::uint64_t state = 0;
  std::uint64_t gamma = kGoldenGamma;

  /// from_key(k) reproduces the published SplitMix64 output sequence for
  /// initial state k.
  static Seed from_key(std::uint64_t key) { return Seed{key, kGoldenGamma}; }

  friend bool operator==(const Seed&, const Seed&) = default;
};

/// One 64-bit draw plus the advanced seed.
struct Draw {
  std::uint64_t value;
  Seed next;
};

Draw next_u64(Seed s);

/// Child seeds of a split. left continues the parent stream under the parent
/// gamma; right starts an independent stream. left != right always.
struct SplitPair {
  Seed left;
  Seed right;
};

SplitPair split(Seed s);

struct BoundedDraw {
  std::int64_t value;
  Seed next;
};

/// Uniform draw in [lo, hi] with rejection sampling, so no modulo bias.
/// Advances the seed at least once; a singleton range accepts the first
/// draw. Throws std::invalid_argument when lo > hi.
BoundedDraw bounded(Seed s, std::int64_t lo, std::int64_t hi);

/// Fresh unpredictable root seed from the OS entropy source. The gamma is
/// forced odd so the result is always a valid stream increment.
Seed entropy_seed();

/// "state:gamma", both decimal and unsigned.
std::string format_seed(Seed s);

/// Parses format_seed output. Rejects anything else, including even gammas.
std::optional<Seed> parse_seed(const std::string& text);

}  // namespace parqc
