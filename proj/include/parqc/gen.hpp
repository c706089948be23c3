// Copyright 2026 The parqc Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "parqc/seed.hpp"

namespace parqc {

/// Sized generator: a pure function of (seed, size). Equal seed and size
/// reproduce the value; size bounds the complexity of what is produced and
/// size 0 yields a smallest case.
template <typename T>
struct Gen {
  std::function<T(Seed, int)> run;
};

/// Produces strictly smaller candidate values for shrinking, ordered
/// greediest (biggest reduction) first.
template <typename T>
struct Shrinker {
  std::function<std::vector<T>(const T&)> shrink;
};

/// Uniform integers in [lo, hi]. Throws std::invalid_argument when lo > hi.
Gen<std::int64_t> gen_int(std::int64_t lo, std::int64_t hi);

/// Lists whose length is uniform in [0, size]; elements are generated from
/// split-off seeds at the same size.
template <typename T>
Gen<std::vector<T>> gen_list(Gen<T> elem) {
  return {[elem = std::move(elem)](Seed s, int size) {
    const BoundedDraw len = bounded(s, 0, size < 0 ? 0 : size);
    std::vector<T> out;
    out.reserve(static_cast<std::size_t>(len.value));
    Seed chain = len.next;
    for (std::int64_t i = 0; i < len.value; ++i) {
      const SplitPair p = split(chain);
      chain = p.left;
      out.push_back(elem.run(p.right, size));
    }
    return out;
  }};
}

/// Magnitude order used by shrink_int: |n| halved toward zero, negatives
/// one step above their absolute value.
std::uint64_t int_measure(std::int64_t n);

/// Candidates strictly closer to zero: negation for negatives, then the
/// halving-toward-zero sequence ending in the decrement. shrink_int(0) = {}.
std::vector<std::int64_t> shrink_int(std::int64_t n);

Shrinker<std::int64_t> int_shrinker();

/// Chunk removals (largest chunks first), then per-element shrinks left to
/// right. Every candidate is strictly smaller: shorter, or equal length with
/// one element strictly shrunk.
template <typename T>
std::vector<std::vector<T>> shrink_list(const std::vector<T>& xs,
                                        const Shrinker<T>& elem) {
  std::vector<std::vector<T>> out;
  const auto n = static_cast<std::int64_t>(xs.size());
  for (std::int64_t k = n; k > 0; k /= 2) {
    for (std::int64_t i = 0; i + k <= n; i += k) {
      std::vector<T> cand;
      cand.reserve(static_cast<std::size_t>(n - k));
      cand.insert(cand.end(), xs.begin(), xs.begin() + i);
      cand.insert(cand.end(), xs.begin() + i + k, xs.end());
      out.push_back(std::move(cand));
    }
  }
  if (elem.shrink) {
    for (std::int64_t i = 0; i < n; ++i) {
      for (T& alt : elem.shrink(xs[static_cast<std::size_t>(i)])) {
        std::vector<T> cand = xs;
        cand[static_cast<std::size_t>(i)] = std::move(alt);
        out.push_back(std::move(cand));
      }
    }
  }
  return out;
}

template <typename T>
Shrinker<std::vector<T>> list_shrinker(Shrinker<T> elem) {
  return {[elem = std::move(elem)](const std::vector<T>& xs) {
    return shrink_list(xs, elem);
  }};
}

}  // namespace parqc
