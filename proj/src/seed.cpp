// Copyright 2026 The parqc Authors
// Licensed under the Apache License, Version 2.0

#include "parqc/seed.hpp"

#include <bit>
#include <charconv>
#include <random>
#include <stdexcept>

namespace parqc {
namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// MurmurHash3 finalizer forced odd, with at least 24 bit transitions so a
/// child stream increment is never degenerate.
std::uint64_t mix_gamma(std::uint64_t z) {
  z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdull;
  z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ull;
  z |= 1;
  if (std::popcount(z ^ (z >> 1)) < 24) z ^= 0xaaaaaaaaaaaaaaaaull;
  return z;
}

}  // namespace

Draw next_u64(Seed s) {
  s.state += s.gamma;
  return {mix64(s.state), s};
}

SplitPair split(Seed s) {
  const std::uint64_t s1 = s.state + s.gamma;
  const std::uint64_t s2 = s1 + s.gamma;
  Seed left{s2, s.gamma};
  Seed right{mix64(s1), mix_gamma(s2)};
  if (right == left) right.state ^= 1;
  return {left, right};
}

BoundedDraw bounded(Seed s, std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("bounded: lo > hi");
  // width 0 means the request covers the full 64-bit range.
  const std::uint64_t width =
      static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  Draw d = next_u64(s);
  if (width == 0) {
    const std::uint64_t v = static_cast<std::uint64_t>(lo) + d.value;
    return {static_cast<std::int64_t>(v), d.next};
  }
  const std::uint64_t reject_below = (0 - width) % width;
  while (d.value < reject_below) d = next_u64(d.next);
  const std::uint64_t v = static_cast<std::uint64_t>(lo) + d.value % width;
  return {static_cast<std::int64_t>(v), d.next};
}

Seed entropy_seed() {
  std::random_device rd;
  const auto word = [&rd] {
    return (static_cast<std::uint64_t>(rd()) << 32) | rd();
  };
  return Seed{word(), word() | 1};
}

std::string format_seed(Seed s) {
  return std::to_string(s.state) + ":" + std::to_string(s.gamma);
}

std::optional<Seed> parse_seed(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return std::nullopt;
  const auto parse_u64 = [](const char* first, const char* last,
                            std::uint64_t& out) {
    if (first == last) return false;
    auto [p, ec] = std::from_chars(first, last, out, 10);
    return ec == std::errc{} && p == last;
  };
  Seed s;
  const char* data = text.data();
  if (!parse_u64(data, data + colon, s.state)) return std::nullopt;
  if (!parse_u64(data + colon + 1, data + text.size(), s.gamma))
    return std::nullopt;
  if ((s.gamma & 1) == 0) return std::nullopt;
  return s;
}

}  // namespace parqc
