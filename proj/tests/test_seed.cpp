// Copyright 2026 The parqc Authors
// Licensed under the Apache License, Version 2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "parqc/seed.hpp"
#include "support/splitmix_reference.hpp"

using namespace parqc;

namespace {

std::vector<std::uint64_t> stream_of(Seed s, int n) {
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Draw d = next_u64(s);
    out.push_back(d.value);
    s = d.next;
  }
  return out;
}

}  // namespace

TEST_CASE("next_u64 is deterministic for equal seeds") {
  const Seed s = Seed::from_key(0xdeadbeefull);
  const Draw a = next_u64(s);
  const Draw b = next_u64(s);
  CHECK(a.value == b.value);
  CHECK(a.next == b.next);
}

TEST_CASE("next_u64 matches the published reference stream") {
  // Frozen outputs of the reference algorithm for initial state 0.
  const std::uint64_t expected0[] = {
      0xe220a8397b1dcdafull, 0x6e789e6aa1b965f4ull, 0x06c45d188009454full,
      0xf88bb8a8724c81ecull, 0x1b39896a51a8749bull, 0x53cb9f0c747ea2eaull,
      0x2c829abe1f4532e1ull, 0xc584133ac916ab3cull,
  };
  const std::uint64_t expected1[] = {
      0x910a2dec89025cc1ull, 0xbeeb8da1658eec67ull, 0xf893a2eefb32555eull,
      0x71c18690ee42c90bull,
  };
  const std::uint64_t expected_big[] = {
      0x161922c645ce50e8ull, 0xad760cafa1697b60ull, 0x3501ff44902ca50dull,
      0x417cb9a826d831dfull,
  };
  CHECK(stream_of(Seed::from_key(0), 8) ==
        std::vector<std::uint64_t>(std::begin(expected0), std::end(expected0)));
  CHECK(stream_of(Seed::from_key(1), 4) ==
        std::vector<std::uint64_t>(std::begin(expected1), std::end(expected1)));
  CHECK(stream_of(Seed::from_key(0x123456789abcdef0ull), 4) ==
        std::vector<std::uint64_t>(std::begin(expected_big),
                                   std::end(expected_big)));

  // Cross-check against an independent port of the same algorithm.
  std::mt19937_64 meta(7);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t key = meta();
    parqc_test::SplitMix64Reference ref{key};
    Seed s = Seed::from_key(key);
    for (int j = 0; j < 100; ++j) {
      Draw d = next_u64(s);
      CHECK(d.value == ref.next());
      s = d.next;
    }
  }
}

TEST_CASE("split is deterministic and the children differ") {
  const Seed s = Seed::from_key(42);
  const SplitPair a = split(s);
  const SplitPair b = split(s);
  CHECK(a.left == b.left);
  CHECK(a.right == b.right);

  // Frozen worked example for from_key(42).
  CHECK(a.left.state == 0x3c6ef372fe94f854ull);
  CHECK(a.left.gamma == Seed::kGoldenGamma);
  CHECK(a.right.state == 0xbdd732262feb6e95ull);
  CHECK(a.right.gamma == 0x077fb59b6018aac9ull);

  std::mt19937_64 meta(11);
  for (int i = 0; i < 10000; ++i) {
    const Seed r{meta(), meta() | 1};
    const SplitPair p = split(r);
    CHECK(p.left != p.right);
  }
}

TEST_CASE("grandchildren of the two split branches differ") {
  std::mt19937_64 meta(13);
  for (int i = 0; i < 10000; ++i) {
    const Seed s{meta(), meta() | 1};
    const SplitPair p = split(s);
    CHECK(split(p.left).left != split(p.right).left);
  }
}

TEST_CASE("continuation and split-off streams share no early output") {
  std::mt19937_64 meta(17);
  for (int i = 0; i < 100; ++i) {
    const Seed s{meta(), meta() | 1};
    const Seed cont = next_u64(s).next;
    const Seed fresh = split(s).right;
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(20000);
    for (std::uint64_t v : stream_of(cont, 10000)) seen.insert(v);
    for (std::uint64_t v : stream_of(fresh, 10000)) CHECK(!seen.contains(v));
  }
}

TEST_CASE("bounded handles singleton ranges without looping") {
  const Seed s = Seed::from_key(3);
  const BoundedDraw d = bounded(s, 5, 5);
  CHECK(d.value == 5);
  CHECK(d.next == next_u64(s).next);
}

TEST_CASE("bounded rejects inverted ranges") {
  CHECK_THROWS_AS((void)bounded(Seed::from_key(0), 2, 1),
                  std::invalid_argument);
}

TEST_CASE("bounded stays in range across sign boundaries") {
  Seed s = Seed::from_key(99);
  for (int i = 0; i < 10000; ++i) {
    const BoundedDraw d = bounded(s, -3, 7);
    CHECK(d.value >= -3);
    CHECK(d.value <= 7);
    s = d.next;
  }
  const BoundedDraw full =
      bounded(s, std::numeric_limits<std::int64_t>::min(),
              std::numeric_limits<std::int64_t>::max());
  CHECK(full.next != s);
}

TEST_CASE("bounded draws are uniform enough on [0, 9]") {
  // Chi-square goodness of fit, 10 bins, 100000 draws. 27.877 is the
  // 0.999 quantile at 9 degrees of freedom, so p > 0.001 means stat < 27.877.
  Seed s = Seed::from_key(2026);
  double counts[10] = {};
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const BoundedDraw d = bounded(s, 0, 9);
    counts[d.value] += 1.0;
    s = d.next;
  }
  const double expected = n / 10.0;
  double stat = 0.0;
  for (double c : counts) stat += (c - expected) * (c - expected) / expected;
  CHECK(stat < 27.877);
}

TEST_CASE("any operation sequence replays identically from an equal seed") {
  std::mt19937_64 meta(23);
  for (int rep = 0; rep < 50; ++rep) {
    const Seed start{meta(), meta() | 1};
    std::vector<int> ops;
    for (int i = 0; i < 64; ++i) ops.push_back(static_cast<int>(meta() % 3));

    const auto run = [&ops](Seed s) {
      std::vector<std::uint64_t> log;
      for (int op : ops) {
        switch (op) {
          case 0: {
            Draw d = next_u64(s);
            log.push_back(d.value);
            s = d.next;
            break;
          }
          case 1: {
            SplitPair p = split(s);
            log.push_back(p.right.state);
            log.push_back(p.right.gamma);
            s = p.left;
            break;
          }
          default: {
            BoundedDraw d = bounded(s, -100, 100);
            log.push_back(static_cast<std::uint64_t>(d.value));
            s = d.next;
            break;
          }
        }
      }
      log.push_back(s.state);
      log.push_back(s.gamma);
      return log;
    };
    CHECK(run(start) == run(start));
  }
}

TEST_CASE("seed text form round-trips and rejects malformed input") {
  std::mt19937_64 meta(29);
  for (int i = 0; i < 1000; ++i) {
    const Seed s{meta(), meta() | 1};
    const auto back = parse_seed(format_seed(s));
    REQUIRE(back.has_value());
    CHECK(*back == s);
  }
  CHECK(format_seed(Seed{5, 3}) == "5:3");

  CHECK(!parse_seed("").has_value());
  CHECK(!parse_seed("123").has_value());
  CHECK(!parse_seed(":1").has_value());
  CHECK(!parse_seed("1:").has_value());
  CHECK(!parse_seed("1:2").has_value());       // even gamma
  CHECK(!parse_seed("-1:3").has_value());
  CHECK(!parse_seed("1:3 ").has_value());
  CHECK(!parse_seed("0x10:3").has_value());
  CHECK(!parse_seed("1:3:5").has_value());
  CHECK(!parse_seed("99999999999999999999:1").has_value());  // overflow
}
