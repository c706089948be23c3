// Copyright 2026 The parqc Authors
// Licensed under the Apache License, Version 2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <thread>
#include <vector>

#include "doctest.h"
#include "parqc/expr.hpp"
#include "parqc/par_shrink.hpp"
#include "parqc/shrink.hpp"

using namespace parqc;
using namespace std::chrono_literals;

namespace {

Property<std::int64_t> fails_at_or_above(std::int64_t bound) {
  return {[bound](const std::int64_t& n) {
    return n >= bound ? Outcome::fail("") : Outcome::pass();
  }};
}

/// Spin until flag() holds or the deadline passes; returns whether it held.
template <typename Fn>
bool wait_for_flag(Fn flag, std::chrono::milliseconds deadline = 5000ms) {
  const auto end = std::chrono::steady_clock::now() + deadline;
  while (!flag()) {
    if (std::chrono::steady_clock::now() > end) return false;
    std::this_thread::sleep_for(50us);
  }
  return true;
}

/// Structurally failing expression property for cross-strategy checks.
Property<Expr> fails_when_large() {
  return {[](const Expr& e) {
    const int n = node_count(e);
    if (n == 3) return Outcome::discard();  // exercises non-fail != pass
    return n >= 5 ? Outcome::fail("") : Outcome::pass();
  }};
}

std::vector<Expr> random_failing_exprs(int count, std::uint64_t key) {
  const Gen<Expr> gen = gen_expr();
  const Property<Expr> prop = fails_when_large();
  std::vector<Expr> out;
  Seed s = Seed::from_key(key);
  while (static_cast<int>(out.size()) < count) {
    const SplitPair pair = split(s);
    s = pair.left;
    Expr e = gen.run(pair.right, 25);
    if (prop.check(e).kind == Outcome::Kind::Fail) out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

TEST_CASE("one worker reproduces the sequential search, counters included") {
  const auto prop = fails_at_or_above(10);
  for (std::int64_t origin : {10, 37, 500, 81920, 999999}) {
    const auto seq = shrink_sequential(prop, int_shrinker(), origin);
    const auto det = shrink_deterministic(prop, int_shrinker(), origin, 1);
    const auto greedy = shrink_greedy(prop, int_shrinker(), origin, 1);
    CHECK(det == seq);
    CHECK(greedy == seq);
  }
}

TEST_CASE("one worker matches sequential on structured values too") {
  const auto prop = fails_when_large();
  for (const Expr& origin : random_failing_exprs(25, 404)) {
    const auto seq = shrink_sequential(prop, expr_shrinker(), origin);
    CHECK(shrink_deterministic(prop, expr_shrinker(), origin, 1) == seq);
    CHECK(shrink_greedy(prop, expr_shrinker(), origin, 1) == seq);
  }
}

TEST_CASE("deterministic search commits the sequential path at any width") {
  const auto prop = fails_when_large();
  const auto origins = random_failing_exprs(40, 2026);
  for (const Expr& origin : origins) {
    const auto seq = shrink_sequential(prop, expr_shrinker(), origin);
    for (int workers : {2, 4, 8}) {
      const auto det =
          shrink_deterministic(prop, expr_shrinker(), origin, workers);
      CHECK(det.final == seq.final);
      CHECK(det.committed_path == seq.committed_path);
      CHECK(det.successful_shrinks == seq.successful_shrinks);
    }
  }
}

TEST_CASE("greedy search always lands on a failing local minimum") {
  const auto prop = fails_when_large();
  for (const Expr& origin : random_failing_exprs(40, 7)) {
    const auto report = shrink_greedy(prop, expr_shrinker(), origin, 4);
    CHECK(prop.check(report.final).kind == Outcome::Kind::Fail);
    for (const Expr& cand : shrink_expr(report.final)) {
      CHECK(prop.check(cand).kind != Outcome::Kind::Fail);
    }
    if (!report.committed_path.empty()) {
      CHECK(report.committed_path.back() == report.final);
    }
  }
}

TEST_CASE("a scripted deterministic race evaluates exactly seven candidates") {
  // Candidate graph: 0 -> {1, 2, 3}, 2 -> {4, 5}, 5 -> {6, 7}; 2, 5, 7 fail.
  // Candidate 2's evaluation stalls until 1 and 3 both finished, which lets
  // a second worker reach candidate 3 while 2 is still pending. Candidates
  // 5 and 7 stall the same way on their left siblings. The search must
  // commit 2, 5, 7 in order and evaluate each candidate exactly once.
  const std::map<int, std::vector<int>> kids{
      {0, {1, 2, 3}}, {2, {4, 5}}, {5, {6, 7}}};
  auto finished = std::make_shared<std::array<std::atomic<bool>, 8>>();
  for (auto& f : *finished) f.store(false);
  auto mark = [finished](int v, Outcome o) {
    (*finished)[v].store(true);
    return o;
  };
  Property<int> prop{[=](const int& v) -> Outcome {
    switch (v) {
      case 1:
      case 3:
      case 4:
      case 6:
        return mark(v, Outcome::pass());
      case 2:
        if (!wait_for_flag(
                [&] { return (*finished)[1].load() && (*finished)[3].load(); }))
          return mark(v, Outcome::pass());  // wrong on purpose: fails the test
        return mark(v, Outcome::fail(""));
      case 5:
        if (!wait_for_flag([&] { return (*finished)[4].load(); }))
          return mark(v, Outcome::pass());
        return mark(v, Outcome::fail(""));
      case 7:
        if (!wait_for_flag([&] { return (*finished)[6].load(); }))
          return mark(v, Outcome::pass());
        return mark(v, Outcome::fail(""));
      default:
        return mark(v, Outcome::fail(""));
    }
  }};
  Shrinker<int> shrinker{[kids](const int& v) {
    const auto it = kids.find(v);
    return it == kids.end() ? std::vector<int>{} : it->second;
  }};

  const auto report = shrink_deterministic(prop, shrinker, 0, 2);
  CHECK(report.final == 7);
  CHECK(report.committed_path == std::vector<int>{2, 5, 7});
  CHECK(report.successful_shrinks == 3);
  CHECK(report.candidates_evaluated == 7);
  CHECK(report.abandoned_evaluations == 0);
  CHECK(*report.efficiency() == 3.0 / 7.0);
}

TEST_CASE("a scripted greedy race evaluates exactly eight candidates") {
  // Candidate graph: 0 -> {1, 2}, 2 -> {3, 4}, 4 -> {5, 6}, 6 -> {7, 8};
  // the even candidates fail but each stalls until its passing sibling
  // finished, so every generation costs two evaluations: 8 in total for 3
  // commits.
  const std::map<int, std::vector<int>> kids{
      {0, {1, 2}}, {2, {3, 4}}, {4, {5, 6}}, {6, {7, 8}}};
  auto finished = std::make_shared<std::array<std::atomic<bool>, 9>>();
  for (auto& f : *finished) f.store(false);
  Property<int> prop{[=](const int& v) -> Outcome {
    Outcome out = Outcome::pass();
    if (v == 2 || v == 4 || v == 6) {
      if (wait_for_flag([&] { return (*finished)[v - 1].load(); })) {
        out = Outcome::fail("");
      }
    } else if (v == 0) {
      out = Outcome::fail("");
    }
    (*finished)[v].store(true);
    return out;
  }};
  Shrinker<int> shrinker{[kids](const int& v) {
    const auto it = kids.find(v);
    return it == kids.end() ? std::vector<int>{} : it->second;
  }};

  const auto report = shrink_greedy(prop, shrinker, 0, 2);
  CHECK(report.final == 6);
  CHECK(report.committed_path == std::vector<int>{2, 4, 6});
  CHECK(report.successful_shrinks == 3);
  CHECK(report.candidates_evaluated == 8);
  CHECK(report.abandoned_evaluations == 0);
  CHECK(*report.efficiency() == 3.0 / 8.0);
}

TEST_CASE("greedy commits cancel in-flight rivals, which count as abandoned") {
  // Candidate 1 fails fast (once candidate 2 is definitely in flight);
  // candidate 2 only ever exits through cancellation.
  auto slow_started = std::make_shared<std::atomic<bool>>(false);
  Property<int> prop{[=](const int& v) -> Outcome {
    if (v == 2) {
      slow_started->store(true);
      const auto end = std::chrono::steady_clock::now() + 10s;
      while (std::chrono::steady_clock::now() < end) {
        poll_cancellation();
        std::this_thread::sleep_for(100us);
      }
      return Outcome::pass();  // deadline reached: cancellation never came
    }
    if (v == 1) {
      if (!wait_for_flag([&] { return slow_started->load(); })) {
        return Outcome::pass();
      }
      return Outcome::fail("");
    }
    return v == 0 ? Outcome::fail("") : Outcome::pass();
  }};
  Shrinker<int> shrinker{[](const int& v) {
    return v == 0 ? std::vector<int>{1, 2} : std::vector<int>{};
  }};

  const auto report = shrink_greedy(prop, shrinker, 0, 2);
  CHECK(report.final == 1);
  CHECK(report.successful_shrinks == 1);
  CHECK(report.candidates_evaluated == 1);
  CHECK(report.abandoned_evaluations == 1);
}

TEST_CASE("deterministic anchors cancel later in-flight candidates") {
  // Candidate 1 fails once candidate 2 is in flight; candidate 2 polls
  // forever. The anchor at index 0 commits immediately and must cancel 2.
  auto slow_started = std::make_shared<std::atomic<bool>>(false);
  Property<int> prop{[=](const int& v) -> Outcome {
    if (v == 2) {
      slow_started->store(true);
      const auto end = std::chrono::steady_clock::now() + 10s;
      while (std::chrono::steady_clock::now() < end) {
        poll_cancellation();
        std::this_thread::sleep_for(100us);
      }
      return Outcome::pass();  // deadline reached: cancellation never came
    }
    if (v == 1) {
      if (!wait_for_flag([&] { return slow_started->load(); })) {
        return Outcome::pass();
      }
      return Outcome::fail("");
    }
    return v == 0 ? Outcome::fail("") : Outcome::pass();
  }};
  Shrinker<int> shrinker{[](const int& v) {
    return v == 0 ? std::vector<int>{1, 2} : std::vector<int>{};
  }};

  const auto report = shrink_deterministic(prop, shrinker, 0, 2);
  CHECK(report.final == 1);
  CHECK(report.successful_shrinks == 1);
  CHECK(report.candidates_evaluated == 1);
  CHECK(report.abandoned_evaluations == 1);
}

TEST_CASE("an origin without candidates is final under every strategy") {
  Shrinker<int> none{[](const int&) { return std::vector<int>{}; }};
  Property<int> prop{[](const int&) { return Outcome::fail(""); }};
  for (int workers : {1, 2, 4}) {
    const auto det = shrink_deterministic(prop, none, 9, workers);
    CHECK(det.final == 9);
    CHECK(det.candidates_evaluated == 0);
    CHECK_FALSE(det.efficiency().has_value());
    const auto greedy = shrink_greedy(prop, none, 9, workers);
    CHECK(greedy.final == 9);
    CHECK(greedy.candidates_evaluated == 0);
  }
}

TEST_CASE("shrinker exceptions propagate out of both parallel strategies") {
  Property<int> prop{[](const int&) { return Outcome::fail(""); }};
  auto calls = std::make_shared<std::atomic<int>>(0);
  Shrinker<int> flaky{[calls](const int& v) -> std::vector<int> {
    if (calls->fetch_add(1) > 0) throw std::runtime_error("shrinker exploded");
    return {v - 1};
  }};
  calls->store(0);
  CHECK_THROWS_AS(shrink_greedy(prop, flaky, 5, 2), std::runtime_error);
  calls->store(0);
  CHECK_THROWS_AS(shrink_deterministic(prop, flaky, 5, 2), std::runtime_error);
}

TEST_CASE("worker counts below one are rejected") {
  Property<int> prop{[](const int&) { return Outcome::pass(); }};
  Shrinker<int> none{[](const int&) { return std::vector<int>{}; }};
  CHECK_THROWS_AS(shrink_greedy(prop, none, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(shrink_deterministic(prop, none, 1, -2),
                  std::invalid_argument);
}

TEST_CASE("both parallel strategies feed the shared shrink counter") {
  RunCounters counters;
  const auto det = shrink_deterministic(fails_at_or_above(10), int_shrinker(),
                                        std::int64_t{37}, 2, &counters);
  CHECK(counters.shrink_steps.load() == det.successful_shrinks);
  const auto before = counters.shrink_steps.load();
  const auto greedy = shrink_greedy(fails_at_or_above(10), int_shrinker(),
                                    std::int64_t{37}, 2, &counters);
  CHECK(counters.shrink_steps.load() - before == greedy.successful_shrinks);
}

TEST_CASE("wider deterministic searches still agree with one worker") {
  const auto prop = fails_at_or_above(10);
  for (std::int64_t origin : {37, 12345, 1000000}) {
    const auto seq = shrink_sequential(prop, int_shrinker(), origin);
    for (int workers : {2, 3, 8}) {
      const auto det =
          shrink_deterministic(prop, int_shrinker(), origin, workers);
      CHECK(det.final == seq.final);
      CHECK(det.committed_path == seq.committed_path);
    }
  }
}
