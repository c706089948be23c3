// Copyright 2026 The parqc Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "parqc/gen.hpp"
#include "parqc/progress.hpp"
#include "parqc/property.hpp"
#include "parqc/shrink.hpp"

namespace parqc {

namespace detail {

enum class SlotState : std::uint8_t {
  Unclaimed,
  InFlight,
  NonFail,   // completed as Pass or Discard
  Failed,    // completed as Fail
  Abandoned  // cancelled while in flight; its result was discarded
};

/// One generation of shrink candidates plus per-candidate claim state.
/// All fields except the cancel tokens are guarded by the driver mutex;
/// tokens are written under the lock and polled lock-free by evaluations.
template <typename T>
struct ShrinkBoard {
  struct Slot {
    SlotState state = SlotState::Unclaimed;
    std::atomic<std::uint64_t> cancel{0};
  };

  explicit ShrinkBoard(std::vector<T> candidates)
      : items(std::move(candidates)), slots(items.size()) {}

  std::vector<T> items;
  std::vector<Slot> slots;  // never resized; tokens need stable addresses
  std::size_t next_claim = 0;
  std::size_t resolved = 0;  // completed (NonFail or Failed) while live
  std::optional<std::size_t> lowest_fail;
  bool dead = false;  // superseded: late completions are recorded but inert

  // Candidates past the lowest recorded failure can no longer matter, so
  // claims stop there.
  std::size_t claim_limit() const {
    return lowest_fail ? *lowest_fail : slots.size();
  }
  bool claimable() const { return !dead && next_claim < claim_limit(); }
};

/// Marks the board superseded and cancels everything still in flight.
template <typename T>
void kill_board(ShrinkBoard<T>& board) {
  board.dead = true;
  for (auto& slot : board.slots) {
    if (slot.state == SlotState::InFlight) {
      slot.cancel.store(1, std::memory_order_release);
    }
  }
}

template <typename T>
struct ShrinkShared {
  ShrinkShared(const Property<T>& p, const Shrinker<T>& s, RunCounters* c)
      : prop(p), shrinker(s), counters(c) {}

  const Property<T>& prop;
  const Shrinker<T>& shrinker;
  RunCounters* counters = nullptr;

  std::mutex mu;
  std::condition_variable cv;
  T current{};
  ShrinkReport<T> report;
  std::shared_ptr<ShrinkBoard<T>> real;
  std::shared_ptr<ShrinkBoard<T>> spec;  // depth-1 speculation, may be null
  bool done = false;
  std::exception_ptr error;

  // Lock held. Records an accepted candidate and advances bookkeeping
  // common to both strategies.
  void note_commit(const T& item) {
    current = item;
    report.committed_path.push_back(item);
    ++report.successful_shrinks;
    if (counters != nullptr) {
      counters->shrink_steps.fetch_add(1, std::memory_order_relaxed);
    }
  }
};

/// Lock held. Claims the next candidate of `board`, if any.
template <typename T>
std::optional<std::size_t> claim_next(ShrinkBoard<T>& board) {
  if (!board.claimable()) return std::nullopt;
  const std::size_t idx = board.next_claim++;
  board.slots[idx].state = SlotState::InFlight;
  return idx;
}

// ---------------------------------------------------------------------------
// Greedy strategy: the first completed failing candidate wins immediately.
// ---------------------------------------------------------------------------

// Lock held.
template <typename T>
void commit_greedy(ShrinkShared<T>& s, const T& item) {
  s.note_commit(item);
  kill_board(*s.real);
  s.real = std::make_shared<ShrinkBoard<T>>(s.shrinker.shrink(s.current));
  if (s.real->slots.empty()) s.done = true;
}

template <typename T>
void greedy_worker(ShrinkShared<T>& s) {
  try {
    for (;;) {
      std::shared_ptr<ShrinkBoard<T>> board;
      std::size_t idx = 0;
      {
        std::unique_lock<std::mutex> lock(s.mu);
        s.cv.wait(lock, [&s] {
          return s.done || s.error != nullptr || s.real->claimable();
        });
        if (s.done || s.error != nullptr) return;
        board = s.real;
        idx = *claim_next(*board);
      }
      const EvalResult result = evaluate_property(
          s.prop, board->items[idx], &board->slots[idx].cancel, 0);
      {
        std::unique_lock<std::mutex> lock(s.mu);
        auto& slot = board->slots[idx];
        if (result.aborted) {
          slot.state = SlotState::Abandoned;
          ++s.report.abandoned_evaluations;
        } else {
          ++s.report.candidates_evaluated;
          const bool failed = result.outcome.kind == Outcome::Kind::Fail;
          slot.state = failed ? SlotState::Failed : SlotState::NonFail;
          if (!board->dead) {
            if (failed) {
              commit_greedy(s, board->items[idx]);
            } else {
              ++board->resolved;
              if (board->resolved == board->slots.size()) s.done = true;
            }
          }
        }
        s.cv.notify_all();
      }
    }
  } catch (...) {
    std::lock_guard<std::mutex> lock(s.mu);
    if (s.error == nullptr) s.error = std::current_exception();
    s.cv.notify_all();
  }
}

// ---------------------------------------------------------------------------
// Deterministic strategy: only the lowest-index failing candidate may
// commit, and only once every earlier candidate has completed without
// failing. While a commit is blocked, idle workers speculate one level
// ahead into the anchor's own candidates; the speculative board is promoted
// wholesale when its anchor commits, in-flight work and all.
// ---------------------------------------------------------------------------

// Lock held; s.real->lowest_fail must be set. Replaces any existing
// speculation with the anchor's candidates.
template <typename T>
void rebuild_spec(ShrinkShared<T>& s) {
  if (s.spec) kill_board(*s.spec);
  s.spec = std::make_shared<ShrinkBoard<T>>(
      s.shrinker.shrink(s.real->items[*s.real->lowest_fail]));
}

// Lock held; board is live. Records a failure, cancels work that the new
// anchor makes moot, and re-aims speculation when the real anchor moved.
template <typename T>
void record_fail_det(ShrinkShared<T>& s,
                     const std::shared_ptr<ShrinkBoard<T>>& board,
                     std::size_t idx) {
  ShrinkBoard<T>& b = *board;
  if (b.lowest_fail && *b.lowest_fail <= idx) return;
  b.lowest_fail = idx;
  for (std::size_t i = idx + 1; i < b.slots.size(); ++i) {
    if (b.slots[i].state == SlotState::InFlight) {
      b.slots[i].cancel.store(1, std::memory_order_release);
    }
  }
  if (board == s.real) rebuild_spec(s);
}

// Lock held. Commits the real anchor as soon as every earlier candidate
// has resolved as non-failing, then cascades through promoted boards.
template <typename T>
void try_commit_det(ShrinkShared<T>& s) {
  for (;;) {
    ShrinkBoard<T>& b = *s.real;
    if (!b.lowest_fail) {
      // Every candidate of the current value completed without failing:
      // the current value is locally minimal.
      if (b.resolved == b.slots.size()) s.done = true;
      return;
    }
    const std::size_t anchor = *b.lowest_fail;
    for (std::size_t i = 0; i < anchor; ++i) {
      if (b.slots[i].state != SlotState::NonFail) return;  // commit blocked
    }
    const T winner = b.items[anchor];
    s.note_commit(winner);
    kill_board(b);
    if (s.spec) {
      s.real = std::move(s.spec);
      s.spec = nullptr;
    } else {
      s.real = std::make_shared<ShrinkBoard<T>>(s.shrinker.shrink(s.current));
    }
    if (s.real->slots.empty()) {
      s.done = true;
      return;
    }
    if (s.real->lowest_fail) rebuild_spec(s);
  }
}

template <typename T>
void det_worker(ShrinkShared<T>& s) {
  try {
    for (;;) {
      std::shared_ptr<ShrinkBoard<T>> board;
      std::size_t idx = 0;
      {
        std::unique_lock<std::mutex> lock(s.mu);
        s.cv.wait(lock, [&s] {
          return s.done || s.error != nullptr || s.real->claimable() ||
                 (s.spec && s.spec->claimable());
        });
        if (s.done || s.error != nullptr) return;
        if (s.real->claimable()) {
          board = s.real;
        } else {
          board = s.spec;
        }
        idx = *claim_next(*board);
      }
      const EvalResult result = evaluate_property(
          s.prop, board->items[idx], &board->slots[idx].cancel, 0);
      {
        std::unique_lock<std::mutex> lock(s.mu);
        auto& slot = board->slots[idx];
        if (result.aborted) {
          slot.state = SlotState::Abandoned;
          ++s.report.abandoned_evaluations;
        } else {
          ++s.report.candidates_evaluated;
          const bool failed = result.outcome.kind == Outcome::Kind::Fail;
          slot.state = failed ? SlotState::Failed : SlotState::NonFail;
          if (!board->dead) {
            ++board->resolved;
            if (failed) record_fail_det(s, board, idx);
            if (board == s.real) try_commit_det(s);
          }
        }
        s.cv.notify_all();
      }
    }
  } catch (...) {
    std::lock_guard<std::mutex> lock(s.mu);
    if (s.error == nullptr) s.error = std::current_exception();
    s.cv.notify_all();
  }
}

template <typename T, typename Worker>
ShrinkReport<T> drive_shrink(const Property<T>& prop,
                             const Shrinker<T>& shrinker, const T& origin,
                             int workers, RunCounters* counters,
                             Worker worker) {
  if (workers < 1) {
    throw std::invalid_argument("shrink workers must be >= 1");
  }
  ShrinkShared<T> s{prop, shrinker, counters};
  s.current = origin;
  s.real = std::make_shared<ShrinkBoard<T>>(shrinker.shrink(origin));
  if (s.real->slots.empty()) s.done = true;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int i = 0; i < workers; ++i) {
    pool.emplace_back([&s, worker] { worker(s); });
  }
  for (auto& t : pool) t.join();
  if (s.error != nullptr) std::rethrow_exception(s.error);
  s.report.final = s.current;
  return s.report;
}

}  // namespace detail

/// Parallel shrink search where the first failing candidate to complete
/// commits immediately; everything else in flight is cancelled. Fast, and
/// the result is still locally minimal, but which minimum it reaches can
/// vary from run to run.
template <typename T>
ShrinkReport<T> shrink_greedy(const Property<T>& prop,
                              const Shrinker<T>& shrinker, const T& origin,
                              int workers, RunCounters* counters = nullptr) {
  return detail::drive_shrink(prop, shrinker, origin, workers, counters,
                              [](detail::ShrinkShared<T>& s) {
                                detail::greedy_worker(s);
                              });
}

/// Parallel shrink search that commits exactly the candidates the
/// sequential loop would: the final value and the committed path are
/// identical for every worker count, including 1.
template <typename T>
ShrinkReport<T> shrink_deterministic(const Property<T>& prop,
                                     const Shrinker<T>& shrinker,
                                     const T& origin, int workers,
                                     RunCounters* counters = nullptr) {
  return detail::drive_shrink(prop, shrinker, origin, workers, counters,
                              [](detail::ShrinkShared<T>& s) {
                                detail::det_worker(s);
                              });
}

}  // namespace parqc
