// Copyright 2026 The parqc Authors
// Licensed under the Apache License, Version 2.0

#include "parqc/property.hpp"

#include <cstdio>

namespace parqc {
namespace {

struct ThreadEvalState {
  const std::atomic<std::uint64_t>* epoch = nullptr;
  std::uint64_t expected = 0;
  int depth = 0;
  bool active = false;
};

thread_local ThreadEvalState tl_eval;

}  // namespace

namespace detail {

bool in_evaluation() { return tl_eval.active; }

bool cancel_requested() {
  return tl_eval.epoch != nullptr &&
         tl_eval.epoch->load(std::memory_order_acquire) != tl_eval.expected;
}

void enter_graceful() { ++tl_eval.depth; }

void exit_graceful() { --tl_eval.depth; }

void log_handler_failure(const char* what) noexcept {
  std::fprintf(stderr, "parqc: cleanup handler failed: %s\n", what);
}

}  // namespace detail

int graceful_depth() { return tl_eval.depth; }

void poll_cancellation() {
  if (!detail::in_evaluation())
    throw std::logic_error("poll_cancellation: no active property evaluation");
  if (detail::cancel_requested()) throw EvaluationAborted{};
}

EvalScope::EvalScope(const std::atomic<std::uint64_t>* epoch,
                     std::uint64_t expected)
    : saved_epoch_(tl_eval.epoch),
      saved_expected_(tl_eval.expected),
      saved_depth_(tl_eval.depth),
      saved_active_(tl_eval.active) {
  tl_eval = ThreadEvalState{epoch, expected, 0, true};
}

EvalScope::~EvalScope() {
  tl_eval = ThreadEvalState{saved_epoch_, saved_expected_, saved_depth_,
                            saved_active_};
}

}  // namespace parqc
