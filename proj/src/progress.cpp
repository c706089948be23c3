// Copyright 2026 The parqc Authors
// Licensed under the Apache License, Version 2.0

#include "parqc/progress.hpp"

#include <cstdio>

namespace parqc {

std::string format_progress_line(const ProgressSnapshot& snap) {
  std::string line;
  line += "[";
  line += std::to_string(snap.elapsed_ms);
  line += "ms] ";
  line += snap.phase == RunPhase::Shrinking ? "Shrinking" : "Testing";
  line += ": ";
  line += std::to_string(snap.passed);
  line += " passed, ";
  line += std::to_string(snap.discarded);
  line += " discarded, ";
  line += std::to_string(snap.shrink_steps);
  line += " shrinks";
  return line;
}

OutputSink stdout_sink() {
  return [](const std::string& line) {
    std::fputs(line.c_str(), stdout);
    std::fputc('\n', stdout);
    std::fflush(stdout);
  };
}

ProgressReporter::ProgressReporter(const RunCounters* counters, int period_ms,
                                   OutputSink sink)
    : counters_(counters),
      period_(period_ms),
      sink_(std::move(sink)),
      start_(std::chrono::steady_clock::now()),
      thread_([this] { run(); }) {}

ProgressReporter::~ProgressReporter() { stop(); }

void ProgressReporter::stop() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    stopping_ = true;
  }
  cv_.notify_all();
  if (thread_.joinable()) thread_.join();
}

void ProgressReporter::run() {
  std::unique_lock<std::mutex> lock(mu_);
  for (;;) {
    if (cv_.wait_for(lock, period_, [this] { return stopping_; })) return;
    ProgressSnapshot snap;
    snap.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - start_)
                          .count();
    snap.phase = static_cast<RunPhase>(
        counters_->phase.load(std::memory_order_relaxed));
    snap.passed = counters_->passed.load(std::memory_order_relaxed);
    snap.discarded = counters_->discarded.load(std::memory_order_relaxed);
    snap.shrink_steps =
        counters_->shrink_steps.load(std::memory_order_relaxed);
    lock.unlock();
    try {
      sink_(format_progress_line(snap));
    } catch (...) {
      return;  // a broken sink silences reporting, it must not abort the run
    }
    lock.lock();
  }
}

}  // namespace parqc
