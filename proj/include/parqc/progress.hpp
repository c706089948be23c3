// Copyright 2026 The parqc Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <string>
#include <thread>

namespace parqc {

enum class RunPhase : int { Testing = 0, Shrinking = 1 };

/// Live counters shared between testers and the progress reporter.
/// Testers only ever increment; the reporter only reads, so observed
/// values are monotone within a run.
struct RunCounters {
  std::atomic<std::int64_t> passed{0};
  std::atomic<std::int64_t> discarded{0};
  std::atomic<std::int64_t> shrink_steps{0};
  std::atomic<int> phase{static_cast<int>(RunPhase::Testing)};
};

struct ProgressSnapshot {
  std::int64_t elapsed_ms = 0;
  RunPhase phase = RunPhase::Testing;
  std::int64_t passed = 0;
  std::int64_t discarded = 0;
  std::int64_t shrink_steps = 0;
};

/// "[<elapsed_ms>ms] <phase>: <p> passed, <d> discarded, <s> shrinks"
std::string format_progress_line(const ProgressSnapshot& snap);

/// Receives one complete output line (no trailing newline) per call.
using OutputSink = std::function<void(const std::string&)>;

/// Writes the line and a newline to stdout.
OutputSink stdout_sink();

/// Emits at most one status line per period on a dedicated thread.
/// A throwing sink disables further emission but never tears down the run.
class ProgressReporter {
 public:
  ProgressReporter(const RunCounters* counters, int period_ms, OutputSink sink);
  ~ProgressReporter();

  ProgressReporter(const ProgressReporter&) = delete;
  ProgressReporter& operator=(const ProgressReporter&) = delete;

  /// Idempotent; joins the reporter thread. No line is emitted after return.
  void stop();

 private:
  void run();

  const RunCounters* counters_;
  std::chrono::milliseconds period_;
  OutputSink sink_;
  std::chrono::steady_clock::time_point start_;
  std::mutex mu_;
  std::condition_variable cv_;
  bool stopping_ = false;
  std::thread thread_;
};

}  // namespace parqc
