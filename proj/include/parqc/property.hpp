// Copyright 2026 The parqc Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>

namespace parqc {

struct Outcome {
  enum class Kind { Pass, Fail, Discard };

  Kind kind = Kind::Pass;
  std::string reason;  // Fail only

  static Outcome pass() { return {Kind::Pass, {}}; }
  static Outcome fail(std::string reason) {
    return {Kind::Fail, std::move(reason)};
  }
  static Outcome discard() { return {Kind::Discard, {}}; }

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

/// A property maps a generated value to Pass, Fail, or Discard. check may
/// perform effects; exceptions it throws are reported as Fail.
template <typename T>
struct Property {
  std::function<Outcome(const T&)> check;
};

/// Thrown through a property when the runtime aborts its evaluation.
/// Deliberately not derived from std::exception: ordinary error handling
/// inside properties must not swallow the abort channel.
struct EvaluationAborted {};

/// Discard forced when cond is false; the body is not consulted. Otherwise
/// the body decides.
template <typename BodyFn>
Outcome precondition(bool cond, BodyFn&& body) {
  if (!cond) return Outcome::discard();
  return std::forward<BodyFn>(body)();
}

namespace detail {

bool in_evaluation();
bool cancel_requested();
void enter_graceful();
void exit_graceful();
void log_handler_failure(const char* what) noexcept;

}  // namespace detail

/// Nesting depth of live graceful frames on this thread; 0 outside any
/// action and after every completed evaluation.
int graceful_depth();

/// Abort delivery point for effectful properties: throws EvaluationAborted
/// once this evaluation's result can no longer be used. Callable only
/// inside a property evaluation.
void poll_cancellation();

/// Runs action; if the runtime aborts mid-action, handler runs exactly once
/// before the abort continues unwinding (innermost handler first). When the
/// action completes, or throws an ordinary exception, the handler does not
/// run. Aborts are also delivered on entry (before the action starts) and
/// after completion. Handler failures are logged and swallowed. Callable
/// only inside a property evaluation.
template <typename ActionFn, typename HandlerFn>
auto graceful(ActionFn&& action, HandlerFn&& handler)
    -> decltype(std::forward<ActionFn>(action)()) {
  if (!detail::in_evaluation())
    throw std::logic_error("graceful: no active property evaluation");
  if (detail::cancel_requested()) throw EvaluationAborted{};
  const auto run_handler_once = [&handler]() noexcept {
    try {
      handler();
    } catch (const std::exception& e) {
      detail::log_handler_failure(e.what());
    } catch (...) {
      detail::log_handler_failure("non-standard exception");
    }
  };
  detail::enter_graceful();
  if constexpr (std::is_void_v<decltype(std::forward<ActionFn>(action)())>) {
    try {
      std::forward<ActionFn>(action)();
    } catch (const EvaluationAborted&) {
      run_handler_once();
      detail::exit_graceful();
      throw;
    } catch (...) {
      detail::exit_graceful();
      throw;
    }
    detail::exit_graceful();
    if (detail::cancel_requested()) throw EvaluationAborted{};
  } else {
    using Result = decltype(std::forward<ActionFn>(action)());
    static_assert(!std::is_reference_v<Result>,
                  "graceful actions must return by value or void");
    std::optional<Result> result;
    try {
      result.emplace(std::forward<ActionFn>(action)());
    } catch (const EvaluationAborted&) {
      run_handler_once();
      detail::exit_graceful();
      throw;
    } catch (...) {
      detail::exit_graceful();
      throw;
    }
    detail::exit_graceful();
    if (detail::cancel_requested()) throw EvaluationAborted{};
    return std::move(*result);
  }
}

/// RAII binding of the ambient evaluation state runners wrap around each
/// property call. The epoch pointer may be null (never cancelled); the
/// evaluation counts as cancelled once *epoch != expected.
class EvalScope {
 public:
  EvalScope(const std::atomic<std::uint64_t>* epoch, std::uint64_t expected);
  ~EvalScope();

  EvalScope(const EvalScope&) = delete;
  EvalScope& operator=(const EvalScope&) = delete;

 private:
  const std::atomic<std::uint64_t>* saved_epoch_;
  std::uint64_t saved_expected_;
  int saved_depth_;
  bool saved_active_;
};

struct EvalResult {
  bool aborted = false;
  Outcome outcome;
};

/// Runs one property evaluation under an EvalScope. Ordinary exceptions
/// from check become Fail; an abort delivered through the cancellation
/// epoch yields aborted = true with no outcome.
template <typename T>
EvalResult evaluate_property(const Property<T>& p, const T& value,
                             const std::atomic<std::uint64_t>* epoch = nullptr,
                             std::uint64_t expected = 0) {
  EvalScope scope(epoch, expected);
  try {
    return {false, p.check(value)};
  } catch (const EvaluationAborted&) {
    return {true, {}};
  } catch (const std::exception& e) {
    return {false, Outcome::fail(std::string("exception: ") + e.what())};
  } catch (...) {
    return {false, Outcome::fail("non-standard exception")};
  }
}

}  // namespace parqc
