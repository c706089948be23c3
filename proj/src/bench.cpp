// Copyright 2026 The parqc Authors
// Licensed under the Apache License, Version 2.0

#include "parqc/bench.hpp"

#include <unistd.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>
#include <variant>

#include "parqc/par_runner.hpp"
#include "parqc/seq_runner.hpp"
#include "parqc/shrink.hpp"

namespace parqc::bench {
namespace {

std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) +
                                   static_cast<std::uint64_t>(b));
}

std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) *
                                   static_cast<std::uint64_t>(b));
}

bool is_lit(const Expr& e) { return e.kind == Expr::Kind::Lit; }

Expr simplify_impl(const Expr& e, bool buggy) {
  switch (e.kind) {
    case Expr::Kind::Lit:
    case Expr::Kind::Var:
      return e;
    case Expr::Kind::Add: {
      Expr l = simplify_impl(e.kids[0], buggy);
      Expr r = simplify_impl(e.kids[1], buggy);
      if (is_lit(l) && is_lit(r)) return Expr::lit(wrap_add(l.value, r.value));
      if (is_lit(l) && l.value == 0) return r;
      if (is_lit(r) && r.value == 0) return l;
      return Expr::add(std::move(l), std::move(r));
    }
    case Expr::Kind::Mul: {
      Expr l = simplify_impl(e.kids[0], buggy);
      Expr r = simplify_impl(e.kids[1], buggy);
      if (is_lit(l) && is_lit(r)) return Expr::lit(wrap_mul(l.value, r.value));
      // Dropping the other operand is sound because evaluation is total.
      if ((is_lit(l) && l.value == 0) || (is_lit(r) && r.value == 0))
        return Expr::lit(0);
      if (is_lit(l) && l.value == 1) return r;
      if (is_lit(r) && r.value == 1) return l;
      return Expr::mul(std::move(l), std::move(r));
    }
    case Expr::Kind::IfZero: {
      Expr c = simplify_impl(e.kids[0], buggy);
      Expr t = simplify_impl(e.kids[1], buggy);
      Expr f = simplify_impl(e.kids[2], buggy);
      if (is_lit(c)) {
        if (buggy) return t;  // the planted defect: condition value ignored
        return c.value == 0 ? t : f;
      }
      return Expr::if_zero(std::move(c), std::move(t), std::move(f));
    }
  }
  throw std::logic_error("unknown expression kind");
}

void busy_spin_ms(int ms) {
  const auto end =
      std::chrono::steady_clock::now() + std::chrono::milliseconds(ms);
  std::uint64_t x = 0x9e3779b97f4a7c15ull;
  while (std::chrono::steady_clock::now() < end) {
    for (int i = 0; i < 64; ++i)
      x = x * 6364136223846793005ull + 1442695040888963407ull;
  }
  volatile std::uint64_t sink = x;
  (void)sink;
}

std::string show_list(const std::vector<std::int64_t>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i != 0) out += ", ";
    out += std::to_string(xs[i]);
  }
  out += "]";
  return out;
}

/// Cons-cell measure: one constructor per element plus the element itself
/// plus the terminating nil.
std::int64_t list_size(const std::vector<std::int64_t>& xs) {
  return 2 * static_cast<std::int64_t>(xs.size()) + 1;
}

std::filesystem::path fresh_temp_dir() {
  static std::atomic<std::uint64_t> counter{0};
  std::ostringstream name;
  name << "parqc-bench-" << ::getpid() << "-"
       << counter.fetch_add(1, std::memory_order_relaxed);
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / name.str();
  std::filesystem::create_directories(dir);
  return dir;
}

struct ScopeGuard {
  std::function<void()> fn;
  ~ScopeGuard() {
    if (fn) fn();
  }
};

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const int n = std::snprintf(buf.data(), buf.size(), "%.6g", v);
  return std::string(buf.data(), static_cast<std::size_t>(n));
}

template <typename T>
class TypedCase : public BenchCase {
 public:
  RunOutcome run_tests(const RunSettings& settings) const final {
    Session session = open_session(settings.plant_bug);
    ScopeGuard guard{std::move(session.finish)};
    Config cfg = base_config(settings);
    // With the bug planted the run measures time to find the failure, so
    // shrinking is switched off; the shrink activity is timed separately.
    const Shrinker<T> shr =
        settings.plant_bug
            ? Shrinker<T>{[](const T&) { return std::vector<T>{}; }}
            : shrinker();
    const RunHooks<T> hooks{[this](const T& v) { return show(v); },
                            settings.sink};
    const RunReport<T> report =
        settings.cores == 0
            ? run_sequential(session.prop, generator(), shr, cfg, hooks)
            : run_parallel(session.prop, generator(), shr, cfg, hooks);
    return summarize(report);
  }

  std::vector<ReplaySpec> collect_failing_seeds(Seed root, int count,
                                                int max_size) const final {
    if (!supports_bug())
      throw std::logic_error(std::string(name()) + " has no planted bug");
    if (count < 1 || max_size < 1)
      throw std::invalid_argument(
          "collect_failing_seeds: count and max_size must be positive");
    Session session = open_session(true);
    ScopeGuard guard{std::move(session.finish)};
    const Gen<T> gen = generator();
    std::vector<ReplaySpec> out;
    std::set<std::string> seen;
    Seed chain = root;
    const std::int64_t budget =
        static_cast<std::int64_t>(count) * 1000 + 10000;
    std::int64_t attempt = 0;
    for (; attempt < budget &&
           out.size() < static_cast<std::size_t>(count);
         ++attempt) {
      const int size = static_cast<int>(attempt % max_size);
      const SplitPair pair = split(chain);
      chain = pair.left;
      const T value = gen.run(pair.right, size);
      const EvalResult r = evaluate_property(session.prop, value);
      if (r.outcome.kind == Outcome::Kind::Fail &&
          seen.insert(show(value)).second) {
        out.push_back(ReplaySpec{pair.right, size});
      }
    }
    if (out.size() < static_cast<std::size_t>(count)) {
      std::ostringstream msg;
      msg << name() << ": found only " << out.size() << " of " << count
          << " distinct failing tests in " << attempt << " attempts";
      throw std::runtime_error(msg.str());
    }
    return out;
  }

  RunOutcome shrink_one(const ReplaySpec& spec,
                        const RunSettings& settings) const final {
    if (!supports_bug())
      throw std::logic_error(std::string(name()) + " has no planted bug");
    Session session = open_session(true);
    ScopeGuard guard{std::move(session.finish)};
    const T origin = generator().run(spec.seed, spec.size);
    const EvalResult r = evaluate_property(session.prop, origin);
    if (r.aborted || r.outcome.kind != Outcome::Kind::Fail)
      throw std::logic_error(std::string(name()) +
                             ": recorded test does not fail on replay");
    Config cfg = base_config(settings);
    const ShrinkReport<T> rep = detail::dispatch_shrink(
        session.prop, shrinker(), origin, cfg, nullptr);
    RunOutcome out;
    out.verdict = Verdict::Failure;
    out.tests_run = 1;
    out.shrink_steps = rep.successful_shrinks;
    out.candidates_evaluated = rep.candidates_evaluated;
    out.abandoned = rep.abandoned_evaluations;
    out.efficiency = rep.efficiency();
    out.result_size = size_of(rep.final);
    out.counterexample = show(rep.final);
    return out;
  }

 protected:
  /// Property plus an optional end-of-run cleanup.
  struct Session {
    Property<T> prop;
    std::function<void()> finish;
  };

  virtual Session open_session(bool plant_bug) const = 0;
  virtual Gen<T> generator() const = 0;
  virtual Shrinker<T> shrinker() const = 0;
  virtual std::string show(const T& value) const = 0;
  virtual std::int64_t size_of(const T& value) const = 0;

 private:
  Config base_config(const RunSettings& settings) const {
    Config cfg;
    cfg.max_success = settings.max_success.value_or(default_max_success());
    cfg.num_testers = std::max(settings.cores, 1);
    cfg.size_strategy = settings.size_strategy;
    cfg.shrink_strategy = settings.shrink_strategy;
    cfg.chatty = settings.chatty;
    cfg.root_seed = settings.root;
    return cfg;
  }

  RunOutcome summarize(const RunReport<T>& report) const {
    RunOutcome out;
    out.verdict = report.verdict;
    out.tests_run = report.tests_run;
    out.total_discards = report.total_discards;
    out.error = report.internal_error;
    if (report.failure) {
      const ShrinkReport<T>& sh = report.failure->shrink;
      out.shrink_steps = sh.successful_shrinks;
      out.candidates_evaluated = sh.candidates_evaluated;
      out.abandoned = sh.abandoned_evaluations;
      out.efficiency = sh.efficiency();
      out.result_size = size_of(sh.final);
      out.counterexample = show(sh.final);
    }
    return out;
  }
};

class ConstantCase final : public TypedCase<std::monostate> {
 public:
  std::string_view name() const override { return "constant"; }
  bool supports_bug() const override { return false; }
  int default_max_success() const override { return 100000; }

 protected:
  Session open_session(bool plant_bug) const override {
    if (plant_bug)
      throw std::logic_error("constant has no planted bug");
    return {Property<std::monostate>{
                [](const std::monostate&) { return Outcome::pass(); }},
            {}};
  }
  Gen<std::monostate> generator() const override {
    return {[](Seed, int) { return std::monostate{}; }};
  }
  Shrinker<std::monostate> shrinker() const override {
    return {[](const std::monostate&) {
      return std::vector<std::monostate>{};
    }};
  }
  std::string show(const std::monostate&) const override { return "()"; }
  std::int64_t size_of(const std::monostate&) const override { return 1; }
};

class SlowPureCase final : public TypedCase<std::vector<std::int64_t>> {
 public:
  std::string_view name() const override { return "slow_pure"; }
  bool supports_bug() const override { return true; }
  int default_max_success() const override { return 400; }

 protected:
  Session open_session(bool plant_bug) const override {
    return {Property<std::vector<std::int64_t>>{
                [plant_bug](const std::vector<std::int64_t>& xs) {
                  busy_spin_ms(5);
                  if (plant_bug && xs.size() >= 10)
                    return Outcome::fail("list of length >= 10");
                  return Outcome::pass();
                }},
            {}};
  }
  Gen<std::vector<std::int64_t>> generator() const override {
    return gen_list(gen_int(-1000, 1000));
  }
  Shrinker<std::vector<std::int64_t>> shrinker() const override {
    return list_shrinker<std::int64_t>(int_shrinker());
  }
  std::string show(const std::vector<std::int64_t>& xs) const override {
    return show_list(xs);
  }
  std::int64_t size_of(const std::vector<std::int64_t>& xs) const override {
    return list_size(xs);
  }
};

class ExprBugCase final : public TypedCase<Expr> {
 public:
  std::string_view name() const override { return "expr_bug"; }
  bool supports_bug() const override { return true; }
  int default_max_success() const override { return 1000; }

 protected:
  Session open_session(bool plant_bug) const override {
    return {Property<Expr>{[plant_bug](const Expr& e) {
              const Expr s = plant_bug ? simplify_buggy(e) : simplify(e);
              if (eval_expr(s, bench_env()) != eval_expr(e, bench_env()))
                return Outcome::fail("simplification changed the value");
              return Outcome::pass();
            }},
            {}};
  }
  Gen<Expr> generator() const override { return gen_expr(); }
  Shrinker<Expr> shrinker() const override { return expr_shrinker(); }
  std::string show(const Expr& e) const override { return show_expr(e); }
  std::int64_t size_of(const Expr& e) const override {
    return node_count(e);
  }
};

class EffectfulCase final : public TypedCase<std::vector<std::int64_t>> {
 public:
  std::string_view name() const override { return "effectful_tmp"; }
  bool supports_bug() const override { return true; }
  int default_max_success() const override { return 400; }

 protected:
  Session open_session(bool plant_bug) const override {
    const std::filesystem::path dir = fresh_temp_dir();
    auto stats = std::make_shared<EffectfulStats>();
    Property<std::vector<std::int64_t>> inner =
        effectful_property(dir, stats.get(), plant_bug);
    Session session;
    // stats is captured here so it outlives every property evaluation.
    session.prop = {[inner = std::move(inner),
                     stats](const std::vector<std::int64_t>& xs) {
      return inner.check(xs);
    }};
    session.finish = [dir] {
      std::error_code ec;
      std::filesystem::remove_all(dir, ec);
    };
    return session;
  }
  Gen<std::vector<std::int64_t>> generator() const override {
    return gen_list(gen_int(-1000, 1000));
  }
  Shrinker<std::vector<std::int64_t>> shrinker() const override {
    return list_shrinker<std::int64_t>(int_shrinker());
  }
  std::string show(const std::vector<std::int64_t>& xs) const override {
    return show_list(xs);
  }
  std::int64_t size_of(const std::vector<std::int64_t>& xs) const override {
    return list_size(xs);
  }
};

}  // namespace

Expr simplify(const Expr& e) { return simplify_impl(e, false); }

Expr simplify_buggy(const Expr& e) { return simplify_impl(e, true); }

std::span<const std::int64_t> bench_env() {
  static constexpr std::array<std::int64_t, 3> env{3, -1, 7};
  return env;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

Property<std::vector<std::int64_t>> effectful_property(
    const std::filesystem::path& dir, EffectfulStats* stats, bool plant_bug) {
  auto counter = std::make_shared<std::atomic<std::uint64_t>>(0);
  return {[dir, stats, plant_bug,
           counter](const std::vector<std::int64_t>& xs) {
    std::ostringstream name;
    name << "val_" << std::this_thread::get_id() << "_"
         << counter->fetch_add(1, std::memory_order_relaxed) << ".tmp";
    const std::filesystem::path file = dir / name.str();
    const bool round_trip_ok = graceful(
        [&]() -> bool {
          if (stats) stats->started.fetch_add(1, std::memory_order_relaxed);
          {
            std::ofstream out(file, std::ios::binary | std::ios::trunc);
            if (!out)
              throw std::runtime_error("cannot open " + file.string());
            for (const std::int64_t v : xs) {
              poll_cancellation();
              out.write(reinterpret_cast<const char*>(&v), sizeof v);
              out.flush();
            }
          }
          poll_cancellation();
          std::vector<std::int64_t> back;
          {
            std::ifstream in(file, std::ios::binary);
            std::int64_t v = 0;
            while (in.read(reinterpret_cast<char*>(&v), sizeof v))
              back.push_back(v);
          }
          std::error_code ec;
          std::filesystem::remove(file, ec);
          if (stats) stats->completed.fetch_add(1, std::memory_order_relaxed);
          return back == xs;
        },
        [&file, stats] {
          if (stats) stats->handlers.fetch_add(1, std::memory_order_relaxed);
          std::error_code ec;
          std::filesystem::remove(file, ec);
        });
    if (!round_trip_ok) return Outcome::fail("file round trip mismatch");
    if (plant_bug && xs.size() >= 3 && xs[0] % 2 == 0)
      return Outcome::fail("list of length >= 3 with even head");
    return Outcome::pass();
  }};
}

std::string csv_header() {
  return "benchmark,cores,size_strategy,shrink_strategy,repetition,phase,"
         "wall_ms,tests_run,shrink_steps,candidates_evaluated,abandoned,"
         "efficiency,result_size";
}

std::string csv_row(const PhaseRow& row) {
  std::ostringstream out;
  out << row.benchmark << ',' << row.cores << ',' << row.size_strategy << ','
      << row.shrink_strategy << ',' << row.repetition << ',' << row.phase
      << ',' << row.wall_ms << ',' << row.tests_run << ',' << row.shrink_steps
      << ',' << row.candidates_evaluated << ',' << row.abandoned << ',';
  if (row.efficiency) out << format_double(*row.efficiency);
  out << ',' << row.result_size;
  return out.str();
}

const std::vector<const BenchCase*>& all_cases() {
  static const ConstantCase constant_case;
  static const SlowPureCase slow_pure_case;
  static const ExprBugCase expr_bug_case;
  static const EffectfulCase effectful_case;
  static const std::vector<const BenchCase*> cases{
      &constant_case, &slow_pure_case, &expr_bug_case, &effectful_case};
  return cases;
}

const BenchCase* find_case(std::string_view name) {
  for (const BenchCase* c : all_cases()) {
    if (c->name() == name) return c;
  }
  return nullptr;
}

}  // namespace parqc::bench
