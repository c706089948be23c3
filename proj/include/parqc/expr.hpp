// Copyright 2026 The parqc Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "parqc/gen.hpp"

namespace parqc {

/// Small arithmetic language used as a structured test value: integer
/// literals, environment variables, addition, multiplication, and an
/// if-zero conditional. Plain value semantics; kids holds 2 children for
/// add/mul and 3 (condition, then, else) for if_zero.
struct Expr {
  enum class Kind { Lit, Var, Add, Mul, IfZero };

  Kind kind = Kind::Lit;
  std::int64_t value = 0;  // Lit payload or Var index
  std::vector<Expr> kids;

  static Expr lit(std::int64_t v);
  static Expr var(std::int64_t index);
  static Expr add(Expr l, Expr r);
  static Expr mul(Expr l, Expr r);
  static Expr if_zero(Expr c, Expr t, Expr e);

  friend bool operator==(const Expr&, const Expr&) = default;
};

/// Total constructor count; at least 1, and strictly larger than any
/// subterm's count.
int node_count(const Expr& e);

/// Arithmetic wraps modulo 2^64; variable indices wrap modulo env.size().
/// env must be non-empty.
std::int64_t eval_expr(const Expr& e, std::span<const std::int64_t> env);

/// Prefix form, e.g. "(add (lit 3) (var 0))" and "(if0 c t e)".
std::string show_expr(const Expr& e);

/// Random expression with at most max(size, 1) nodes; size 0 produces a
/// single leaf.
Gen<Expr> gen_expr();

/// Subterm candidates first (in child order), then each child shrunk in
/// place. Leaves do not shrink, so every candidate strictly decreases
/// node_count.
std::vector<Expr> shrink_expr(const Expr& e);

Shrinker<Expr> expr_shrinker();

}  // namespace parqc
