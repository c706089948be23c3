// Copyright 2026 The parqc Authors
// Licensed under the Apache License, Version 2.0

#include "parqc/expr.hpp"

#include <utility>

namespace parqc {

Expr Expr::lit(std::int64_t v) { return Expr{Kind::Lit, v, {}}; }

Expr Expr::var(std::int64_t index) { return Expr{Kind::Var, index, {}}; }

Expr Expr::add(Expr l, Expr r) {
  Expr e{Kind::Add, 0, {}};
  e.kids.push_back(std::move(l));
  e.kids.push_back(std::move(r));
  return e;
}

Expr Expr::mul(Expr l, Expr r) {
  Expr e{Kind::Mul, 0, {}};
  e.kids.push_back(std::move(l));
  e.kids.push_back(std::move(r));
  return e;
}

Expr Expr::if_zero(Expr c, Expr t, Expr e) {
  Expr out{Kind::IfZero, 0, {}};
  out.kids.push_back(std::move(c));
  out.kids.push_back(std::move(t));
  out.kids.push_back(std::move(e));
  return out;
}

int node_count(const Expr& e) {
  int n = 1;
  for (const Expr& k : e.kids) n += node_count(k);
  return n;
}

std::int64_t eval_expr(const Expr& e, std::span<const std::int64_t> env) {
  switch (e.kind) {
    case Expr::Kind::Lit:
      return e.value;
    case Expr::Kind::Var: {
      const auto idx = static_cast<std::uint64_t>(e.value) % env.size();
      return env[idx];
    }
    case Expr::Kind::Add: {
      const auto l = static_cast<std::uint64_t>(eval_expr(e.kids[0], env));
      const auto r = static_cast<std::uint64_t>(eval_expr(e.kids[1], env));
      return static_cast<std::int64_t>(l + r);
    }
    case Expr::Kind::Mul: {
      const auto l = static_cast<std::uint64_t>(eval_expr(e.kids[0], env));
      const auto r = static_cast<std::uint64_t>(eval_expr(e.kids[1], env));
      return static_cast<std::int64_t>(l * r);
    }
    case Expr::Kind::IfZero:
      return eval_expr(e.kids[0], env) == 0 ? eval_expr(e.kids[1], env)
                                            : eval_expr(e.kids[2], env);
  }
  return 0;
}

std::string show_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Lit:
      return "(lit " + std::to_string(e.value) + ")";
    case Expr::Kind::Var:
      return "(var " + std::to_string(e.value) + ")";
    case Expr::Kind::Add:
      return "(add " + show_expr(e.kids[0]) + " " + show_expr(e.kids[1]) + ")";
    case Expr::Kind::Mul:
      return "(mul " + show_expr(e.kids[0]) + " " + show_expr(e.kids[1]) + ")";
    case Expr::Kind::IfZero:
      return "(if0 " + show_expr(e.kids[0]) + " " + show_expr(e.kids[1]) +
             " " + show_expr(e.kids[2]) + ")";
  }
  return "";
}

namespace {

struct GenState {
  Seed seed;

  std::int64_t draw(std::int64_t lo, std::int64_t hi) {
    const BoundedDraw d = bounded(seed, lo, hi);
    seed = d.next;
    return d.value;
  }
};

Expr gen_leaf(GenState& g) {
  if (g.draw(0, 2) < 2) return Expr::lit(g.draw(-8, 8));
  return Expr::var(g.draw(0, 2));
}

Expr gen_node(GenState& g, int budget) {
  if (budget <= 2) return gen_leaf(g);
  // Weights: lit 15, var 10, add 25, mul 20, if0 30.
  const std::int64_t roll = g.draw(0, 99);
  if (roll < 15) return Expr::lit(g.draw(-8, 8));
  if (roll < 25) return Expr::var(g.draw(0, 2));
  if (roll < 70 || budget < 4) {
    const bool is_add = roll < 50;
    const std::int64_t left = g.draw(1, budget - 2);
    Expr l = gen_node(g, static_cast<int>(left));
    Expr r = gen_node(g, budget - 1 - static_cast<int>(left));
    return is_add ? Expr::add(std::move(l), std::move(r))
                  : Expr::mul(std::move(l), std::move(r));
  }
  const std::int64_t rest = budget - 1;
  const std::int64_t c = g.draw(1, rest - 2);
  const std::int64_t t = g.draw(1, rest - c - 1);
  Expr cond = gen_node(g, static_cast<int>(c));
  Expr then = gen_node(g, static_cast<int>(t));
  Expr els = gen_node(g, static_cast<int>(rest - c - t));
  return Expr::if_zero(std::move(cond), std::move(then), std::move(els));
}

}  // namespace

Gen<Expr> gen_expr() {
  return {[](Seed s, int size) {
    GenState g{s};
    return gen_node(g, size);
  }};
}

std::vector<Expr> shrink_expr(const Expr& e) {
  std::vector<Expr> out;
  if (e.kids.empty()) return out;
  for (const Expr& k : e.kids) out.push_back(k);
  for (std::size_t i = 0; i < e.kids.size(); ++i) {
    for (Expr& alt : shrink_expr(e.kids[i])) {
      Expr cand = e;
      cand.kids[i] = std::move(alt);
      out.push_back(std::move(cand));
    }
  }
  return out;
}

Shrinker<Expr> expr_shrinker() {
  return {[](const Expr& e) { return shrink_expr(e); }};
}

}  // namespace parqc
