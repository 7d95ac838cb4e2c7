#pragma once

// Independent ground-truth oracles: complete configuration enumeration for a
// block type, and exact brute-force scheduling over expanded job/machine
// multisets.  Everything here is meant to be slow, obvious, and correct; the
// engine is tested against these, never the other way around.

#include "hmsched/instance.hpp"
#include "hmsched/nfold.hpp"

#include <chrono>
#include <map>
#include <utility>
#include <vector>

namespace hmsched {

struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OracleBudget {
  long long max_configurations = 1000000;  // enumeration steps, not just hits
  long long max_assignments = 10000000;
  long long max_seconds = 3600;
};

namespace detail {

// One-sided-infinite interval arithmetic for enumeration pruning.
// lo == nullopt means -infinity, hi == nullopt means +infinity.
struct SumInterval {
  std::optional<Int> lo = Int(0);
  std::optional<Int> hi = Int(0);
};

// Contribution interval of coef * c over c in [l, u].
inline SumInterval contribution_interval(const Int& coef, const Int& l,
                                         const UBound& u) {
  SumInterval iv;
  if (coef == 0) return iv;  // [0, 0]
  if (coef > 0) {
    iv.lo = coef * l;
    iv.hi = u.has_value() ? std::optional<Int>(coef * *u) : std::nullopt;
  } else {
    iv.lo = u.has_value() ? std::optional<Int>(coef * *u) : std::nullopt;
    iv.hi = coef * l;
  }
  return iv;
}

inline SumInterval interval_add(const SumInterval& a, const SumInterval& b) {
  SumInterval s;
  s.lo = (a.lo && b.lo) ? std::optional<Int>(*a.lo + *b.lo) : std::nullopt;
  s.hi = (a.hi && b.hi) ? std::optional<Int>(*a.hi + *b.hi) : std::nullopt;
  return s;
}

}  // namespace detail

// Complete list of solutions of  E2 c = b, l <= c <= u  in lexicographic
// order.  Depth-first over coordinates with exact per-row interval
// propagation; a coordinate whose effective range stays infinite after
// propagation aborts (the scheduling model builders never produce one, but
// a malformed generic block could).  The budget counts enumeration steps.
inline std::vector<IntVec> enumerate_configurations(
    const BlockType& blk, const OracleBudget& budget = {}) {
  const std::size_t s = blk.E2.rows();
  const std::size_t t = blk.E2.cols();

  // suffix[j][row]: interval of sum_{q >= j} E2[row][q] * c_q over the box.
  std::vector<std::vector<detail::SumInterval>> suffix(
      t + 1, std::vector<detail::SumInterval>(s));
  for (std::size_t j = t; j-- > 0;)
    for (std::size_t row = 0; row < s; ++row)
      suffix[j][row] = detail::interval_add(
          suffix[j + 1][row],
          detail::contribution_interval(blk.E2.at(row, j), blk.l[j], blk.u[j]));

  std::vector<IntVec> out;
  IntVec c(t);
  IntVec residual = blk.b;  // b - E2 * (fixed prefix)
  long long work = 0;
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::seconds(budget.max_seconds);

  auto step = [&]() {
    if (++work > budget.max_configurations)
      throw budget_error("enumerate_configurations: step budget exceeded");
    if ((work & 0xfff) == 0 && std::chrono::steady_clock::now() > deadline)
      throw budget_error("enumerate_configurations: time budget exceeded");
  };

  auto rec = [&](auto&& self, std::size_t j) -> void {
    step();
    if (j == t) {
      if (is_zero(residual)) out.push_back(c);
      return;
    }
    // Row-interval prune: the suffix must still be able to meet residual.
    for (std::size_t row = 0; row < s; ++row) {
      const auto& iv = suffix[j][row];
      if (iv.lo && residual[row] < *iv.lo) return;
      if (iv.hi && residual[row] > *iv.hi) return;
    }
    // Effective bounds for c_j from every row, given what coords > j can do.
    Int lo = blk.l[j];
    UBound hi = blk.u[j];
    for (std::size_t row = 0; row < s; ++row) {
      const Int& coef = blk.E2.at(row, j);
      if (coef == 0) continue;
      const auto& rest = suffix[j + 1][row];
      // coef * c_j must lie in [residual - rest.hi, residual - rest.lo]
      if (rest.hi) {
        const Int bound = residual[row] - *rest.hi;  // coef*c_j >= bound
        if (coef > 0)
          lo = int_max(lo, ceil_div(bound, coef));
        else
          hi = ub_min(hi, floor_div(bound, coef));
      }
      if (rest.lo) {
        const Int bound = residual[row] - *rest.lo;  // coef*c_j <= bound
        if (coef > 0)
          hi = ub_min(hi, floor_div(bound, coef));
        else
          lo = int_max(lo, ceil_div(bound, coef));
      }
    }
    if (!hi.has_value())
      throw budget_error(
          "enumerate_configurations: coordinate with unbounded range");
    for (Int v = lo; v <= *hi; ++v) {
      c[j] = v;
      for (std::size_t row = 0; row < s; ++row)
        residual[row] -= blk.E2.at(row, j) * v;
      self(self, j + 1);
      for (std::size_t row = 0; row < s; ++row)
        residual[row] += blk.E2.at(row, j) * v;
    }
    c[j] = 0;
  };
  rec(rec, 0);
  return out;
}

// Same, tagged with the block-type index.
inline std::vector<Configuration> enumerate_configurations(
    const HugeNFoldInstance& inst, std::size_t type,
    const OracleBudget& budget = {}) {
  require(type < inst.blocks.size(), "enumerate_configurations: type index");
  std::vector<Configuration> out;
  for (IntVec& c : enumerate_configurations(inst.blocks[type], budget))
    out.push_back(Configuration{type, std::move(c)});
  return out;
}

// --- exact brute-force scheduling -------------------------------------------

struct BruteScheduleResult {
  Int optimum = 0;
  // Expanded machines in kind order; assignment[q] = job counts per type.
  std::vector<std::size_t> machine_kinds;
  std::vector<IntVec> assignment;
};

// Exact optimum of the instance's objective over every assignment of the job
// multiset to the expanded machines.  Dynamic program over (machine position,
// residual job counts); identical jobs are interchangeable by construction,
// identical machines just share memoized states.
inline BruteScheduleResult brute_schedule(const SchedulingInstance& inst,
                                          const OracleBudget& budget = {}) {
  BruteScheduleResult res;
  for (std::size_t ki = 0; ki < inst.kappa; ++ki)
    for (Int q = 0; q < inst.m[ki]; ++q) res.machine_kinds.push_back(ki);
  const std::size_t machines = res.machine_kinds.size();
  const bool makespan = inst.objective == Objective::Cmax;

  long long work = 0;
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::seconds(budget.max_seconds);
  auto step = [&]() {
    if (++work > budget.max_assignments)
      throw budget_error("brute_schedule: assignment budget exceeded");
    if ((work & 0xfff) == 0 && std::chrono::steady_clock::now() > deadline)
      throw budget_error("brute_schedule: time budget exceeded");
  };

  // value(q, v): best objective for machines q.. with residual jobs v;
  // nullopt encodes "cannot place everything" (only when q == machines).
  std::map<std::pair<std::size_t, IntVec>, std::optional<Int>> memo;
  auto machine_value = [&](std::size_t kind, const IntVec& x) {
    return makespan ? single_machine_load(inst, kind, x)
                    : single_machine_cost(inst, kind, x);
  };
  auto combine = [&](const Int& here, const Int& rest) {
    return makespan ? int_max(here, rest) : Int(here + rest);
  };

  auto value = [&](auto&& self, std::size_t q,
                   const IntVec& v) -> std::optional<Int> {
    if (q == machines) {
      if (is_zero(v)) return Int(0);
      return std::nullopt;
    }
    auto key = std::make_pair(q, v);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::optional<Int> best;
    IntVec x(inst.tau, Int(0));
    while (true) {  // odometer over all x <= v
      step();
      IntVec rest(inst.tau);
      for (std::size_t j = 0; j < inst.tau; ++j) rest[j] = v[j] - x[j];
      auto tail = self(self, q + 1, rest);
      if (tail) {
        Int total = combine(machine_value(res.machine_kinds[q], x), *tail);
        if (!best || total < *best) best = total;
      }
      std::size_t j = 0;
      while (j < inst.tau && x[j] == v[j]) x[j++] = 0;
      if (j == inst.tau) break;
      ++x[j];
    }
    memo[key] = best;
    return best;
  };

  auto opt = value(value, 0, inst.n);
  require(opt.has_value(), "brute_schedule: no assignment found");
  res.optimum = *opt;

  // Witness: walk the table again, picking the lexicographically smallest
  // per-machine multiset achieving the optimum at every step.
  IntVec v = inst.n;
  Int target = res.optimum;
  for (std::size_t q = 0; q < machines; ++q) {
    IntVec x(inst.tau, Int(0));
    bool found = false;
    while (!found) {
      IntVec rest(inst.tau);
      for (std::size_t j = 0; j < inst.tau; ++j) rest[j] = v[j] - x[j];
      auto tail = value(value, q + 1, rest);
      if (tail &&
          combine(machine_value(res.machine_kinds[q], x), *tail) <= target) {
        res.assignment.push_back(x);
        v = rest;
        if (!makespan) target -= machine_value(res.machine_kinds[q], x);
        found = true;
        break;
      }
      std::size_t j = 0;
      while (j < inst.tau && x[j] == v[j]) x[j++] = 0;
      if (j == inst.tau) break;
      ++x[j];
    }
    require(found, "brute_schedule: witness reconstruction failed");
  }
  require(is_zero(v), "brute_schedule: witness leaves jobs unassigned");
  return res;
}

}  // namespace hmsched
