#pragma once

// Configuration LP and its integer companion.
//
//   min  sum_{i,c} f^i(c) y(i,c)
//   s.t. sum_i E1^i sum_c c y(i,c) = b0        (r linking rows)
//        sum_c y(i,c) = mu^i   for each type i (tau-bar convexity rows)
//        y >= 0
//
// solve_conflp prices columns on demand: the restricted master is solved by
// the exact two-phase simplex, then each type's pricing problem is solved at
// the master duals (alpha, beta); a configuration with f^i(c) - (alpha E1^i) c
// strictly below beta^i enters.  When the master is infeasible the same
// machinery runs on the phase-one Farkas duals with the objective zeroed, so
// either a column restoring feasibility is found or the certificate proves
// the full LP infeasible.  Termination: every accepted column is new and the
// configuration set of each type is finite.
//
// solve_confilp solves the integer version exactly over the full enumerated
// configuration sets (for desk-scale or kernelized instances) by a memoized
// search over (type, position in its column list, bricks left, residual b0).

#include "hmsched/nfold.hpp"
#include "hmsched/oracle.hpp"
#include "hmsched/separation.hpp"
#include "hmsched/simplex.hpp"

#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace hmsched {

struct DualPoint {
  RatVec alpha;  // linking-row duals, length r
  RatVec beta;   // convexity-row duals, length tau-bar
};

struct ConfLPSolution {
  std::map<Configuration, Rat> entries;  // support only: y(i,c) > 0
  Rat value;
  DualPoint duals;        // optimal duals certifying termination
  long long iterations;   // master LP solves
};

struct ConfMultiSolution {
  std::map<Configuration, Int> entries;  // support only: y(i,c) > 0
  Rat value;
};

// Pricing hook: minimize f^i(c) - (alpha E1^i) c over the block, or the same
// with f zeroed when `ignore_objective` is set (Farkas rounds).
using Pricer = std::function<std::optional<SeparationResult>(
    std::size_t type, const RatVec& alpha, bool ignore_objective)>;

inline Pricer model_pricer(const HugeNFoldInstance& inst,
                           const SepBudgets& budgets = {},
                           const OracleBudget& oracle_budget = {}) {
  return [&inst, budgets, oracle_budget](
             std::size_t type, const RatVec& alpha,
             bool ignore_objective) -> std::optional<SeparationResult> {
    PricingProblem pp{inst.blocks[type], alpha};
    if (ignore_objective) pp.block.f = QuadObjective::zero(pp.block.f.size());
    return separate(pp, inst.model, budgets, oracle_budget);
  };
}

namespace detail {

// Master column for configuration c of the given type: (E1^i c, e_type).
inline RatVec master_column(const HugeNFoldInstance& inst,
                            const Configuration& col) {
  RatVec a(inst.r + inst.tau_bar(), Rat(0));
  IntVec link = mat_vec(inst.blocks[col.type].E1, col.c);
  for (std::size_t i = 0; i < inst.r; ++i) a[i] = Rat(link[i]);
  a[inst.r + col.type] = 1;
  return a;
}

inline RatVec master_rhs(const HugeNFoldInstance& inst) {
  RatVec d(inst.r + inst.tau_bar());
  for (std::size_t i = 0; i < inst.r; ++i) d[i] = Rat(inst.b0[i]);
  for (std::size_t i = 0; i < inst.tau_bar(); ++i)
    d[inst.r + i] = Rat(inst.blocks[i].mu);
  return d;
}

}  // namespace detail

// Restricted master over an explicit column list.  Returns the simplex result
// (duals are optimal duals, or a Farkas certificate when infeasible).
inline LPResult master_lp_solve(const HugeNFoldInstance& inst,
                                const std::vector<Configuration>& cols) {
  std::vector<RatVec> columns;
  RatVec cost;
  columns.reserve(cols.size());
  cost.reserve(cols.size());
  for (const Configuration& col : cols) {
    columns.push_back(detail::master_column(inst, col));
    cost.push_back(inst.blocks[col.type].f.value(col.c));
  }
  return solve_lp_eq(columns, cost, detail::master_rhs(inst));
}

inline std::optional<ConfLPSolution> solve_conflp(
    const HugeNFoldInstance& inst, const Pricer& pricer) {
  const std::size_t types = inst.tau_bar();
  require(types >= 1, "configuration LP: no block types");

  std::vector<Configuration> cols;
  std::set<Configuration> seen;
  auto add_column = [&](std::size_t type, IntVec c) {
    Configuration col{type, std::move(c)};
    require(seen.insert(col).second,
            "configuration LP: pricing repeated a column");
    cols.push_back(std::move(col));
  };

  // Initial columns: one per type, priced at zero duals.
  const RatVec zero_alpha(inst.r, Rat(0));
  for (std::size_t i = 0; i < types; ++i) {
    auto found = pricer(i, zero_alpha, false);
    if (found) {
      add_column(i, std::move(found->c));
    } else if (inst.blocks[i].mu > 0) {
      return std::nullopt;  // bricks to place but no configuration exists
    }
  }

  long long iterations = 0;
  for (;;) {
    LPResult master = master_lp_solve(inst, cols);
    ++iterations;
    require(master.status != LPStatus::Unbounded,
            "configuration LP: master cannot be unbounded");

    const bool farkas = master.status == LPStatus::Infeasible;
    RatVec alpha(master.duals.begin(), master.duals.begin() + inst.r);
    bool added = false;
    for (std::size_t i = 0; i < types; ++i) {
      const Rat& beta_i = master.duals[inst.r + i];
      auto found = pricer(i, alpha, farkas);
      if (!found) continue;
      if (found->value < beta_i) {
        add_column(i, std::move(found->c));
        added = true;
      }
    }
    if (added) continue;

    if (farkas) return std::nullopt;  // certified: no column can help

    ConfLPSolution sol;
    sol.value = master.objective;
    sol.duals.alpha = std::move(alpha);
    sol.duals.beta.assign(master.duals.begin() + inst.r, master.duals.end());
    sol.iterations = iterations;
    for (std::size_t j = 0; j < cols.size(); ++j)
      if (master.x[j] != 0) sol.entries.emplace(cols[j], master.x[j]);
    require(sol.entries.size() <= inst.r + types,
            "configuration LP: vertex support exceeds the row count");
    return sol;
  }
}

inline std::optional<ConfLPSolution> solve_conflp(
    const HugeNFoldInstance& inst, const SepBudgets& budgets = {},
    const OracleBudget& oracle_budget = {}) {
  return solve_conflp(inst, model_pricer(inst, budgets, oracle_budget));
}

// Exact feasibility + value check of a fractional solution.
inline void check_conflp_solution(const HugeNFoldInstance& inst,
                                  const ConfLPSolution& sol) {
  RatVec link(inst.r, Rat(0));
  RatVec fill(inst.tau_bar(), Rat(0));
  Rat value(0);
  for (const auto& [col, y] : sol.entries) {
    require(y > 0, "configuration LP: support entry not positive");
    require(config_feasible(inst.blocks[col.type], col.c),
            "configuration LP: infeasible configuration in support");
    IntVec contrib = mat_vec(inst.blocks[col.type].E1, col.c);
    for (std::size_t i = 0; i < inst.r; ++i) link[i] += y * contrib[i];
    fill[col.type] += y;
    value += y * inst.blocks[col.type].f.value(col.c);
  }
  for (std::size_t i = 0; i < inst.r; ++i)
    require(link[i] == Rat(inst.b0[i]),
            "configuration LP: linking rows violated");
  for (std::size_t i = 0; i < inst.tau_bar(); ++i)
    require(fill[i] == Rat(inst.blocks[i].mu),
            "configuration LP: convexity rows violated");
  require(value == sol.value, "configuration LP: stated value is wrong");
}

// Dual-feasibility certificate: at the returned duals no configuration of any
// type prices below its beta.
inline bool check_conflp_certificate(const HugeNFoldInstance& inst,
                                     const ConfLPSolution& sol,
                                     const Pricer& pricer) {
  for (std::size_t i = 0; i < inst.tau_bar(); ++i) {
    auto found = pricer(i, sol.duals.alpha, false);
    if (found && found->value < sol.duals.beta[i]) return false;
  }
  return true;
}

// --- exhaustive baselines and the integer program ------------------------------

// All configurations of every type (budgets apply); canonical lex order.
inline std::vector<std::vector<IntVec>> enumerate_all_configurations(
    const HugeNFoldInstance& inst, const OracleBudget& budget = {}) {
  std::vector<std::vector<IntVec>> all;
  all.reserve(inst.tau_bar());
  for (const BlockType& blk : inst.blocks)
    all.push_back(enumerate_configurations(blk, budget));
  return all;
}

// One big LP over every configuration — the reference the column generation
// is tested against.
inline std::optional<ConfLPSolution> exhaustive_conflp(
    const HugeNFoldInstance& inst, const OracleBudget& budget = {}) {
  const auto all = enumerate_all_configurations(inst, budget);
  std::vector<Configuration> cols;
  for (std::size_t i = 0; i < all.size(); ++i)
    for (const IntVec& c : all[i]) cols.push_back(Configuration{i, c});
  LPResult res = master_lp_solve(inst, cols);
  if (res.status == LPStatus::Infeasible) return std::nullopt;
  require(res.status == LPStatus::Optimal,
          "configuration LP: exhaustive master cannot be unbounded");
  ConfLPSolution sol;
  sol.value = res.objective;
  sol.duals.alpha.assign(res.duals.begin(), res.duals.begin() + inst.r);
  sol.duals.beta.assign(res.duals.begin() + inst.r, res.duals.end());
  sol.iterations = 1;
  for (std::size_t j = 0; j < cols.size(); ++j)
    if (res.x[j] != 0) sol.entries.emplace(cols[j], res.x[j]);
  return sol;
}

// Plain recursive baseline for the integer program: every multiplicity split
// of every type is tried, no memoization, no pruning beyond the budget.
// Deliberately independent of the memoized search below so the two engines
// can be checked against each other.
inline std::optional<ConfMultiSolution> exhaustive_confilp(
    const HugeNFoldInstance& inst, const OracleBudget& budget = {}) {
  const auto all = enumerate_all_configurations(inst, budget);
  long long work = 0;
  std::optional<Rat> best;
  std::map<Configuration, Int> pick, best_pick;
  IntVec resid = inst.b0;
  const auto mu_of = [&](std::size_t ty) {
    return ty < inst.tau_bar() ? inst.blocks[ty].mu : Int(0);
  };

  auto rec = [&](auto&& self, std::size_t type, std::size_t pos,
                 const Int& left, const Rat& value) -> void {
    if (++work > budget.max_assignments)
      throw budget_error("exhaustive ILP: assignment budget exceeded");
    if (type == inst.tau_bar()) {
      if (is_zero(resid) && (!best || value < *best)) {
        best = value;
        best_pick = pick;
      }
      return;
    }
    const auto& cols = all[type];
    if (pos == cols.size()) {
      if (left == 0) self(self, type + 1, 0, mu_of(type + 1), value);
      return;
    }
    const IntVec link = mat_vec(inst.blocks[type].E1, cols[pos]);
    const Rat fc = inst.blocks[type].f.value(cols[pos]);
    const Configuration key{type, cols[pos]};
    for (Int take = 0; take <= left; ++take) {
      if (take > 0) {
        for (std::size_t i = 0; i < inst.r; ++i) resid[i] -= link[i];
        pick[key] = take;
      }
      self(self, type, pos + 1, Int(left - take), Rat(value + fc * take));
    }
    for (std::size_t i = 0; i < inst.r; ++i) resid[i] += left * link[i];
    pick.erase(key);
  };
  rec(rec, 0, 0, mu_of(0), Rat(0));

  if (!best) return std::nullopt;
  ConfMultiSolution sol;
  sol.value = *best;
  sol.entries = best_pick;
  return sol;
}

struct ConfILPBudget {
  long long max_states = 1000000;
};

namespace detail {

struct ConfILPState {
  std::size_t type;
  std::size_t pos;
  Int left;
  IntVec resid;
  bool operator<(const ConfILPState& o) const {
    if (type != o.type) return type < o.type;
    if (pos != o.pos) return pos < o.pos;
    if (left != o.left) return left < o.left;
    return resid < o.resid;
  }
};

struct ConfILPCell {
  std::optional<Rat> best;  // nullopt = infeasible from here
  Int take;                 // multiplicity of the configuration at `pos`
};

class ConfILPSearch {
 public:
  ConfILPSearch(const HugeNFoldInstance& inst,
                const std::vector<std::vector<IntVec>>& configs,
                const ConfILPBudget& budget)
      : inst_(inst), configs_(configs), budget_(budget) {}

  std::optional<ConfMultiSolution> run() {
    IntVec resid = inst_.b0;
    std::optional<Rat> best = solve(ConfILPState{0, 0, first_mu(), resid});
    if (!best) return std::nullopt;
    ConfMultiSolution sol;
    sol.value = *best;
    // replay the recorded choices to collect the witness
    ConfILPState st{0, 0, first_mu(), resid};
    while (st.type < inst_.tau_bar()) {
      if (st.pos == configs_[st.type].size()) {
        st = advance_type(st);
        continue;
      }
      const Int take = memo_.at(st).take;
      if (take > 0)
        sol.entries.emplace(Configuration{st.type, configs_[st.type][st.pos]},
                            take);
      st = apply(st, take);
    }
    return sol;
  }

 private:
  Int first_mu() const {
    return inst_.tau_bar() == 0 ? Int(0) : inst_.blocks[0].mu;
  }

  ConfILPState advance_type(const ConfILPState& st) const {
    ConfILPState nxt = st;
    nxt.type += 1;
    nxt.pos = 0;
    nxt.left = nxt.type < inst_.tau_bar() ? inst_.blocks[nxt.type].mu : Int(0);
    return nxt;
  }

  ConfILPState apply(const ConfILPState& st, const Int& take) const {
    ConfILPState nxt = st;
    nxt.pos += 1;
    nxt.left -= take;
    if (take > 0) {
      IntVec contrib = mat_vec(inst_.blocks[st.type].E1,
                               configs_[st.type][st.pos]);
      for (std::size_t i = 0; i < inst_.r; ++i)
        nxt.resid[i] -= take * contrib[i];
    }
    return nxt;
  }

  std::optional<Rat> solve(const ConfILPState& st) {
    if (st.type == inst_.tau_bar())
      return is_zero(st.resid) ? std::optional<Rat>(Rat(0)) : std::nullopt;
    if (st.pos == configs_[st.type].size()) {
      if (st.left != 0) return std::nullopt;
      return solve(advance_type(st));
    }
    auto it = memo_.find(st);
    if (it != memo_.end()) return it->second.best;
    if (static_cast<long long>(memo_.size()) >= budget_.max_states)
      throw budget_error("configuration ILP: state budget exceeded");

    const Rat unit =
        inst_.blocks[st.type].f.value(configs_[st.type][st.pos]);
    ConfILPCell cell;
    for (Int take = 0; take <= st.left; ++take) {
      std::optional<Rat> tail = solve(apply(st, take));
      if (!tail) continue;
      Rat cand = *tail + unit * take;
      if (!cell.best || cand < *cell.best) {
        cell.best = cand;
        cell.take = take;
      }
    }
    memo_.emplace(st, cell);
    return cell.best;
  }

  const HugeNFoldInstance& inst_;
  const std::vector<std::vector<IntVec>>& configs_;
  ConfILPBudget budget_;
  std::map<ConfILPState, ConfILPCell> memo_;
};

}  // namespace detail

// Exact integer optimum over explicit per-type configuration lists.
inline std::optional<ConfMultiSolution> solve_confilp_over_columns(
    const HugeNFoldInstance& inst,
    const std::vector<std::vector<IntVec>>& configs,
    const ConfILPBudget& budget = {}) {
  require(configs.size() == inst.tau_bar(),
          "configuration ILP: one column list per type required");
  return detail::ConfILPSearch(inst, configs, budget).run();
}

// Enumerates every configuration first; for small boxes only.
inline std::optional<ConfMultiSolution> solve_confilp(
    const HugeNFoldInstance& inst, const ConfILPBudget& budget = {},
    const OracleBudget& oracle_budget = {}) {
  return solve_confilp_over_columns(
      inst, enumerate_all_configurations(inst, oracle_budget), budget);
}

// Exact feasibility + value check of an integer solution.
inline void check_confilp_solution(const HugeNFoldInstance& inst,
                                   const ConfMultiSolution& sol) {
  IntVec link(inst.r, Int(0));
  std::vector<Int> fill(inst.tau_bar(), Int(0));
  Rat value(0);
  for (const auto& [col, y] : sol.entries) {
    require(y > 0, "configuration ILP: support entry not positive");
    require(config_feasible(inst.blocks[col.type], col.c),
            "configuration ILP: infeasible configuration in support");
    IntVec contrib = mat_vec(inst.blocks[col.type].E1, col.c);
    for (std::size_t i = 0; i < inst.r; ++i) link[i] += y * contrib[i];
    fill[col.type] += y;
    value += Rat(y) * inst.blocks[col.type].f.value(col.c);
  }
  require(link == inst.b0, "configuration ILP: linking rows violated");
  for (std::size_t i = 0; i < inst.tau_bar(); ++i)
    require(fill[i] == inst.blocks[i].mu,
            "configuration ILP: convexity rows violated");
  require(value == sol.value, "configuration ILP: stated value is wrong");
}

}  // namespace hmsched
