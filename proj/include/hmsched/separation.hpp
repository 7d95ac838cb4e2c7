#pragma once

// Exact pricing ("separation") solvers: given row duals alpha, minimize
//   f(c) - (alpha E1) c   over  { c : E2 c = b, l <= c <= u }.
//
// Three solvers:
//  * separate_bruteforce — full enumeration (testing baseline, generic blocks)
//  * separate_cmax       — bounded knapsack; capacity DP for small bounds, an
//                          LP-greedy + proximity-window DP for huge ones
//  * separate_sumwc      — prefix-load stage DP for small state spaces, exact
//                          Graver-step augmentation for huge ones
//
// All values are exact rationals; every returned configuration is re-checked
// against the block constraints before it leaves this module.

#include "hmsched/nfold.hpp"
#include "hmsched/oracle.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace hmsched {

struct PricingProblem {
  BlockType block;
  RatVec alpha;  // one dual per linking row
};

struct SeparationResult {
  IntVec c;
  Rat value;  // f(c) - (alpha E1) c at the minimizer
};

struct SepBudgets {
  // Largest knapsack capacity solved by the direct capacity-indexed table.
  long long dp_capacity_budget = 1000000;
  // Largest (states x transitions) work accepted for the plain prefix-load
  // table; doubles as the work cap of the augmentation fallback.
  long long dp_state_budget = 1000000;
};

namespace detail {

// Objective helper: profit row q = E1^T alpha and exact evaluation.
inline RatVec pricing_profit(const PricingProblem& pp) {
  require(pp.alpha.size() == pp.block.E1.rows(),
          "pricing: dual length mismatch");
  return vec_mat(pp.alpha, pp.block.E1);
}

inline Rat pricing_value(const PricingProblem& pp, const RatVec& q,
                         const IntVec& c) {
  return pp.block.f.value(c) - dot(q, c);
}

inline void check_result(const PricingProblem& pp, const RatVec& q,
                         const SeparationResult& res) {
  require(config_feasible(pp.block, res.c),
          "pricing returned an infeasible configuration");
  require(pricing_value(pp, q, res.c) == res.value,
          "pricing value does not match its configuration");
}

}  // namespace detail

// --- brute force -------------------------------------------------------------

inline std::optional<SeparationResult> separate_bruteforce(
    const PricingProblem& pp, const OracleBudget& budget = {}) {
  const RatVec q = detail::pricing_profit(pp);
  std::optional<SeparationResult> best;
  for (IntVec& c : enumerate_configurations(pp.block, budget)) {
    Rat v = detail::pricing_value(pp, q, c);
    if (!best || v < best->value) best = SeparationResult{std::move(c), v};
  }
  if (best) detail::check_result(pp, q, *best);
  return best;
}

// --- makespan: bounded knapsack ----------------------------------------------

namespace detail {

// Shape produced by build_cmax_model: one row (p_1..p_tau, 1), zero lower
// bounds, finite upper bounds, zero objective.
inline void require_cmax_shape(const BlockType& blk) {
  const std::size_t t = blk.E2.cols();
  require(blk.E2.rows() == 1 && t >= 1, "knapsack pricing: row shape");
  require(blk.E2.at(0, t - 1) == 1, "knapsack pricing: slack coefficient");
  for (std::size_t j = 0; j < t; ++j) {
    require(blk.E2.at(0, j) >= 1, "knapsack pricing: item sizes");
    require(blk.l[j] == 0, "knapsack pricing: lower bounds");
    require(blk.u[j].has_value(), "knapsack pricing: finite upper bounds");
  }
  require(blk.b.size() == 1 && blk.b[0] >= 0, "knapsack pricing: capacity");
  require(blk.f.is_zero(), "knapsack pricing: nonzero objective");
}

// Direct capacity-indexed dynamic program (capacity fits in a table).
// Profits are scaled to integers by the common denominator; item counts are
// split into powers of two, giving a 0/1 pass per split item.
inline SeparationResult knapsack_capacity_dp(const PricingProblem& pp,
                                             const RatVec& q) {
  const BlockType& blk = pp.block;
  const std::size_t t = blk.E2.cols();
  const std::size_t items = t - 1;
  const Int& k = blk.b[0];
  const std::size_t cap = static_cast<std::size_t>(k);

  Int denom = 1;
  for (std::size_t j = 0; j < items; ++j)
    denom = boost::multiprecision::lcm(denom, denominator(q[j]));
  struct Split {
    std::size_t item;
    std::size_t size;   // batch size = 2^a * p_j  (fits: <= cap)
    Int profit;         // scaled batch profit
    Int count;          // batch job count = 2^a
  };
  std::vector<Split> splits;
  for (std::size_t j = 0; j < items; ++j) {
    if (q[j] <= 0) continue;  // never profitable: slack absorbs the room
    const Int p = blk.E2.at(0, j);
    Int avail = int_min(*blk.u[j], floor_div(k, p));
    const Int unit_profit = numerator(q[j]) * (denom / denominator(q[j]));
    Int batch = 1;
    while (avail > 0) {
      Int take = int_min(batch, avail);
      splits.push_back(Split{j, static_cast<std::size_t>(take * p),
                             take * unit_profit, take});
      avail -= take;
      batch <<= 1;
    }
  }

  std::vector<Int> dp(cap + 1, Int(0));  // best profit with load <= cap
  std::vector<std::vector<bool>> taken(splits.size(),
                                       std::vector<bool>(cap + 1, false));
  for (std::size_t i = 0; i < splits.size(); ++i) {
    const Split& sp = splits[i];
    if (sp.size > cap) continue;
    for (std::size_t c = cap; c >= sp.size; --c) {
      Int cand = dp[c - sp.size] + sp.profit;
      if (cand > dp[c]) {
        dp[c] = cand;
        taken[i][c] = true;
      }
      if (c == sp.size) break;
    }
  }

  SeparationResult res;
  res.c.assign(t, Int(0));
  std::size_t c = cap;
  for (std::size_t i = splits.size(); i-- > 0;) {
    if (taken[i][c]) {
      res.c[splits[i].item] += splits[i].count;
      c -= splits[i].size;
    }
  }
  res.c[t - 1] = Int(c);  // slack = capacity minus load
  res.value = pricing_value(pp, q, res.c);
  return res;
}

// Huge capacities: greedy fractional optimum, floored, then an exact search
// over a proximity window around it.  The window radius R comes from vertex
// proximity for a one-row system with box constraints: some optimal integer
// point lies within L-infinity distance (#vars) * (max subdeterminant)
// <= (tau+1) * p_max of the greedy vertex; R below dominates that with slack
// for the floor step.
inline SeparationResult knapsack_window_dp(const PricingProblem& pp,
                                           const RatVec& q,
                                           const SepBudgets& budgets) {
  const BlockType& blk = pp.block;
  const std::size_t t = blk.E2.cols();
  const std::size_t items = t - 1;
  const Int& k = blk.b[0];

  Int p_max = 1;
  for (std::size_t j = 0; j < items; ++j) p_max = int_max(p_max, blk.E2.at(0, j));
  const Int tau(items);
  const Int radius = int_max(tau * (2 * p_max + 1) * p_max,
                             (tau + 1) * (2 * p_max + 2));

  // Greedy fill by profit density, floor the one fractional coordinate.
  std::vector<std::size_t> order;
  for (std::size_t j = 0; j < items; ++j)
    if (q[j] > 0) order.push_back(j);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    // q_a / p_a > q_b / p_b via cross products (sizes positive)
    const Rat lhs = q[a] * blk.E2.at(0, b);
    const Rat rhs = q[b] * blk.E2.at(0, a);
    if (lhs != rhs) return lhs > rhs;
    return a < b;
  });
  IntVec base(t, Int(0));
  Int room = k;
  for (std::size_t j : order) {
    const Int p = blk.E2.at(0, j);
    Int take = int_min(*blk.u[j], floor_div(room, p));
    base[j] = take;
    room -= take * p;
    if (take < *blk.u[j]) break;  // fractional item reached; rest stays 0
  }

  // Offset DP: delta_j in [max(-R, -base_j), min(R, u_j - base_j)], state is
  // the accumulated load change, bounded by items * p_max * R either way.
  const Int span = tau * p_max * radius;
  if (Int(2) * span + 1 > Int(budgets.dp_state_budget))
    throw budget_error(
        "knapsack pricing: proximity window exceeds the state budget");
  const std::size_t width = static_cast<std::size_t>(2 * span) + 1;
  const std::size_t origin = static_cast<std::size_t>(span);

  Int denom = 1;
  for (std::size_t j = 0; j < items; ++j)
    denom = boost::multiprecision::lcm(denom, denominator(q[j]));
  auto scaled = [&](std::size_t j) {
    return Int(numerator(q[j]) * (denom / denominator(q[j])));
  };

  struct Cell {
    bool reach = false;
    Int profit;
    long long delta = 0;  // chosen delta at this stage (fits: |delta| <= R)
  };
  std::vector<std::vector<Cell>> dp(items + 1, std::vector<Cell>(width));
  dp[0][origin].reach = true;
  dp[0][origin].profit = 0;
  for (std::size_t idx = 0; idx < items; ++idx) {
    const std::size_t j = idx;
    const Int p = blk.E2.at(0, j);
    const Int dlo = int_max(-radius, -base[j]);
    const Int dhi = int_min(radius, *blk.u[j] - base[j]);
    const Int pr = scaled(j);
    for (std::size_t st = 0; st < width; ++st) {
      if (!dp[idx][st].reach) continue;
      for (Int d = dlo; d <= dhi; ++d) {
        const Int ns = Int(st) + d * p;
        if (ns < 0 || ns >= Int(width)) continue;
        const std::size_t nst = static_cast<std::size_t>(ns);
        Int cand = dp[idx][st].profit + d * pr;
        Cell& cell = dp[idx + 1][nst];
        if (!cell.reach || cand > cell.profit) {
          cell.reach = true;
          cell.profit = cand;
          cell.delta = static_cast<long long>(d);
        }
      }
    }
  }

  // Final states must keep the load within capacity: sum p delta <= room.
  std::optional<std::size_t> best_state;
  for (std::size_t st = 0; st < width; ++st) {
    if (!dp[items][st].reach) continue;
    if (Int(st) - Int(origin) > room) continue;
    if (!best_state || dp[items][st].profit > dp[items][*best_state].profit)
      best_state = st;
  }
  require(best_state.has_value(), "knapsack pricing: window DP lost the base");

  SeparationResult res;
  res.c.assign(t, Int(0));
  std::size_t st = *best_state;
  for (std::size_t idx = items; idx-- > 0;) {
    const Cell& cell = dp[idx + 1][st];
    res.c[idx] = base[idx] + Int(cell.delta);
    st = static_cast<std::size_t>(Int(st) -
                                  Int(cell.delta) * blk.E2.at(0, idx));
  }
  Int load = 0;
  for (std::size_t j = 0; j < items; ++j) load += blk.E2.at(0, j) * res.c[j];
  res.c[t - 1] = k - load;
  res.value = pricing_value(pp, q, res.c);
  return res;
}

}  // namespace detail

inline std::optional<SeparationResult> separate_cmax(
    const PricingProblem& pp, const SepBudgets& budgets = {}) {
  detail::require_cmax_shape(pp.block);
  const RatVec q = detail::pricing_profit(pp);
  require(q.back() == 0, "knapsack pricing: slack must carry no profit");
  SeparationResult res =
      pp.block.b[0] <= Int(budgets.dp_capacity_budget)
          ? detail::knapsack_capacity_dp(pp, q)
          : detail::knapsack_window_dp(pp, q, budgets);
  detail::check_result(pp, q, res);
  return res;
}

// --- weighted completion time: prefix-load path -------------------------------

namespace detail {

// Shape produced by build_sumwc_model: E2 = (diag(a) | bidiagonal), b = 0,
// zero lower bounds, finite upper bounds.
inline void require_sumwc_shape(const BlockType& blk) {
  const std::size_t s = blk.E2.rows();
  const std::size_t t = blk.E2.cols();
  require(t == 2 * s && s >= 1, "path pricing: shape");
  for (std::size_t row = 0; row < s; ++row)
    for (std::size_t j = 0; j < t; ++j) {
      const Int& v = blk.E2.at(row, j);
      if (j == row)
        require(v >= 1, "path pricing: diagonal item size");
      else if (j == s + row)
        require(v == -1, "path pricing: load column");
      else if (row > 0 && j == s + row - 1)
        require(v == 1, "path pricing: previous-load column");
      else
        require(v == 0, "path pricing: unexpected entry");
    }
  for (std::size_t j = 0; j < t; ++j) {
    require(blk.l[j] == 0, "path pricing: lower bounds");
    require(blk.u[j].has_value(), "path pricing: finite upper bounds");
  }
  require(is_zero(blk.b), "path pricing: nonzero block rhs");
}

// Per-coordinate pricing cost c(x) = alpha x^2 + (beta - profit) x.
struct StageCost {
  Rat quad;
  Rat lin;
  Rat at(const Int& x) const { return quad * x * x + lin * x; }
};

// Plain table over prefix loads, one stage per Smith position.
inline SeparationResult sumwc_plain_dp(const PricingProblem& pp,
                                       const RatVec& q,
                                       const std::vector<Int>& zcap) {
  const BlockType& blk = pp.block;
  const std::size_t tau = blk.E2.rows();
  std::vector<StageCost> xc(tau), zc(tau);
  for (std::size_t l = 0; l < tau; ++l) {
    xc[l] = StageCost{blk.f.alpha[l], blk.f.beta[l] - q[l]};
    zc[l] = StageCost{blk.f.alpha[tau + l], blk.f.beta[tau + l] - q[tau + l]};
  }

  struct Cell {
    bool reach = false;
    Rat cost;
    Int x;  // chosen job count at this stage
  };
  std::vector<Cell> prev(1);
  prev[0].reach = true;
  prev[0].cost = 0;
  std::vector<std::vector<Cell>> stages;  // for the witness walk
  Int prev_cap = 0;
  for (std::size_t l = 0; l < tau; ++l) {
    const Int a = blk.E2.at(l, l);
    const Int xcap = *blk.u[l];
    std::vector<Cell> cur(static_cast<std::size_t>(zcap[l]) + 1);
    for (Int z = 0; z <= zcap[l]; ++z) {
      Cell& cell = cur[static_cast<std::size_t>(z)];
      for (Int x = 0; x <= xcap; ++x) {
        const Int back = z - a * x;
        if (back < 0) break;
        if (back > prev_cap) continue;
        const Cell& from = prev[static_cast<std::size_t>(back)];
        if (!from.reach) continue;
        Rat cand = from.cost + xc[l].at(x) + zc[l].at(z);
        if (!cell.reach || cand < cell.cost) {
          cell.reach = true;
          cell.cost = cand;
          cell.x = x;
        }
      }
    }
    stages.push_back(cur);
    prev = stages.back();
    prev_cap = zcap[l];
  }

  std::optional<Int> best_z;
  for (Int z = 0; z <= zcap[tau - 1]; ++z) {
    const Cell& cell = stages[tau - 1][static_cast<std::size_t>(z)];
    if (!cell.reach) continue;
    if (!best_z ||
        cell.cost < stages[tau - 1][static_cast<std::size_t>(*best_z)].cost)
      best_z = z;
  }
  require(best_z.has_value(), "path pricing: empty table");

  SeparationResult res;
  res.c.assign(2 * tau, Int(0));
  Int z = *best_z;
  for (std::size_t l = tau; l-- > 0;) {
    const Cell& cell = stages[l][static_cast<std::size_t>(z)];
    res.c[l] = cell.x;
    res.c[tau + l] = z;
    z -= blk.E2.at(l, l) * cell.x;
  }
  require(z == 0, "path pricing: witness walk failed");
  res.value = pricing_value(pp, q, res.c);
  return res;
}

// Huge state spaces: exact augmentation.  Starting from the feasible zero
// configuration, repeatedly take the best step lambda * g over step vectors
// g in the kernel of E2 with |g|_inf <= Gamma and lambda a power of two.
// Gamma = 2 tau^4 + tau bounds the Graver elements of the prefix-load matrix
// (verified in the test suite), so no improving Graver step is ever missed;
// convexity makes "no improving step" an exact optimality certificate.
inline SeparationResult sumwc_augmentation(const PricingProblem& pp,
                                           const RatVec& q,
                                           const SepBudgets& budgets) {
  const BlockType& blk = pp.block;
  const std::size_t tau = blk.E2.rows();
  const long long gamma_ll = 2 * static_cast<long long>(tau) * tau * tau * tau +
                             static_cast<long long>(tau);
  const Int gamma(gamma_ll);
  const std::size_t width = static_cast<std::size_t>(2 * gamma_ll + 1);

  std::vector<StageCost> xc(tau), zc(tau);
  for (std::size_t l = 0; l < tau; ++l) {
    xc[l] = StageCost{blk.f.alpha[l], blk.f.beta[l] - q[l]};
    zc[l] = StageCost{blk.f.alpha[tau + l], blk.f.beta[tau + l] - q[tau + l]};
  }
  auto delta_cost = [](const StageCost& sc, const Int& v, const Int& step) {
    // sc.at(v + step) - sc.at(v), expanded
    return sc.quad * step * (2 * v + step) + sc.lin * step;
  };

  Int lambda_max = 1;
  for (std::size_t j = 0; j < 2 * tau; ++j)
    lambda_max = int_max(lambda_max, *blk.u[j]);

  IntVec v(2 * tau, Int(0));  // current feasible configuration
  long long rounds = 0;
  while (true) {
    if (++rounds > 1000000)
      throw budget_error("path pricing: augmentation failed to converge");
    struct Cell {
      bool reach = false;
      Rat delta;
      long long xi = 0;    // step on the job-count coordinate
      long long prev = 0;  // previous state index
    };
    std::optional<Rat> best_gain;
    Int best_lambda;
    IntVec best_g;
    for (Int lambda = 1; lambda <= lambda_max; lambda <<= 1) {
      long long work = 0;
      std::vector<std::vector<Cell>> dp(tau + 1,
                                        std::vector<Cell>(width));
      dp[0][static_cast<std::size_t>(gamma)].reach = true;
      dp[0][static_cast<std::size_t>(gamma)].delta = 0;
      for (std::size_t l = 0; l < tau; ++l) {
        const Int a = blk.E2.at(l, l);
        for (std::size_t st = 0; st < width; ++st) {
          if (!dp[l][st].reach) continue;
          const Int zeta_prev = Int(st) - gamma;
          for (Int xi = -gamma; xi <= gamma; ++xi) {
            work += 1;
            const Int zeta = zeta_prev + a * xi;
            if (zeta < -gamma || zeta > gamma) continue;
            // box feasibility of v + lambda * g on both coordinates
            const Int nx = v[l] + lambda * xi;
            if (nx < 0 || nx > *blk.u[l]) continue;
            const Int nz = v[tau + l] + lambda * zeta;
            if (nz < 0 || nz > *blk.u[tau + l]) continue;
            Rat cand = dp[l][st].delta +
                       delta_cost(xc[l], v[l], lambda * xi) +
                       delta_cost(zc[l], v[tau + l], lambda * zeta);
            Cell& cell = dp[l + 1][static_cast<std::size_t>(zeta + gamma)];
            if (!cell.reach || cand < cell.delta) {
              cell.reach = true;
              cell.delta = cand;
              cell.xi = static_cast<long long>(xi);
              cell.prev = static_cast<long long>(st);
            }
          }
        }
      }
      if (work > budgets.dp_state_budget)
        throw budget_error(
            "path pricing: state space too large (augmentation budget)");
      // best final cell
      for (std::size_t st = 0; st < width; ++st) {
        if (!dp[tau][st].reach) continue;
        const Rat& gain = dp[tau][st].delta;
        if (gain >= 0) continue;
        if (!best_gain || gain < *best_gain) {
          best_gain = gain;
          best_lambda = lambda;
          // reconstruct g
          best_g.assign(2 * tau, Int(0));
          std::size_t cur = st;
          for (std::size_t l = tau; l-- > 0;) {
            const Cell& cell = dp[l + 1][cur];
            best_g[l] = Int(cell.xi);
            best_g[tau + l] = Int(cur) - gamma;
            cur = static_cast<std::size_t>(cell.prev);
          }
        }
      }
    }
    if (!best_gain) break;  // no improving step anywhere: v is optimal
    for (std::size_t j = 0; j < 2 * tau; ++j) v[j] += best_lambda * best_g[j];
  }

  SeparationResult res;
  res.c = v;
  res.value = pricing_value(pp, q, res.c);
  return res;
}

}  // namespace detail

inline std::optional<SeparationResult> separate_sumwc(
    const PricingProblem& pp, const SepBudgets& budgets = {}) {
  detail::require_sumwc_shape(pp.block);
  const RatVec q = detail::pricing_profit(pp);
  const std::size_t tau = pp.block.E2.rows();

  // Effective per-stage load caps: box bound or largest reachable prefix.
  std::vector<Int> zcap(tau);
  Int reach = 0;
  bool small = true;
  Int workload = 0;
  for (std::size_t l = 0; l < tau; ++l) {
    reach += pp.block.E2.at(l, l) * *pp.block.u[l];
    zcap[l] = int_min(reach, *pp.block.u[tau + l]);
    workload += (zcap[l] + 1) * (*pp.block.u[l] + 1);
    if (workload > Int(budgets.dp_state_budget)) small = false;
  }

  SeparationResult res = small
                             ? detail::sumwc_plain_dp(pp, q, zcap)
                             : detail::sumwc_augmentation(pp, q, budgets);
  detail::check_result(pp, q, res);
  return res;
}

// Model-directed dispatch; generic blocks fall back to enumeration.
inline std::optional<SeparationResult> separate(
    const PricingProblem& pp, ModelKind kind, const SepBudgets& budgets = {},
    const OracleBudget& oracle_budget = {}) {
  switch (kind) {
    case ModelKind::CmaxModel: return separate_cmax(pp, budgets);
    case ModelKind::SumWCModel: return separate_sumwc(pp, budgets);
    default: return separate_bruteforce(pp, oracle_budget);
  }
}

}  // namespace hmsched
