#pragma once

// Exact-rational two-phase primal simplex for  min c.x  s.t.  Ax = d, x >= 0.
// Dense tableau, Bland's entering/leaving rule (anti-cycling), deterministic.
// Dimensions here are tiny (rows = linking rows + block-type count), so the
// full-tableau form is the simplest thing that is exactly right.
//
// On infeasibility the returned duals are a Farkas certificate:
//   duals . A_j <= 0 for every column j  and  duals . d > 0.

#include "hmsched/numeric.hpp"

#include <cstddef>
#include <vector>

namespace hmsched {

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPResult {
  LPStatus status = LPStatus::Infeasible;
  RatVec x;       // primal values per column (Optimal only)
  RatVec duals;   // row duals; Farkas certificate when Infeasible
  Rat objective;  // Optimal only
  std::vector<std::size_t> basic_columns;  // column indices basic at the end
  long long pivots = 0;
};

// columns[j] is the j-th column (length = d.size()); cost[j] its objective
// coefficient.  Column order is significant: Bland's rule ties everything to
// these indices, making the result deterministic.
inline LPResult solve_lp_eq(const std::vector<RatVec>& columns,
                            const RatVec& cost, const RatVec& d) {
  const std::size_t M = d.size();
  const std::size_t N = columns.size();
  require(cost.size() == N, "solve_lp_eq: cost length");
  for (const RatVec& col : columns)
    require(col.size() == M, "solve_lp_eq: column length");

  // Flip rows to make the right-hand side nonnegative; remember the signs.
  std::vector<int> sign(M, 1);
  // Tableau: M rows, N real columns + M artificial columns + rhs.
  std::vector<RatVec> T(M, RatVec(N + M + 1, Rat(0)));
  for (std::size_t i = 0; i < M; ++i) {
    if (d[i] < 0) sign[i] = -1;
    for (std::size_t j = 0; j < N; ++j) T[i][j] = sign[i] * columns[j][i];
    T[i][N + i] = 1;
    T[i][N + M] = sign[i] * d[i];
  }
  std::vector<std::size_t> basis(M);
  for (std::size_t i = 0; i < M; ++i) basis[i] = N + i;

  LPResult res;

  auto pivot = [&](std::size_t pi, std::size_t pj) {
    const Rat pe = T[pi][pj];
    for (Rat& v : T[pi]) v /= pe;
    for (std::size_t i = 0; i < M; ++i) {
      if (i == pi || T[i][pj] == 0) continue;
      const Rat factor = T[i][pj];
      for (std::size_t j = 0; j <= N + M; ++j) T[i][j] -= factor * T[pi][j];
    }
    basis[pi] = pj;
    ++res.pivots;
  };

  // One simplex phase.  costs has length N + M (reals then artificials).
  // Entering candidates are real columns only; artificials may only leave.
  // Rows whose basic variable is an artificial sitting at zero block at
  // ratio 0 whenever the entering column touches them (either sign), which
  // keeps artificials from ever becoming positive again.
  auto run_phase = [&](const RatVec& costs) -> LPStatus {
    while (true) {
      // Bland: smallest real column index with negative reduced cost
      // c_j - costB . T_j  (T_j = B^{-1} A_j is the current tableau column).
      std::size_t enter = N;
      for (std::size_t j = 0; j < N; ++j) {
        bool is_basic = false;
        for (std::size_t row = 0; row < M; ++row)
          if (basis[row] == j) {
            is_basic = true;
            break;
          }
        if (is_basic) continue;
        Rat rc = costs[j];
        for (std::size_t row = 0; row < M; ++row) {
          if (costs[basis[row]] == 0 || T[row][j] == 0) continue;
          rc -= costs[basis[row]] * T[row][j];
        }
        if (rc < 0) {
          enter = j;
          break;
        }
      }
      if (enter == N) return LPStatus::Optimal;

      // Ratio test.
      std::size_t leave = M;  // row index
      Rat best_ratio = 0;
      bool have = false;
      for (std::size_t i = 0; i < M; ++i) {
        const bool art_basic = basis[i] >= N;
        Rat ratio;
        if (T[i][enter] > 0)
          ratio = T[i][N + M] / T[i][enter];
        else if (art_basic && T[i][enter] != 0 && T[i][N + M] == 0)
          ratio = 0;  // degenerate swap that evicts a zero-level artificial
        else
          continue;
        if (!have || ratio < best_ratio ||
            (ratio == best_ratio && basis[i] < basis[leave])) {
          best_ratio = ratio;
          leave = i;
          have = true;
        }
      }
      if (!have) return LPStatus::Unbounded;
      pivot(leave, enter);
    }
  };

  // Phase 1: minimize the artificial sum.
  RatVec phase1(N + M, Rat(0));
  for (std::size_t i = 0; i < M; ++i) phase1[N + i] = 1;
  LPStatus st = run_phase(phase1);
  require(st == LPStatus::Optimal, "phase 1 cannot be unbounded");
  Rat phase1_obj = 0;
  for (std::size_t i = 0; i < M; ++i)
    if (basis[i] >= N) phase1_obj += T[i][N + M];

  auto extract_duals = [&](const RatVec& costs) {
    RatVec pi(M, Rat(0));
    for (std::size_t i = 0; i < M; ++i) {
      for (std::size_t row = 0; row < M; ++row) {
        if (costs[basis[row]] == 0 || T[row][N + i] == 0) continue;
        pi[i] += costs[basis[row]] * T[row][N + i];
      }
      pi[i] *= sign[i];  // undo the row flip
    }
    return pi;
  };

  if (phase1_obj != 0) {
    res.status = LPStatus::Infeasible;
    res.duals = extract_duals(phase1);
    return res;
  }

  // Evict zero-level artificials so phase 2 starts from a clean basis; rows
  // with no real pivot candidate are redundant (all-zero over real columns)
  // and keep their artificial pinned at zero harmlessly.
  for (std::size_t i = 0; i < M; ++i) {
    if (basis[i] < N) continue;
    for (std::size_t j = 0; j < N; ++j)
      if (T[i][j] != 0) {
        pivot(i, j);
        break;
      }
  }

  // Phase 2: the real objective (artificials cost 0 and never re-enter).
  RatVec phase2(N + M, Rat(0));
  for (std::size_t j = 0; j < N; ++j) phase2[j] = cost[j];
  st = run_phase(phase2);
  if (st == LPStatus::Unbounded) {
    res.status = LPStatus::Unbounded;
    return res;
  }

  res.status = LPStatus::Optimal;
  res.x.assign(N, Rat(0));
  res.objective = 0;
  for (std::size_t i = 0; i < M; ++i) {
    if (basis[i] < N) {
      res.x[basis[i]] = T[i][N + M];
      res.objective += cost[basis[i]] * T[i][N + M];
      res.basic_columns.push_back(basis[i]);
    } else {
      require(T[i][N + M] == 0, "artificial basic at nonzero level");
    }
  }
  res.duals = extract_duals(phase2);
  return res;
}

}  // namespace hmsched
