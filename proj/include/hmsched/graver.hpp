#pragma once

// Graver bases for small integer matrices.
//
// G(A) is the set of conformally-minimal nonzero integer kernel elements of
// A.  We compute it by completion: start from a lattice basis of the integer
// kernel (column Hermite elimination), close the set under "add two elements,
// conformally reduce the sum by the current set", then keep the minimal
// elements.  A norm budget truncates the run: candidates larger than the
// budget are dropped and the result is flagged incomplete instead of wrong.
//
// Also here: the conformal partial order, an exhaustive box-search baseline,
// the row-intersection (dual) graph with a path check, and the two empirical
// bound checks used by the test suite — the load-difference matrix bound
// g_inf <= 2 tau^4 + tau and the generic g_1(A) <= (2 ||A||_inf m + 1)^m.

#include "hmsched/nfold.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <utility>
#include <vector>

namespace hmsched {

// Conformal order: same orthant, componentwise dominated.
inline bool conformal_leq(const IntVec& g, const IntVec& h) {
  require(g.size() == h.size(), "conformal order: dimension mismatch");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] * h[i] < 0) return false;
    if (int_abs(g[i]) > int_abs(h[i])) return false;
  }
  return true;
}

struct GraverBasis {
  IntMatrix A;
  std::vector<IntVec> elements;  // lex-sorted, closed under negation
  bool complete = false;

  Int g_inf() const {
    Int m = 0;
    for (const IntVec& g : elements) m = int_max(m, vec_inf_norm(g));
    return m;
  }
  Int g_1() const {
    Int m = 0;
    for (const IntVec& g : elements) m = int_max(m, vec_one_norm(g));
    return m;
  }
};

namespace detail {

// Basis of the integer kernel of A via column elimination with unimodular
// column operations (Hermite-style): transform A so each pivot row has one
// surviving nonzero among the unprocessed columns; the columns of the
// accumulated transform below the pivot columns span the kernel.
inline std::vector<IntVec> integer_kernel_basis(const IntMatrix& A) {
  const std::size_t m = A.rows(), n = A.cols();
  std::vector<IntVec> H(n, IntVec(m));  // columns of A
  std::vector<IntVec> U(n, IntVec(n, Int(0)));
  for (std::size_t j = 0; j < n; ++j) {
    U[j][j] = 1;
    for (std::size_t i = 0; i < m; ++i) H[j][i] = A.at(i, j);
  }

  std::size_t c = 0;
  for (std::size_t r = 0; r < m && c < n; ++r) {
    for (;;) {
      std::size_t pivot = n;
      for (std::size_t j = c; j < n; ++j) {
        if (H[j][r] == 0) continue;
        if (pivot == n || int_abs(H[j][r]) < int_abs(H[pivot][r])) pivot = j;
      }
      if (pivot == n) break;  // row has no pivot among remaining columns
      std::swap(H[pivot], H[c]);
      std::swap(U[pivot], U[c]);
      if (H[c][r] < 0) {
        for (Int& v : H[c]) v = -v;
        for (Int& v : U[c]) v = -v;
      }
      bool reduced = true;
      for (std::size_t j = c + 1; j < n; ++j) {
        if (H[j][r] == 0) continue;
        const Int q = floor_div(H[j][r], H[c][r]);
        if (q != 0) {
          for (std::size_t i = 0; i < m; ++i) H[j][i] -= q * H[c][i];
          for (std::size_t i = 0; i < n; ++i) U[j][i] -= q * U[c][i];
        }
        if (H[j][r] != 0) reduced = false;  // remainder; rerun with new pivot
      }
      if (reduced) {
        ++c;
        break;
      }
    }
  }

  std::vector<IntVec> kernel(U.begin() + static_cast<std::ptrdiff_t>(c),
                             U.end());
  for (const IntVec& z : kernel)
    require(is_zero(mat_vec(A, z)), "kernel basis: A z != 0");
  return kernel;
}

using I64Vec = std::vector<long long>;

inline bool conformal_leq64(const I64Vec& g, const I64Vec& h) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if ((g[i] > 0 && h[i] < 0) || (g[i] < 0 && h[i] > 0)) return false;
    if (std::llabs(g[i]) > std::llabs(h[i])) return false;
  }
  return true;
}

inline long long inf_norm64(const I64Vec& v) {
  long long m = 0;
  for (long long x : v) m = std::max(m, std::llabs(x));
  return m;
}

}  // namespace detail

inline GraverBasis graver_basis(const IntMatrix& A,
                                long long norm_budget = 1000000) {
  require(norm_budget >= 1 && norm_budget <= 1000000000LL,
          "graver: norm budget must be in [1, 10^9]");
  GraverBasis out;
  out.A = A;
  out.complete = true;

  std::vector<IntVec> basis = detail::integer_kernel_basis(A);

  using detail::I64Vec;
  std::set<I64Vec> pool;
  std::vector<I64Vec> order;
  std::deque<std::pair<std::size_t, std::size_t>> pairs;
  auto add = [&](const I64Vec& v) {
    if (pool.insert(v).second) {
      for (std::size_t i = 0; i < order.size(); ++i)
        pairs.emplace_back(i, order.size());
      order.push_back(v);
    }
  };
  auto add_signed = [&](const I64Vec& v) {
    add(v);
    I64Vec neg(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) neg[i] = -v[i];
    add(neg);
  };

  for (const IntVec& b : basis) {
    if (is_zero(b)) continue;
    if (vec_inf_norm(b) > Int(norm_budget)) {
      out.complete = false;
      continue;
    }
    I64Vec v(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
      v[i] = static_cast<long long>(b[i]);
    add_signed(v);
  }

  auto normal_form = [&](I64Vec s) {
    for (;;) {
      bool zero = true;
      for (long long x : s)
        if (x != 0) {
          zero = false;
          break;
        }
      if (zero) return s;
      bool changed = false;
      for (const I64Vec& g : pool) {
        if (detail::conformal_leq64(g, s)) {
          for (std::size_t i = 0; i < s.size(); ++i) s[i] -= g[i];
          changed = true;
          break;
        }
      }
      if (!changed) return s;
    }
  };

  while (!pairs.empty()) {
    auto [i, j] = pairs.front();
    pairs.pop_front();
    I64Vec s(order[i].size());
    for (std::size_t idx = 0; idx < s.size(); ++idx)
      s[idx] = order[i][idx] + order[j][idx];
    I64Vec r = normal_form(std::move(s));
    bool zero = true;
    for (long long x : r)
      if (x != 0) {
        zero = false;
        break;
      }
    if (zero) continue;
    if (detail::inf_norm64(r) > norm_budget) {
      out.complete = false;
      continue;
    }
    add_signed(r);
  }

  // Keep the conformally minimal elements.
  std::vector<detail::I64Vec> all(pool.begin(), pool.end());
  for (const auto& g : all) {
    bool minimal = true;
    for (const auto& h : all) {
      if (h == g) continue;
      if (detail::conformal_leq64(h, g)) {
        minimal = false;
        break;
      }
    }
    if (!minimal) continue;
    IntVec v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = Int(g[i]);
    out.elements.push_back(std::move(v));
  }
  std::sort(out.elements.begin(), out.elements.end());
  return out;
}

// Baseline: all conformally minimal nonzero kernel vectors with
// |.|_inf <= box, by direct enumeration.  Exact within the box.
inline std::vector<IntVec> exhaustive_graver(const IntMatrix& A,
                                             long long box) {
  require(box >= 0, "graver baseline: negative box");
  const std::size_t n = A.cols();
  std::vector<IntVec> kernel;
  IntVec z(n, Int(-box));
  for (;;) {
    if (!is_zero(z) && is_zero(mat_vec(A, z))) kernel.push_back(z);
    std::size_t j = 0;
    while (j < n && z[j] == Int(box)) {
      z[j] = Int(-box);
      ++j;
    }
    if (j == n) break;
    z[j] += 1;
  }
  std::vector<IntVec> minimal;
  for (const IntVec& g : kernel) {
    bool keep = true;
    for (const IntVec& h : kernel)
      if (h != g && conformal_leq(h, g)) {
        keep = false;
        break;
      }
    if (keep) minimal.push_back(g);
  }
  std::sort(minimal.begin(), minimal.end());
  return minimal;
}

// --- dual graph ------------------------------------------------------------

// Vertices = rows; edge when two rows share a column where both are nonzero.
inline std::vector<std::set<std::size_t>> dual_graph(const IntMatrix& A) {
  std::vector<std::set<std::size_t>> adj(A.rows());
  for (std::size_t col = 0; col < A.cols(); ++col) {
    std::vector<std::size_t> rows;
    for (std::size_t row = 0; row < A.rows(); ++row)
      if (A.at(row, col) != 0) rows.push_back(row);
    for (std::size_t a = 0; a < rows.size(); ++a)
      for (std::size_t b = a + 1; b < rows.size(); ++b) {
        adj[rows[a]].insert(rows[b]);
        adj[rows[b]].insert(rows[a]);
      }
  }
  return adj;
}

inline bool is_path(const std::vector<std::set<std::size_t>>& adj) {
  const std::size_t m = adj.size();
  if (m == 0) return false;
  if (m == 1) return true;
  std::size_t deg1 = 0;
  for (const auto& nb : adj) {
    if (nb.size() == 1)
      ++deg1;
    else if (nb.size() != 2)
      return false;
  }
  if (deg1 != 2) return false;
  // connectivity
  std::vector<bool> seen(m, false);
  std::deque<std::size_t> queue{0};
  seen[0] = true;
  std::size_t visited = 0;
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    ++visited;
    for (std::size_t w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
  }
  return visited == m;
}

// --- empirical bound checks ---------------------------------------------------

struct HillcuttingReport {
  std::size_t tau = 0;
  Int ginf, g1;
  Int ginf_bound, g1_bound;
  bool complete = false;
  bool ok() const {
    return complete && ginf <= ginf_bound && g1 <= g1_bound;
  }
};

// Bounds for the load-difference matrix built from sizes a:
// g_inf <= 2 tau^4 + tau and g_1 <= 2 tau (2 tau^4 + tau).
inline HillcuttingReport verify_hillcutting(const IntVec& a,
                                            long long norm_budget = 1000000) {
  HillcuttingReport rep;
  rep.tau = a.size();
  const Int tau(static_cast<long long>(a.size()));
  rep.ginf_bound = 2 * tau * tau * tau * tau + tau;
  rep.g1_bound = 2 * tau * rep.ginf_bound;
  GraverBasis gb = graver_basis(load_difference_matrix(a), norm_budget);
  rep.ginf = gb.g_inf();
  rep.g1 = gb.g_1();
  rep.complete = gb.complete;
  return rep;
}

struct BaseBoundReport {
  Int g1;
  Int bound;
  bool complete = false;
  bool ok() const { return complete && g1 <= bound; }
};

// Generic bound g_1(A) <= (2 ||A||_inf m + 1)^m.
inline BaseBoundReport verify_basebound(const GraverBasis& gb) {
  BaseBoundReport rep;
  rep.g1 = gb.g_1();
  const Int m(static_cast<long long>(gb.A.rows()));
  rep.bound = int_pow(2 * gb.A.inf_norm() * m + 1, m);
  rep.complete = gb.complete;
  return rep;
}

}  // namespace hmsched
