#pragma once

// Objective compression for huge N-fold instances.  The separable quadratic
// objective is replaced by an order-equivalent one whose coefficient
// bit-length is polynomial in the block dimensions and in the logarithm of
// the instance size, regardless of how large the input coefficients are.
//
// frank_tardos(w, M) compresses one rational weight vector so that all sign
// decisions w*v with v in [-2M, 2M]^d are preserved.  reduce_objective(inst)
// applies it to the per-type aggregated weights (A, B) = (mu*alpha, mu*beta)
// and divides the result back by mu; the division step is what forces the
// box passed to frank_tardos to cover lcm(mu)-scaled difference vectors, so
// the box bound is max(total bricks, lcm(mu)) * max(D^2, 1) rather than the
// bare aggregated-variable range.

#include <algorithm>
#include <cstddef>
#include <vector>

#include "hmsched/lll.hpp"
#include "hmsched/nfold.hpp"

namespace hmsched {

namespace detail {

inline std::size_t count_nonzero(const RatVec& v) {
  std::size_t c = 0;
  for (const Rat& x : v)
    if (x != 0) ++c;
  return c;
}

}  // namespace detail

// Integer weight vector defining the same order as w on every pair of points
// of [-M, M]^d; equivalently sign(w*v) == sign(wt*v) for every integer v
// with |v|_1 <= 2*M*d, which covers all difference vectors of the box.
inline IntVec frank_tardos(const RatVec& w, const Int& M) {
  require(!w.empty(), "frank_tardos: empty weight vector");
  require(M >= 1, "frank_tardos: box bound must be positive");

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] != 0) keep.push_back(i);
  IntVec out(w.size(), Int(0));
  if (keep.empty()) return out;

  const std::size_t d = keep.size();
  const Int vbound = 2 * M * Int(d);  // largest l1-norm to be decided
  const Rat eps(1, 2 * (vbound + 1));

  RatVec cur(d);
  for (std::size_t i = 0; i < d; ++i) cur[i] = w[keep[i]];

  // Each round normalizes the residual to unit infinity-norm and splits it
  // as cur = (p + next)/q with integral p and |next_i| <= eps.  Coordinates
  // of maximal magnitude are rounded exactly (q*1 is an integer within eps
  // of p_i), so they become zero and the loop ends after at most d rounds.
  std::vector<IntVec> approx;
  while (detail::count_nonzero(cur) > 0) {
    require(approx.size() < d, "frank_tardos: extraction failed to terminate");
    Rat scale = 0;
    for (const Rat& c : cur) scale = std::max(scale, rat_abs(c));
    RatVec unit(d);
    for (std::size_t i = 0; i < d; ++i) unit[i] = cur[i] / scale;

    const DiophantineApprox da = simultaneous_diophantine(unit, eps);
    RatVec next(d);
    for (std::size_t i = 0; i < d; ++i) {
      next[i] = Rat(da.q) * unit[i] - Rat(da.p[i]);
      require(rat_abs(next[i]) <= eps, "frank_tardos: residual out of range");
      if (unit[i] == 0)
        require(da.p[i] == 0, "frank_tardos: zero coordinate disturbed");
    }
    require(detail::count_nonzero(next) < detail::count_nonzero(cur),
            "frank_tardos: no progress in extraction round");
    approx.push_back(da.p);
    cur = next;
  }

  // Cascade the per-round integer vectors into one.  The weights make every
  // earlier round dominate the combined tail of the later ones on any v with
  // |v|_1 <= vbound, so sign(out*v) equals the sign of the first nonzero
  // p_k*v -- which is exactly how the recursion above determines sign(w*v).
  const std::size_t rounds = approx.size();
  IntVec weight(rounds, Int(1));
  for (std::size_t k = rounds - 1; k-- > 0;) {
    const Int tail = vbound * vec_inf_norm(approx[k + 1]);
    weight[k] = weight[k + 1] * (2 * tail + 1);
  }
  for (std::size_t i = 0; i < d; ++i) {
    Int acc = 0;
    for (std::size_t k = 0; k < rounds; ++k) acc += weight[k] * approx[k][i];
    out[keep[i]] = acc;
  }
  // The box contains all unit vectors, so coordinate signs must be retained.
  for (std::size_t i = 0; i < w.size(); ++i) {
    const int want = rat_sign(w[i]);
    const int got = out[i] > 0 ? 1 : (out[i] < 0 ? -1 : 0);
    require(want == got, "frank_tardos: coordinate sign flipped");
  }
  return out;
}

// Exhaustive sign-equivalence check over all integer v in [-2M, 2M]^d.
// Cost (4M+1)^d evaluations; intended for small boxes only.
inline bool frank_tardos_check(const RatVec& w, const IntVec& wt,
                               const Int& M) {
  require(w.size() == wt.size(), "frank_tardos_check: dimension mismatch");
  require(M >= 1, "frank_tardos_check: box bound must be positive");
  const std::size_t d = w.size();
  IntVec v(d, -2 * M);
  while (true) {
    Rat lhs = 0;
    Int rhs = 0;
    for (std::size_t i = 0; i < d; ++i) {
      lhs += w[i] * Rat(v[i]);
      rhs += wt[i] * v[i];
    }
    const int sl = rat_sign(lhs);
    const int sr = rhs > 0 ? 1 : (rhs < 0 ? -1 : 0);
    if (sl != sr) return false;
    std::size_t j = 0;
    while (j < d && v[j] == 2 * M) {
      v[j] = -2 * M;
      ++j;
    }
    if (j == d) break;
    v[j] += 1;
  }
  return true;
}

// Replaces every block objective with an order-equivalent separable
// quadratic whose coefficients are small.  Requires finite boxes containing
// the origin (shift the instance first otherwise).  Types with mu = 0 carry
// no bricks, so any objective is equivalent there; they are zeroed.
inline HugeNFoldInstance reduce_objective(const HugeNFoldInstance& inst) {
  const std::size_t t = inst.t;
  const std::size_t types = inst.blocks.size();
  require(types >= 1, "reduce_objective: instance has no block types");
  for (const BlockType& blk : inst.blocks) {
    for (std::size_t j = 0; j < t; ++j) {
      require(blk.u[j].has_value(), "reduce_objective: box must be finite");
      require(blk.l[j] <= 0 && *blk.u[j] >= 0,
              "reduce_objective: box must contain the origin (shift first)");
    }
  }

  HugeNFoldInstance out = inst;
  bool any = false;
  for (const BlockType& blk : inst.blocks) any = any || !blk.f.is_zero();
  if (!any) return out;

  const Int N = inst.total_bricks();
  if (N == 0) {
    for (BlockType& blk : out.blocks) blk.f = QuadObjective::zero(t);
    return out;
  }

  Int width = 0;
  for (const BlockType& blk : inst.blocks)
    for (std::size_t j = 0; j < t; ++j)
      width = int_max(width, *blk.u[j] - blk.l[j]);
  const Int dhat = int_max(width * width, Int(1));
  Int mu_lcm = 1;
  for (const BlockType& blk : inst.blocks)
    if (blk.mu >= 1) mu_lcm = lcm(mu_lcm, blk.mu);
  const Int box = int_max(N, mu_lcm) * dhat;

  // Aggregated weights: the quadratic parts of all types first, then the
  // linear parts, exactly 2*t*types coordinates.
  RatVec agg(2 * t * types, Rat(0));
  for (std::size_t i = 0; i < types; ++i) {
    const BlockType& blk = inst.blocks[i];
    for (std::size_t l = 0; l < t; ++l) {
      agg[i * t + l] = Rat(blk.mu) * blk.f.alpha[l];
      agg[types * t + i * t + l] = Rat(blk.mu) * blk.f.beta[l];
    }
  }
  const IntVec red = frank_tardos(agg, box);

  // Deaggregate.  Dividing by mu_i keeps order equivalence because the
  // frank_tardos box above covers the lcm(mu)-scaled differences; when the
  // lcm is small we multiply it back in so the output is integral, and
  // otherwise we keep per-type rationals with denominator mu_i.
  const bool clear_denominators = bit_length(mu_lcm) <= 64;
  for (std::size_t i = 0; i < types; ++i) {
    BlockType& blk = out.blocks[i];
    if (blk.mu == 0) {
      blk.f = QuadObjective::zero(t);
      continue;
    }
    for (std::size_t l = 0; l < t; ++l) {
      const Int a = red[i * t + l];
      const Int b = red[types * t + i * t + l];
      if (clear_denominators) {
        const Int factor = mu_lcm / blk.mu;
        blk.f.alpha[l] = Rat(a * factor);
        blk.f.beta[l] = Rat(b * factor);
      } else {
        blk.f.alpha[l] = Rat(a, blk.mu);
        blk.f.beta[l] = Rat(b, blk.mu);
      }
    }
  }

  // Coefficient-growth guarantee, asserted on every run: every numerator and
  // denominator fits in 16 * (2*t*types)^3 * (1 + bits(N*max(D^2,1))) bits.
  const Int dd(2 * t * types);
  const Int bound = 16 * dd * dd * dd * (1 + Int(bit_length(N * dhat)));
  for (const BlockType& blk : out.blocks) {
    for (std::size_t l = 0; l < t; ++l) {
      for (const Rat* c : {&blk.f.alpha[l], &blk.f.beta[l]}) {
        const Int nb(bit_length(int_abs(numerator(*c))));
        const Int db(bit_length(denominator(*c)));
        require(nb + db <= bound, "reduce_objective: coefficient growth bound");
      }
    }
  }
  for (const BlockType& blk : out.blocks)
    validate_block(blk, inst.r, inst.s, inst.t);
  return out;
}

}  // namespace hmsched
