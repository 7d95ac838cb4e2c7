#pragma once

// Exact lattice-basis reduction over the integers (Lovasz parameter 3/4)
// together with a simultaneous-Diophantine-approximation routine built on it.
// The reduction keeps integral Gram-Schmidt data (Gram determinants d[] and
// scaled projection coefficients lam[][]), so the hot loop performs only
// arbitrary-precision integer multiplications and exact divisions; rationals
// appear only in the final verification pass.

#include <cstddef>
#include <utility>
#include <vector>

#include "hmsched/linalg.hpp"
#include "hmsched/numeric.hpp"

namespace hmsched {

namespace detail {

inline Int exact_div(const Int& a, const Int& b) {
  require(b != 0, "lattice reduction: division by zero");
  require(a % b == 0, "lattice reduction: inexact division");
  return a / b;
}

}  // namespace detail

struct LLLResult {
  std::vector<IntVec> basis;      // reduced rows, spanning the input lattice
  std::vector<IntVec> transform;  // basis[i] = sum_j transform[i][j]*input[j]
};

// Reduces linearly independent integer rows.  The output basis is
// size-reduced (|mu_{i,j}| <= 1/2) and satisfies the Lovasz condition with
// parameter 3/4, hence its first row b1 obeys
// |b1| <= 2^{(n-1)/4} * det(L)^{1/n}.
inline LLLResult lll_reduce(const std::vector<IntVec>& input) {
  const std::size_t n = input.size();
  require(n >= 1, "lattice reduction: empty basis");
  const std::size_t dim = input[0].size();
  for (const IntVec& row : input)
    require(row.size() == dim, "lattice reduction: ragged basis");

  std::vector<IntVec> b = input;
  std::vector<IntVec> H(n, IntVec(n, Int(0)));
  for (std::size_t i = 0; i < n; ++i) H[i][i] = 1;

  // d[j] is the Gram determinant of the first j rows (d[0] = 1) and
  // lam[i][j] = mu_{i,j} * d[j+1]; with this scaling every division below is
  // exact and all state stays integral.
  std::vector<Int> d(n + 1, Int(1));
  std::vector<IntVec> lam(n, IntVec(n, Int(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      Int u = dot(b[i], b[j]);
      for (std::size_t k = 0; k < j; ++k)
        u = detail::exact_div(d[k + 1] * u - lam[i][k] * lam[j][k], d[k]);
      if (j < i) {
        lam[i][j] = u;
      } else {
        require(u > 0, "lattice reduction: dependent basis");
        d[i + 1] = u;
      }
    }
  }

  auto reduce_row = [&](std::size_t k, std::size_t l) {
    if (2 * int_abs(lam[k][l]) <= d[l + 1]) return;
    const Int q = rat_round(Rat(lam[k][l], d[l + 1]));
    for (std::size_t c = 0; c < dim; ++c) b[k][c] -= q * b[l][c];
    for (std::size_t c = 0; c < n; ++c) H[k][c] -= q * H[l][c];
    lam[k][l] -= q * d[l + 1];
    for (std::size_t i = 0; i < l; ++i) lam[k][i] -= q * lam[l][i];
  };

  std::size_t k = 1;
  while (k < n) {
    reduce_row(k, k - 1);
    // Lovasz condition with parameter 3/4, cleared of denominators:
    // 4*(d[k+1]*d[k-1] + lam^2) >= 3*d[k]^2.
    const Int lkk = lam[k][k - 1];
    if (4 * (d[k + 1] * d[k - 1] + lkk * lkk) >= 3 * d[k] * d[k]) {
      for (std::size_t j = k - 1; j-- > 0;) reduce_row(k, j);
      ++k;
      continue;
    }
    std::swap(b[k], b[k - 1]);
    std::swap(H[k], H[k - 1]);
    for (std::size_t j = 0; j + 1 < k; ++j) std::swap(lam[k][j], lam[k - 1][j]);
    const Int lamv = lam[k][k - 1];
    const Int dnew = detail::exact_div(d[k - 1] * d[k + 1] + lamv * lamv, d[k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Int t0 = lam[i][k];
      lam[i][k] = detail::exact_div(d[k + 1] * lam[i][k - 1] - lamv * t0, d[k]);
      lam[i][k - 1] = detail::exact_div(dnew * t0 + lamv * lam[i][k], d[k + 1]);
    }
    d[k] = dnew;
    if (k > 1) --k;
  }

  // Verification pass: recompute the Gram-Schmidt data from scratch with
  // rationals and confirm both reducedness conditions plus the recorded
  // transform.  Catches any bookkeeping slip in the integral updates.
  {
    std::vector<RatVec> mu(n, RatVec(n, Rat(0)));
    RatVec norms(n, Rat(0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        Rat m(dot(b[i], b[j]));
        for (std::size_t l = 0; l < j; ++l) m -= mu[j][l] * mu[i][l] * norms[l];
        mu[i][j] = m / norms[j];
        require(2 * rat_abs(mu[i][j]) <= 1, "lattice reduction: not size-reduced");
      }
      Rat nrm(dot(b[i], b[i]));
      for (std::size_t l = 0; l < i; ++l) nrm -= mu[i][l] * mu[i][l] * norms[l];
      norms[i] = nrm;
      require(norms[i] > 0, "lattice reduction: dependent output");
      if (i > 0) {
        const Rat m = mu[i][i - 1];
        require(norms[i] >= (Rat(3, 4) - m * m) * norms[i - 1],
                "lattice reduction: Lovasz condition violated");
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < dim; ++c) {
        Int acc = 0;
        for (std::size_t j = 0; j < n; ++j) acc += H[i][j] * input[j][c];
        require(acc == b[i][c], "lattice reduction: transform mismatch");
      }
    }
  }

  LLLResult out;
  out.basis = std::move(b);
  out.transform = std::move(H);
  return out;
}

struct DiophantineApprox {
  Int q;     // common denominator, q >= 1
  IntVec p;  // numerators: |q*w_i - p_i| <= eps for every coordinate
};

// Finds one denominator q >= 1 approximating every coordinate of w at once
// with error at most eps.  The (d+1)-dimensional lattice spanned by
// (lambda, w) and the unit rows has determinant lambda, so with
// lambda = eps^{d+1} * 2^{-ceil(d(d+1)/4)} the first reduced vector
// (q*lambda, q*w - p) is shorter than eps; its first transform coefficient
// recovers q exactly.
inline DiophantineApprox simultaneous_diophantine(const RatVec& w,
                                                  const Rat& eps) {
  const std::size_t d = w.size();
  require(d >= 1, "diophantine approximation: empty target");
  require(eps > 0 && eps < 1, "diophantine approximation: eps outside (0,1)");

  Rat lambda = 1;
  for (std::size_t i = 0; i <= d; ++i) lambda *= eps;
  lambda /= Rat(int_pow(Int(2), (Int(d) * Int(d) + Int(d) + 3) / 4));

  // Scale the rational rows (lambda, w), (0, e_i) by one common factor; a
  // scaled lattice has the same transform coefficients, so q is unaffected.
  Int scale = denominator(lambda);
  for (const Rat& wi : w) scale = lcm(scale, denominator(wi));
  std::vector<IntVec> rows(d + 1, IntVec(d + 1, Int(0)));
  const Rat ls = lambda * scale;
  require(rat_is_integer(ls), "diophantine approximation: scaling failed");
  rows[0][0] = numerator(ls);
  for (std::size_t i = 0; i < d; ++i) {
    const Rat ws = w[i] * scale;
    require(rat_is_integer(ws), "diophantine approximation: scaling failed");
    rows[0][i + 1] = numerator(ws);
    rows[i + 1][i + 1] = scale;
  }

  const LLLResult red = lll_reduce(rows);
  RatVec v(d + 1);
  for (std::size_t j = 0; j <= d; ++j) v[j] = Rat(red.basis[0][j], scale);
  require(dot(v, v) <= eps * eps,
          "diophantine approximation: reduction too weak");
  // A vector with q = 0 is integral and nonzero, so its norm would be >= 1,
  // contradicting the bound just checked.
  Int q = red.transform[0][0];
  require(q != 0, "diophantine approximation: zero denominator");
  const bool neg = q < 0;

  DiophantineApprox out;
  out.q = neg ? Int(-q) : q;
  out.p.assign(d, Int(0));
  for (std::size_t i = 0; i < d; ++i) {
    const Rat vi = neg ? Rat(-v[i + 1]) : v[i + 1];
    const Rat pi = Rat(out.q) * w[i] - vi;
    require(rat_is_integer(pi), "diophantine approximation: non-integral row");
    out.p[i] = numerator(pi);
    require(rat_abs(Rat(out.q) * w[i] - Rat(out.p[i])) <= eps,
            "diophantine approximation: quality bound violated");
  }
  return out;
}

}  // namespace hmsched
