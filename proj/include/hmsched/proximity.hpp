#pragma once

// Proximity-driven reduction of a huge N-fold instance.
//
// Given a vertex optimum y* of the configuration LP (support <= r + tau-bar),
// an optimal *integer* solution exists within l1-distance P of the rounded
// brick solution induced by y*, where
//
//   P = ((r + tau-bar) * 26 t^4 * max(1, ceil(log2(t*||E2||_inf))))
//       * (2r)^{r+1} * (||E||_inf * s)^{3rs} .
//
// Consequently all but a bounded number of bricks can be fixed to the support
// configurations outright (y_{-P} := max{0, floor(y) - P}), and the remaining
// bricks live in small boxes around at most 2*tau-bar + r "centers": the
// support configurations themselves plus, per type, the coordinate-wise
// average of the fractional residue.  `reduce` builds that smaller huge
// N-fold instance; `lift` maps any of its solutions back to the original
// instance, exactly.
//
// Bookkeeping convention: the inner objective of a center (i, c') is the
// shifted quadratic cbar -> f^i(floor(c') + cbar) MINUS its constant term
// f^i(floor(c')) (a QuadObjective cannot carry constants).  Those constants,
// weighted by the center multiplicities, are folded into fixedContribution
// together with the objective mass of the fixed bricks, so that
//
//   objective(lift(sol)) = fixedContribution + objective(sol)
//
// holds exactly for every inner solution.

#include "hmsched/conflp.hpp"
#include "hmsched/nfold.hpp"

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace hmsched {

struct ProximityBound {
  Int P = 0;
  std::size_t r = 0, tau_bar = 0, t = 0, s = 0;  // inputs snapshot
  Int e_inf = 0, e2_inf = 0;
  bool overridden = false;
};

// The bound from the formula alone.  Power bases are clamped to >= 1 so that
// degenerate all-zero matrices still yield P >= 1; on instances produced by
// the model builders (r, s >= 1, ||E||_inf >= 1) the clamps never bite and
// the value is the formula verbatim.
inline Int proximity_formula(std::size_t r, std::size_t tau_bar, std::size_t t,
                             std::size_t s, const Int& e_inf,
                             const Int& e2_inf) {
  const Int rr(r), tt(t), ss(s);
  const Int logf =
      int_max(Int(1), ceil_log2(int_max(Int(1), tt * e2_inf)));
  const Int head = (rr + Int(tau_bar)) * 26 * tt * tt * tt * tt * logf;
  const Int mid = int_pow(int_max(Int(1), 2 * rr), rr + 1);
  const Int tail = int_pow(int_max(Int(1), e_inf * ss), 3 * rr * ss);
  return head * mid * tail;
}

inline ProximityBound proximity_P(
    const HugeNFoldInstance& inst,
    const std::optional<Int>& override_P = std::nullopt) {
  ProximityBound pb;
  pb.r = inst.r;
  pb.tau_bar = inst.tau_bar();
  pb.t = inst.t;
  pb.s = inst.s;
  pb.e_inf = inst.E_inf_norm();
  pb.e2_inf = inst.E2_inf_norm();
  if (override_P) {
    require(*override_P >= 0, "proximity: override must be nonnegative");
    pb.P = *override_P;
    pb.overridden = true;
  } else {
    pb.P = proximity_formula(pb.r, pb.tau_bar, pb.t, pb.s, pb.e_inf,
                             pb.e2_inf);
  }
  return pb;
}

enum class CenterOrigin { SupportColumn, AveragedConfiguration };

struct Center {
  std::size_t type = 0;  // original block-type index
  IntVec cfloor;         // floor of the center configuration
  CenterOrigin origin = CenterOrigin::SupportColumn;
  Int muBar = 0;

  bool operator==(const Center& o) const {
    return type == o.type && cfloor == o.cfloor && origin == o.origin &&
           muBar == o.muBar;
  }
};

struct ReducedInstance {
  HugeNFoldInstance inner;      // block j belongs to centers[j]
  std::vector<Center> centers;  // support columns first, then averaged
  Rat fixedContribution = 0;    // fixed bricks + center shift constants
  ConfMultiSolution fixedSolution;  // the y_{-P} part; value = its f-mass
};

inline ReducedInstance reduce(const HugeNFoldInstance& inst,
                              const ConfLPSolution& lpOpt,
                              const ProximityBound& pb) {
  check_conflp_solution(inst, lpOpt);
  require(lpOpt.entries.size() <= inst.r + inst.tau_bar(),
          "proximity: LP support exceeds r + tau-bar");
  const Int& P = pb.P;

  ReducedInstance red;
  red.fixedSolution.value = 0;

  // Fixed part: y_{-P} = max{0, floor(y) - P}, entry-wise on the support.
  for (const auto& [col, y] : lpOpt.entries) {
    require(col.type < inst.tau_bar(), "proximity: support type out of range");
    const Int fixed = int_max(Int(0), rat_floor(y) - P);
    if (fixed == 0) continue;
    const Rat mass = Rat(fixed) * inst.blocks[col.type].f.value(col.c);
    red.fixedSolution.entries.emplace(col, fixed);
    red.fixedSolution.value += mass;
    red.fixedContribution += mass;
  }

  // Centers: every support column, then one averaged configuration per type
  // with nonzero fractional mass (the average is a convex combination of
  // configurations, hence inside the box; flooring it may break E2 c = b,
  // which the shifted right-hand side absorbs).
  for (const auto& [col, y] : lpOpt.entries) {
    Center ctr;
    ctr.type = col.type;
    ctr.cfloor = col.c;
    ctr.origin = CenterOrigin::SupportColumn;
    ctr.muBar = int_min(P, rat_floor(y));
    red.centers.push_back(std::move(ctr));
  }
  for (std::size_t i = 0; i < inst.tau_bar(); ++i) {
    Rat mass = 0;
    RatVec avg(inst.t, Rat(0));
    for (const auto& [col, y] : lpOpt.entries) {
      if (col.type != i) continue;
      const Rat frac = rat_frac(y);
      if (frac == 0) continue;
      mass += frac;
      for (std::size_t j = 0; j < inst.t; ++j) avg[j] += frac * col.c[j];
    }
    // The fill row sum_c y(i,c) = mu_i is integral, so the fractional parts
    // sum to an integer.
    require(rat_is_integer(mass),
            "proximity: fractional mass of a type is not an integer");
    if (mass == 0) continue;
    Center ctr;
    ctr.type = i;
    ctr.origin = CenterOrigin::AveragedConfiguration;
    ctr.muBar = numerator(mass);
    ctr.cfloor.reserve(inst.t);
    for (std::size_t j = 0; j < inst.t; ++j)
      ctr.cfloor.push_back(rat_floor(avg[j] / mass));
    red.centers.push_back(std::move(ctr));
  }
  require(red.centers.size() <= 2 * inst.tau_bar() + inst.r,
          "proximity: more centers than 2*tau-bar + r");

  // Inner instance: same row structure, one block type per center, boxes
  // intersected with a radius-P window around the center and shifted so the
  // center floor becomes the origin.
  red.inner.r = inst.r;
  red.inner.s = inst.s;
  red.inner.t = inst.t;
  red.inner.model = ModelKind::Generic;
  red.inner.b0 = inst.b0;
  for (const auto& [col, y] : red.fixedSolution.entries) {
    const IntVec link = mat_vec(inst.blocks[col.type].E1, col.c);
    for (std::size_t i = 0; i < inst.r; ++i)
      red.inner.b0[i] -= y * link[i];
  }
  for (const Center& ctr : red.centers) {
    const BlockType& src = inst.blocks[ctr.type];
    BlockType blk;
    blk.E1 = src.E1;
    blk.E2 = src.E2;
    blk.mu = ctr.muBar;
    const IntVec shift_rows = mat_vec(src.E2, ctr.cfloor);
    blk.b = vec_sub(src.b, shift_rows);
    for (std::size_t j = 0; j < inst.t; ++j) {
      blk.l.push_back(int_max(ctr.cfloor[j] - P, src.l[j]) - ctr.cfloor[j]);
      const Int cap = ctr.cfloor[j] + P + 1;
      blk.u.push_back(
          (src.u[j].has_value() ? int_min(cap, *src.u[j]) : cap) -
          ctr.cfloor[j]);
    }
    const auto [shifted, constant] = quad_shift(src.f, ctr.cfloor);
    blk.f = shifted;
    red.fixedContribution += Rat(ctr.muBar) * constant;

    const IntVec link = mat_vec(src.E1, ctr.cfloor);
    for (std::size_t i = 0; i < inst.r; ++i)
      red.inner.b0[i] -= ctr.muBar * link[i];
    red.inner.blocks.push_back(std::move(blk));
  }
  validate_nfold(red.inner);
  return red;
}

// Maps an inner solution back to the original instance: the fixed bricks plus
// floor(c') + cbar for every inner brick of center (i, c').  Verifies full
// feasibility for the original instance and the objective bookkeeping before
// returning; a failure of either signals an implementation bug.
inline ConfMultiSolution lift(const HugeNFoldInstance& original,
                              const ReducedInstance& red,
                              const ConfMultiSolution& innerSol) {
  check_confilp_solution(red.inner, innerSol);
  ConfMultiSolution out;
  out.entries = red.fixedSolution.entries;
  for (const auto& [col, mult] : innerSol.entries) {
    require(col.type < red.centers.size(),
            "proximity lift: inner type out of range");
    const Center& ctr = red.centers[col.type];
    Configuration lifted{ctr.type, vec_add(ctr.cfloor, col.c)};
    out.entries[std::move(lifted)] += mult;
  }
  out.value = 0;
  for (const auto& [col, mult] : out.entries)
    out.value += Rat(mult) * original.blocks[col.type].f.value(col.c);
  check_confilp_solution(original, out);
  require(out.value == red.fixedContribution + innerSol.value,
          "proximity lift: objective bookkeeping violated");
  return out;
}

// Solves the inner instance exactly and lifts.  A feasible answer is always
// valid for the original instance; with the true (non-overridden) P an
// infeasible answer certifies the original integer program infeasible too,
// while with an override it may merely mean the window was too small.
inline std::optional<ConfMultiSolution> solve_reduced_confilp(
    const HugeNFoldInstance& original, const ReducedInstance& red,
    const ConfILPBudget& budget = {}, const OracleBudget& oracle_budget = {}) {
  const auto innerSol = solve_confilp(red.inner, budget, oracle_budget);
  if (!innerSol) return std::nullopt;
  return lift(original, red, *innerSol);
}

// --- transformation sidecar (text) -------------------------------------------

// Everything `lift` needs besides the inner instance itself, so verification
// can reconstruct original-space solutions independently.
inline std::string serialize_sidecar(const ReducedInstance& red) {
  std::ostringstream out;
  out << "sidecar\n";
  out << "t " << red.inner.t << "\n";
  out << "fixed_contribution " << format_rat(red.fixedContribution) << "\n";
  out << "fixed_value " << format_rat(red.fixedSolution.value) << "\n";
  out << "fixed_entries " << red.fixedSolution.entries.size() << "\n";
  for (const auto& [col, mult] : red.fixedSolution.entries) {
    out << "fixed_entry " << (col.type + 1) << " " << format_int(mult) << "\n";
    out << "fixed_config";
    for (const Int& v : col.c) out << " " << format_int(v);
    out << "\n";
  }
  out << "centers " << red.centers.size() << "\n";
  for (const Center& ctr : red.centers) {
    out << "center " << (ctr.type + 1) << " "
        << (ctr.origin == CenterOrigin::SupportColumn ? "support" : "averaged")
        << " " << format_int(ctr.muBar) << "\n";
    out << "cfloor";
    for (const Int& v : ctr.cfloor) out << " " << format_int(v);
    out << "\n";
  }
  return out.str();
}

// Parses a sidecar and attaches it to an already-parsed inner instance,
// cross-checking that the kernel and the sidecar belong together (one center
// per block, multiplicities matching).
inline ReducedInstance parse_sidecar(const std::string& text,
                                     HugeNFoldInstance inner) {
  std::istringstream in(text);
  std::vector<std::vector<std::string>> lines;
  std::string raw;
  while (std::getline(in, raw)) {
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    auto toks = split_tokens(raw);
    if (!toks.empty()) lines.push_back(std::move(toks));
  }
  std::size_t pos = 0;
  auto next = [&](const std::string& dir,
                  std::size_t min_tokens) -> const std::vector<std::string>& {
    if (pos >= lines.size())
      throw parse_error("sidecar: unexpected end of file, expected '" + dir +
                        "'");
    const auto& ln = lines[pos++];
    if (ln[0] != dir)
      throw parse_error("sidecar: expected '" + dir + "', found '" + ln[0] +
                        "'");
    if (ln.size() < min_tokens)
      throw parse_error("sidecar: too few tokens for '" + dir + "'");
    return ln;
  };

  next("sidecar", 1);
  ReducedInstance red;
  red.inner = std::move(inner);
  const std::size_t t =
      static_cast<std::size_t>(parse_int(next("t", 2)[1]));
  require(t == red.inner.t, "sidecar: dimension differs from the kernel");
  red.fixedContribution = parse_rat(next("fixed_contribution", 2)[1]);
  red.fixedSolution.value = parse_rat(next("fixed_value", 2)[1]);
  const std::size_t nfixed =
      static_cast<std::size_t>(parse_int(next("fixed_entries", 2)[1]));
  for (std::size_t e = 0; e < nfixed; ++e) {
    const auto ln = next("fixed_entry", 3);
    Configuration col;
    col.type = static_cast<std::size_t>(parse_int(ln[1])) - 1;
    const Int mult = parse_int(ln[2]);
    require(mult >= 1, "sidecar: fixed multiplicity must be positive");
    const auto& cfg = next("fixed_config", 1 + t);
    require(cfg.size() == 1 + t, "sidecar: fixed_config length");
    for (std::size_t j = 0; j < t; ++j) col.c.push_back(parse_int(cfg[1 + j]));
    require(red.fixedSolution.entries.emplace(std::move(col), mult).second,
            "sidecar: duplicate fixed entry");
  }
  const std::size_t ncenters =
      static_cast<std::size_t>(parse_int(next("centers", 2)[1]));
  require(ncenters == red.inner.blocks.size(),
          "sidecar: one center per kernel block required");
  for (std::size_t k = 0; k < ncenters; ++k) {
    const auto ln = next("center", 4);
    Center ctr;
    ctr.type = static_cast<std::size_t>(parse_int(ln[1])) - 1;
    if (ln[2] == "support")
      ctr.origin = CenterOrigin::SupportColumn;
    else if (ln[2] == "averaged")
      ctr.origin = CenterOrigin::AveragedConfiguration;
    else
      throw parse_error("sidecar: unknown center origin '" + ln[2] + "'");
    ctr.muBar = parse_int(ln[3]);
    require(ctr.muBar >= 0, "sidecar: negative center multiplicity");
    require(ctr.muBar == red.inner.blocks[k].mu,
            "sidecar: center multiplicity differs from the kernel block");
    const auto& cf = next("cfloor", 1 + t);
    require(cf.size() == 1 + t, "sidecar: cfloor length");
    for (std::size_t j = 0; j < t; ++j) ctr.cfloor.push_back(parse_int(cf[1 + j]));
    red.centers.push_back(std::move(ctr));
  }
  if (pos != lines.size()) throw parse_error("sidecar: trailing content");
  return red;
}

}  // namespace hmsched
