#pragma once

// Huge N-fold integer programs with block types: each block type i carries
// linking rows E1^i (r x t), block rows E2^i (s x t), a box [l, u], a block
// right-hand side b, a separable convex quadratic objective, and a
// multiplicity mu^i counting how many identical bricks of that type exist.
// Bricks are never materialized; everything downstream works per type.
//
// Builders for the two scheduling encodings live here too:
//  * makespan:  one brick per machine, coordinates = (job counts, slack),
//    single block row  p^i . c + slack = k.
//  * weighted completion time: coordinates = (job counts in Smith order,
//    prefix loads), block rows  z_l - z_{l-1} = a_l x_l,  objective derived
//    symbolically so that f^i(config) equals the single-machine cost.

#include "hmsched/instance.hpp"
#include "hmsched/linalg.hpp"
#include "hmsched/numeric.hpp"

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace hmsched {

// Upper bounds may be +infinity; lower bounds are always finite.
using UBound = std::optional<Int>;  // nullopt == +infinity

inline bool ub_at_least(const UBound& u, const Int& v) {
  return !u.has_value() || *u >= v;
}
inline UBound ub_min(const UBound& a, const Int& b) {
  if (!a.has_value() || *a > b) return UBound(b);
  return a;
}
inline std::string format_ubound(const UBound& u) {
  return u.has_value() ? format_int(*u) : std::string("inf");
}

// Separable quadratic: value(x) = sum_l alpha_l x_l^2 + beta_l x_l.
struct QuadObjective {
  RatVec alpha;
  RatVec beta;

  static QuadObjective zero(std::size_t t) {
    QuadObjective q;
    q.alpha.assign(t, Rat(0));
    q.beta.assign(t, Rat(0));
    return q;
  }
  std::size_t size() const { return alpha.size(); }
  bool is_zero() const {
    for (const Rat& a : alpha)
      if (a != 0) return false;
    for (const Rat& b : beta)
      if (b != 0) return false;
    return true;
  }
  Rat value(const IntVec& x) const {
    require(x.size() == alpha.size(), "QuadObjective: dimension mismatch");
    Rat s = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
      s += alpha[i] * x[i] * x[i] + beta[i] * x[i];
    return s;
  }
  bool operator==(const QuadObjective& o) const {
    return alpha == o.alpha && beta == o.beta;
  }
};

// f(v + x) = shifted(x) + constant; the constant is returned separately
// because QuadObjective carries no constant term.
inline std::pair<QuadObjective, Rat> quad_shift(const QuadObjective& f,
                                                const IntVec& v) {
  require(v.size() == f.size(), "quad_shift: dimension mismatch");
  QuadObjective g = f;
  Rat constant = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    g.beta[i] = f.beta[i] + 2 * f.alpha[i] * v[i];
    constant += f.alpha[i] * v[i] * v[i] + f.beta[i] * v[i];
  }
  return {g, constant};
}

struct BlockType {
  IntMatrix E1;  // r x t linking rows
  IntMatrix E2;  // s x t block rows
  IntVec l;      // t lower bounds
  std::vector<UBound> u;  // t upper bounds (may be +infinity)
  IntVec b;      // s block right-hand side
  QuadObjective f;
  Int mu = 0;  // brick multiplicity (>= 0; builders always produce >= 1)
};

inline void validate_block(const BlockType& blk, std::size_t r, std::size_t s,
                           std::size_t t) {
  require(blk.E1.rows() == r && blk.E1.cols() == t, "block: E1 shape");
  require(blk.E2.rows() == s && blk.E2.cols() == t, "block: E2 shape");
  require(blk.l.size() == t && blk.u.size() == t, "block: bound lengths");
  require(blk.b.size() == s, "block: rhs length");
  require(blk.f.size() == t, "block: objective length");
  require(blk.mu >= 0, "block: negative multiplicity");
  for (std::size_t j = 0; j < t; ++j)
    require(ub_at_least(blk.u[j], blk.l[j]), "block: empty box coordinate");
  for (std::size_t j = 0; j < t; ++j)
    if (blk.f.alpha[j] < 0 && (!blk.u[j].has_value() || *blk.u[j] > blk.l[j]))
      throw validation_error(
          "block objective not convex: negative quadratic coefficient on a "
          "coordinate with more than one value");
}

enum class ModelKind { Generic, CmaxModel, SumWCModel };

inline std::string model_kind_name(ModelKind m) {
  switch (m) {
    case ModelKind::CmaxModel: return "cmax";
    case ModelKind::SumWCModel: return "sumwc";
    default: return "generic";
  }
}

struct HugeNFoldInstance {
  std::size_t r = 0, s = 0, t = 0;
  std::vector<BlockType> blocks;
  IntVec b0;  // r global right-hand side
  ModelKind model = ModelKind::Generic;

  std::size_t tau_bar() const { return blocks.size(); }
  Int total_bricks() const {
    Int N = 0;
    for (const BlockType& blk : blocks) N += blk.mu;
    return N;
  }
  Int E_inf_norm() const {
    Int m = 0;
    for (const BlockType& blk : blocks) {
      m = int_max(m, blk.E1.inf_norm());
      m = int_max(m, blk.E2.inf_norm());
    }
    return m;
  }
  Int E2_inf_norm() const {
    Int m = 0;
    for (const BlockType& blk : blocks) m = int_max(m, blk.E2.inf_norm());
    return m;
  }
};

inline void validate_nfold(const HugeNFoldInstance& inst) {
  require(inst.b0.size() == inst.r, "nfold: b0 length");
  for (const BlockType& blk : inst.blocks)
    validate_block(blk, inst.r, inst.s, inst.t);
}

// A configuration of one brick of a given block type.
struct Configuration {
  std::size_t type = 0;
  IntVec c;

  bool operator==(const Configuration& o) const {
    return type == o.type && c == o.c;
  }
  bool operator<(const Configuration& o) const {
    if (type != o.type) return type < o.type;
    return c < o.c;  // lexicographic
  }
};

inline bool config_in_box(const BlockType& blk, const IntVec& c) {
  if (c.size() != blk.l.size()) return false;
  for (std::size_t j = 0; j < c.size(); ++j)
    if (c[j] < blk.l[j] || !ub_at_least(blk.u[j], c[j])) return false;
  return true;
}

inline bool config_feasible(const BlockType& blk, const IntVec& c) {
  return config_in_box(blk, c) && mat_vec(blk.E2, c) == blk.b;
}

// --- makespan model ---------------------------------------------------------

// One brick per machine; c = (x_1..x_tau, slack) with p^i . x + slack = k,
// 0 <= x_j <= n_j, 0 <= slack <= k.  Linking rows count jobs per type.
inline HugeNFoldInstance build_cmax_model(const SchedulingInstance& inst) {
  require(inst.objective == Objective::Cmax, "build_cmax_model: objective");
  HugeNFoldInstance model;
  model.model = ModelKind::CmaxModel;
  model.r = inst.tau;
  model.s = 1;
  model.t = inst.tau + 1;
  model.b0 = inst.n;
  for (std::size_t ki = 0; ki < inst.kappa; ++ki) {
    BlockType blk;
    blk.E1 = IntMatrix(model.r, model.t);
    for (std::size_t j = 0; j < inst.tau; ++j) blk.E1.at(j, j) = 1;
    blk.E2 = IntMatrix(1, model.t);
    for (std::size_t j = 0; j < inst.tau; ++j) blk.E2.at(0, j) = inst.p.at(ki, j);
    blk.E2.at(0, inst.tau) = 1;
    blk.l.assign(model.t, Int(0));
    blk.u.resize(model.t);
    for (std::size_t j = 0; j < inst.tau; ++j) blk.u[j] = UBound(inst.n[j]);
    blk.u[inst.tau] = UBound(inst.k);
    blk.b = {inst.k};
    blk.f = QuadObjective::zero(model.t);
    blk.mu = inst.m[ki];
    model.blocks.push_back(std::move(blk));
  }
  validate_nfold(model);
  return model;
}

// --- weighted completion time model ------------------------------------------

// Difference form of the load constraints: row l reads
//   a_l x_l + z_{l-1} - z_l = 0    (z_0 = 0 implicit),
// i.e. z_l is the prefix load after the first l Smith positions.
inline IntMatrix load_difference_matrix(const IntVec& a) {
  const std::size_t tau = a.size();
  IntMatrix E2(tau, 2 * tau);
  for (std::size_t l = 0; l < tau; ++l) {
    E2.at(l, l) = a[l];
    E2.at(l, tau + l) = -1;
    if (l > 0) E2.at(l, tau + l - 1) = 1;
  }
  return E2;
}

// Prefix form of the same constraints: row l reads
//   a_1 x_1 + ... + a_l x_l - z_l = 0.
// Row-equivalent to load_difference_matrix(a) but with a complete dual graph
// for tau >= 3 (every pair of rows shares an x column).
inline IntMatrix load_prefix_matrix(const IntVec& a) {
  const std::size_t tau = a.size();
  IntMatrix F(tau, 2 * tau);
  for (std::size_t l = 0; l < tau; ++l) {
    for (std::size_t q = 0; q <= l; ++q) F.at(l, q) = a[q];
    F.at(l, tau + l) = -1;
  }
  return F;
}

// One brick per machine; c = (x_1..x_tau, z_1..z_tau) with x in Smith order
// for the brick's kind.  The separable quadratic below is the unique one
// matching single_machine_cost on every configuration:
//
//   cost = sum_l rho_l (z_l^2 - z_{l-1}^2)/2 + sum_l (W_l a_l / 2) x_l
//        = sum_l (rho_l - rho_{l+1})/2 * z_l^2 + sum_l (W_l a_l / 2) x_l
//
// where W_l, a_l are the weight/time at Smith position l, rho_l = W_l/a_l
// (non-increasing, so all z coefficients are nonnegative) and rho_{tau+1}=0.
// The identity per block of x identical jobs over load interval [L, R]:
//   w (x L + p x(x+1)/2) = rho (R^2 - L^2)/2 + (w p / 2) x.
inline HugeNFoldInstance build_sumwc_model(const SchedulingInstance& inst) {
  require(inst.objective == Objective::SumWC, "build_sumwc_model: objective");
  HugeNFoldInstance model;
  model.model = ModelKind::SumWCModel;
  const std::size_t tau = inst.tau;
  model.r = tau;
  model.s = tau;
  model.t = 2 * tau;
  model.b0 = inst.n;
  const Int n_max = inst.max_jobs_of_a_type();
  const Int p_max = inst.max_ptime();
  const Int z_cap = p_max * Int(tau) * n_max;
  for (std::size_t ki = 0; ki < inst.kappa; ++ki) {
    const auto order = smith_order(inst, ki);
    IntVec a(tau);
    IntVec W(tau);
    for (std::size_t l = 0; l < tau; ++l) {
      a[l] = inst.p.at(ki, order[l]);
      W[l] = inst.w[order[l]];
    }
    BlockType blk;
    blk.E1 = IntMatrix(model.r, model.t);
    for (std::size_t l = 0; l < tau; ++l) blk.E1.at(order[l], l) = 1;
    blk.E2 = load_difference_matrix(a);
    blk.l.assign(model.t, Int(0));
    blk.u.resize(model.t);
    for (std::size_t l = 0; l < tau; ++l) blk.u[l] = UBound(n_max);
    for (std::size_t l = 0; l < tau; ++l) blk.u[tau + l] = UBound(z_cap);
    blk.b.assign(tau, Int(0));
    blk.f = QuadObjective::zero(model.t);
    for (std::size_t l = 0; l < tau; ++l) {
      const Rat rho_l(W[l], a[l]);
      const Rat rho_next = (l + 1 < tau) ? Rat(W[l + 1], a[l + 1]) : Rat(0);
      require(rho_l >= rho_next, "Smith order violated while building model");
      blk.f.beta[l] = Rat(W[l] * a[l], 2);
      blk.f.alpha[tau + l] = (rho_l - rho_next) / 2;
    }
    blk.mu = inst.m[ki];
    // Cheap structural self-check: unit configurations must reproduce the
    // single-machine cost (exhaustive validation lives in the test suite).
    for (std::size_t l = 0; l < tau; ++l) {
      IntVec c(model.t, Int(0));
      c[l] = 1;
      for (std::size_t q = l; q < tau; ++q) c[tau + q] = a[l];
      IntVec count(tau, Int(0));
      count[order[l]] = 1;
      require(blk.f.value(c) == Rat(single_machine_cost(inst, ki, count)),
              "derived objective failed unit-configuration check");
    }
    model.blocks.push_back(std::move(blk));
  }
  validate_nfold(model);
  return model;
}

// Exhaustive cross-check of the derived quadratic against the independent
// scheduling-cost routine, over every job multiset with counts <= n
// (guarded by a budget on the number of multisets).
inline void validate_sumwc_objective(const SchedulingInstance& inst,
                                     const HugeNFoldInstance& model,
                                     long long budget = 100000) {
  require(model.model == ModelKind::SumWCModel, "validate: wrong model");
  const std::size_t tau = inst.tau;
  for (std::size_t ki = 0; ki < inst.kappa; ++ki) {
    const auto order = smith_order(inst, ki);
    IntVec a(tau);
    for (std::size_t l = 0; l < tau; ++l) a[l] = inst.p.at(ki, order[l]);
    IntVec x(tau, Int(0));
    long long visited = 0;
    while (true) {
      if (++visited > budget)
        throw numeric_error("validate_sumwc_objective: budget exceeded");
      IntVec c(2 * tau, Int(0));
      IntVec count(tau, Int(0));
      Int z = 0;
      for (std::size_t l = 0; l < tau; ++l) {
        c[l] = x[l];
        z += a[l] * x[l];
        c[tau + l] = z;
        count[order[l]] = x[l];
      }
      require(config_feasible(model.blocks[ki], c),
              "validate_sumwc_objective: enumerated config infeasible");
      require(model.blocks[ki].f.value(c) ==
                  Rat(single_machine_cost(inst, ki, count)),
              "derived objective disagrees with single-machine cost");
      // next multiset
      std::size_t l = 0;
      while (l < tau) {
        if (Int(x[l] + 1) <= inst.n[order[l]]) {
          ++x[l];
          break;
        }
        x[l] = 0;
        ++l;
      }
      if (l == tau) break;
    }
  }
}

inline HugeNFoldInstance build_model(const SchedulingInstance& inst) {
  return inst.objective == Objective::Cmax ? build_cmax_model(inst)
                                           : build_sumwc_model(inst);
}

// --- debug text format -------------------------------------------------------

// Plain-text dump mainly for --dump-model, kernel files and tests.  Fixed
// directive order inside each block; no stability promise across versions.
inline std::string serialize_nfold(const HugeNFoldInstance& inst) {
  std::ostringstream out;
  out << "nfold\n";
  out << "model " << model_kind_name(inst.model) << "\n";
  out << "dims " << inst.r << " " << inst.s << " " << inst.t << "\n";
  out << "b0";
  for (const Int& v : inst.b0) out << " " << format_int(v);
  out << "\nblocks " << inst.blocks.size() << "\n";
  for (std::size_t i = 0; i < inst.blocks.size(); ++i) {
    const BlockType& blk = inst.blocks[i];
    out << "block " << (i + 1) << "\n";
    out << "mu " << format_int(blk.mu) << "\n";
    for (std::size_t row = 0; row < inst.r; ++row) {
      out << "e1";
      for (std::size_t j = 0; j < inst.t; ++j)
        out << " " << format_int(blk.E1.at(row, j));
      out << "\n";
    }
    for (std::size_t row = 0; row < inst.s; ++row) {
      out << "e2";
      for (std::size_t j = 0; j < inst.t; ++j)
        out << " " << format_int(blk.E2.at(row, j));
      out << "\n";
    }
    out << "lb";
    for (const Int& v : blk.l) out << " " << format_int(v);
    out << "\nub";
    for (const UBound& v : blk.u) out << " " << format_ubound(v);
    out << "\nrhs";
    for (const Int& v : blk.b) out << " " << format_int(v);
    out << "\nquad";
    for (std::size_t j = 0; j < inst.t; ++j)
      out << " " << format_rat(blk.f.alpha[j]) << " "
          << format_rat(blk.f.beta[j]);
    out << "\n";
  }
  return out.str();
}

inline HugeNFoldInstance parse_nfold(const std::string& text) {
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
      throw parse_error("nfold: unexpected end of file, expected '" + dir + "'");
    const auto& ln = lines[pos++];
    if (ln[0] != dir)
      throw parse_error("nfold: expected '" + dir + "', found '" + ln[0] + "'");
    if (ln.size() < min_tokens)
      throw parse_error("nfold: too few tokens for '" + dir + "'");
    return ln;
  };

  next("nfold", 1);
  HugeNFoldInstance inst;
  {
    const auto& ln = next("model", 2);
    if (ln[1] == "cmax")
      inst.model = ModelKind::CmaxModel;
    else if (ln[1] == "sumwc")
      inst.model = ModelKind::SumWCModel;
    else if (ln[1] == "generic")
      inst.model = ModelKind::Generic;
    else
      throw parse_error("nfold: unknown model tag '" + ln[1] + "'");
  }
  {
    const auto& ln = next("dims", 4);
    inst.r = static_cast<std::size_t>(parse_int(ln[1]));
    inst.s = static_cast<std::size_t>(parse_int(ln[2]));
    inst.t = static_cast<std::size_t>(parse_int(ln[3]));
    require(inst.t >= 1 && inst.t <= 100000, "nfold: bad dims");
  }
  {
    const auto& ln = next("b0", 1 + inst.r);
    require(ln.size() == 1 + inst.r, "nfold: b0 length");
    for (std::size_t i = 0; i < inst.r; ++i)
      inst.b0.push_back(parse_int(ln[1 + i]));
  }
  std::size_t nblocks = 0;
  {
    const auto& ln = next("blocks", 2);
    nblocks = static_cast<std::size_t>(parse_int(ln[1]));
  }
  for (std::size_t bi = 0; bi < nblocks; ++bi) {
    next("block", 2);
    BlockType blk;
    blk.mu = parse_int(next("mu", 2)[1]);
    blk.E1 = IntMatrix(inst.r, inst.t);
    for (std::size_t row = 0; row < inst.r; ++row) {
      const auto& ln = next("e1", 1 + inst.t);
      require(ln.size() == 1 + inst.t, "nfold: e1 row length");
      for (std::size_t j = 0; j < inst.t; ++j)
        blk.E1.at(row, j) = parse_int(ln[1 + j]);
    }
    blk.E2 = IntMatrix(inst.s, inst.t);
    for (std::size_t row = 0; row < inst.s; ++row) {
      const auto& ln = next("e2", 1 + inst.t);
      require(ln.size() == 1 + inst.t, "nfold: e2 row length");
      for (std::size_t j = 0; j < inst.t; ++j)
        blk.E2.at(row, j) = parse_int(ln[1 + j]);
    }
    {
      const auto& ln = next("lb", 1 + inst.t);
      require(ln.size() == 1 + inst.t, "nfold: lb length");
      for (std::size_t j = 0; j < inst.t; ++j)
        blk.l.push_back(parse_int(ln[1 + j]));
    }
    {
      const auto& ln = next("ub", 1 + inst.t);
      require(ln.size() == 1 + inst.t, "nfold: ub length");
      for (std::size_t j = 0; j < inst.t; ++j)
        blk.u.push_back(ln[1 + j] == "inf" ? UBound(std::nullopt)
                                           : UBound(parse_int(ln[1 + j])));
    }
    {
      const auto& ln = next("rhs", 1 + inst.s);
      require(ln.size() == 1 + inst.s, "nfold: rhs length");
      for (std::size_t row = 0; row < inst.s; ++row)
        blk.b.push_back(parse_int(ln[1 + row]));
    }
    {
      const auto& ln = next("quad", 1 + 2 * inst.t);
      require(ln.size() == 1 + 2 * inst.t, "nfold: quad length");
      blk.f = QuadObjective::zero(inst.t);
      for (std::size_t j = 0; j < inst.t; ++j) {
        blk.f.alpha[j] = parse_rat(ln[1 + 2 * j]);
        blk.f.beta[j] = parse_rat(ln[2 + 2 * j]);
      }
    }
    inst.blocks.push_back(std::move(blk));
  }
  if (pos != lines.size()) throw parse_error("nfold: trailing content");
  validate_nfold(inst);
  return inst;
}

}  // namespace hmsched
