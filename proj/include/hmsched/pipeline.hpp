#pragma once

// End-to-end orchestration: scheduling instance -> huge N-fold model ->
// configuration LP -> proximity reduction -> objective reduction -> kernel
// files, plus the oracle-backed equivalence verification that consumes them.
//
// The kernel of an instance is the reduced block instance together with a
// sidecar recording the transformation (fixed bricks, centers, objective
// offset).  Decision equivalence: the original admits a schedule of cost
// <= k  iff  the kernel is feasible with optimum <= k - fixedContribution
// (for the makespan objective the kernel objective is identically zero and
// the test degenerates to feasibility).

#include "hmsched/certificates.hpp"
#include "hmsched/objreduce.hpp"
#include "hmsched/proximity.hpp"

#include <chrono>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace hmsched {

inline HugeNFoldInstance build_scheduling_model(
    const SchedulingInstance& inst) {
  return inst.objective == Objective::Cmax ? build_cmax_model(inst)
                                           : build_sumwc_model(inst);
}

struct StageTiming {
  std::string stage;
  long long microseconds = 0;
};

struct RunReport {
  bool lp_feasible = false;
  Rat conflp_value = 0;
  std::size_t support = 0;       // configuration LP support size
  Int P = 0;                     // proximity bound used
  bool overridden = false;
  std::size_t centers = 0;       // kernel block count
  std::size_t kernel_bits = 0;   // 8 x bytes of the canonical kernel text
  std::size_t sidecar_bits = 0;
  std::vector<StageTiming> timings;  // wall clock; never part of results

  // Deterministic result lines (no timings, no environment).
  std::string summary() const {
    std::ostringstream out;
    out << "feasible " << (lp_feasible ? "yes" : "no") << "\n";
    if (!lp_feasible) return out.str();
    out << "conflp_value " << format_rat(conflp_value) << "\n";
    out << "support " << support << "\n";
    out << "proximity_P " << format_int(P)
        << (overridden ? " overridden" : "") << "\n";
    out << "centers " << centers << "\n";
    out << "kernel_bits " << kernel_bits << "\n";
    out << "sidecar_bits " << sidecar_bits << "\n";
    return out.str();
  }
};

struct KernelizeOptions {
  std::optional<Int> proximity_override;
  bool reduce_objective_coeffs = true;
  SepBudgets sep;
  OracleBudget oracle;
};

struct KernelizeResult {
  HugeNFoldInstance model;
  std::optional<ConfLPSolution> lp;
  std::optional<ReducedInstance> reduced;  // nullopt: LP (hence ILP) infeasible
  HugeNFoldInstance kernel;  // reduced instance with compressed objective
  std::string kernel_text;
  std::string sidecar_text;
  RunReport report;
};

inline KernelizeResult run_kernelize(const SchedulingInstance& inst,
                                     const KernelizeOptions& opt = {}) {
  using clock = std::chrono::steady_clock;
  KernelizeResult res;
  auto mark = clock::now();
  auto lap = [&](const char* stage) {
    const auto now = clock::now();
    res.report.timings.push_back(
        {stage, std::chrono::duration_cast<std::chrono::microseconds>(
                    now - mark)
                    .count()});
    mark = now;
  };

  res.model = build_scheduling_model(inst);
  lap("build_model");

  res.lp = solve_conflp(res.model, opt.sep, opt.oracle);
  lap("solve_conflp");
  if (!res.lp) return res;  // fractional relaxation infeasible: answer is NO
  res.report.lp_feasible = true;
  res.report.conflp_value = res.lp->value;
  res.report.support = res.lp->entries.size();

  const ProximityBound pb = proximity_P(res.model, opt.proximity_override);
  res.report.P = pb.P;
  res.report.overridden = pb.overridden;
  res.reduced = reduce(res.model, *res.lp, pb);
  lap("proximity_reduce");

  res.kernel = opt.reduce_objective_coeffs
                   ? reduce_objective(res.reduced->inner)
                   : res.reduced->inner;
  lap("objective_reduce");

  res.kernel_text = serialize_nfold(res.kernel);
  res.sidecar_text = serialize_sidecar(*res.reduced);
  res.report.centers = res.reduced->centers.size();
  res.report.kernel_bits = 8 * res.kernel_text.size();
  res.report.sidecar_bits = 8 * res.sidecar_text.size();
  lap("serialize");
  return res;
}

// --- kernel reconstruction from files ------------------------------------------

// Rebuilds the reduction transformation from the three artifacts, cross-
// checking everything recomputable against the freshly built model:
// block matrices, recentered right-hand sides, the linking right-hand side,
// the stored objective offset, and the fixed bricks' feasibility.  The
// kernel's compressed objective is replaced by the exact shifted original
// (the compressed one is only order-equivalent; verification wants values).
// Throws numeric_error naming the first failing check.
inline ReducedInstance rebuild_reduced(const SchedulingInstance& original,
                                       const HugeNFoldInstance& kernel,
                                       const std::string& sidecar_text) {
  const HugeNFoldInstance model = build_scheduling_model(original);
  ReducedInstance red = parse_sidecar(sidecar_text, kernel);

  require(kernel.r == model.r && kernel.s == model.s && kernel.t == model.t,
          "kernel dimensions do not match the model");

  IntVec expected_b0 = model.b0;
  for (std::size_t k = 0; k < red.centers.size(); ++k) {
    const Center& ctr = red.centers[k];
    require(ctr.type < model.tau_bar(),
            "sidecar center type out of range for the model");
    const BlockType& src = model.blocks[ctr.type];
    BlockType& blk = red.inner.blocks[k];
    require(blk.E1 == src.E1 && blk.E2 == src.E2,
            "kernel block matrices do not match the model");
    require(blk.b == vec_sub(src.b, mat_vec(src.E2, ctr.cfloor)),
            "kernel block right-hand side does not match the recentering");
    const auto [shifted, constant] = quad_shift(src.f, ctr.cfloor);
    blk.f = shifted;  // exact objective; the kernel file carries f-tilde
    (void)constant;
    expected_b0 = vec_sub(expected_b0,
                          vec_scale(ctr.muBar, mat_vec(src.E1, ctr.cfloor)));
  }

  Rat expected_offset = 0;
  Rat fixed_value = 0;
  for (const auto& [col, mult] : red.fixedSolution.entries) {
    require(col.type < model.tau_bar(),
            "sidecar fixed entry type out of range for the model");
    require(config_feasible(model.blocks[col.type], col.c),
            "stored fixed configuration infeasible for the model");
    fixed_value += Rat(mult) * model.blocks[col.type].f.value(col.c);
    expected_b0 = vec_sub(
        expected_b0,
        vec_scale(mult, mat_vec(model.blocks[col.type].E1, col.c)));
  }
  require(fixed_value == red.fixedSolution.value,
          "stored fixed-brick objective mass does not match the model");
  expected_offset = fixed_value;
  for (const Center& ctr : red.centers)
    expected_offset += Rat(ctr.muBar) *
                       quad_shift(model.blocks[ctr.type].f, ctr.cfloor).second;
  require(expected_offset == red.fixedContribution,
          "stored objective offset does not match the transformation");
  require(red.inner.b0 == expected_b0,
          "kernel linking right-hand side does not match the transformation");
  return red;
}

// --- oracle-backed equivalence verification -------------------------------------

struct KernelVerdict {
  bool original_yes = false;
  bool reduced_yes = false;
  bool lift_ok = true;  // vacuously true when the kernel is infeasible
  Int brute_optimum = 0;
  std::optional<Rat> reduced_total;        // offset + kernel optimum
  std::optional<ConfMultiSolution> lifted;  // kernel optimum in model space
  std::string detail;                       // first failure, empty when ok

  bool equivalent() const {
    return original_yes == reduced_yes && lift_ok;
  }
};

// Decides the original instance by brute force and the kernel by the exact
// integer program over its full configuration list, compares the verdicts,
// and lifts the kernel optimum back to a full solution as a final check.
// The brute-force side never touches the reduction, so the two decisions
// are independent.
inline KernelVerdict verify_kernel(const SchedulingInstance& original,
                                   const ReducedInstance& red,
                                   const OracleBudget& budget = {},
                                   const ConfILPBudget& ilp_budget = {}) {
  KernelVerdict v;
  const BruteScheduleResult brute = brute_schedule(original, budget);
  v.brute_optimum = brute.optimum;
  v.original_yes = brute.optimum <= original.k;

  const auto inner = solve_confilp(red.inner, ilp_budget, budget);
  if (!inner) {
    v.reduced_yes = false;
    if (v.original_yes) v.detail = "kernel infeasible but original feasible";
    return v;
  }
  v.reduced_total = red.fixedContribution + inner->value;
  v.reduced_yes = *v.reduced_total <= Rat(original.k);
  if (v.original_yes != v.reduced_yes) {
    v.detail = "kernel decision disagrees with brute force";
    return v;
  }

  try {
    const HugeNFoldInstance model = build_scheduling_model(original);
    const ConfMultiSolution lifted = lift(model, red, *inner);
    if (lifted.value != *v.reduced_total) {
      v.lift_ok = false;
      v.detail = "lifted objective disagrees with the kernel total";
    } else {
      v.lifted = lifted;
    }
  } catch (const numeric_error& e) {
    v.lift_ok = false;
    v.detail = std::string("lift failed: ") + e.what();
  }
  return v;
}

}  // namespace hmsched
