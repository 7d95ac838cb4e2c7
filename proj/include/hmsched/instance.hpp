#pragma once

// High-multiplicity scheduling instances: job types with multiplicities in
// binary, machine kinds with multiplicities in binary, and the two supported
// objectives (makespan threshold, total weighted completion time).
//
// Text format (one directive per line, '#' starts a comment, directives may
// appear in any order but each exactly once; `ptime` once per machine kind):
//
//   objective cmax|sumwc
//   bound <k>
//   types <tau>
//   kinds <kappa>
//   jobs <n_1> ... <n_tau>
//   machines <m_1> ... <m_kappa>
//   ptime <i> <p_1^i> ... <p_tau^i>
//   weights <w_1> ... <w_tau>        (present iff objective is sumwc)

#include "hmsched/linalg.hpp"
#include "hmsched/numeric.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hmsched {

enum class Objective { Cmax, SumWC };

inline std::string objective_name(Objective o) {
  return o == Objective::Cmax ? "cmax" : "sumwc";
}

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SchedulingInstance {
  Objective objective = Objective::Cmax;
  std::size_t tau = 0;    // number of job types
  std::size_t kappa = 0;  // number of machine kinds
  IntMatrix p;            // kappa x tau processing times, all >= 1
  IntVec w;               // tau weights, >= 0 (all zero for cmax)
  IntVec n;               // tau job multiplicities, >= 1
  IntVec m;               // kappa machine multiplicities, >= 1
  Int k = 0;              // decision bound, >= 0

  bool operator==(const SchedulingInstance& o) const {
    return objective == o.objective && tau == o.tau && kappa == o.kappa &&
           p == o.p && w == o.w && n == o.n && m == o.m && k == o.k;
  }

  Int total_jobs() const {
    Int s = 0;
    for (const Int& v : n) s += v;
    return s;
  }
  Int total_machines() const {
    Int s = 0;
    for (const Int& v : m) s += v;
    return s;
  }
  Int max_ptime() const { return p.inf_norm(); }
  Int max_jobs_of_a_type() const { return vec_inf_norm(n); }
};

// Structural checks shared by the parser and the programmatic constructors.
inline void validate_instance(const SchedulingInstance& inst) {
  auto fail = [](const std::string& msg) { throw validation_error(msg); };
  if (inst.tau == 0) fail("instance needs at least one job type");
  if (inst.kappa == 0) fail("instance needs at least one machine kind");
  if (inst.p.rows() != inst.kappa || inst.p.cols() != inst.tau)
    fail("processing-time matrix shape mismatch");
  if (inst.w.size() != inst.tau) fail("weight vector length mismatch");
  if (inst.n.size() != inst.tau) fail("job multiplicity length mismatch");
  if (inst.m.size() != inst.kappa) fail("machine multiplicity length mismatch");
  if (inst.k < 0) fail("bound must be nonnegative");
  for (std::size_t i = 0; i < inst.kappa; ++i)
    for (std::size_t j = 0; j < inst.tau; ++j)
      if (inst.p.at(i, j) < 1) fail("processing times must be positive");
  for (const Int& v : inst.n)
    if (v < 1) fail("job multiplicities must be positive");
  for (const Int& v : inst.m)
    if (v < 1) fail("machine multiplicities must be positive");
  for (const Int& v : inst.w)
    if (v < 0) fail("weights must be nonnegative");
  if (inst.objective == Objective::Cmax)
    for (const Int& v : inst.w)
      if (v != 0) fail("makespan instances carry zero weights");
  // No two job types may be identical (same processing column and weight).
  for (std::size_t j = 0; j < inst.tau; ++j)
    for (std::size_t j2 = j + 1; j2 < inst.tau; ++j2) {
      bool same = inst.w[j] == inst.w[j2];
      for (std::size_t i = 0; same && i < inst.kappa; ++i)
        same = inst.p.at(i, j) == inst.p.at(i, j2);
      if (same)
        fail("job types " + std::to_string(j + 1) + " and " +
             std::to_string(j2 + 1) + " are identical; merge their counts");
    }
  // No two machine kinds may be identical.
  for (std::size_t i = 0; i < inst.kappa; ++i)
    for (std::size_t i2 = i + 1; i2 < inst.kappa; ++i2) {
      bool same = true;
      for (std::size_t j = 0; same && j < inst.tau; ++j)
        same = inst.p.at(i, j) == inst.p.at(i2, j);
      if (same)
        fail("machine kinds " + std::to_string(i + 1) + " and " +
             std::to_string(i2 + 1) + " are identical; merge their counts");
    }
}

// --- compression from a flat job/machine list ------------------------------

// One job: processing time on each individual machine, plus a weight.
struct Job {
  IntVec ptimes;  // length = number of machines
  Int weight = 0;
};

using JobList = std::vector<Job>;

// Group identical jobs into types and identical machines (equal processing
// columns) into kinds, counting multiplicities.  Type and kind order is
// first-occurrence order.  Makespan instances force weights to zero before
// grouping so the grouping stays well defined.
inline SchedulingInstance compress_to_hm(const JobList& jobs,
                                         std::size_t machine_count,
                                         Objective objective, const Int& k) {
  require(!jobs.empty(), "compress_to_hm: no jobs");
  require(machine_count > 0, "compress_to_hm: no machines");
  for (const Job& job : jobs)
    require(job.ptimes.size() == machine_count,
            "compress_to_hm: job processing vector length mismatch");

  // Machine kinds: machines with identical processing columns.
  std::vector<std::size_t> machine_kind(machine_count);
  std::vector<std::size_t> kind_rep;  // representative machine per kind
  for (std::size_t mi = 0; mi < machine_count; ++mi) {
    std::size_t found = kind_rep.size();
    for (std::size_t ki = 0; ki < kind_rep.size(); ++ki) {
      bool same = true;
      for (std::size_t j = 0; same && j < jobs.size(); ++j)
        same = jobs[j].ptimes[mi] == jobs[j].ptimes[kind_rep[ki]];
      if (same) {
        found = ki;
        break;
      }
    }
    if (found == kind_rep.size()) kind_rep.push_back(mi);
    machine_kind[mi] = found;
  }
  const std::size_t kappa = kind_rep.size();

  // Job types: identical (per-kind processing vector, weight).
  struct TypeKey {
    IntVec pcol;
    Int weight;
    bool operator==(const TypeKey& o) const {
      return pcol == o.pcol && weight == o.weight;
    }
  };
  std::vector<TypeKey> types;
  IntVec type_count;
  for (const Job& job : jobs) {
    TypeKey key;
    key.pcol.reserve(kappa);
    for (std::size_t ki = 0; ki < kappa; ++ki)
      key.pcol.push_back(job.ptimes[kind_rep[ki]]);
    key.weight = (objective == Objective::Cmax) ? Int(0) : job.weight;
    std::size_t found = types.size();
    for (std::size_t tj = 0; tj < types.size(); ++tj)
      if (types[tj] == key) {
        found = tj;
        break;
      }
    if (found == types.size()) {
      types.push_back(std::move(key));
      type_count.push_back(0);
    }
    type_count[found] += 1;
  }
  const std::size_t tau = types.size();

  SchedulingInstance inst;
  inst.objective = objective;
  inst.tau = tau;
  inst.kappa = kappa;
  inst.p = IntMatrix(kappa, tau);
  for (std::size_t ki = 0; ki < kappa; ++ki)
    for (std::size_t tj = 0; tj < tau; ++tj)
      inst.p.at(ki, tj) = types[tj].pcol[ki];
  inst.w.resize(tau);
  for (std::size_t tj = 0; tj < tau; ++tj) inst.w[tj] = types[tj].weight;
  inst.n = type_count;
  inst.m.assign(kappa, Int(0));
  for (std::size_t mi = 0; mi < machine_count; ++mi)
    inst.m[machine_kind[mi]] += 1;
  inst.k = k;
  validate_instance(inst);
  return inst;
}

// Inverse of compress_to_hm for small multiplicities (testing aid): emits one
// job per unit of n_j and one machine per unit of m_i, in type/kind order.
inline std::pair<JobList, std::size_t> expand_to_jobs(
    const SchedulingInstance& inst, const Int& max_total = Int(1000)) {
  require(inst.total_jobs() <= max_total && inst.total_machines() <= max_total,
          "expand_to_jobs: multiplicities too large to expand");
  std::vector<std::size_t> machine_of;  // kind per individual machine
  for (std::size_t ki = 0; ki < inst.kappa; ++ki)
    for (Int c = 0; c < inst.m[ki]; ++c) machine_of.push_back(ki);
  JobList jobs;
  for (std::size_t tj = 0; tj < inst.tau; ++tj)
    for (Int c = 0; c < inst.n[tj]; ++c) {
      Job job;
      job.ptimes.reserve(machine_of.size());
      for (std::size_t mi = 0; mi < machine_of.size(); ++mi)
        job.ptimes.push_back(inst.p.at(machine_of[mi], tj));
      job.weight = inst.w[tj];
      jobs.push_back(std::move(job));
    }
  return {jobs, machine_of.size()};
}

// --- Smith ordering and single-machine cost --------------------------------

// Permutation of type indices sorting by w_j / p_j^i non-increasing, ties
// broken by ascending type index.  Comparisons are exact cross products.
inline std::vector<std::size_t> smith_order(const SchedulingInstance& inst,
                                            std::size_t kind) {
  require(kind < inst.kappa, "smith_order: kind out of range");
  std::vector<std::size_t> order(inst.tau);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     // w_a/p_a > w_b/p_b  <=>  w_a*p_b > w_b*p_a  (p > 0)
                     return inst.w[a] * inst.p.at(kind, b) >
                            inst.w[b] * inst.p.at(kind, a);
                   });
  return order;
}

// Total weighted completion time of running the job multiset `count` (per
// type) on a single machine of the given kind, sequenced in Smith order.
// Within a block of x identical jobs (weight w, time p) starting at load L,
// completions are L+p, ..., L+xp, contributing w*(x*L + p*x*(x+1)/2).
inline Int single_machine_cost(const SchedulingInstance& inst,
                               std::size_t kind, const IntVec& count) {
  require(count.size() == inst.tau, "single_machine_cost: count length");
  for (const Int& c : count)
    require(c >= 0, "single_machine_cost: negative count");
  const auto order = smith_order(inst, kind);
  Int load = 0;
  Int cost = 0;
  for (std::size_t pos = 0; pos < inst.tau; ++pos) {
    const std::size_t j = order[pos];
    const Int& x = count[j];
    if (x == 0) continue;
    const Int& pt = inst.p.at(kind, j);
    cost += inst.w[j] * (x * load + pt * x * (x + 1) / 2);
    load += pt * x;
  }
  return cost;
}

// Makespan of the same multiset on one machine of the given kind.
inline Int single_machine_load(const SchedulingInstance& inst,
                               std::size_t kind, const IntVec& count) {
  require(count.size() == inst.tau, "single_machine_load: count length");
  Int load = 0;
  for (std::size_t j = 0; j < inst.tau; ++j) load += inst.p.at(kind, j) * count[j];
  return load;
}

// --- text format ------------------------------------------------------------

inline SchedulingInstance parse_instance(const std::string& text) {
  struct Line {
    std::size_t number;
    std::vector<std::string> tokens;
  };
  std::vector<Line> lines;
  {
    std::istringstream in(text);
    std::string raw;
    std::size_t no = 0;
    while (std::getline(in, raw)) {
      ++no;
      auto hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      auto toks = split_tokens(raw);
      if (!toks.empty()) lines.push_back({no, std::move(toks)});
    }
  }
  auto fail = [](std::size_t line, const std::string& msg) {
    throw parse_error("line " + std::to_string(line) + ": " + msg);
  };

  std::map<std::string, std::size_t> seen;  // directive -> line number
  auto mark = [&](const std::string& dir, std::size_t line) {
    auto it = seen.find(dir);
    if (it != seen.end())
      fail(line, "duplicate '" + dir + "' (first on line " +
                     std::to_string(it->second) + ")");
    seen[dir] = line;
  };

  // First pass: locate dimensions so vector directives can be checked.
  std::optional<std::size_t> tau, kappa;
  for (const Line& ln : lines) {
    const std::string& dir = ln.tokens[0];
    if (dir == "types" || dir == "kinds") {
      if (ln.tokens.size() != 2 || !looks_like_int(ln.tokens[1]))
        fail(ln.number, "'" + dir + "' expects one integer");
      Int v = parse_int(ln.tokens[1]);
      if (v < 1 || v > 1000000) fail(ln.number, "'" + dir + "' out of range");
      if (dir == "types")
        tau = static_cast<std::size_t>(v);
      else
        kappa = static_cast<std::size_t>(v);
    }
  }
  if (!tau) throw parse_error("missing 'types' directive");
  if (!kappa) throw parse_error("missing 'kinds' directive");

  SchedulingInstance inst;
  inst.tau = *tau;
  inst.kappa = *kappa;
  inst.p = IntMatrix(inst.kappa, inst.tau);
  std::vector<bool> ptime_seen(inst.kappa, false);
  bool have_objective = false, have_weights = false;

  auto parse_vec = [&](const Line& ln, std::size_t count,
                       bool positive) -> IntVec {
    if (ln.tokens.size() != count + 1)
      fail(ln.number, "'" + ln.tokens[0] + "' expects " +
                          std::to_string(count) + " integers");
    IntVec v;
    v.reserve(count);
    for (std::size_t i = 1; i < ln.tokens.size(); ++i) {
      if (!looks_like_int(ln.tokens[i]))
        fail(ln.number, "bad integer '" + ln.tokens[i] + "'");
      v.push_back(parse_int(ln.tokens[i]));
      if (positive && v.back() < 1)
        fail(ln.number, "'" + ln.tokens[0] + "' entries must be positive");
      if (!positive && v.back() < 0)
        fail(ln.number, "'" + ln.tokens[0] + "' entries must be nonnegative");
    }
    return v;
  };

  for (const Line& ln : lines) {
    const std::string& dir = ln.tokens[0];
    if (dir == "types" || dir == "kinds") {
      mark(dir, ln.number);
    } else if (dir == "objective") {
      mark(dir, ln.number);
      if (ln.tokens.size() != 2) fail(ln.number, "'objective' expects one tag");
      if (ln.tokens[1] == "cmax")
        inst.objective = Objective::Cmax;
      else if (ln.tokens[1] == "sumwc")
        inst.objective = Objective::SumWC;
      else
        fail(ln.number, "unknown objective '" + ln.tokens[1] +
                            "' (expected cmax or sumwc)");
      have_objective = true;
    } else if (dir == "bound") {
      mark(dir, ln.number);
      if (ln.tokens.size() != 2 || !looks_like_int(ln.tokens[1]))
        fail(ln.number, "'bound' expects one integer");
      inst.k = parse_int(ln.tokens[1]);
      if (inst.k < 0) fail(ln.number, "'bound' must be nonnegative");
    } else if (dir == "jobs") {
      mark(dir, ln.number);
      inst.n = parse_vec(ln, inst.tau, true);
    } else if (dir == "machines") {
      mark(dir, ln.number);
      inst.m = parse_vec(ln, inst.kappa, true);
    } else if (dir == "weights") {
      mark(dir, ln.number);
      inst.w = parse_vec(ln, inst.tau, false);
      have_weights = true;
    } else if (dir == "ptime") {
      if (ln.tokens.size() != inst.tau + 2)
        fail(ln.number, "'ptime' expects a kind index and " +
                            std::to_string(inst.tau) + " integers");
      if (!looks_like_int(ln.tokens[1]))
        fail(ln.number, "bad kind index '" + ln.tokens[1] + "'");
      Int ki = parse_int(ln.tokens[1]);
      if (ki < 1 || ki > Int(inst.kappa))
        fail(ln.number, "kind index out of range");
      std::size_t kind = static_cast<std::size_t>(ki) - 1;
      if (ptime_seen[kind])
        fail(ln.number, "duplicate 'ptime' for kind " + ln.tokens[1]);
      ptime_seen[kind] = true;
      for (std::size_t j = 0; j < inst.tau; ++j) {
        if (!looks_like_int(ln.tokens[j + 2]))
          fail(ln.number, "bad integer '" + ln.tokens[j + 2] + "'");
        Int v = parse_int(ln.tokens[j + 2]);
        if (v < 1) fail(ln.number, "processing times must be positive");
        inst.p.at(kind, j) = v;
      }
    } else {
      fail(ln.number, "unknown directive '" + dir + "'");
    }
  }

  if (!have_objective) throw parse_error("missing 'objective' directive");
  if (!seen.count("bound")) throw parse_error("missing 'bound' directive");
  if (!seen.count("jobs")) throw parse_error("missing 'jobs' directive");
  if (!seen.count("machines")) throw parse_error("missing 'machines' directive");
  for (std::size_t ki = 0; ki < inst.kappa; ++ki)
    if (!ptime_seen[ki])
      throw parse_error("missing 'ptime' for kind " + std::to_string(ki + 1));
  if (inst.objective == Objective::SumWC && !have_weights)
    throw parse_error("missing 'weights' directive (required for sumwc)");
  if (inst.objective == Objective::Cmax && have_weights)
    throw parse_error("'weights' directive not allowed with objective cmax");
  if (inst.objective == Objective::Cmax) inst.w.assign(inst.tau, Int(0));

  validate_instance(inst);
  return inst;
}

// Canonical serialization; parse(serialize(x)) == x.
inline std::string serialize_instance(const SchedulingInstance& inst) {
  std::ostringstream out;
  out << "objective " << objective_name(inst.objective) << "\n";
  out << "bound " << format_int(inst.k) << "\n";
  out << "types " << inst.tau << "\n";
  out << "kinds " << inst.kappa << "\n";
  out << "jobs";
  for (const Int& v : inst.n) out << " " << format_int(v);
  out << "\nmachines";
  for (const Int& v : inst.m) out << " " << format_int(v);
  out << "\n";
  for (std::size_t ki = 0; ki < inst.kappa; ++ki) {
    out << "ptime " << (ki + 1);
    for (std::size_t j = 0; j < inst.tau; ++j)
      out << " " << format_int(inst.p.at(ki, j));
    out << "\n";
  }
  if (inst.objective == Objective::SumWC) {
    out << "weights";
    for (const Int& v : inst.w) out << " " << format_int(v);
    out << "\n";
  }
  return out.str();
}

}  // namespace hmsched
