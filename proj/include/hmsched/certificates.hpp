#pragma once

// Compact solution certificates.
//
// A certificate is a collection of *extended configurations* with positive
// multiplicities whose weighted sum reproduces the instance totals:
//
//   makespan flavor:     (jobs per type, machine-kind indicator)
//                        aggregating to (n, m), each entry's load <= k;
//   completion flavor:   (jobs per type, F, machine-kind indicator)
//                        aggregating to (n, <= k, m), each entry's exact
//                        sequenced cost <= its F coordinate;
//   N-fold flavor:       (configuration, block-type indicator)
//                        aggregating to (b0, mu), every configuration
//                        feasible for its block, objective mass <= k.
//
// The point is NP-membership: whenever a feasible schedule within the bound
// exists, one exists whose distinct-configuration count is small (any vector
// of an integer cone has a decomposition with compact support), so the
// verifier below checks a polynomial-size witness.  The support bound itself
// is reported as a warning, never a failure: it guarantees that *some* small
// certificate exists, not that every valid certificate is small.

#include "hmsched/conflp.hpp"
#include "hmsched/instance.hpp"
#include "hmsched/nfold.hpp"

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace hmsched {

enum class CertificateFlavor { CmaxExt, SumWCExt, NFold };

inline std::string certificate_flavor_name(CertificateFlavor f) {
  switch (f) {
    case CertificateFlavor::CmaxExt: return "cmax";
    case CertificateFlavor::SumWCExt: return "sumwc";
    default: return "nfold";
  }
}

struct Certificate {
  CertificateFlavor flavor = CertificateFlavor::CmaxExt;
  std::vector<std::pair<IntVec, Int>> entries;  // (vector, multiplicity >= 1)

  bool operator==(const Certificate&) const = default;
};

struct CertificateReport {
  bool ok = true;
  std::string failure;  // first failing check; empty when ok
  std::vector<std::string> warnings;
};

namespace detail {

// Encoding length of an integer vector: one sign bit plus the magnitude bits
// per coordinate (the usual <.> measure, used only for advisory bounds).
inline Int encoding_length(const IntVec& v) {
  Int total = 0;
  for (const Int& x : v) total += 1 + Int(bit_length(int_abs(x)));
  return total;
}

inline Int instance_encoding_length(const SchedulingInstance& inst) {
  Int total = 0;
  for (std::size_t i = 0; i < inst.kappa; ++i)
    for (std::size_t j = 0; j < inst.tau; ++j)
      total += 1 + Int(bit_length(inst.p.at(i, j)));
  total += encoding_length(inst.w);
  total += encoding_length(inst.n);
  total += encoding_length(inst.m);
  return total;
}

inline std::pair<IntVec, Int> split_onehot(const IntVec& vec,
                                           std::size_t head) {
  IntVec c(vec.begin(), vec.begin() + head);
  Int kind = -1;
  for (std::size_t i = head; i < vec.size(); ++i) {
    if (vec[i] == 0) continue;
    if (vec[i] != 1 || kind >= 0) return {std::move(c), Int(-1)};
    kind = Int(i - head);
  }
  return {std::move(c), kind};
}

inline void sorted_entries(const std::map<IntVec, Int>& agg,
                           Certificate& cert) {
  cert.entries.assign(agg.begin(), agg.end());
}

}  // namespace detail

// --- construction -------------------------------------------------------------

// Builds the scheduling certificate from a configuration solution of the
// instance's huge N-fold model (block type = machine kind; the first tau
// coordinates of each configuration are the job counts — in global type
// order for the makespan model, in the kind's Smith order for the
// completion-time model, where they are mapped back before aggregation).
// The produced certificate is verified before it is returned.
inline CertificateReport verify_certificate(const SchedulingInstance& inst,
                                            const Certificate& cert,
                                            const Int& k);

inline Certificate certify(const SchedulingInstance& inst,
                           const ConfMultiSolution& sol) {
  const bool makespan = inst.objective == Objective::Cmax;
  Certificate cert;
  cert.flavor =
      makespan ? CertificateFlavor::CmaxExt : CertificateFlavor::SumWCExt;
  std::map<IntVec, Int> agg;
  Int total_cost = 0;
  for (const auto& [col, mult] : sol.entries) {
    require(col.type < inst.kappa, "certify: block type is not a machine kind");
    require(col.c.size() >= inst.tau, "certify: configuration too short");
    IntVec jobs(inst.tau, Int(0));
    if (makespan) {
      jobs.assign(col.c.begin(), col.c.begin() + inst.tau);
    } else {
      // Completion-time blocks store counts in the kind's Smith order.
      const auto order = smith_order(inst, col.type);
      for (std::size_t l = 0; l < inst.tau; ++l) jobs[order[l]] = col.c[l];
    }
    for (const Int& x : jobs)
      require(x >= 0, "certify: negative job count");
    IntVec vec = jobs;
    if (makespan) {
      require(single_machine_load(inst, col.type, jobs) <= inst.k,
              "certify: configuration exceeds the makespan bound");
    } else {
      const Int F = single_machine_cost(inst, col.type, jobs);
      total_cost += F * mult;
      vec.push_back(F);
    }
    for (std::size_t i = 0; i < inst.kappa; ++i)
      vec.push_back(Int(i == col.type ? 1 : 0));
    agg[vec] += mult;
  }
  if (!makespan)
    require(total_cost <= inst.k, "certify: solution cost exceeds the bound");
  detail::sorted_entries(agg, cert);
  const CertificateReport rep = verify_certificate(inst, cert, inst.k);
  require(rep.ok, "certify: produced certificate failed verification: " +
                      rep.failure);
  return cert;
}

inline CertificateReport verify_certificate(const HugeNFoldInstance& inst,
                                            const Certificate& cert,
                                            const Rat& k);

inline Certificate certify(const HugeNFoldInstance& inst,
                           const ConfMultiSolution& sol, const Rat& k) {
  Certificate cert;
  cert.flavor = CertificateFlavor::NFold;
  std::map<IntVec, Int> agg;
  for (const auto& [col, mult] : sol.entries) {
    require(col.type < inst.tau_bar(), "certify: block type out of range");
    IntVec vec = col.c;
    for (std::size_t i = 0; i < inst.tau_bar(); ++i)
      vec.push_back(Int(i == col.type ? 1 : 0));
    agg[vec] += mult;
  }
  detail::sorted_entries(agg, cert);
  const CertificateReport rep = verify_certificate(inst, cert, k);
  require(rep.ok, "certify: produced certificate failed verification: " +
                      rep.failure);
  return cert;
}

// --- verification -------------------------------------------------------------

inline CertificateReport verify_certificate(const SchedulingInstance& inst,
                                            const Certificate& cert,
                                            const Int& k) {
  CertificateReport rep;
  auto fail = [&](const std::string& msg) {
    rep.ok = false;
    rep.failure = msg;
    return rep;
  };
  const bool makespan = cert.flavor == CertificateFlavor::CmaxExt;
  if (makespan != (inst.objective == Objective::Cmax) ||
      cert.flavor == CertificateFlavor::NFold)
    return fail("certificate flavor does not match the objective");
  const std::size_t dim = inst.tau + (makespan ? 0 : 1) + inst.kappa;
  const std::size_t head = inst.tau + (makespan ? 0 : 1);

  std::set<IntVec> seen;
  IntVec total(dim, Int(0));
  for (const auto& [vec, mult] : cert.entries) {
    if (vec.size() != dim) return fail("entry has the wrong dimension");
    if (mult < 1) return fail("entry multiplicity below one");
    if (!seen.insert(vec).second) return fail("duplicate entry");
    for (const Int& x : vec)
      if (x < 0) return fail("negative entry coordinate");
    const auto [c, kind] = detail::split_onehot(vec, head);
    if (kind < 0 || kind >= Int(inst.kappa))
      return fail("machine-kind indicator is not a unit vector");
    const std::size_t ki = static_cast<std::size_t>(kind);
    IntVec jobs(c.begin(), c.begin() + inst.tau);
    if (makespan) {
      if (single_machine_load(inst, ki, jobs) > k)
        return fail("entry load exceeds the makespan bound");
    } else {
      if (single_machine_cost(inst, ki, jobs) > c[inst.tau])
        return fail("entry cost exceeds its declared contribution");
    }
    for (std::size_t j = 0; j < dim; ++j) total[j] += mult * vec[j];
  }

  // Aggregation identity: totals must equal (n, m), resp. (n, <= k, m).
  for (std::size_t j = 0; j < inst.tau; ++j)
    if (total[j] != inst.n[j])
      return fail("aggregation mismatch on coordinate " +
                  std::to_string(j + 1));
  if (!makespan && total[inst.tau] > k)
    return fail("aggregated contribution exceeds the bound");
  for (std::size_t i = 0; i < inst.kappa; ++i)
    if (total[head + i] != inst.m[i])
      return fail("aggregation mismatch on coordinate " +
                  std::to_string(head + i + 1));

  // Advisory support bound: totals of nonnegative vectors always admit a
  // decomposition with support at most the encoding length of the total.
  IntVec ref = inst.n;
  if (!makespan) ref.push_back(k);
  for (const Int& v : inst.m) ref.push_back(v);
  const Int bound = detail::encoding_length(ref);
  if (Int(cert.entries.size()) > bound)
    rep.warnings.push_back(
        "support " + std::to_string(cert.entries.size()) +
        " exceeds the compact-decomposition bound " + format_int(bound));

  // Empirical sanity check of the size argument behind these certificates:
  // the bound should never need more bits than the square of the instance
  // encoding.  Advisory only; holds comfortably for sane inputs.
  const Int ilen = detail::instance_encoding_length(inst);
  if (Int(bit_length(int_abs(k))) + 1 > ilen * ilen)
    rep.warnings.push_back(
        "bound encoding exceeds the squared instance encoding");
  return rep;
}

inline CertificateReport verify_certificate(const HugeNFoldInstance& inst,
                                            const Certificate& cert,
                                            const Rat& k) {
  CertificateReport rep;
  auto fail = [&](const std::string& msg) {
    rep.ok = false;
    rep.failure = msg;
    return rep;
  };
  if (cert.flavor != CertificateFlavor::NFold)
    return fail("certificate flavor does not match the instance");
  const std::size_t dim = inst.t + inst.tau_bar();

  std::set<IntVec> seen;
  IntVec link(inst.r, Int(0));
  std::vector<Int> fill(inst.tau_bar(), Int(0));
  Rat value = 0;
  Int fmag = 1;
  for (const auto& [vec, mult] : cert.entries) {
    if (vec.size() != dim) return fail("entry has the wrong dimension");
    if (mult < 1) return fail("entry multiplicity below one");
    if (!seen.insert(vec).second) return fail("duplicate entry");
    const auto [c, kind] = detail::split_onehot(vec, inst.t);
    if (kind < 0 || kind >= Int(inst.tau_bar()))
      return fail("block-type indicator is not a unit vector");
    const std::size_t ty = static_cast<std::size_t>(kind);
    if (!config_feasible(inst.blocks[ty], c))
      return fail("entry configuration infeasible for its block");
    const IntVec contrib = mat_vec(inst.blocks[ty].E1, c);
    for (std::size_t i = 0; i < inst.r; ++i) link[i] += mult * contrib[i];
    fill[ty] += mult;
    const Rat fc = inst.blocks[ty].f.value(c);
    value += Rat(mult) * fc;
    fmag = int_max(fmag, rat_ceil(rat_abs(fc)));
  }
  for (std::size_t i = 0; i < inst.r; ++i)
    if (link[i] != inst.b0[i])
      return fail("aggregation mismatch on coordinate " +
                  std::to_string(i + 1));
  for (std::size_t i = 0; i < inst.tau_bar(); ++i)
    if (fill[i] != inst.blocks[i].mu)
      return fail("aggregation mismatch on coordinate " +
                  std::to_string(inst.r + i + 1));
  if (value > k) return fail("aggregated objective exceeds the bound");

  // Advisory support bound for general integer cones:
  // 2d log2(4dM) with d = r + tau-bar + 1 and M the magnitude of the data.
  Int M = fmag;
  for (const BlockType& blk : inst.blocks) {
    M = int_max(M, vec_inf_norm(blk.l));
    for (const UBound& u : blk.u)
      if (u.has_value()) M = int_max(M, int_abs(*u));
  }
  const Int d(inst.r + inst.tau_bar() + 1);
  const Int bound = 2 * d * ceil_log2(4 * d * M);
  if (Int(cert.entries.size()) > bound)
    rep.warnings.push_back(
        "support " + std::to_string(cert.entries.size()) +
        " exceeds the compact-decomposition bound " + format_int(bound));
  return rep;
}

// --- support compaction --------------------------------------------------------

struct CompactionResult {
  Certificate cert;
  bool budget_exceeded = false;
};

namespace detail {

class CompactSearch {
 public:
  CompactSearch(const std::vector<std::pair<IntVec, Int>>& entries,
                const IntVec& target, long long budget)
      : entries_(entries), target_(target), budget_(budget) {
    // A coordinate where no entry is negative bounds the multiplicity of
    // every entry positive there; the indicator parts guarantee each entry
    // has at least one such coordinate in the certificates we build.
    const std::size_t dim = target.size();
    nonneg_.assign(dim, true);
    for (const auto& [vec, mult] : entries_)
      for (std::size_t j = 0; j < dim; ++j)
        if (vec[j] < 0) nonneg_[j] = false;
  }

  // Smallest-support decomposition of target over a subset of the entries,
  // each used with multiplicity >= 1; nullopt when none smaller exists or
  // the node budget runs out (budget_exceeded() tells which).
  std::optional<std::vector<std::pair<IntVec, Int>>> run() {
    for (std::size_t size = 1; size + 1 <= entries_.size(); ++size) {
      std::vector<std::size_t> pick;
      if (search_subsets(0, size, pick)) {
        std::vector<std::pair<IntVec, Int>> out;
        for (std::size_t idx : found_)
          out.emplace_back(entries_[idx].first, take_.at(idx));
        return out;
      }
      if (exceeded_) return std::nullopt;
    }
    return std::nullopt;
  }

  bool budget_exceeded() const { return exceeded_; }

 private:
  std::optional<Int> cap(const IntVec& vec, const IntVec& rem) const {
    std::optional<Int> c;
    for (std::size_t j = 0; j < vec.size(); ++j) {
      if (!nonneg_[j] || vec[j] <= 0) continue;
      const Int q = floor_div(rem[j], vec[j]);
      if (!c || q < *c) c = q;
    }
    return c;
  }

  bool spend() {
    if (--budget_ < 0) {
      exceeded_ = true;
      return false;
    }
    return true;
  }

  bool search_subsets(std::size_t from, std::size_t left,
                      std::vector<std::size_t>& pick) {
    if (left == 0) {
      IntVec rem = target_;
      return assign(pick, 0, rem);
    }
    for (std::size_t i = from; i + left <= entries_.size(); ++i) {
      if (exceeded_) return false;
      pick.push_back(i);
      if (search_subsets(i + 1, left - 1, pick)) return true;
      pick.pop_back();
    }
    return false;
  }

  bool assign(const std::vector<std::size_t>& pick, std::size_t at,
              IntVec& rem) {
    if (!spend()) return false;
    if (at == pick.size()) {
      if (!is_zero(rem)) return false;
      found_ = pick;
      return true;
    }
    const IntVec& vec = entries_[pick[at]].first;
    const auto hi = cap(vec, rem);
    if (hi && *hi < 1) return false;
    // Without a bounding coordinate the search cannot terminate; bail out.
    if (!hi) {
      exceeded_ = true;
      return false;
    }
    for (Int lam = 1; lam <= *hi; ++lam) {
      for (std::size_t j = 0; j < rem.size(); ++j) rem[j] -= vec[j];
      take_[pick[at]] = lam;
      if (assign(pick, at + 1, rem)) return true;
      if (exceeded_) return false;
    }
    for (std::size_t j = 0; j < rem.size(); ++j)
      rem[j] += *hi * vec[j];
    return false;
  }

  const std::vector<std::pair<IntVec, Int>>& entries_;
  IntVec target_;
  std::vector<bool> nonneg_;
  long long budget_;
  bool exceeded_ = false;
  std::vector<std::size_t> found_;
  std::map<std::size_t, Int> take_;
};

}  // namespace detail

// Best-effort search for a certificate with the same aggregate vector and
// strictly smaller support.  Duplicate entries are always merged; beyond
// that the search is bounded and gives no optimality promise.
inline CompactionResult compact_support(const Certificate& cert,
                                        long long budget = 200000) {
  CompactionResult res;
  res.cert.flavor = cert.flavor;
  std::map<IntVec, Int> merged;
  for (const auto& [vec, mult] : cert.entries) {
    require(mult >= 1, "compact_support: multiplicity below one");
    merged[vec] += mult;
  }
  detail::sorted_entries(merged, res.cert);
  if (res.cert.entries.empty()) return res;

  const std::size_t dim = res.cert.entries.front().first.size();
  IntVec target(dim, Int(0));
  for (const auto& [vec, mult] : res.cert.entries) {
    require(vec.size() == dim, "compact_support: ragged entries");
    for (std::size_t j = 0; j < dim; ++j) target[j] += mult * vec[j];
  }

  detail::CompactSearch search(res.cert.entries, target, budget);
  const auto better = search.run();
  res.budget_exceeded = search.budget_exceeded();
  if (better) {
    std::map<IntVec, Int> out;
    for (const auto& [vec, mult] : *better) out[vec] = mult;
    detail::sorted_entries(out, res.cert);
  }
  return res;
}

// --- text format ----------------------------------------------------------------

// One entry per line: the multiplicity, then the extended configuration.
inline std::string serialize_certificate(const Certificate& cert) {
  std::ostringstream out;
  out << "certificate " << certificate_flavor_name(cert.flavor) << "\n";
  out << "entries " << cert.entries.size() << "\n";
  for (const auto& [vec, mult] : cert.entries) {
    out << format_int(mult);
    for (const Int& v : vec) out << " " << format_int(v);
    out << "\n";
  }
  return out.str();
}

inline Certificate parse_certificate(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::vector<std::string>> lines;
  std::string raw;
  while (std::getline(in, raw)) {
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    auto toks = split_tokens(raw);
    if (!toks.empty()) lines.push_back(std::move(toks));
  }
  if (lines.size() < 2 || lines[0].size() != 2 ||
      lines[0][0] != "certificate")
    throw parse_error("certificate: missing header");
  Certificate cert;
  if (lines[0][1] == "cmax")
    cert.flavor = CertificateFlavor::CmaxExt;
  else if (lines[0][1] == "sumwc")
    cert.flavor = CertificateFlavor::SumWCExt;
  else if (lines[0][1] == "nfold")
    cert.flavor = CertificateFlavor::NFold;
  else
    throw parse_error("certificate: unknown flavor '" + lines[0][1] + "'");
  if (lines[1].size() != 2 || lines[1][0] != "entries")
    throw parse_error("certificate: missing entry count");
  const std::size_t count =
      static_cast<std::size_t>(parse_int(lines[1][1]));
  if (lines.size() != 2 + count)
    throw parse_error("certificate: entry count does not match the lines");
  std::set<IntVec> seen;
  for (std::size_t e = 0; e < count; ++e) {
    const auto& ln = lines[2 + e];
    if (ln.size() < 2) throw parse_error("certificate: entry too short");
    if (e > 0 && ln.size() != 1 + cert.entries.front().first.size())
      throw parse_error("certificate: ragged entry");
    const Int mult = parse_int(ln[0]);
    if (mult < 1) throw parse_error("certificate: multiplicity below one");
    IntVec vec;
    for (std::size_t j = 1; j < ln.size(); ++j)
      vec.push_back(parse_int(ln[j]));
    if (!seen.insert(vec).second)
      throw parse_error("certificate: duplicate entry");
    cert.entries.emplace_back(std::move(vec), mult);
  }
  return cert;
}

}  // namespace hmsched
