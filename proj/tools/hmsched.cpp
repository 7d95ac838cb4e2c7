// Command-line front end.
//
// Subcommands:
//   kernelize     full pipeline: instance -> kernel + sidecar + report
//   solve-conflp  configuration LP only
//   verify        oracle equivalence check of a kernel (+ certificate)
//   oracle        brute-force optimum and witness
//   graver        Graver basis of a small matrix, with bound checks
//   ft            weight-vector compression, with exhaustive sign check
//
// Exit codes: 0 success/equivalent, 1 infeasible/not-equivalent,
// 2 usage or input error, 3 budget exceeded.  Results go to stdout and are
// byte-deterministic for fixed inputs and flags; timings and diagnostics go
// to stderr.

#include "hmsched/graver.hpp"
#include "hmsched/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace hmsched;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw parse_error("cannot write '" + path + "'");
  out << content;
}

void print_timings(const RunReport& report) {
  for (const StageTiming& t : report.timings)
    std::cerr << "time " << t.stage << " " << t.microseconds << "us\n";
}

struct CommonFlags {
  long long dp_capacity_budget = SepBudgets{}.dp_capacity_budget;
  long long dp_state_budget = SepBudgets{}.dp_state_budget;

  SepBudgets sep() const {
    SepBudgets s;
    s.dp_capacity_budget = dp_capacity_budget;
    s.dp_state_budget = dp_state_budget;
    return s;
  }
};

int cmd_kernelize(const std::string& in, const std::string& out,
                  std::string sidecar, long long override_p,
                  bool has_override, bool dump_model,
                  const CommonFlags& common) {
  const SchedulingInstance inst = parse_instance(read_file(in));
  KernelizeOptions opt;
  if (has_override) opt.proximity_override = Int(override_p);
  opt.sep = common.sep();
  const KernelizeResult res = run_kernelize(inst, opt);
  print_timings(res.report);
  if (dump_model) std::cout << serialize_nfold(res.model);
  std::cout << res.report.summary();
  if (!res.lp) return 1;  // infeasible: no kernel files are written
  if (sidecar.empty()) sidecar = out + ".sidecar";
  write_file(out, res.kernel_text);
  write_file(sidecar, res.sidecar_text);
  return 0;
}

int cmd_solve_conflp(const std::string& in, const CommonFlags& common) {
  const SchedulingInstance inst = parse_instance(read_file(in));
  const HugeNFoldInstance model = build_scheduling_model(inst);
  const auto lp = solve_conflp(model, common.sep());
  if (!lp) {
    std::cout << "infeasible\n";
    return 1;
  }
  std::cout << "value " << format_rat(lp->value) << "\n";
  std::cout << "support " << lp->entries.size() << "\n";
  for (const auto& [col, y] : lp->entries) {
    std::cout << "entry " << (col.type + 1) << " " << format_rat(y) << " :";
    for (const Int& v : col.c) std::cout << " " << format_int(v);
    std::cout << "\n";
  }
  std::cerr << "iterations " << lp->iterations << "\n";
  return 0;
}

int cmd_verify(const std::string& original, const std::string& kernel,
               const std::string& sidecar, const std::string& cert_out) {
  const SchedulingInstance inst = parse_instance(read_file(original));
  const HugeNFoldInstance kern = parse_nfold(read_file(kernel));

  ReducedInstance red;
  try {
    red = rebuild_reduced(inst, kern, read_file(sidecar));
  } catch (const numeric_error& e) {
    std::cout << "equivalent no\nreason " << e.what() << "\n";
    return 1;
  }

  const KernelVerdict v = verify_kernel(inst, red);
  std::cout << "equivalent " << (v.equivalent() ? "yes" : "no") << "\n";
  std::cout << "original " << (v.original_yes ? "yes" : "no") << "\n";
  std::cout << "reduced " << (v.reduced_yes ? "yes" : "no") << "\n";
  std::cout << "optimum " << format_int(v.brute_optimum) << "\n";
  if (v.reduced_total)
    std::cout << "reduced_total " << format_rat(*v.reduced_total) << "\n";
  if (!v.detail.empty()) std::cout << "reason " << v.detail << "\n";

  int rc = v.equivalent() ? 0 : 1;
  if (!cert_out.empty()) {
    if (v.lifted) {
      const Certificate cert = certify(inst, *v.lifted);
      write_file(cert_out, serialize_certificate(cert));
      const CertificateReport rep = verify_certificate(inst, cert, inst.k);
      std::cout << "certificate " << (rep.ok ? "ok" : "failed") << "\n";
      for (const std::string& w : rep.warnings)
        std::cerr << "certificate warning: " << w << "\n";
      if (!rep.ok) {
        std::cout << "reason " << rep.failure << "\n";
        rc = 1;
      }
    } else {
      std::cout << "certificate skipped\n";
    }
  }
  return rc;
}

int cmd_oracle(const std::string& in) {
  const SchedulingInstance inst = parse_instance(read_file(in));
  const BruteScheduleResult res = brute_schedule(inst);
  std::cout << "optimum " << format_int(res.optimum) << "\n";
  for (std::size_t q = 0; q < res.assignment.size(); ++q) {
    std::cout << "machine " << (q + 1) << " kind "
              << (res.machine_kinds[q] + 1) << " jobs";
    for (const Int& v : res.assignment[q]) std::cout << " " << format_int(v);
    std::cout << "\n";
  }
  return 0;
}

// Matrix file: first data line "rows cols", then one line per row.
IntMatrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::vector<std::string>> lines;
  std::string raw;
  while (std::getline(in, raw)) {
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    auto toks = split_tokens(raw);
    if (!toks.empty()) lines.push_back(std::move(toks));
  }
  if (lines.empty() || lines[0].size() != 2)
    throw parse_error("matrix: first line must be 'rows cols'");
  const auto rows = static_cast<std::size_t>(parse_int(lines[0][0]));
  const auto cols = static_cast<std::size_t>(parse_int(lines[0][1]));
  if (rows < 1 || cols < 1 || lines.size() != 1 + rows)
    throw parse_error("matrix: row count does not match the lines");
  IntMatrix A(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (lines[1 + i].size() != cols)
      throw parse_error("matrix: row " + std::to_string(i + 1) +
                        " has the wrong width");
    for (std::size_t j = 0; j < cols; ++j)
      A.at(i, j) = parse_int(lines[1 + i][j]);
  }
  return A;
}

int cmd_graver(const std::string& matrix_path, long long norm_budget) {
  const IntMatrix A = parse_matrix(read_file(matrix_path));
  const GraverBasis gb = graver_basis(A, norm_budget);
  std::cout << "elements " << gb.elements.size() << "\n";
  for (const IntVec& g : gb.elements) {
    std::cout << "g";
    for (const Int& v : g) std::cout << " " << format_int(v);
    std::cout << "\n";
  }
  std::cout << "ginf " << format_int(gb.g_inf()) << "\n";
  std::cout << "g1 " << format_int(gb.g_1()) << "\n";
  const BaseBoundReport bb = verify_basebound(gb);
  std::cout << "norm_bound " << format_int(bb.bound) << " "
            << (bb.g1 <= bb.bound ? "ok" : "exceeded") << "\n";
  if (!gb.complete) {
    std::cerr << "norm budget exhausted before closure\n";
    return 3;
  }
  return 0;
}

// Weights file: one rational per line (integer or p/q).
int cmd_ft(const std::string& weights_path, long long bound,
           long long check_budget) {
  const std::string text = read_file(weights_path);
  std::istringstream in(text);
  RatVec w;
  std::string raw;
  while (std::getline(in, raw)) {
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    for (const std::string& tok : split_tokens(raw)) w.push_back(parse_rat(tok));
  }
  if (w.empty()) throw parse_error("weights: no values");
  const Int M(bound);
  const IntVec wt = frank_tardos(w, M);
  std::cout << "wtilde";
  for (const Int& v : wt) std::cout << " " << format_int(v);
  std::cout << "\n";

  // Exhaustive sign check over [-2M, 2M]^d when the box is small enough.
  Int points = 1;
  for (std::size_t j = 0; j < w.size() && points <= check_budget; ++j)
    points *= 4 * M + 1;
  if (points <= check_budget) {
    const bool ok = frank_tardos_check(w, wt, M);
    std::cout << "checked yes\n";
    std::cout << "sign_equivalent " << (ok ? "yes" : "no") << "\n";
    if (!ok) return 1;
  } else {
    std::cout << "checked no\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"high-multiplicity scheduling kernelization"};
  app.require_subcommand(1);

  CommonFlags common;

  auto* kz = app.add_subcommand(
      "kernelize", "reduce an instance to an equivalent small kernel");
  std::string kz_in, kz_out, kz_sidecar;
  long long kz_override = 0;
  bool kz_dump = false;
  kz->add_option("--in", kz_in, "scheduling instance file")->required();
  kz->add_option("--out", kz_out, "kernel output file")->required();
  kz->add_option("--sidecar", kz_sidecar,
                 "sidecar output file (default: <out>.sidecar)");
  auto* kz_opt = kz->add_option(
      "--proximity-override", kz_override,
      "replace the proved proximity bound (testing; breaks the guarantee)");
  kz->add_flag("--dump-model", kz_dump,
               "print the constructed block model before the report");
  kz->add_option("--dp-capacity-budget", common.dp_capacity_budget,
                 "largest capacity-indexed pricing table");
  kz->add_option("--dp-state-budget", common.dp_state_budget,
                 "largest prefix-load pricing table");

  auto* lp = app.add_subcommand("solve-conflp",
                                "solve the configuration LP only");
  std::string lp_in;
  lp->add_option("--in", lp_in, "scheduling instance file")->required();
  lp->add_option("--dp-capacity-budget", common.dp_capacity_budget,
                 "largest capacity-indexed pricing table");
  lp->add_option("--dp-state-budget", common.dp_state_budget,
                 "largest prefix-load pricing table");

  auto* vf = app.add_subcommand(
      "verify", "check a kernel against the original by brute force");
  std::string vf_orig, vf_kernel, vf_sidecar, vf_cert;
  vf->add_option("--original", vf_orig, "original instance file")->required();
  vf->add_option("--kernel", vf_kernel, "kernel file")->required();
  vf->add_option("--sidecar", vf_sidecar, "sidecar file")->required();
  vf->add_option("--certificate", vf_cert,
                 "also write and check a solution certificate");

  auto* oc = app.add_subcommand("oracle", "brute-force optimum and witness");
  std::string oc_in;
  oc->add_option("--in", oc_in, "scheduling instance file")->required();

  auto* gv = app.add_subcommand("graver", "Graver basis of a small matrix");
  std::string gv_matrix;
  long long gv_budget = 1000000;
  gv->add_option("--matrix", gv_matrix, "matrix file")->required();
  gv->add_option("--norm-budget", gv_budget,
                 "norm cap for the completion procedure");

  auto* ft = app.add_subcommand(
      "ft", "compress a rational weight vector, preserving signs on a box");
  std::string ft_weights;
  long long ft_bound = 0, ft_check = 100000;
  ft->add_option("--weights", ft_weights, "weights file (one rational each)")
      ->required();
  ft->add_option("--bound", ft_bound, "box radius parameter M")->required();
  ft->add_option("--check-budget", ft_check,
                 "max points for the exhaustive sign check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (kz->parsed())
      return cmd_kernelize(kz_in, kz_out, kz_sidecar, kz_override,
                           kz_opt->count() > 0, kz_dump, common);
    if (lp->parsed()) return cmd_solve_conflp(lp_in, common);
    if (vf->parsed()) return cmd_verify(vf_orig, vf_kernel, vf_sidecar, vf_cert);
    if (oc->parsed()) return cmd_oracle(oc_in);
    if (gv->parsed()) return cmd_graver(gv_matrix, gv_budget);
    if (ft->parsed()) return cmd_ft(ft_weights, ft_bound, ft_check);
  } catch (const budget_error& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const parse_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const validation_error& e) {
    std::cerr << "invalid instance: " << e.what() << "\n";
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "internal check failed: " << e.what() << "\n";
    return 2;
  }
  std::cerr << "no subcommand\n";
  return 2;
}
