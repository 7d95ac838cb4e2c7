#include <catch2/catch_amalgamated.hpp>

#include "hmsched/conflp.hpp"

#include <random>

#include "test_helpers.hpp"

using namespace hmsched;
using hmtest::rand_int;

namespace {

SchedulingInstance random_cmax(std::mt19937_64& rng) {
  for (;;) {
    std::size_t tau = static_cast<std::size_t>(rand_int(rng, 1, 2));
    std::size_t kappa = static_cast<std::size_t>(rand_int(rng, 1, 2));
    std::vector<std::vector<long long>> p(kappa, std::vector<long long>(tau));
    for (auto& row : p)
      for (auto& v : row) v = rand_int(rng, 1, 3);
    std::vector<long long> n(tau), m(kappa);
    for (auto& v : n) v = rand_int(rng, 1, 4);
    for (auto& v : m) v = rand_int(rng, 1, 3);
    try {
      return hmtest::make_cmax(p, n, m, rand_int(rng, 0, 8));
    } catch (const validation_error&) {
      continue;
    }
  }
}

SchedulingInstance random_sumwc(std::mt19937_64& rng) {
  for (;;) {
    std::size_t tau = static_cast<std::size_t>(rand_int(rng, 1, 2));
    std::size_t kappa = static_cast<std::size_t>(rand_int(rng, 1, 2));
    std::vector<std::vector<long long>> p(kappa, std::vector<long long>(tau));
    for (auto& row : p)
      for (auto& v : row) v = rand_int(rng, 1, 3);
    std::vector<long long> w(tau), n(tau), m(kappa);
    for (auto& v : w) v = rand_int(rng, 1, 4);
    for (auto& v : n) v = rand_int(rng, 1, 3);
    for (auto& v : m) v = rand_int(rng, 1, 2);
    try {
      return hmtest::make_sumwc(p, w, n, m, rand_int(rng, 8, 30));
    } catch (const validation_error&) {
      continue;
    }
  }
}

}  // namespace

TEST_CASE("column generation solves the frozen makespan example") {
  SchedulingInstance inst = hmtest::make_cmax({{1, 2}}, {2, 1}, {2}, 2);
  HugeNFoldInstance model = build_model(inst);

  auto sol = solve_conflp(model);
  REQUIRE(sol.has_value());
  CHECK(sol->value == 0);
  check_conflp_solution(model, *sol);
  CHECK(sol->entries.size() <= model.r + model.tau_bar());
  CHECK(check_conflp_certificate(model, *sol, model_pricer(model)));

  auto full = exhaustive_conflp(model);
  REQUIRE(full.has_value());
  CHECK(full->value == 0);
}

TEST_CASE("column generation certifies infeasibility when a job fits nowhere") {
  SchedulingInstance inst = hmtest::make_cmax({{3}}, {1}, {5}, 2);
  HugeNFoldInstance model = build_model(inst);
  CHECK_FALSE(solve_conflp(model).has_value());
  CHECK_FALSE(exhaustive_conflp(model).has_value());
}

TEST_CASE("column generation solves the frozen completion-time example") {
  SchedulingInstance inst = hmtest::make_sumwc({{1}}, {1}, {2}, {2}, 10);
  HugeNFoldInstance model = build_model(inst);

  auto lp = solve_conflp(model);
  REQUIRE(lp.has_value());
  CHECK(lp->value == 2);
  check_conflp_solution(model, *lp);

  auto ilp = solve_confilp(model);
  REQUIRE(ilp.has_value());
  CHECK(ilp->value == 2);
  check_confilp_solution(model, *ilp);
}

TEST_CASE("column generation agrees with the exhaustive LP") {
  std::mt19937_64 rng(20240817);
  for (int iter = 0; iter < 60; ++iter) {
    SchedulingInstance inst =
        iter % 2 == 0 ? random_cmax(rng) : random_sumwc(rng);
    HugeNFoldInstance model = build_model(inst);

    auto fast = solve_conflp(model);
    auto full = exhaustive_conflp(model);
    REQUIRE(fast.has_value() == full.has_value());
    if (!fast) continue;
    CHECK(fast->value == full->value);
    check_conflp_solution(model, *fast);
    CHECK(fast->entries.size() <= model.r + model.tau_bar());
    CHECK(check_conflp_certificate(model, *fast, model_pricer(model)));
  }
}

TEST_CASE("integer solutions match the scheduling brute force") {
  std::mt19937_64 rng(20240818);

  SECTION("makespan: integer feasibility is the decision answer") {
    for (int iter = 0; iter < 40; ++iter) {
      SchedulingInstance inst = random_cmax(rng);
      HugeNFoldInstance model = build_model(inst);
      auto ilp = solve_confilp(model);
      auto brute = brute_schedule(inst);
      if (brute.optimum <= inst.k) {
        REQUIRE(ilp.has_value());
        CHECK(ilp->value == 0);
        check_confilp_solution(model, *ilp);
      } else {
        CHECK_FALSE(ilp.has_value());
      }
    }
  }

  SECTION("completion time: integer value is the optimum cost") {
    for (int iter = 0; iter < 30; ++iter) {
      SchedulingInstance inst = random_sumwc(rng);
      HugeNFoldInstance model = build_model(inst);
      auto ilp = solve_confilp(model);
      auto brute = brute_schedule(inst);
      REQUIRE(ilp.has_value());
      CHECK(ilp->value == Rat(brute.optimum));
      check_confilp_solution(model, *ilp);
    }
  }

  SECTION("relaxation bound: LP value never exceeds ILP value") {
    for (int iter = 0; iter < 30; ++iter) {
      SchedulingInstance inst =
          iter % 2 == 0 ? random_cmax(rng) : random_sumwc(rng);
      HugeNFoldInstance model = build_model(inst);
      auto lp = solve_conflp(model);
      auto ilp = solve_confilp(model);
      if (ilp.has_value()) {
        REQUIRE(lp.has_value());
        CHECK(lp->value <= ilp->value);
      }
    }
  }
}

TEST_CASE("column generation handles huge multiplicities") {
  const long long big = 1000000000LL;
  // 3 * 10^9 unit-of-work jobs, 2 * 10^9 machines of capacity 2
  SchedulingInstance inst =
      hmtest::make_cmax({{1, 2}}, {big, big}, {2 * big}, 2);
  HugeNFoldInstance model = build_model(inst);

  auto sol = solve_conflp(model);
  REQUIRE(sol.has_value());
  CHECK(sol->value == 0);
  check_conflp_solution(model, *sol);
  CHECK(sol->entries.size() <= model.r + model.tau_bar());
}

TEST_CASE("restricted master behaves like a plain LP") {
  SchedulingInstance inst = hmtest::make_cmax({{1, 2}}, {2, 1}, {2}, 2);
  HugeNFoldInstance model = build_model(inst);

  SECTION("a single column matching the rhs gets the whole multiplicity") {
    // five machines, each must take exactly configuration (1,1,.)
    SchedulingInstance one =
        hmtest::make_cmax({{1, 2}}, {5, 5}, {5}, 3);
    HugeNFoldInstance m1 = build_model(one);
    std::vector<Configuration> cols{
        Configuration{0, {Int(1), Int(1), Int(0)}}};
    LPResult res = master_lp_solve(m1, cols);
    REQUIRE(res.status == LPStatus::Optimal);
    CHECK(res.x[0] == Rat(5));
  }

  SECTION("a single column that cannot match the rhs is infeasible") {
    std::vector<Configuration> cols{
        Configuration{0, {Int(2), Int(0), Int(0)}}};
    LPResult res = master_lp_solve(model, cols);
    CHECK(res.status == LPStatus::Infeasible);
  }

  SECTION("duplicate columns keep the support within the row count") {
    std::vector<Configuration> cols{
        Configuration{0, {Int(2), Int(0), Int(0)}},
        Configuration{0, {Int(2), Int(0), Int(0)}},
        Configuration{0, {Int(0), Int(1), Int(0)}}};
    LPResult res = master_lp_solve(model, cols);
    REQUIRE(res.status == LPStatus::Optimal);
    std::size_t support = 0;
    for (const Rat& v : res.x)
      if (v != 0) ++support;
    CHECK(support <= model.r + model.tau_bar());
  }
}

TEST_CASE("zero-multiplicity types participate harmlessly") {
  SchedulingInstance inst = hmtest::make_cmax({{1, 2}}, {2, 1}, {2}, 2);
  HugeNFoldInstance model = build_model(inst);
  BlockType ghost = model.blocks[0];
  ghost.mu = 0;
  model.blocks.push_back(ghost);
  validate_nfold(model);

  auto sol = solve_conflp(model);
  REQUIRE(sol.has_value());
  CHECK(sol->value == 0);
  check_conflp_solution(model, *sol);
  CHECK(check_conflp_certificate(model, *sol, model_pricer(model)));

  auto ilp = solve_confilp(model);
  REQUIRE(ilp.has_value());
  check_confilp_solution(model, *ilp);
}

TEST_CASE("integer search over a restricted column set") {
  SchedulingInstance inst = hmtest::make_cmax({{1, 2}}, {2, 1}, {2}, 2);
  HugeNFoldInstance model = build_model(inst);

  SECTION("full set solves; pruned set may lose feasibility") {
    auto all = enumerate_all_configurations(model);
    auto full = solve_confilp_over_columns(model, all);
    REQUIRE(full.has_value());

    // drop every configuration that schedules the length-2 job
    std::vector<std::vector<IntVec>> pruned(1);
    for (const IntVec& c : all[0])
      if (c[1] == 0) pruned[0].push_back(c);
    CHECK_FALSE(solve_confilp_over_columns(model, pruned).has_value());
  }

  SECTION("state budget failure is loud") {
    ConfILPBudget tiny;
    tiny.max_states = 2;
    CHECK_THROWS_AS(solve_confilp(model, tiny), budget_error);
  }
}
