#include <catch2/catch_amalgamated.hpp>

#include "hmsched/graver.hpp"

#include <random>

#include "test_helpers.hpp"

using namespace hmsched;
using hmtest::rand_int;

namespace {

bool contains(const GraverBasis& gb, const IntVec& g) {
  return std::find(gb.elements.begin(), gb.elements.end(), g) !=
         gb.elements.end();
}

void check_basis_invariants(const GraverBasis& gb) {
  for (const IntVec& g : gb.elements) {
    CHECK_FALSE(is_zero(g));
    CHECK(is_zero(mat_vec(gb.A, g)));
    IntVec neg(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) neg[i] = -g[i];
    CHECK(contains(gb, neg));
    for (const IntVec& h : gb.elements)
      if (h != g) CHECK_FALSE(conformal_leq(h, g));
  }
}

}  // namespace

TEST_CASE("conformal order basics") {
  CHECK(conformal_leq(hmtest::to_ints({1, 0, -1}), hmtest::to_ints({2, 0, -3})));
  CHECK_FALSE(
      conformal_leq(hmtest::to_ints({1, 0, -1}), hmtest::to_ints({1, -1, 1})));
  CHECK(conformal_leq(hmtest::to_ints({0, 0, 0}), hmtest::to_ints({5, -7, 0})));
  CHECK(conformal_leq(hmtest::to_ints({2, -3}), hmtest::to_ints({2, -3})));
  CHECK_FALSE(conformal_leq(hmtest::to_ints({2, 0}), hmtest::to_ints({1, 0})));
  CHECK_THROWS_AS(conformal_leq(hmtest::to_ints({1}), hmtest::to_ints({1, 2})),
                  numeric_error);
}

TEST_CASE("difference matrix of one equation") {
  GraverBasis gb = graver_basis(IntMatrix{{1, -1}});
  REQUIRE(gb.complete);
  REQUIRE(gb.elements.size() == 2);
  CHECK(contains(gb, hmtest::to_ints({1, 1})));
  CHECK(contains(gb, hmtest::to_ints({-1, -1})));
  CHECK(gb.g_inf() == 1);
  CHECK(gb.g_1() == 2);
  check_basis_invariants(gb);
}

TEST_CASE("knapsack row (1 2 1)") {
  GraverBasis gb = graver_basis(IntMatrix{{1, 2, 1}});
  REQUIRE(gb.complete);
  CHECK(contains(gb, hmtest::to_ints({1, 0, -1})));
  CHECK(contains(gb, hmtest::to_ints({2, -1, 0})));
  CHECK(contains(gb, hmtest::to_ints({0, 1, -2})));
  CHECK(contains(gb, hmtest::to_ints({1, -1, 1})));
  CHECK(gb.g_inf() == 2);
  CHECK(gb.g_1() == 3);
  check_basis_invariants(gb);

  // the box search is an independent reimplementation; exact agreement
  CHECK(gb.elements == exhaustive_graver(gb.A, 5));
}

TEST_CASE("trivial and degenerate kernels") {
  CHECK(graver_basis(IntMatrix{{1}}).elements.empty());
  CHECK(graver_basis(IntMatrix{{1}}).complete);

  // zero column: its unit vectors are kernel-minimal
  GraverBasis gb = graver_basis(IntMatrix{{1, 0}, {0, 0}});
  REQUIRE(gb.complete);
  REQUIRE(gb.elements.size() == 2);
  CHECK(contains(gb, hmtest::to_ints({0, 1})));
  CHECK(contains(gb, hmtest::to_ints({0, -1})));

  GraverBasis all_zero = graver_basis(IntMatrix{{0, 0}});
  REQUIRE(all_zero.complete);
  CHECK(all_zero.elements.size() == 4);  // +-e1, +-e2 only
  check_basis_invariants(all_zero);
}

TEST_CASE("completion agrees with the box search on random matrices") {
  std::mt19937_64 rng(20240819);
  int verified = 0;
  for (int iter = 0; iter < 60; ++iter) {
    std::size_t m = static_cast<std::size_t>(rand_int(rng, 1, 2));
    std::size_t n = static_cast<std::size_t>(rand_int(rng, 1, 4));
    IntMatrix A(m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        A.at(i, j) = Int(rand_int(rng, -2, 2));
    GraverBasis gb = graver_basis(A, 60);
    check_basis_invariants(gb);
    if (!gb.complete) continue;
    long long box = static_cast<long long>(gb.g_inf());
    if (box == 0 || box > 6) continue;  // keep the baseline enumerable
    CHECK(gb.elements == exhaustive_graver(A, box));
    ++verified;
  }
  CHECK(verified >= 20);
}

TEST_CASE("norm truncation is flagged, never silent") {
  GraverBasis gb = graver_basis(IntMatrix{{1, 2, 1}}, 1);
  CHECK_FALSE(gb.complete);
  // whatever survived is still sound
  check_basis_invariants(gb);
}

TEST_CASE("dual graph shapes") {
  SECTION("load-difference matrix is a path") {
    IntVec a = hmtest::to_ints({1, 2, 3});
    auto adj = dual_graph(load_difference_matrix(a));
    CHECK(is_path(adj));
    CHECK(adj[0].count(1) == 1);
    CHECK(adj[0].count(2) == 0);
  }

  SECTION("prefix-load matrix is a clique") {
    IntVec a = hmtest::to_ints({1, 2, 3});
    auto adj = dual_graph(load_prefix_matrix(a));
    CHECK_FALSE(is_path(adj));
    CHECK(adj[0].count(1) == 1);
    CHECK(adj[0].count(2) == 1);
    CHECK(adj[1].count(2) == 1);
  }

  SECTION("tau = 2 load-difference matrix is a two-vertex path") {
    CHECK(is_path(dual_graph(load_difference_matrix(hmtest::to_ints({2, 2})))));
  }

  SECTION("single row") {
    CHECK(is_path(dual_graph(IntMatrix{{3, 0, 1}})));
  }

  SECTION("disconnected rows") {
    CHECK_FALSE(is_path(dual_graph(IntMatrix{{1, 0}, {0, 1}})));
  }
}

TEST_CASE("load-difference Graver norms stay under the derived bounds") {
  SECTION("tau = 1") {
    HillcuttingReport rep = verify_hillcutting(hmtest::to_ints({2}));
    CHECK(rep.ok());
    CHECK(rep.ginf_bound == 3);
  }
  SECTION("sizes (1,2)") {
    HillcuttingReport rep = verify_hillcutting(hmtest::to_ints({1, 2}));
    CHECK(rep.complete);
    CHECK(rep.ginf_bound == 34);
    CHECK(rep.g1_bound == 136);
    CHECK(rep.ok());
  }
  SECTION("sizes (1,1)") {
    CHECK(verify_hillcutting(hmtest::to_ints({1, 1})).ok());
  }
  SECTION("sizes (2,2)") {
    CHECK(verify_hillcutting(hmtest::to_ints({2, 2})).ok());
  }
}

TEST_CASE("generic one-norm bound holds on complete bases") {
  for (const IntMatrix& A :
       {IntMatrix{{1, -1}}, IntMatrix{{1, 2, 1}}, IntMatrix{{1}}}) {
    BaseBoundReport rep = verify_basebound(graver_basis(A));
    CHECK(rep.ok());
  }
  // 2-row example
  BaseBoundReport rep =
      verify_basebound(graver_basis(IntMatrix{{1, 0, -1, 0}, {0, 2, 1, -1}}));
  CHECK(rep.ok());
}
