#include "hmsched/numeric.hpp"

#include "test_helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace hmsched;

TEST_CASE("floor and ceiling division round toward the right infinities") {
  CHECK(floor_div(Int(7), Int(2)) == 3);
  CHECK(floor_div(Int(-7), Int(2)) == -4);
  CHECK(floor_div(Int(7), Int(-2)) == -4);
  CHECK(floor_div(Int(-7), Int(-2)) == 3);
  CHECK(floor_div(Int(6), Int(2)) == 3);
  CHECK(floor_div(Int(-6), Int(2)) == -3);
  CHECK(ceil_div(Int(7), Int(2)) == 4);
  CHECK(ceil_div(Int(-7), Int(2)) == -3);
  CHECK(ceil_div(Int(7), Int(-2)) == -3);
  CHECK(ceil_div(Int(-7), Int(-2)) == 4);
  CHECK_THROWS_AS(floor_div(Int(1), Int(0)), numeric_error);
}

TEST_CASE("division roundings bracket the rational quotient") {
  std::mt19937_64 rng(12345);
  for (int it = 0; it < 2000; ++it) {
    Int a(hmtest::rand_int(rng, -50, 50));
    Int b(hmtest::rand_int(rng, -12, 12));
    if (b == 0) continue;
    Int fq = floor_div(a, b);
    Int cq = ceil_div(a, b);
    Rat q = Rat(a) / Rat(b);
    CHECK(Rat(fq) <= q);
    CHECK(q < Rat(fq) + 1);
    CHECK(Rat(cq) >= q);
    CHECK(q > Rat(cq) - 1);
    CHECK(cq - fq == ((a % b == 0) ? 0 : 1));
  }
}

TEST_CASE("ceil_log2 is the smallest exponent reaching the argument") {
  CHECK(ceil_log2(Int(1)) == 0);
  CHECK(ceil_log2(Int(2)) == 1);
  CHECK(ceil_log2(Int(3)) == 2);
  CHECK(ceil_log2(Int(4)) == 2);
  CHECK(ceil_log2(Int(5)) == 3);
  CHECK(ceil_log2(Int(1024)) == 10);
  CHECK(ceil_log2(Int(1025)) == 11);
  for (long long x = 1; x <= 300; ++x) {
    Int k = ceil_log2(Int(x));
    CHECK(int_pow(Int(2), k) >= x);
    if (k > 0) CHECK(int_pow(Int(2), k - 1) < x);
  }
  CHECK_THROWS_AS(ceil_log2(Int(0)), numeric_error);
}

TEST_CASE("bit_length counts binary digits of the magnitude") {
  CHECK(bit_length(Int(0)) == 0);
  CHECK(bit_length(Int(1)) == 1);
  CHECK(bit_length(Int(2)) == 2);
  CHECK(bit_length(Int(3)) == 2);
  CHECK(bit_length(Int(4)) == 3);
  CHECK(bit_length(Int(-4)) == 3);
  CHECK(bit_length(Int(255)) == 8);
  CHECK(bit_length(Int(256)) == 9);
}

TEST_CASE("int_pow computes exact powers") {
  CHECK(int_pow(Int(2), Int(0)) == 1);
  CHECK(int_pow(Int(0), Int(0)) == 1);
  CHECK(int_pow(Int(3), Int(4)) == 81);
  CHECK(int_pow(Int(-2), Int(3)) == -8);
  CHECK(int_pow(Int(10), Int(30)) == Int("1000000000000000000000000000000"));
  CHECK_THROWS_AS(int_pow(Int(2), Int(-1)), numeric_error);
}

TEST_CASE("rational floor, ceiling, fraction and rounding") {
  CHECK(rat_floor(Rat(7, 2)) == 3);
  CHECK(rat_floor(Rat(-7, 2)) == -4);
  CHECK(rat_ceil(Rat(7, 2)) == 4);
  CHECK(rat_ceil(Rat(-7, 2)) == -3);
  CHECK(rat_floor(Rat(5)) == 5);
  CHECK(rat_frac(Rat(7, 2)) == Rat(1, 2));
  CHECK(rat_frac(Rat(-7, 2)) == Rat(1, 2));
  CHECK(rat_frac(Rat(-1, 3)) == Rat(2, 3));
  CHECK(rat_round(Rat(1, 3)) == 0);
  CHECK(rat_round(Rat(2, 3)) == 1);
  CHECK(rat_round(Rat(1, 2)) == 1);
  CHECK(rat_round(Rat(-1, 2)) == -1);
  CHECK(rat_round(Rat(-5, 3)) == -2);
  CHECK(rat_round(Rat(9)) == 9);

  std::mt19937_64 rng(777);
  for (int it = 0; it < 2000; ++it) {
    Rat r(Int(hmtest::rand_int(rng, -400, 400)),
          Int(hmtest::rand_int(rng, 1, 40)));
    CHECK(Rat(rat_floor(r)) <= r);
    CHECK(r < Rat(rat_floor(r)) + 1);
    CHECK(rat_frac(r) >= 0);
    CHECK(rat_frac(r) < 1);
    CHECK(Rat(rat_floor(r)) + rat_frac(r) == r);
    CHECK(rat_abs(r - Rat(rat_round(r))) <= Rat(1, 2));
  }
}

TEST_CASE("formatting and parsing round-trip") {
  CHECK(format_int(Int(-42)) == "-42");
  CHECK(format_rat(Rat(5)) == "5");
  CHECK(format_rat(Rat(-3, 7)) == "-3/7");
  CHECK(parse_int("-42") == -42);
  CHECK(parse_rat("5") == Rat(5));
  CHECK(parse_rat("-3/7") == Rat(-3, 7));
  CHECK(parse_rat("6/4") == Rat(3, 2));  // normalized on construction
  CHECK(format_rat(parse_rat("6/4")) == "3/2");
  CHECK(looks_like_int("007"));
  CHECK_FALSE(looks_like_int(""));
  CHECK_FALSE(looks_like_int("-"));
  CHECK_FALSE(looks_like_int("3.5"));
  CHECK_FALSE(looks_like_int("1e3"));
  CHECK_THROWS_AS(parse_int("x"), numeric_error);
  CHECK_THROWS_AS(parse_rat("1/0"), numeric_error);
  CHECK_THROWS_AS(parse_rat("1/-2"), numeric_error);

  std::mt19937_64 rng(31337);
  for (int it = 0; it < 500; ++it) {
    Rat r(Int(hmtest::rand_int(rng, -100000, 100000)),
          Int(hmtest::rand_int(rng, 1, 9999)));
    CHECK(parse_rat(format_rat(r)) == r);
  }
}

TEST_CASE("token splitting ignores runs of whitespace") {
  auto toks = split_tokens("  a\tbb   c ");
  REQUIRE(toks.size() == 3);
  CHECK(toks[0] == "a");
  CHECK(toks[1] == "bb");
  CHECK(toks[2] == "c");
  CHECK(split_tokens("").empty());
  CHECK(split_tokens("   \t ").empty());
}
