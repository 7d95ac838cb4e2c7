#pragma once

// Exact arithmetic used everywhere in the library: arbitrary-precision
// integers and rationals.  No floating point appears in any computation
// that feeds a result, a bound, or a verdict.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hmsched {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw numeric_error(msg);
}

// --- integer helpers -------------------------------------------------------

// Floor division (rounds toward -infinity, unlike cpp_int's operator/).
inline Int floor_div(const Int& a, const Int& b) {
  require(b != 0, "floor_div: division by zero");
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Int ceil_div(const Int& a, const Int& b) {
  require(b != 0, "ceil_div: division by zero");
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

// Smallest k >= 0 with 2^k >= x (for x >= 1); i.e. ceil(log2(x)).
inline Int ceil_log2(const Int& x) {
  require(x >= 1, "ceil_log2: argument must be positive");
  Int k = 0;
  Int pow = 1;
  while (pow < x) {
    pow <<= 1;
    ++k;
  }
  return k;
}

inline Int int_abs(const Int& x) { return x < 0 ? Int(-x) : x; }

inline Int int_max(const Int& a, const Int& b) { return a < b ? b : a; }
inline Int int_min(const Int& a, const Int& b) { return a < b ? a : b; }

// Number of bits in the binary representation of |x| (0 -> 0).
inline std::size_t bit_length(const Int& x) {
  if (x == 0) return 0;
  Int a = int_abs(x);
  std::size_t n = 0;
  while (a > 0) {
    a >>= 1;
    ++n;
  }
  return n;
}

inline Int int_pow(const Int& base, const Int& exp) {
  require(exp >= 0, "int_pow: negative exponent");
  Int result = 1;
  Int b = base;
  Int e = exp;
  while (e > 0) {
    if ((e & 1) != 0) result *= b;
    b *= b;
    e >>= 1;
  }
  return result;
}

// --- rational helpers ------------------------------------------------------

inline Int rat_floor(const Rat& r) {
  return floor_div(numerator(r), denominator(r));
}

inline Int rat_ceil(const Rat& r) {
  return ceil_div(numerator(r), denominator(r));
}

// Fractional part r - floor(r), always in [0, 1).
inline Rat rat_frac(const Rat& r) { return r - Rat(rat_floor(r)); }

// Nearest integer; exact halves round away from zero (any fixed rule works
// for the callers here, which only need |r - round(r)| <= 1/2).
inline Int rat_round(const Rat& r) {
  const Int two_num = 2 * numerator(r);
  const Int den = denominator(r);
  if (r >= 0) return floor_div(two_num + den, 2 * den);
  return ceil_div(two_num - den, 2 * den);
}

inline bool rat_is_integer(const Rat& r) { return denominator(r) == 1; }

inline int rat_sign(const Rat& r) {
  if (r > 0) return 1;
  if (r < 0) return -1;
  return 0;
}

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

// --- parsing / formatting --------------------------------------------------

// Canonical text form: integers as optional '-' followed by decimal digits,
// rationals as "<num>/<den>" with den > 0 only when den != 1.
inline std::string format_int(const Int& x) { return x.str(); }

inline std::string format_rat(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline bool looks_like_int(const std::string& tok) {
  if (tok.empty()) return false;
  std::size_t i = (tok[0] == '-') ? 1 : 0;
  if (i == tok.size()) return false;
  for (; i < tok.size(); ++i)
    if (tok[i] < '0' || tok[i] > '9') return false;
  return true;
}

inline Int parse_int(const std::string& tok) {
  require(looks_like_int(tok), "not an integer literal: '" + tok + "'");
  return Int(tok);
}

inline Rat parse_rat(const std::string& tok) {
  auto slash = tok.find('/');
  if (slash == std::string::npos) return Rat(parse_int(tok));
  Int num = parse_int(tok.substr(0, slash));
  Int den = parse_int(tok.substr(slash + 1));
  require(den > 0, "rational denominator must be positive: '" + tok + "'");
  return Rat(num, den);
}

inline std::vector<std::string> split_tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> toks;
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

}  // namespace hmsched
