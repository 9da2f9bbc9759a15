#pragma once

// Exact arithmetic primitives shared by every module: arbitrary-precision
// integers/rationals, dyadic helpers, and comparable values of the form
// mantissa * 2^(p/q). All certificate-bearing computations go through these;
// there is no floating point on any decision path.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace splab {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A stated hypothesis of an inequality does not hold for the given inputs.
struct HypothesisViolation : Error {
  explicit HypothesisViolation(const std::string& msg) : Error(msg) {}
};

// An exhaustively checked statement failed; this must never fire.
struct TheoremViolation : Error {
  explicit TheoremViolation(const std::string& msg) : Error(msg) {}
};

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  // b > 0; rounds toward minus infinity.
  std::int64_t q = a / b;
  if ((a % b) != 0 && a < 0) --q;
  return q;
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  return -floor_div(-a, b);
}

inline Int pow2(long e) {
  if (e < 0) throw Error("pow2: negative exponent");
  return Int(1) << e;
}

// 2^e as an exact rational, any sign of e.
inline Rat pow2r(long e) {
  if (e >= 0) return Rat(pow2(e));
  return Rat(Int(1), pow2(-e));
}

inline Int floor_rat(const Rat& r) {
  Int n = numerator(r), d = denominator(r);  // d > 0 canonical
  Int q = n / d;
  if (n % d != 0 && n < 0) --q;
  return q;
}

inline Int ceil_rat(const Rat& r) { return -floor_rat(-r); }

// Round half up: ties resolve toward +infinity (2.5 -> 3, -2.5 -> -2).
inline Int round_half_up(const Rat& r) { return floor_rat(r + Rat(1, 2)); }

inline std::int64_t to_i64(const Int& v) {
  if (v > Int(INT64_MAX) || v < Int(INT64_MIN)) throw Error("to_i64: out of range");
  return static_cast<std::int64_t>(v);
}

inline Rat parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(text));
    Int num(text.substr(0, slash));
    Int den(text.substr(slash + 1));
    if (den == 0) throw Error("parse_rational: zero denominator");
    return Rat(num, den);
  } catch (const std::exception&) {
    throw Error("parse_rational: cannot parse '" + text + "'");
  }
}

inline std::string format_rational(const Rat& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

// Largest n with n^k <= x (x >= 0, k >= 1). Newton iteration on integers.
inline Int nth_root_floor(const Int& x, unsigned k) {
  if (x < 0) throw Error("nth_root_floor: negative radicand");
  if (k == 0) throw Error("nth_root_floor: zeroth root");
  if (x == 0 || x == 1 || k == 1) return x;
  using boost::multiprecision::msb;
  long bits = static_cast<long>(msb(x)) + 1;
  Int r = Int(1) << static_cast<unsigned>((bits + k - 1) / k);
  while (true) {
    Int rk1 = boost::multiprecision::pow(r, k - 1);
    if (rk1 == 0) { r = 1; break; }
    Int next = ((k - 1) * r + x / rk1) / k;
    if (next >= r) break;
    r = next;
  }
  while (boost::multiprecision::pow(r, k) > x) --r;
  while (boost::multiprecision::pow(r + 1, k) <= x) ++r;
  return r;
}

// Exact nonnegative value  mantissa * 2^exponent  with rational exponent.
// Ratios like count * 2^{l*sigma} / n are irrational for general sigma, but
// comparisons between two such values reduce to integer power comparisons,
// so maxima and thresholds stay exact.
struct Pow2Scaled {
  Rat mantissa;   // >= 0
  Rat exponent;   // base-2 exponent

  Pow2Scaled() : mantissa(0), exponent(0) {}
  Pow2Scaled(Rat m, Rat e) : mantissa(std::move(m)), exponent(std::move(e)) {
    if (mantissa < 0) throw Error("Pow2Scaled: negative mantissa");
  }
  static Pow2Scaled from_rational(const Rat& v) { return Pow2Scaled(v, Rat(0)); }

  bool is_zero() const { return mantissa == 0; }

  // -1, 0, +1 against another value; exact.
  int compare(const Pow2Scaled& other) const {
    if (is_zero() && other.is_zero()) return 0;
    if (is_zero()) return -1;
    if (other.is_zero()) return 1;
    Rat e = exponent - other.exponent;          // compare m1 * 2^e vs m2
    Int p = numerator(e);
    unsigned q = denominator(e).convert_to<unsigned>();
    Rat m = mantissa / other.mantissa;          // compare m^q * 2^p vs 1
    Int a = boost::multiprecision::pow(numerator(m), q);
    Int b = boost::multiprecision::pow(denominator(m), q);
    if (p >= 0) a <<= p.convert_to<unsigned>(); else b <<= Int(-p).convert_to<unsigned>();
    return a < b ? -1 : (a == b ? 0 : 1);
  }
  bool operator<(const Pow2Scaled& o) const { return compare(o) < 0; }
  bool operator<=(const Pow2Scaled& o) const { return compare(o) <= 0; }
  bool operator==(const Pow2Scaled& o) const { return compare(o) == 0; }

  // Decimal expansion truncated to `digits` fractional digits, computed in
  // integer arithmetic (deterministic across platforms).
  std::string decimal(unsigned digits) const {
    Int scaled = floor_scaled_pow10(digits);
    if (digits == 0) return scaled.str();
    Int ip = scaled / boost::multiprecision::pow(Int(10), digits);
    Int fp = scaled % boost::multiprecision::pow(Int(10), digits);
    std::string frac = fp.str();
    frac.insert(frac.begin(), digits - frac.size(), '0');
    return ip.str() + "." + frac;
  }

  // floor(value * 10^digits)
  Int floor_scaled_pow10(unsigned digits) const {
    if (is_zero()) return Int(0);
    Int p = numerator(exponent);
    unsigned q = denominator(exponent).convert_to<unsigned>();
    // value*10^d = (mn/md) * 2^(p/q) * 10^d; take q-th powers under the floor.
    Int mn = numerator(mantissa) * boost::multiprecision::pow(Int(10), digits);
    Int md = denominator(mantissa);
    Int num = boost::multiprecision::pow(mn, q);
    Int den = boost::multiprecision::pow(md, q);
    if (p >= 0) num <<= p.convert_to<unsigned>(); else den <<= Int(-p).convert_to<unsigned>();
    return nth_root_floor(num / den, q);
  }
};

namespace detail {

// Unbiased draw from [0, n) via rejection; the fixed engine keeps seeded
// runs reproducible across platforms.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  std::uint64_t limit = n * (UINT64_MAX / n);
  std::uint64_t v;
  do { v = rng(); } while (v >= limit);
  return v % n;
}

}  // namespace detail

// Truncated decimal string of a nonnegative rational (display helper).
inline std::string decimal_string(const Rat& v, unsigned digits) {
  if (v < 0) return "-" + decimal_string(-v, digits);
  return Pow2Scaled::from_rational(v).decimal(digits);
}

// Rational approximation of base^(p/q), truncated to `digits` decimal digits.
// base > 0. Used only for reported quantities, never for certificates.
inline Rat pow_rational_approx(const Rat& base, const Rat& expnt, unsigned digits) {
  if (base <= 0) throw Error("pow_rational_approx: base must be positive");
  Int p = numerator(expnt);
  unsigned q = denominator(expnt).convert_to<unsigned>();
  Rat b = p >= 0 ? base : Rat(1) / base;
  unsigned pa = (p >= 0 ? p : Int(-p)).convert_to<unsigned>();
  // floor( (b^p)^{1/q} * 10^d ) / 10^d
  Int scale = boost::multiprecision::pow(Int(10), digits);
  Int num = boost::multiprecision::pow(numerator(b), pa) * boost::multiprecision::pow(scale, q);
  Int den = boost::multiprecision::pow(denominator(b), pa);
  Int root = nth_root_floor(num / den, q);
  return Rat(root, scale);
}

}  // namespace splab
