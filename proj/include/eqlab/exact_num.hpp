#ifndef EQLAB_EXACT_NUM_HPP
#define EQLAB_EXACT_NUM_HPP

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "eqlab/errors.hpp"

namespace eqlab::exact_num {

/// Convert an exact fraction num/den (den > 0) to the nearest double without
/// materializing an mpq, safe for denominators far beyond double range.
inline double ratio_to_double(const mpz_class& num, const mpz_class& den) {
  if (num == 0) return 0.0;
  long ne = 0, de = 0;
  double nd = mpz_get_d_2exp(&ne, num.get_mpz_t());
  double dd = mpz_get_d_2exp(&de, den.get_mpz_t());
  return std::ldexp(nd / dd, static_cast<int>(ne - de));
}

inline double to_double(const mpq_class& q) {
  return ratio_to_double(q.get_num(), q.get_den());
}

/// An exact point of [0,1). Values built from a base-p digit expansion
/// remember the base and digit count; orbit runners use that metadata to
/// enforce the precision rule. Plain fractions carry no metadata and are
/// accepted as-is (useful for periodic points and hand fixtures).
struct UnitRational {
  mpz_class num;
  mpz_class den;
  int digit_base = 0;    // 0 when not built from a digit expansion
  long digit_count = 0;

  UnitRational() : num(0), den(1) {}

  UnitRational(mpz_class n, mpz_class d) : num(std::move(n)), den(std::move(d)) {
    if (den <= 0) throw error("UnitRational: denominator must be positive");
    if (num < 0 || num >= den) throw error("UnitRational: numerator must lie in [0, denominator)");
  }

  UnitRational(long n, long d) : UnitRational(mpz_class(n), mpz_class(d)) {}

  /// The canonical (reduced) rational value.
  mpq_class value() const {
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  }

  double to_double() const { return ratio_to_double(num, den); }
};

// Equality and ordering compare rational values, not representations, so
// 1/2 built over denominator 2^10 equals 1/2 over denominator 2.
inline bool operator==(const UnitRational& a, const UnitRational& b) {
  return a.num * b.den == b.num * a.den;
}
inline bool operator!=(const UnitRational& a, const UnitRational& b) { return !(a == b); }
inline bool operator<(const UnitRational& a, const UnitRational& b) {
  return a.num * b.den < b.num * a.den;
}

/// Build the point sum digits[j] * base^(K-1-j) / base^K from K base-p digits
/// (most significant first). The result's denominator is exactly base^K.
inline UnitRational make_point(const std::vector<int>& digits, int base) {
  if (base < 2) throw validation_error("make_point: base must be at least 2");
  if (digits.empty()) throw validation_error("make_point: digit sequence must be non-empty");
  mpz_class num = 0;
  for (int d : digits) {
    if (d < 0 || d >= base)
      throw invalid_digit_error("make_point: digit " + std::to_string(d) +
                                " out of range for base " + std::to_string(base));
    num = num * base + d;
  }
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(base),
                static_cast<unsigned long>(digits.size()));
  UnitRational x(std::move(num), std::move(den));
  x.digit_base = base;
  x.digit_count = static_cast<long>(digits.size());
  return x;
}

/// One step of the times-m map: x -> m*x mod 1. The denominator (and digit
/// metadata) is unchanged; in digit terms this shifts the expansion left.
inline UnitRational apply_T(const UnitRational& x, int factor) {
  if (factor < 2) throw validation_error("apply_T: factor must be at least 2");
  UnitRational r;
  r.num = (x.num * factor) % x.den;
  r.den = x.den;
  r.digit_base = x.digit_base;
  r.digit_count = x.digit_count;
  return r;
}

/// The i-th orbit point m^i * x mod 1, computed with modular exponentiation
/// so long orbits cost O(log i) big-integer multiplications. Agrees exactly
/// with i applications of apply_T.
inline UnitRational orbit_point(const UnitRational& x, int factor, unsigned long step) {
  if (factor < 2) throw validation_error("orbit_point: factor must be at least 2");
  mpz_class base(factor), power;
  mpz_powm_ui(power.get_mpz_t(), base.get_mpz_t(), step, x.den.get_mpz_t());
  UnitRational r;
  r.num = (power * x.num) % x.den;
  r.den = x.den;
  r.digit_base = x.digit_base;
  r.digit_count = x.digit_count;
  return r;
}

/// A half-open cell [index/base^level, (index+1)/base^level). Cells at fixed
/// (base, level) tile [0,1).
struct PartitionCell {
  int base;
  int level;
  mpz_class index;

  mpz_class cell_count() const {
    mpz_class c;
    mpz_ui_pow_ui(c.get_mpz_t(), static_cast<unsigned long>(base),
                  static_cast<unsigned long>(level));
    return c;
  }

  mpq_class lower() const {
    mpq_class q(index, cell_count());
    q.canonicalize();
    return q;
  }

  mpq_class upper() const {
    mpq_class q(index + 1, cell_count());
    q.canonicalize();
    return q;
  }

  bool contains(const UnitRational& x) const {
    // index/b^k <= x < (index+1)/b^k as exact cross-multiplied comparisons
    mpz_class bk = cell_count();
    return index * x.den <= x.num * bk && x.num * bk < (index + 1) * x.den;
  }
};

inline bool operator==(const PartitionCell& a, const PartitionCell& b) {
  return a.base == b.base && a.level == b.level && a.index == b.index;
}

/// The unique level-k cell containing x: index = floor(x * base^k). Boundary
/// points belong to the cell whose left endpoint they are.
inline PartitionCell cell_of(const UnitRational& x, int base, int level) {
  if (base < 2) throw validation_error("cell_of: base must be at least 2");
  if (level < 0) throw validation_error("cell_of: level must be non-negative");
  mpz_class bk;
  mpz_ui_pow_ui(bk.get_mpz_t(), static_cast<unsigned long>(base),
                static_cast<unsigned long>(level));
  mpz_class idx;
  mpz_fdiv_q(idx.get_mpz_t(), mpz_class(x.num * bk).get_mpz_t(), x.den.get_mpz_t());
  return PartitionCell{base, level, idx};
}

/// Does the level-k base-m cell of x strictly contain an n^k-adic endpoint
/// s/n^k in its interior? Decided purely by integer comparisons: with
/// z = floor(x*m^k), the smallest candidate is s = floor(z*n^k/m^k) + 1, and
/// a hit happens iff s/n^k < (z+1)/m^k.
inline bool in_A_k(const UnitRational& x, int m, int n, int k) {
  if (!(m > n && n > 1)) throw validation_error("in_A_k: need m > n > 1");
  if (k < 1) throw validation_error("in_A_k: need k >= 1");
  mpz_class mk, nk;
  mpz_ui_pow_ui(mk.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(k));
  mpz_ui_pow_ui(nk.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  mpz_class z;
  mpz_fdiv_q(z.get_mpz_t(), mpz_class(x.num * mk).get_mpz_t(), x.den.get_mpz_t());
  mpz_class s_min;
  mpz_fdiv_q(s_min.get_mpz_t(), mpz_class(z * nk).get_mpz_t(), mk.get_mpz_t());
  s_min += 1;
  return s_min * mk < (z + 1) * nk;
}

/// Digit budget for simulating a typical point over N steps of the times-m
/// map with base-p digits: ceil(N log m / log p) plus 64 guard digits. The
/// guard keeps truncation periodicity artifacts outside the run.
inline long required_digits(long steps, int factor, int base) {
  if (steps <= 0) return 64;
  long double ratio = std::log(static_cast<long double>(factor)) /
                      std::log(static_cast<long double>(base));
  return static_cast<long>(std::ceil(static_cast<long double>(steps) * ratio)) + 64;
}

}

#endif
