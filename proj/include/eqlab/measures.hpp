#ifndef EQLAB_MEASURES_HPP
#define EQLAB_MEASURES_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "eqlab/errors.hpp"
#include "eqlab/exact_num.hpp"
#include "eqlab/rng.hpp"

namespace eqlab::measures {

using exact_num::PartitionCell;
using exact_num::UnitRational;

/// A finite probability vector with exact rational entries (zero entries are
/// allowed; the sum must be exactly 1).
struct ProbVector {
  std::vector<mpq_class> entries;

  explicit ProbVector(std::vector<mpq_class> e) : entries(std::move(e)) {
    if (entries.empty()) throw validation_error("probs: probability vector must be non-empty");
    mpq_class sum = 0;
    for (const auto& p : entries) {
      if (p < 0) throw validation_error("probs: probability entries must be non-negative");
      sum += p;
    }
    if (sum != 1) throw validation_error("probs: probability entries must sum to exactly 1");
  }

  std::size_t size() const { return entries.size(); }
  const mpq_class& operator[](std::size_t i) const { return entries[i]; }
};

/// Shannon entropy in nats, with 0*ln(0) taken as 0.
inline double entropy(const ProbVector& p) {
  double h = 0.0;
  for (const auto& q : p.entries) {
    if (q == 0) continue;
    double v = exact_num::to_double(q);
    h -= v * std::log(v);
  }
  return h;
}

/// Entropy-over-log-base dimension of the stationary digit measure with the
/// given digit distribution; lands in [0,1].
inline double digit_dimension(int base, const ProbVector& p) {
  if (base < 2) throw validation_error("digit_dimension: base must be at least 2");
  return entropy(p) / std::log(static_cast<double>(base));
}

/// One atom of a finite atomic measure.
struct Atom {
  UnitRational location;
  mpq_class weight;
};

class MeasureExpr;
using MeasurePtr = std::shared_ptr<const MeasureExpr>;

/// An algebraic measure description. One-dimensional variants live on the
/// circle [0,1); the product variant is a measure on the square [0,1)^2.
/// Values are immutable after construction and freely shareable.
class MeasureExpr {
 public:
  enum class Kind { lebesgue, digit, atomic, affine_push, convolve, product };

  Kind kind = Kind::lebesgue;
  int base = 0;                      // digit
  std::optional<ProbVector> probs;   // digit
  std::vector<Atom> atoms;           // atomic
  mpq_class scale = 1, offset = 0;   // affine_push
  MeasurePtr left, right;            // affine_push (left=child), convolve, product

  int dims() const {
    switch (kind) {
      case Kind::product: return 2;
      case Kind::convolve: return left->dims();
      default: return 1;
    }
  }
};

inline MeasureExpr lebesgue() { return MeasureExpr{}; }

inline MeasureExpr digit_measure(int base, ProbVector probs) {
  if (base < 2) throw validation_error("base: digit measure base must be at least 2");
  if (static_cast<int>(probs.size()) != base)
    throw validation_error("probs: digit probability vector length must equal the base");
  MeasureExpr m;
  m.kind = MeasureExpr::Kind::digit;
  m.base = base;
  m.probs.emplace(std::move(probs));
  return m;
}

inline MeasureExpr atomic(std::vector<Atom> atoms) {
  if (atoms.empty()) throw validation_error("atoms: atomic measure needs at least one atom");
  mpq_class sum = 0;
  for (const auto& a : atoms) {
    if (a.weight < 0) throw validation_error("atoms: weights must be non-negative");
    sum += a.weight;
  }
  if (sum != 1) throw validation_error("atoms: weights must sum to exactly 1");
  MeasureExpr m;
  m.kind = MeasureExpr::Kind::atomic;
  m.atoms = std::move(atoms);
  return m;
}

/// Pushforward of a 1-D measure under x -> scale*x + offset. As an
/// initial-point transform the image of [0,1] must stay inside [0,1], which
/// is checked here (both endpoint images).
inline MeasureExpr affine_push(MeasureExpr child, mpq_class scale, mpq_class offset) {
  if (child.dims() != 1)
    throw validation_error("affine: child measure must be one-dimensional");
  mpq_class at0 = offset, at1 = scale + offset;
  mpq_class lo = std::min(at0, at1), hi = std::max(at0, at1);
  if (lo < 0 || hi > 1)
    throw validation_error("affine: image of [0,1] under scale*x+offset must stay within [0,1]");
  MeasureExpr m;
  m.kind = MeasureExpr::Kind::affine_push;
  m.scale = std::move(scale);
  m.offset = std::move(offset);
  m.left = std::make_shared<MeasureExpr>(std::move(child));
  return m;
}

inline MeasureExpr convolve(MeasureExpr l, MeasureExpr r) {
  if (l.dims() != r.dims())
    throw validation_error("convolve: children must have matching dimension");
  MeasureExpr m;
  m.kind = MeasureExpr::Kind::convolve;
  m.left = std::make_shared<MeasureExpr>(std::move(l));
  m.right = std::make_shared<MeasureExpr>(std::move(r));
  return m;
}

inline MeasureExpr product(MeasureExpr first, MeasureExpr second) {
  if (first.dims() != 1 || second.dims() != 1)
    throw validation_error("product: both factors must be one-dimensional");
  MeasureExpr m;
  m.kind = MeasureExpr::Kind::product;
  m.left = std::make_shared<MeasureExpr>(std::move(first));
  m.right = std::make_shared<MeasureExpr>(std::move(second));
  return m;
}

/// The two-point measure equidistributed on the period-2 orbit of the
/// times-n^k map starting at 1/(n^(2k)-1); its atoms are 1/(n^(2k)-1) and
/// n^k/(n^(2k)-1), each with weight 1/2.
inline MeasureExpr make_alpha(int n, int k) {
  if (n < 2 || k < 1) throw validation_error("make_alpha: need n >= 2 and k >= 1");
  mpz_class nk, n2k;
  mpz_ui_pow_ui(nk.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  n2k = nk * nk;
  mpz_class den = n2k - 1;
  UnitRational x0(mpz_class(1), den);
  UnitRational x1(nk, den);
  return atomic({Atom{x0, mpq_class(1, 2)}, Atom{x1, mpq_class(1, 2)}});
}

/// The stationary digit measure with digit distribution (1/3, 2/3, 0, ..., 0)
/// in the given base.
inline MeasureExpr make_beta(int m) {
  if (m < 2) throw validation_error("make_beta: base must be at least 2");
  std::vector<mpq_class> p(static_cast<std::size_t>(m), mpq_class(0));
  p[0] = mpq_class(1, 3);
  p[1] = mpq_class(2, 3);
  return digit_measure(m, ProbVector(std::move(p)));
}

// ---------------------------------------------------------------------------
// Fourier coefficients
// ---------------------------------------------------------------------------

/// e^(2*pi*i*q) with the angle reduced modulo 1 in exact arithmetic first, so
/// huge rationals lose no phase accuracy.
inline std::complex<double> unit_exp(const mpq_class& q) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  double frac = exact_num::ratio_to_double(r, q.get_den());
  double angle = 2.0 * std::numbers::pi * frac;
  return {std::cos(angle), std::sin(angle)};
}

namespace detail {

// Truncated infinite product for digit-measure coefficients. Factor j is
// sum_u p_u e^(2 pi i u k / base^j); factors approach 1 geometrically, and
// the loop stops once the certified tail bound sum_{j>J} 2 pi |k| w / base^j
// is below tol/2, where w covers both the unit weight and the actual mean
// digit sum_u u p_u (whichever makes the bound larger).
inline std::complex<double> digit_fourier(const MeasureExpr& mu, long k, double tol) {
  const ProbVector& p = *mu.probs;
  const int base = mu.base;
  double mean_digit = 0.0;
  for (std::size_t u = 0; u < p.size(); ++u)
    mean_digit += static_cast<double>(u) * exact_num::to_double(p[u]);
  const double weight = std::max(1.0, mean_digit);
  const double abs_k = std::abs(static_cast<double>(k));

  std::complex<double> prod(1.0, 0.0);
  mpz_class power(1);
  for (int j = 1; j <= 20000; ++j) {
    power *= base;
    std::complex<double> factor(0.0, 0.0);
    for (std::size_t u = 0; u < p.size(); ++u) {
      if (p[u] == 0) continue;
      mpq_class angle(mpz_class(static_cast<long>(u) * k), power);
      factor += exact_num::to_double(p[u]) * unit_exp(angle);
    }
    prod *= factor;
    // tail over j' > j of 2 pi |k| w / base^j' equals 2 pi |k| w / (base^j (base-1))
    double tail = 2.0 * std::numbers::pi * abs_k * weight /
                  (exact_num::ratio_to_double(power, mpz_class(1)) * (base - 1));
    if (tail < tol / 2.0) return prod;
  }
  throw error("fourier: digit-measure product failed to converge within the level cap");
}

}  // namespace detail

/// Fourier coefficient of a 1-D measure at integer frequency k, with absolute
/// error at most tol. Exact closed forms are used wherever they exist; the
/// digit-measure infinite product is truncated with a certified tail bound.
inline std::complex<double> fourier_1d(const MeasureExpr& mu, long k, double tol) {
  if (tol <= 0) throw validation_error("tol: tolerance must be positive");
  if (mu.dims() != 1) throw validation_error("fourier_1d: measure must be one-dimensional");
  switch (mu.kind) {
    case MeasureExpr::Kind::lebesgue:
      return k == 0 ? std::complex<double>(1.0, 0.0) : std::complex<double>(0.0, 0.0);
    case MeasureExpr::Kind::atomic: {
      std::complex<double> sum(0.0, 0.0);
      for (const auto& a : mu.atoms) {
        mpq_class angle(a.location.num * k, a.location.den);
        sum += exact_num::to_double(a.weight) * unit_exp(angle);
      }
      return sum;
    }
    case MeasureExpr::Kind::digit:
      if (k == 0) return {1.0, 0.0};
      return detail::digit_fourier(mu, k, tol);
    case MeasureExpr::Kind::convolve:
      // coefficients multiply under convolution; halve the budget per child
      return fourier_1d(*mu.left, k, tol / 2.0) * fourier_1d(*mu.right, k, tol / 2.0);
    case MeasureExpr::Kind::affine_push: {
      // pushforward rule: coefficient at k is e^(2 pi i k offset) times the
      // child's coefficient at k*scale, which must be an integer frequency
      mpq_class ks = mpq_class(k) * mu.scale;
      ks.canonicalize();
      if (ks.get_den() != 1)
        throw unsupported_exact_error(
            "fourier: affine pushforward needs k*scale integral; got non-integer frequency");
      if (!ks.get_num().fits_slong_p())
        throw unsupported_exact_error("fourier: affine pushforward frequency overflows");
      std::complex<double> phase = unit_exp(mpq_class(k) * mu.offset);
      return phase * fourier_1d(*mu.left, ks.get_num().get_si(), tol);
    }
    case MeasureExpr::Kind::product:
      throw validation_error("fourier_1d: measure must be one-dimensional");
  }
  throw error("fourier_1d: unreachable");
}

/// Fourier coefficient of a 2-D measure at frequencies (k, j).
inline std::complex<double> fourier_2d(const MeasureExpr& mu, long k, long j, double tol) {
  if (tol <= 0) throw validation_error("tol: tolerance must be positive");
  if (mu.dims() != 2) throw validation_error("fourier_2d: measure must be two-dimensional");
  if (mu.kind == MeasureExpr::Kind::product)
    return fourier_1d(*mu.left, k, tol / 2.0) * fourier_1d(*mu.right, j, tol / 2.0);
  // convolve of two 2-D children
  return fourier_2d(*mu.left, k, j, tol / 2.0) * fourier_2d(*mu.right, k, j, tol / 2.0);
}

// ---------------------------------------------------------------------------
// Exact CDF evaluation
// ---------------------------------------------------------------------------

namespace detail {

// Point mass of a digit measure at q in [0,1): nonzero only when the digit
// walk of q survives on probability-1 digits forever (equivalently the walk
// reaches a state whose remaining expansion carries full conditional mass).
// Returned as prefix coefficient times 0 or 1, folded into the walk below.

// Exact mu([0,q)) (open) or mu([0,q]) (closed) for a digit measure, by
// walking the base-m expansion of q. All bookkeeping is integer arithmetic
// over the common denominator d of the digit probabilities: after M steps the
// running cdf is T/d^M and the cylinder-prefix mass is P/d^M, so each step is
// a couple of big-integer multiply-adds with no rational canonicalization.
// Rational q whose expansion is eventually periodic is resolved exactly by
// cycle detection: at the second visit of a state, F(state) solves a linear
// equation. The degenerate cycle whose digit probabilities are all 1 is an
// atom sitting exactly at the state.
inline mpq_class digit_cdf(const MeasureExpr& mu, const mpq_class& q, bool closed) {
  const ProbVector& p = *mu.probs;
  const int base = mu.base;

  mpz_class d(1);
  for (const auto& e : p.entries) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), e.get_den().get_mpz_t());
  std::vector<mpz_class> weight(p.size()), below(p.size());
  mpz_class run = 0;
  for (std::size_t u = 0; u < p.size(); ++u) {
    weight[u] = p[u].get_num() * (d / p[u].get_den());
    below[u] = run;
    run += weight[u];
  }

  mpz_class num = q.get_num();
  const mpz_class den = q.get_den();
  mpz_class T = 0, P = 1;
  unsigned long M = 0;

  auto step = [&]() {
    num *= base;
    mpz_class dig;
    mpz_fdiv_q(dig.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    num -= dig * den;
    auto di = static_cast<std::size_t>(dig.get_ui());
    T = T * d + below[di] * P;
    P *= weight[di];
    ++M;
  };
  auto pow_d = [&](unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), d.get_mpz_t(), e);
    return r;
  };
  auto finish = [&](bool add_tail_atom) {
    // remaining expansion is all zeros; that tail point is an atom iff the
    // zero digit carries probability 1
    mpq_class out(add_tail_atom ? mpz_class(T + P) : T, pow_d(M));
    out.canonicalize();
    return out;
  };

  // first pass without bookkeeping: terminating expansions (denominator
  // dividing a power of the base) finish here; 8192 covers every digit
  // budget used anywhere in the library
  long plain_budget = 8192;
  while (plain_budget-- > 0) {
    if (num == 0) return finish(closed && weight[0] == d);
    if (P == 0) return finish(false);
    step();
  }

  // eventually periodic expansion: remember (T, P, M) at each state and
  // close the loop at the first revisit
  std::map<mpz_class, std::tuple<mpz_class, mpz_class, unsigned long>> seen;
  long guard = 1000000;
  while (guard-- > 0) {
    if (num == 0) return finish(closed && weight[0] == d);
    if (P == 0) return finish(false);
    auto it = seen.find(num);
    if (it != seen.end()) {
      const mpz_class& T1 = std::get<0>(it->second);
      const mpz_class& P1 = std::get<1>(it->second);
      unsigned long M1 = std::get<2>(it->second);
      mpz_class lift = pow_d(M - M1);
      mpq_class a1(T1, pow_d(M1));
      a1.canonicalize();
      mpq_class p1(P1, pow_d(M1));
      p1.canonicalize();
      if (P == P1 * lift) {
        // all digit probabilities along the cycle equal 1: the conditional
        // measure is the atom at this very state
        return closed ? mpq_class(a1 + p1) : a1;
      }
      // F(total) = a1 + p1*F(s) = acc + pref*F(s)  =>  solve for F(s); both
      // sides are scaled by d^M to stay in integers
      mpz_class fs_num = T1 * lift - T, fs_den = P - P1 * lift;
      mpq_class fs(fs_num, fs_den);
      fs.canonicalize();
      return a1 + p1 * fs;
    }
    seen.emplace(num, std::make_tuple(T, P, M));
    step();
  }
  throw unsupported_exact_error("cdf: digit expansion state space too large to close exactly");
}

inline mpq_class cdf_impl(const MeasureExpr& mu, const mpq_class& x, bool closed);

inline mpq_class atomic_cdf(const MeasureExpr& mu, const mpq_class& x, bool closed) {
  mpq_class sum = 0;
  for (const auto& a : mu.atoms) {
    mpq_class loc(a.location.num, a.location.den);
    loc.canonicalize();
    if (loc < x || (closed && loc == x)) sum += a.weight;
  }
  return sum;
}

inline mpq_class cdf_impl(const MeasureExpr& mu, const mpq_class& x, bool closed) {
  if (mu.dims() != 1) throw validation_error("cdf: measure must be one-dimensional");
  if (x <= 0) {
    if (x < 0) return 0;
    // mass of [0,0] is the point mass at 0; of [0,0) it is zero
    if (!closed) return 0;
  }
  if (x >= 1) return 1;
  switch (mu.kind) {
    case MeasureExpr::Kind::lebesgue:
      return x <= 0 ? mpq_class(0) : x;
    case MeasureExpr::Kind::atomic:
      return atomic_cdf(mu, x, closed);
    case MeasureExpr::Kind::digit:
      if (x <= 0) {
        // closed at 0: atom at 0 exists iff digit 0 has probability 1
        return (*mu.probs)[0] == 1 ? mpq_class(1) : mpq_class(0);
      }
      return digit_cdf(mu, x, closed);
    case MeasureExpr::Kind::affine_push: {
      const mpq_class& s = mu.scale;
      const mpq_class& o = mu.offset;
      if (s == 0) {
        // a point mass at the offset
        bool in = (o < x) || (closed && o == x);
        return in ? mpq_class(1) : mpq_class(0);
      }
      mpq_class y = (x - o) / s;
      if (s > 0) return cdf_impl(*mu.left, y, closed);
      // negative scale reverses orientation: {t : s t + o <= x} = [y, 1]
      return 1 - cdf_impl(*mu.left, y, !closed);
    }
    case MeasureExpr::Kind::convolve:
      throw unsupported_exact_error("cdf: convolution masses have no exact evaluator here");
    case MeasureExpr::Kind::product:
      throw validation_error("cdf: measure must be one-dimensional");
  }
  throw error("cdf: unreachable");
}

}  // namespace detail

/// Exact mu([0,x]) (closed_end = true) or mu([0,x)) (closed_end = false) at an
/// arbitrary rational x. Arguments outside [0,1] clamp to 0 or 1.
inline mpq_class cdf_value(const MeasureExpr& mu, const mpq_class& x, bool closed_end) {
  mpq_class canon = x;
  canon.canonicalize();
  return detail::cdf_impl(mu, canon, closed_end);
}

/// Exact mu([0,x]).
inline mpq_class cdf(const MeasureExpr& mu, const UnitRational& x) {
  return cdf_value(mu, x.value(), true);
}

/// Exact mu([0,x)); subtracting two of these gives half-open interval masses
/// that stay correct even for measures with atoms.
inline mpq_class cdf_open(const MeasureExpr& mu, const UnitRational& x) {
  return cdf_value(mu, x.value(), false);
}

/// Exact mass of a half-open partition cell. Digit measures whose base
/// matches the cell's base take the digit-product fast path; everything else
/// goes through exact CDF differences.
inline mpq_class cell_mass(const MeasureExpr& mu, const PartitionCell& cell) {
  if (mu.dims() != 1) throw validation_error("cell_mass: measure must be one-dimensional");
  if (mu.kind == MeasureExpr::Kind::convolve)
    throw unsupported_exact_error("cell_mass: convolution masses have no exact evaluator here");
  if (mu.kind == MeasureExpr::Kind::atomic) {
    mpq_class lo = cell.lower(), hi = cell.upper();
    mpq_class sum = 0;
    for (const auto& a : mu.atoms) {
      mpq_class loc(a.location.num, a.location.den);
      loc.canonicalize();
      if (lo <= loc && loc < hi) sum += a.weight;
    }
    return sum;
  }
  if (mu.kind == MeasureExpr::Kind::digit && mu.base == cell.base) {
    // mass of the cylinder fixing the cell's digit prefix
    const ProbVector& p = *mu.probs;
    mpq_class mass = 1;
    mpz_class idx = cell.index;
    std::vector<int> digits(static_cast<std::size_t>(cell.level), 0);
    for (int i = cell.level - 1; i >= 0; --i) {
      mpz_class d = idx % cell.base;
      digits[static_cast<std::size_t>(i)] = static_cast<int>(d.get_si());
      idx /= cell.base;
    }
    for (int d : digits) mass *= p[static_cast<std::size_t>(d)];
    return mass;
  }
  return cdf_value(mu, cell.upper(), false) - cdf_value(mu, cell.lower(), false);
}

// ---------------------------------------------------------------------------
// Seeded sampling
// ---------------------------------------------------------------------------

namespace detail {

// Pick an index from exact cumulative thresholds using one 53-bit dyadic
// draw; the comparison r/2^53 < threshold is done in integers.
inline std::size_t draw_index(rng::DyadicDraws& draws, const std::vector<mpq_class>& cumulative) {
  mpz_class r(static_cast<unsigned long>(draws.bits53()));
  mpz_class two53(static_cast<unsigned long>(rng::dyadic_denominator));
  for (std::size_t i = 0; i < cumulative.size(); ++i) {
    // r/2^53 < num/den  <=>  r*den < num*2^53
    if (r * cumulative[i].get_den() < cumulative[i].get_num() * two53) return i;
  }
  return cumulative.size() - 1;
}

inline UnitRational sample_impl(const MeasureExpr& mu, std::uint64_t seed, long digit_count);

inline UnitRational sample_digit(const ProbVector& p, int base, std::uint64_t seed,
                                 long digit_count) {
  std::vector<mpq_class> cumulative(p.size());
  mpq_class run = 0;
  for (std::size_t d = 0; d < p.size(); ++d) {
    run += p[d];
    cumulative[d] = run;
  }
  rng::DyadicDraws draws(seed);
  std::vector<int> digits(static_cast<std::size_t>(digit_count));
  for (auto& d : digits) d = static_cast<int>(draw_index(draws, cumulative));
  return exact_num::make_point(digits, base);
}

inline UnitRational sample_impl(const MeasureExpr& mu, std::uint64_t seed, long digit_count) {
  if (digit_count < 1) throw validation_error("digits: sample needs a positive digit count");
  switch (mu.kind) {
    case MeasureExpr::Kind::digit:
      return sample_digit(*mu.probs, mu.base, seed, digit_count);
    case MeasureExpr::Kind::lebesgue: {
      ProbVector half({mpq_class(1, 2), mpq_class(1, 2)});
      return sample_digit(half, 2, seed, digit_count);
    }
    case MeasureExpr::Kind::atomic: {
      std::vector<mpq_class> cumulative(mu.atoms.size());
      mpq_class run = 0;
      for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
        run += mu.atoms[i].weight;
        cumulative[i] = run;
      }
      rng::DyadicDraws draws(seed);
      return mu.atoms[draw_index(draws, cumulative)].location;
    }
    case MeasureExpr::Kind::affine_push: {
      UnitRational y = sample_impl(*mu.left, seed, digit_count);
      mpq_class v = mu.scale * y.value() + mu.offset;
      if (v == 1) v = 0;  // wrap the single boundary image onto the circle
      return UnitRational(v.get_num(), v.get_den());
    }
    case MeasureExpr::Kind::convolve: {
      UnitRational a = sample_impl(*mu.left, rng::derive_seed(seed, 0), digit_count);
      UnitRational b = sample_impl(*mu.right, rng::derive_seed(seed, 1), digit_count);
      mpq_class v = a.value() + b.value();
      if (v >= 1) v -= 1;
      return UnitRational(v.get_num(), v.get_den());
    }
    case MeasureExpr::Kind::product:
      throw validation_error("sample: measure must be one-dimensional");
  }
  throw error("sample: unreachable");
}

}  // namespace detail

/// Draw one point from a 1-D measure, deterministically in the seed. Digit
/// measures (and Lebesgue, via uniform binary digits) produce digit-expansion
/// points carrying precision metadata; atomic measures return an atom chosen
/// by weight.
inline UnitRational sample(const MeasureExpr& mu, std::uint64_t seed, long digit_count) {
  return detail::sample_impl(mu, seed, digit_count);
}

}

#endif
