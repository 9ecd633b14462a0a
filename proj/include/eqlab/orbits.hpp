#ifndef EQLAB_ORBITS_HPP
#define EQLAB_ORBITS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "eqlab/errors.hpp"
#include "eqlab/exact_num.hpp"

namespace eqlab::orbits {

using exact_num::UnitRational;

/// x -> scale*x + offset as an initial-point transform; the image of [0,1]
/// must lie inside [0,1].
struct AffineMap {
  mpq_class scale = 1;
  mpq_class offset = 0;

  AffineMap() = default;

  AffineMap(mpq_class s, mpq_class o) : scale(std::move(s)), offset(std::move(o)) {
    scale.canonicalize();
    offset.canonicalize();
    mpq_class at0 = offset, at1 = scale + offset;
    mpq_class lo = at0 < at1 ? at0 : at1;
    mpq_class hi = at0 < at1 ? at1 : at0;
    if (lo < 0 || hi > 1)
      throw validation_error("affine: image of [0,1] under scale*x+offset must stay within [0,1]");
  }

  static AffineMap identity() { return AffineMap(); }

  bool is_identity() const { return scale == 1 && offset == 0; }

  /// Exact image, reduced to lowest terms, with the single possible boundary
  /// image 1 wrapped to 0. The identity keeps digit metadata; a genuine
  /// transform returns a plain rational.
  UnitRational apply(const UnitRational& x) const {
    if (is_identity()) return x;
    mpq_class v = scale * x.value() + offset;
    if (v == 1) v = 0;
    return UnitRational(v.get_num(), v.get_den());
  }
};

/// Streaming accumulator for an empirical measure on the torus square:
/// Fourier sums over modes |k|,|j| <= F plus a G-by-G half-open cell grid.
/// Merging two accumulators adds counts, sums, and grids componentwise.
class EmpiricalMeasure2D {
 public:
  std::int64_t count = 0;
  int F = 8;
  int G = 64;
  std::vector<std::complex<double>> fourier;  // (2F+1)^2 entries, row (k+F), column (j+F)
  std::vector<std::int64_t> grid;             // G*G entries, row-major in (gu, gv)

  EmpiricalMeasure2D(int mode_cutoff, int grid_size) : F(mode_cutoff), G(grid_size) {
    if (F < 0) throw validation_error("F: mode cutoff must be non-negative");
    if (G < 1) throw validation_error("G: grid size must be positive");
    fourier.assign(static_cast<std::size_t>(side()) * side(), {0.0, 0.0});
    grid.assign(static_cast<std::size_t>(G) * G, 0);
  }

  int side() const { return 2 * F + 1; }

  std::size_t mode_index(long k, long j) const {
    return static_cast<std::size_t>(k + F) * side() + static_cast<std::size_t>(j + F);
  }

  /// Accumulate the point (nu/du, nv/dv); fractions need not be reduced but
  /// must lie in [0,1). Powers of the two base exponentials are built by
  /// repeated multiplication in a fixed order, so runs are bit-reproducible.
  void add_ratio(const mpz_class& nu, const mpz_class& du, const mpz_class& nv,
                 const mpz_class& dv) {
    const double u = exact_num::ratio_to_double(nu, du);
    const double v = exact_num::ratio_to_double(nv, dv);
    const std::complex<double> eu(std::cos(2 * std::numbers::pi * u),
                                  std::sin(2 * std::numbers::pi * u));
    const std::complex<double> ev(std::cos(2 * std::numbers::pi * v),
                                  std::sin(2 * std::numbers::pi * v));
    const int s = side();
    std::vector<std::complex<double>> pu(static_cast<std::size_t>(s)), pv(pu);
    pu[static_cast<std::size_t>(F)] = {1.0, 0.0};
    pv[static_cast<std::size_t>(F)] = {1.0, 0.0};
    for (int k = 1; k <= F; ++k) {
      pu[static_cast<std::size_t>(F + k)] = pu[static_cast<std::size_t>(F + k - 1)] * eu;
      pv[static_cast<std::size_t>(F + k)] = pv[static_cast<std::size_t>(F + k - 1)] * ev;
      pu[static_cast<std::size_t>(F - k)] = std::conj(pu[static_cast<std::size_t>(F + k)]);
      pv[static_cast<std::size_t>(F - k)] = std::conj(pv[static_cast<std::size_t>(F + k)]);
    }
    for (int a = 0; a < s; ++a)
      for (int b = 0; b < s; ++b)
        fourier[static_cast<std::size_t>(a) * s + b] +=
            pu[static_cast<std::size_t>(a)] * pv[static_cast<std::size_t>(b)];

    mpz_class q, t;
    t = nu * G;
    mpz_fdiv_q(q.get_mpz_t(), t.get_mpz_t(), du.get_mpz_t());
    long gu = q.get_si();
    t = nv * G;
    mpz_fdiv_q(q.get_mpz_t(), t.get_mpz_t(), dv.get_mpz_t());
    long gv = q.get_si();
    grid[static_cast<std::size_t>(gu) * G + static_cast<std::size_t>(gv)] += 1;
    count += 1;
  }

  void add_point(const UnitRational& u, const UnitRational& v) {
    add_ratio(u.num, u.den, v.num, v.den);
  }

  void merge(const EmpiricalMeasure2D& other) {
    if (other.F != F || other.G != G)
      throw validation_error("merge: accumulators must share mode cutoff and grid size");
    count += other.count;
    for (std::size_t i = 0; i < fourier.size(); ++i) fourier[i] += other.fourier[i];
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] += other.grid[i];
  }
};

/// Normalized empirical Fourier coefficient at mode (k, j).
inline std::complex<double> empirical_fourier(const EmpiricalMeasure2D& e, long k, long j) {
  if (e.count == 0) throw validation_error("empirical_fourier: accumulator holds no points");
  if (std::abs(k) > e.F || std::abs(j) > e.F)
    throw validation_error("empirical_fourier: mode lies outside the accumulator's cutoff");
  return e.fourier[e.mode_index(k, j)] / static_cast<double>(e.count);
}

/// Incremental generator of the simultaneous orbit ((mult_u)^i u0, (mult_v)^i v0)
/// with points streamed into an EmpiricalMeasure2D. Construction applies the
/// affine initial maps and fixes both denominators once; each step is one
/// modular multiplication per coordinate.
class OrbitStream {
 public:
  OrbitStream(const UnitRational& x, const AffineMap& f, const AffineMap& g, int m, int n,
              std::int64_t planned_steps, int F, int G)
      : acc_(F, G), m_(m), n_(n) {
    if (m < 2 || n < 2) throw validation_error("m,n: orbit factors must be at least 2");
    if (planned_steps < 0) throw validation_error("steps: orbit length must be non-negative");
    if (x.digit_base > 0) {
      long need = exact_num::required_digits(planned_steps, std::max(m, n), x.digit_base);
      if (x.digit_count < need)
        throw precision_error("orbit start needs at least " + std::to_string(need) +
                              " base-" + std::to_string(x.digit_base) +
                              " digits for " + std::to_string(planned_steps) +
                              " steps with factor " + std::to_string(std::max(m, n)) +
                              "; point carries " + std::to_string(x.digit_count));
    }
    UnitRational u0 = f.apply(x), v0 = g.apply(x);
    nu_ = u0.num;
    du_ = u0.den;
    nv_ = v0.num;
    dv_ = v0.den;
  }

  /// Stream the next `steps` orbit points into the accumulator.
  void advance(std::int64_t steps) {
    for (std::int64_t i = 0; i < steps; ++i) {
      acc_.add_ratio(nu_, du_, nv_, dv_);
      nu_ = (nu_ * m_) % du_;
      nv_ = (nv_ * n_) % dv_;
    }
  }

  const EmpiricalMeasure2D& measure() const { return acc_; }
  EmpiricalMeasure2D take() { return std::move(acc_); }

 private:
  EmpiricalMeasure2D acc_;
  int m_, n_;
  mpz_class nu_, du_, nv_, dv_;
};

/// One-shot orbit accumulation over N steps.
inline EmpiricalMeasure2D run_orbit(const UnitRational& x, const AffineMap& f, const AffineMap& g,
                                    int m, int n, std::int64_t N, int F, int G) {
  OrbitStream stream(x, f, g, m, n, N, F, G);
  stream.advance(N);
  return stream.take();
}

}

#endif
