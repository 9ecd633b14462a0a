#ifndef EQLAB_SCENERY_HPP
#define EQLAB_SCENERY_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <mpfr.h>

#include "eqlab/errors.hpp"
#include "eqlab/exact_num.hpp"
#include "eqlab/measures.hpp"

namespace eqlab::scenery {

using exact_num::UnitRational;
using measures::MeasureExpr;
using measures::ProbVector;

/// The window of radius e^{-t} around a center, summarized by the relative
/// masses of the 2^r equal subcells of [center - radius, center + radius].
struct ScenerySample {
  UnitRational center;
  double t = 0.0;
  long k = 0;          // series index; 0 for a directly requested window
  mpq_class radius;    // the exact radius actually used (see window notes)
  ProbVector descriptor;
};

/// One zoom increment for a scenery series: either exactly log(m), stepping
/// the radius through the exact powers m^-k, or an arbitrary positive real,
/// stepping the radius through certified rational approximations of e^-kt.
struct ScaleStep {
  bool exact = false;
  int base = 0;     // exact variant
  double t0 = 0.0;  // real variant

  static ScaleStep log_of(int m) {
    if (m < 2) throw validation_error("t0: exact log step needs base at least 2");
    ScaleStep s;
    s.exact = true;
    s.base = m;
    s.t0 = std::log(static_cast<double>(m));
    return s;
  }

  static ScaleStep real(double t0) {
    if (!(t0 > 0)) throw validation_error("t0: scale step must be positive");
    ScaleStep s;
    s.t0 = t0;
    return s;
  }
};

namespace detail {

/// Dyadic rational within relative distance 1e-12 of e^-t, certified by an
/// MPFR enclosure with directed rounding (96 bits gives relative enclosure
/// width around 1e-28, far inside the bound; checked anyway).
inline mpq_class certified_radius(double t) {
  if (t < 0) throw validation_error("t: scale must be non-negative");
  mpfr_t arg, lo, hi, width, rel;
  mpfr_inits2(96, arg, lo, hi, width, rel, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_d(arg, -t, MPFR_RNDN);  // doubles convert exactly at this precision
  mpfr_exp(lo, arg, MPFR_RNDD);
  mpfr_exp(hi, arg, MPFR_RNDU);
  mpfr_sub(width, hi, lo, MPFR_RNDU);
  mpfr_div(rel, width, lo, MPFR_RNDU);
  bool certified = mpfr_cmp_d(rel, 1e-12) < 0;
  mpq_class radius;
  mpfr_get_q(radius.get_mpq_t(), lo);
  mpfr_clears(arg, lo, hi, width, rel, static_cast<mpfr_ptr>(nullptr));
  if (!certified) throw error("scenery: radius enclosure failed to certify");
  radius.canonicalize();
  return radius;
}

inline ScenerySample window_at_radius(const MeasureExpr& mu, const UnitRational& x, double t,
                                      long k, const mpq_class& radius, int r) {
  if (r < 1) throw validation_error("r: descriptor depth must be at least 1");
  if (mu.dims() != 1) throw validation_error("scenery: measure must be one-dimensional");
  mpq_class center = x.value();
  mpq_class left = center - radius, right = center + radius;
  if (left < 0 || right > 1)
    throw out_of_window_error("window [" + std::to_string(exact_num::to_double(left)) + ", " +
                              std::to_string(exact_num::to_double(right)) +
                              "] leaves the unit interval");

  const long cells = 1L << r;
  // edge i sits at left + (2*radius)*i/2^r; cells are half-open except the last
  std::vector<mpq_class> edge_open(static_cast<std::size_t>(cells) + 1);
  for (long i = 0; i <= cells; ++i) {
    mpq_class frac(2 * i, cells);
    frac.canonicalize();
    mpq_class e = left + frac * radius;
    edge_open[static_cast<std::size_t>(i)] =
        measures::cdf_value(mu, e, /*closed_end=*/false);
  }
  mpq_class right_closed = measures::cdf_value(mu, right, /*closed_end=*/true);

  std::vector<mpq_class> masses(static_cast<std::size_t>(cells));
  for (long i = 0; i < cells; ++i) {
    const mpq_class& hi =
        (i == cells - 1) ? right_closed : edge_open[static_cast<std::size_t>(i + 1)];
    masses[static_cast<std::size_t>(i)] = hi - edge_open[static_cast<std::size_t>(i)];
  }
  mpq_class total = right_closed - edge_open[0];
  if (total == 0) throw degenerate_window_error("window around " +
                                                std::to_string(exact_num::to_double(center)) +
                                                " carries zero mass");
  for (auto& m : masses) m /= total;
  ScenerySample sample{x, t, k, radius, ProbVector(std::move(masses))};
  return sample;
}

}  // namespace detail

/// Descriptor of the radius-e^-t window around x. The radius is the exact
/// power m^-k when t is requested through an exact log step; otherwise it is
/// a certified rational approximation within relative 1e-12 of e^-t, and the
/// descriptor is exact for that approximated radius.
inline ScenerySample window_measure(const MeasureExpr& mu, const UnitRational& x, double t,
                                    int r) {
  return detail::window_at_radius(mu, x, t, 0, detail::certified_radius(t), r);
}

/// A scenery series with the indices of centers whose windows left [0,1].
struct ScenerySeries {
  std::vector<ScenerySample> samples;
  std::vector<long> skipped;
};

/// Window descriptors at t = k*t0 for k = 1..k_max. Out-of-window scales are
/// skipped and recorded; other errors propagate.
inline ScenerySeries scenery_series(const MeasureExpr& mu, const UnitRational& x,
                                    const ScaleStep& t0, long k_max, int r) {
  if (k_max < 0) throw validation_error("k_max: series length must be non-negative");
  ScenerySeries series;
  mpq_class exact_radius(1);
  for (long k = 1; k <= k_max; ++k) {
    double t = t0.t0 * static_cast<double>(k);
    mpq_class radius;
    if (t0.exact) {
      exact_radius /= t0.base;
      radius = exact_radius;
    } else {
      radius = detail::certified_radius(t);
    }
    try {
      series.samples.push_back(detail::window_at_radius(mu, x, t, k, radius, r));
    } catch (const out_of_window_error&) {
      series.skipped.push_back(k);
    }
  }
  return series;
}

namespace detail {

// descriptor bucketed to 10^-2 resolution: entry -> round(100*entry) exactly
inline std::vector<int> bucketed(const ProbVector& descriptor) {
  std::vector<int> out;
  out.reserve(descriptor.size());
  for (const auto& q : descriptor.entries) {
    // floor(100q + 1/2) = floor((200 num + den) / (2 den))
    mpz_class num = 200 * q.get_num() + q.get_den();
    mpz_class den = 2 * q.get_den();
    mpz_class b;
    mpz_fdiv_q(b.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    out.push_back(static_cast<int>(b.get_si()));
  }
  return out;
}

}  // namespace detail

/// Total-variation distance between the empirical distributions of bucketed
/// descriptors over sample indices [0, W) and [W, 2W).
inline double stationarity_gap(const ScenerySeries& series, long W) {
  if (W < 1) throw validation_error("W: window length must be positive");
  if (static_cast<long>(series.samples.size()) < 2 * W)
    throw validation_error("series: stationarity gap needs at least 2W kept samples");
  std::map<std::vector<int>, long> first, second;
  for (long i = 0; i < W; ++i)
    first[detail::bucketed(series.samples[static_cast<std::size_t>(i)].descriptor)] += 1;
  for (long i = W; i < 2 * W; ++i)
    second[detail::bucketed(series.samples[static_cast<std::size_t>(i)].descriptor)] += 1;
  std::map<std::vector<int>, std::pair<long, long>> joint;
  for (const auto& [key, c] : first) joint[key].first = c;
  for (const auto& [key, c] : second) joint[key].second = c;
  double tv = 0.0;
  for (const auto& [key, counts] : joint)
    tv += std::abs(static_cast<double>(counts.first) - static_cast<double>(counts.second));
  return tv / (2.0 * static_cast<double>(W));
}

/// Companion drift statistic: total-variation distance between the two
/// half-series componentwise mean descriptors. Much coarser than the bucketed
/// histogram distance; reported alongside it, never in its place.
inline double mean_descriptor_drift(const ScenerySeries& series, long W) {
  if (W < 1) throw validation_error("W: window length must be positive");
  if (static_cast<long>(series.samples.size()) < 2 * W)
    throw validation_error("series: drift needs at least 2W kept samples");
  std::size_t width = series.samples.front().descriptor.size();
  std::vector<mpq_class> mean1(width, mpq_class(0)), mean2(width, mpq_class(0));
  for (long i = 0; i < W; ++i)
    for (std::size_t c = 0; c < width; ++c)
      mean1[c] += series.samples[static_cast<std::size_t>(i)].descriptor[c];
  for (long i = W; i < 2 * W; ++i)
    for (std::size_t c = 0; c < width; ++c)
      mean2[c] += series.samples[static_cast<std::size_t>(i)].descriptor[c];
  double tv = 0.0;
  for (std::size_t c = 0; c < width; ++c) {
    mpq_class diff = (mean1[c] - mean2[c]) / W;
    tv += std::abs(exact_num::to_double(diff));
  }
  return tv / 2.0;
}

}

#endif
