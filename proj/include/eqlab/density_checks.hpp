#ifndef EQLAB_DENSITY_CHECKS_HPP
#define EQLAB_DENSITY_CHECKS_HPP

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "eqlab/errors.hpp"
#include "eqlab/exact_num.hpp"
#include "eqlab/measures.hpp"

namespace eqlab::density {

using exact_num::UnitRational;

struct DensityWindow {
  long start = 0;      // first index covered by this window
  double density = 0;  // fraction of covered indices that are hits
};

/// Outcome of a hit-index scan over k = 1..K: which indices hit, plus a
/// width-50 windowed density curve and the run parameters.
struct DensityReport {
  long K = 0;
  std::vector<long> hits;
  std::vector<DensityWindow> windows;
  int m = 0;
  int n = 0;
  std::string description;
  std::uint64_t seed = 0;
};

inline constexpr long density_window_width = 50;

namespace detail {

inline std::vector<DensityWindow> windowed(const std::vector<long>& hits, long K) {
  std::vector<DensityWindow> out;
  for (long start = 1; start <= K; start += density_window_width) {
    long end = std::min(K, start + density_window_width - 1);
    long count = 0;
    for (long h : hits)
      if (h >= start && h <= end) ++count;
    out.push_back({start, static_cast<double>(count) / static_cast<double>(end - start + 1)});
  }
  return out;
}

}  // namespace detail

/// Sample one point from mu (with enough digits for K scale levels) and scan
/// k = 1..K for the m-adic/n-adic cell alignment predicate in_A_k.
inline DensityReport a_k_density(const measures::MeasureExpr& mu, int m, int n, long K,
                                 std::uint64_t seed) {
  if (m <= n || n <= 1) throw validation_error("m,n: need m > n > 1");
  if (K < 0) throw validation_error("K: max index must be non-negative");
  int sample_base = mu.kind == measures::MeasureExpr::Kind::digit ? mu.base : 2;
  long digits = exact_num::required_digits(std::max(K, 1L), m, sample_base);
  UnitRational x = measures::sample(mu, seed, digits);
  DensityReport report;
  report.K = K;
  report.m = m;
  report.n = n;
  report.description = "a_k scan";
  report.seed = seed;
  for (long k = 1; k <= K; ++k)
    if (exact_num::in_A_k(x, m, n, k)) report.hits.push_back(k);
  report.windows = detail::windowed(report.hits, K);
  return report;
}

/// Scan k = 1..K for orbit points of x under the times-n map that fall
/// outside the closed interval D yet sit within torus distance (n/m)^k of
/// D's boundary; decided exactly in rational arithmetic.
inline DensityReport boundary_proximity_density(const UnitRational& x, int n, int m,
                                                const mpq_class& d_lo, const mpq_class& d_hi,
                                                long K) {
  if (m <= n || n <= 1) throw validation_error("m,n: need m > n > 1");
  if (K < 0) throw validation_error("K: max index must be non-negative");
  mpq_class lo = d_lo, hi = d_hi;
  lo.canonicalize();
  hi.canonicalize();
  if (lo < 0 || hi > 1 || lo > hi)
    throw validation_error("D: interval must satisfy 0 <= lo <= hi <= 1");

  DensityReport report;
  report.K = K;
  report.m = m;
  report.n = n;
  report.description = "boundary proximity";

  auto torus_distance = [](const mpq_class& a, const mpq_class& b) {
    mpq_class d = a - b;
    if (d < 0) d = -d;
    mpq_class other = 1 - d;
    return d < other ? d : other;
  };

  mpq_class ratio_pow(1);  // (n/m)^k, updated incrementally
  mpq_class ratio(n, m);
  ratio.canonicalize();
  for (long k = 1; k <= K; ++k) {
    ratio_pow *= ratio;
    UnitRational yk = exact_num::orbit_point(x, n, k);
    mpq_class y = yk.value();
    if (y >= lo && y <= hi) continue;  // inside closure(D)
    mpq_class dist = torus_distance(y, lo);
    mpq_class dist_hi = torus_distance(y, hi);
    if (dist_hi < dist) dist = dist_hi;
    if (dist <= ratio_pow) report.hits.push_back(k);
  }
  report.windows = detail::windowed(report.hits, K);
  return report;
}

}

#endif
