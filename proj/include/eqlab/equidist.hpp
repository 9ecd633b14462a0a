#ifndef EQLAB_EQUIDIST_HPP
#define EQLAB_EQUIDIST_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "eqlab/errors.hpp"
#include "eqlab/measures.hpp"
#include "eqlab/orbits.hpp"

namespace eqlab::equidist {

using measures::MeasureExpr;
using orbits::AffineMap;
using orbits::EmpiricalMeasure2D;

/// The two limit shapes of the simultaneous-orbit experiments: part1 keeps
/// the sampling measure in the second coordinate, part2 flattens both.
enum class TargetCase { part1, part2 };

/// Product target the empirical measures are compared against:
/// part1 -> Lebesgue x mu, part2 -> Lebesgue x Lebesgue.
inline MeasureExpr target_for(TargetCase c, const std::optional<MeasureExpr>& mu) {
  if (c == TargetCase::part2) return measures::product(measures::lebesgue(), measures::lebesgue());
  if (!mu) throw validation_error("mu: the part1 target needs the sampling measure");
  if (mu->dims() != 1) throw validation_error("mu: sampling measure must be one-dimensional");
  return measures::product(measures::lebesgue(), *mu);
}

namespace detail {

// Target coefficients for all modes |k|,|j| <= F, laid out like the
// accumulator's mode table.
inline std::vector<std::complex<double>> target_table(const MeasureExpr& target, int F,
                                                      double tol) {
  const int s = 2 * F + 1;
  std::vector<std::complex<double>> table(static_cast<std::size_t>(s) * s);
  for (long k = -F; k <= F; ++k)
    for (long j = -F; j <= F; ++j)
      table[static_cast<std::size_t>(k + F) * s + static_cast<std::size_t>(j + F)] =
          measures::fourier_2d(target, k, j, tol);
  return table;
}

inline double distance_from_table(const EmpiricalMeasure2D& e,
                                  const std::vector<std::complex<double>>& table, int F) {
  if (e.count == 0) throw validation_error("fourier_distance: accumulator holds no points");
  if (F > e.F) throw validation_error("F: distance cutoff exceeds the accumulator's mode table");
  const int s = 2 * F + 1;
  double sum = 0.0;
  for (long k = -F; k <= F; ++k)
    for (long j = -F; j <= F; ++j) {
      if (k == 0 && j == 0) continue;
      if (std::max(std::labs(k), std::labs(j)) > F) continue;
      std::complex<double> diff =
          orbits::empirical_fourier(e, k, j) -
          table[static_cast<std::size_t>(k + F) * s + static_cast<std::size_t>(j + F)];
      double w = 1.0 / ((1.0 + std::labs(k)) * (1.0 + std::labs(j)));
      sum += w * std::abs(diff);
    }
  return sum;
}

// median with the even-count average-of-middle-two convention
inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  if (n == 0) throw validation_error("median: empty sample");
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

/// Weighted truncated-coefficient distance between an empirical accumulator
/// and a 2-D target: sum over 0 < max(|k|,|j|) <= F of
/// |empirical(k,j) - target(k,j)| / ((1+|k|)(1+|j|)).
inline double fourier_distance(const EmpiricalMeasure2D& e, const MeasureExpr& target, int F,
                               double tol) {
  if (target.dims() != 2) throw validation_error("target: distance target must be two-dimensional");
  return detail::distance_from_table(e, detail::target_table(target, F, tol), F);
}

/// Distance curve of one starting point across the step schedule, plus its
/// worst single-mode error at the final step count.
struct PointCurve {
  int point_id = 0;
  std::vector<double> distances;
  double final_max_mode_error = 0.0;
};

/// Ensemble convergence diagnostics: per-point curves, ensemble medians, and
/// the per-mode error table at the final step count (ensemble median per
/// mode, all modes |k|,|j| <= F except (0,0)).
struct ConvergenceReport {
  std::vector<std::int64_t> schedule;
  std::vector<PointCurve> points;
  std::vector<double> median_distance;
  double median_max_mode_error = 0.0;
  double trend_ratio = 0.0;  // final median distance over first median distance
  std::map<std::pair<long, long>, double> mode_error_table;
};

/// Run each ensemble point's orbit through the whole schedule (continuing the
/// same stream between schedule entries) and compare against the case target.
inline ConvergenceReport convergence_report(const std::vector<exact_num::UnitRational>& ensemble,
                                            const AffineMap& f, const AffineMap& g, int m, int n,
                                            const std::optional<MeasureExpr>& mu, TargetCase c,
                                            const std::vector<std::int64_t>& schedule, int F,
                                            int G, double tol) {
  if (ensemble.empty()) throw validation_error("ensemble: need at least one starting point");
  if (schedule.empty()) throw validation_error("schedule: need at least one step count");
  for (std::size_t i = 0; i + 1 < schedule.size(); ++i)
    if (schedule[i] >= schedule[i + 1])
      throw validation_error("schedule: step counts must be strictly increasing");
  if (schedule.front() <= 0) throw validation_error("schedule: step counts must be positive");

  MeasureExpr target = target_for(c, mu);
  auto table = detail::target_table(target, F, tol);
  const int s = 2 * F + 1;

  ConvergenceReport report;
  report.schedule = schedule;
  std::vector<std::vector<double>> per_mode(static_cast<std::size_t>(s) * s);

  for (std::size_t idx = 0; idx < ensemble.size(); ++idx) {
    orbits::OrbitStream stream(ensemble[idx], f, g, m, n, schedule.back(), F, G);
    PointCurve curve;
    curve.point_id = static_cast<int>(idx);
    std::int64_t done = 0;
    for (std::int64_t target_n : schedule) {
      stream.advance(target_n - done);
      done = target_n;
      curve.distances.push_back(detail::distance_from_table(stream.measure(), table, F));
    }
    double worst = 0.0;
    for (long k = -F; k <= F; ++k)
      for (long j = -F; j <= F; ++j) {
        if (k == 0 && j == 0) continue;
        std::size_t slot = static_cast<std::size_t>(k + F) * s + static_cast<std::size_t>(j + F);
        double err = std::abs(orbits::empirical_fourier(stream.measure(), k, j) - table[slot]);
        per_mode[slot].push_back(err);
        worst = std::max(worst, err);
      }
    curve.final_max_mode_error = worst;
    report.points.push_back(std::move(curve));
  }

  for (std::size_t step = 0; step < schedule.size(); ++step) {
    std::vector<double> column;
    column.reserve(report.points.size());
    for (const auto& p : report.points) column.push_back(p.distances[step]);
    report.median_distance.push_back(detail::median(std::move(column)));
  }
  {
    std::vector<double> finals;
    finals.reserve(report.points.size());
    for (const auto& p : report.points) finals.push_back(p.final_max_mode_error);
    report.median_max_mode_error = detail::median(std::move(finals));
  }
  report.trend_ratio = report.median_distance.back() / report.median_distance.front();
  for (long k = -F; k <= F; ++k)
    for (long j = -F; j <= F; ++j) {
      if (k == 0 && j == 0) continue;
      std::size_t slot = static_cast<std::size_t>(k + F) * s + static_cast<std::size_t>(j + F);
      report.mode_error_table[{k, j}] = detail::median(per_mode[slot]);
    }
  return report;
}

}

#endif
