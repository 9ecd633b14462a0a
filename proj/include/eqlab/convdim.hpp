#ifndef EQLAB_CONVDIM_HPP
#define EQLAB_CONVDIM_HPP

#include <cmath>
#include <vector>

#include <gmpxx.h>

#include "eqlab/errors.hpp"
#include "eqlab/exact_num.hpp"
#include "eqlab/measures.hpp"

namespace eqlab::convdim {

/// Exact cell masses of a measure on the m^k-adic partition of the circle.
struct LatticeMeasure {
  int base = 0;
  int level = 0;
  std::vector<mpq_class> masses;  // length base^level, summing to exactly 1

  LatticeMeasure(int m, int k, std::vector<mpq_class> cell_masses)
      : base(m), level(k), masses(std::move(cell_masses)) {
    if (m < 2) throw validation_error("base: lattice base must be at least 2");
    if (k < 1) throw validation_error("level: lattice level must be at least 1");
    double cells = std::pow(static_cast<double>(m), k);
    if (cells > 1e8) throw validation_error("level: lattice would exceed the cell budget");
    if (masses.size() != static_cast<std::size_t>(cells + 0.5))
      throw validation_error("masses: lattice needs exactly base^level cell masses");
    mpq_class sum = 0;
    for (const auto& q : masses) {
      if (q < 0) throw validation_error("masses: cell masses must be non-negative");
      sum += q;
    }
    if (sum != 1) throw validation_error("masses: cell masses must sum to exactly 1");
  }
};

/// Exact m^k-adic cell masses of a digit measure (digit-product per cell).
inline LatticeMeasure discretize(const measures::MeasureExpr& mu, int k) {
  if (mu.kind != measures::MeasureExpr::Kind::digit)
    throw validation_error("mu: discretize expects a digit measure");
  const auto& p = *mu.probs;
  const int m = mu.base;
  if (k < 1) throw validation_error("level: lattice level must be at least 1");
  // check the cell budget before building any intermediate level
  if (static_cast<double>(k) * std::log(static_cast<double>(m)) > std::log(1e8))
    throw validation_error("level: lattice would exceed the cell budget");
  std::vector<mpq_class> masses{mpq_class(1)};
  for (int lvl = 0; lvl < k; ++lvl) {
    std::vector<mpq_class> next;
    next.reserve(masses.size() * p.size());
    for (const auto& cell : masses)
      for (std::size_t d = 0; d < p.size(); ++d) next.push_back(cell * p[d]);
    masses = std::move(next);
  }
  return LatticeMeasure(m, k, std::move(masses));
}

/// Cyclic convolution mod base^level; the lattice realization of circle
/// convolution at cell granularity.
inline LatticeMeasure coarse_convolve(const LatticeMeasure& a, const LatticeMeasure& b) {
  if (a.base != b.base || a.level != b.level)
    throw validation_error("convolve: lattices must share base and level");
  const std::size_t n = a.masses.size();
  std::vector<mpq_class> out(n, mpq_class(0));
  for (std::size_t u = 0; u < n; ++u) {
    if (a.masses[u] == 0) continue;
    for (std::size_t v = 0; v < n; ++v) {
      if (b.masses[v] == 0) continue;
      std::size_t z = u + v;
      if (z >= n) z -= n;
      out[z] += a.masses[u] * b.masses[v];
    }
  }
  return LatticeMeasure(a.base, a.level, std::move(out));
}

/// Entropy per scale: -sum mass*ln(mass) / (level * ln base), in [0,1].
inline double coarse_dimension(const LatticeMeasure& a) {
  double h = 0.0;
  for (const auto& q : a.masses) {
    if (q == 0) continue;
    double v = exact_num::to_double(q);
    h -= v * std::log(v);
  }
  return h / (a.level * std::log(static_cast<double>(a.base)));
}

/// Coarse dimensions of the self-convolution powers mu^(*q), q = 1..q_max,
/// all at the same lattice level.
inline std::vector<double> convolution_growth(const measures::MeasureExpr& mu, int q_max, int k) {
  if (q_max < 1) throw validation_error("q_max: need at least one convolution power");
  LatticeMeasure base = discretize(mu, k);
  LatticeMeasure power = base;
  std::vector<double> dims;
  dims.push_back(coarse_dimension(power));
  for (int q = 2; q <= q_max; ++q) {
    power = coarse_convolve(power, base);
    dims.push_back(coarse_dimension(power));
  }
  return dims;
}

}

#endif
