#ifndef EQLAB_VERIFY_HPP
#define EQLAB_VERIFY_HPP

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eqlab/cli.hpp"
#include "eqlab/convdim.hpp"
#include "eqlab/density_checks.hpp"
#include "eqlab/equidist.hpp"
#include "eqlab/exact_num.hpp"
#include "eqlab/measure_io.hpp"
#include "eqlab/measures.hpp"
#include "eqlab/orbits.hpp"
#include "eqlab/scenery.hpp"

namespace eqlab::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::string detail;
};

struct PassOutput {
  std::vector<CriterionResult> results;
  std::string fingerprint;  // payload bytes, for the double-run comparison
};

namespace detail {

using clock = std::chrono::steady_clock;

inline double seconds_since(clock::time_point start) {
  return std::chrono::duration<double>(clock::now() - start).count();
}

// Criterion 1: the closed-form orbit evaluator agrees exactly with repeated
// application of the map, over randomized points, factors, and step counts.
inline CriterionResult orbit_equivalence() {
  auto start = clock::now();
  CriterionResult r{1, "closed-form orbit points equal iterated mapping", false, 0, 1.0, ""};
  std::mt19937_64 eng(42);
  int agree = 0;
  const int total = 100;
  for (int rep = 0; rep < total; ++rep) {
    unsigned long den = 2 + eng() % 999999;
    unsigned long num = eng() % den;
    int m = static_cast<int>(2 + eng() % 9);
    int steps = static_cast<int>(eng() % 51);
    exact_num::UnitRational x{mpz_class(num), mpz_class(den)};
    exact_num::UnitRational walked = x;
    for (int i = 0; i < steps; ++i) walked = exact_num::apply_T(walked, m);
    if (exact_num::orbit_point(x, m, steps) == walked) ++agree;
  }
  r.seconds = seconds_since(start);
  r.pass = agree == total && r.seconds < r.budget_seconds;
  r.detail = std::to_string(agree) + "/" + std::to_string(total) + " exact matches";
  return r;
}

// Criterion 2: coefficients of a convolution factor into the product of the
// children's coefficients, and product-measure coefficients split likewise.
inline CriterionResult fourier_identities(std::string& fingerprint) {
  auto start = clock::now();
  CriterionResult r{2, "convolution and product coefficients factor", false, 0, 5.0, ""};
  std::mt19937_64 eng(7);
  double worst_conv = 0.0, worst_prod = 0.0;
  bool ok = true;
  std::ostringstream fp;
  for (int pair = 0; pair < 50; ++pair) {
    int base = static_cast<int>(2 + eng() % 5);
    std::vector<mpq_class> weights;
    mpz_class wsum = 0;
    for (int d = 0; d < base; ++d) {
      unsigned long w = eng() % 10;
      weights.emplace_back(static_cast<long>(w));
      wsum += static_cast<long>(w);
    }
    if (wsum == 0) {
      weights[0] = 1;
      wsum = 1;
    }
    std::vector<mpq_class> probs;
    for (const auto& w : weights) {
      mpq_class p(w.get_num(), wsum);
      p.canonicalize();
      probs.push_back(p);
    }
    auto mu = measures::digit_measure(base, measures::ProbVector(probs));

    int atom_count = static_cast<int>(1 + eng() % 4);
    std::vector<measures::Atom> atoms;
    mpz_class asum = 0;
    std::vector<unsigned long> aw;
    for (int a = 0; a < atom_count; ++a) {
      unsigned long w = 1 + eng() % 9;
      aw.push_back(w);
      asum += static_cast<long>(w);
    }
    for (int a = 0; a < atom_count; ++a) {
      unsigned long den = 2 + eng() % 998;
      unsigned long num = eng() % den;
      mpq_class weight(mpz_class(static_cast<long>(aw[static_cast<std::size_t>(a)])), asum);
      weight.canonicalize();
      atoms.push_back({exact_num::UnitRational(mpz_class(num), mpz_class(den)), weight});
    }
    auto nu = measures::atomic(atoms);

    auto conv = measures::convolve(mu, nu);
    for (long k = -32; k <= 32; ++k) {
      auto lhs = measures::fourier_1d(conv, k, 1e-12);
      auto rhs = measures::fourier_1d(mu, k, 2.5e-13) * measures::fourier_1d(nu, k, 2.5e-13);
      worst_conv = std::max(worst_conv, std::abs(lhs - rhs));
    }
    auto prod = measures::product(mu, nu);
    for (long k = -4; k <= 4; ++k)
      for (long j = -4; j <= 4; ++j) {
        auto lhs = measures::fourier_2d(prod, k, j, 1e-12);
        auto rhs = measures::fourier_1d(mu, k, 2.5e-13) * measures::fourier_1d(nu, j, 2.5e-13);
        worst_prod = std::max(worst_prod, std::abs(lhs - rhs));
      }
  }
  ok = worst_conv <= 2e-12 && worst_prod <= 2e-12;
  fp << "c2 " << worst_conv << " " << worst_prod << "\n";
  fingerprint += fp.str();
  r.seconds = seconds_since(start);
  r.pass = ok && r.seconds < r.budget_seconds;
  std::ostringstream d;
  d << "worst factorization gaps: convolve " << worst_conv << ", product " << worst_prod
    << " (allowed 2e-12)";
  r.detail = d.str();
  return r;
}

// Criterion 3: low modes of the two-atom orbit measure stay above 1e-6 in
// magnitude, and the first 64 modes of the binary (1/3,2/3) measure are
// distinguishable from zero at the evaluation tolerance.
inline CriterionResult nonvanishing(std::string& fingerprint) {
  auto start = clock::now();
  CriterionResult r{3, "alpha and beta coefficients stay off zero", false, 0, 1.0, ""};
  auto alpha = measures::make_alpha(2, 3);
  auto beta = measures::make_beta(2);
  double alpha_min = 1e9, beta_min = 1e9;
  for (long j = 1; j <= 4; ++j) {
    alpha_min = std::min(alpha_min, std::abs(measures::fourier_1d(alpha, j, 1e-12)));
    alpha_min = std::min(alpha_min, std::abs(measures::fourier_1d(alpha, -j, 1e-12)));
  }
  for (long i = 1; i <= 64; ++i) {
    beta_min = std::min(beta_min, std::abs(measures::fourier_1d(beta, i, 1e-12)));
    beta_min = std::min(beta_min, std::abs(measures::fourier_1d(beta, -i, 1e-12)));
  }
  fingerprint += "c3 " + std::to_string(alpha_min) + " " + std::to_string(beta_min) + "\n";
  r.seconds = seconds_since(start);
  r.pass = alpha_min > 1e-6 && beta_min > 1e-12 && r.seconds < r.budget_seconds;
  std::ostringstream d;
  d << "min |alpha^(j)| = " << alpha_min << " (> 1e-6), min |beta^(i)| = " << beta_min
    << " (> 1e-12)";
  r.detail = d.str();
  return r;
}

// Criterion 4: the dimension of the binary (1/3,2/3) measure matches both the
// entropy ratio and the pinned reference value.
inline CriterionResult dimension_formula() {
  auto start = clock::now();
  CriterionResult r{4, "entropy-over-log dimension value", false, 0, 1.0, ""};
  measures::ProbVector p({mpq_class(1, 3), mpq_class(2, 3)});
  double h = measures::entropy(p);
  double dim = measures::digit_dimension(2, p);
  bool consistent = std::abs(dim * std::log(2.0) - h) < 1e-12;
  bool pinned = std::abs(dim - 0.91830) <= 1e-4;
  r.seconds = seconds_since(start);
  r.pass = consistent && pinned && r.seconds < r.budget_seconds;
  std::ostringstream d;
  d << "dimension " << dim << " vs 0.91830 +- 1e-4; entropy ratio gap "
    << std::abs(dim * std::log(2.0) - h);
  r.detail = d.str();
  return r;
}

// Shared runner for the three convergence experiments (criteria 5, 6, 7).
inline CriterionResult convergence_criterion(int id, const std::string& name,
                                             const std::string& config_text,
                                             std::string& fingerprint) {
  auto start = clock::now();
  CriterionResult r{id, name, false, 0, 120.0, ""};
  auto cfg = cli::parse_config(config_text);
  auto payload = cli::run_experiment(cfg);
  fingerprint += "c" + std::to_string(id) + " " + payload.dump() + "\n";
  double max_mode = payload.at("report").at("median_max_mode_error").get<double>();
  auto medians = payload.at("report").at("median_distance");
  double first = medians.at(0).get<double>();
  double last = medians.at(medians.size() - 1).get<double>();
  r.seconds = seconds_since(start);
  r.pass = max_mode <= 0.05 && last < first && r.seconds < r.budget_seconds;
  std::ostringstream d;
  d << "median max-mode error " << max_mode << " (<= 0.05); median distance " << first << " -> "
    << last << (last < first ? " (decreasing)" : " (NOT decreasing)");
  r.detail = d.str();
  return r;
}

// Criterion 8: dimensions of self-convolution powers grow strictly, with the
// stated increment floor, and approach 1.
inline CriterionResult convolution_growth_criterion(std::string& fingerprint) {
  auto start = clock::now();
  CriterionResult r{8, "self-convolution dimension growth", false, 0, 10.0, ""};
  auto cfg = cli::parse_config(R"({"kind":"convdim","measure":{"type":"beta","base":2},)"
                               R"("q_max":4,"levels":[6,8],"seed":0})");
  auto payload = cli::run_experiment(cfg);
  fingerprint += "c8 " + payload.dump() + "\n";
  std::vector<double> dims8;
  for (const auto& lv : payload.at("levels"))
    if (lv.at("k").get<int>() == 8) dims8 = lv.at("dims").get<std::vector<double>>();
  bool increasing = dims8.size() == 4 && dims8[0] < dims8[1] && dims8[1] < dims8[2] &&
                    dims8[2] < dims8[3];
  bool increments = dims8.size() == 4 && (dims8[1] - dims8[0]) > 1e-3 &&
                    (dims8[2] - dims8[1]) > 1e-3;
  bool near_one = dims8.size() == 4 && dims8[3] > 0.99;
  r.seconds = seconds_since(start);
  r.pass = increasing && increments && near_one && r.seconds < r.budget_seconds;
  std::ostringstream d;
  d << "level-8 dims";
  for (double v : dims8) d << " " << v;
  d << "; increments " << (dims8.size() == 4 ? dims8[1] - dims8[0] : 0) << ", "
    << (dims8.size() == 4 ? dims8[2] - dims8[1] : 0) << " (> 1e-3); final "
    << (dims8.size() == 4 ? dims8[3] : 0) << " (> 0.99)";
  r.detail = d.str();
  return r;
}

// Criterion 9: windowed densities of the cell-alignment indices fall from the
// first window to the last for most seeds, and the refinement control (m a
// power of n) reports no hits at all.
inline CriterionResult density_trend(std::string& fingerprint) {
  auto start = clock::now();
  CriterionResult r{9, "cell-alignment density trend with refinement control", false, 0, 30.0, ""};
  auto cfg = cli::parse_config(R"({"kind":"density","measure":{"type":"beta","base":2},)"
                               R"("m":3,"n":2,"K":200,"ensemble":50,"seed":104})");
  auto payload = cli::run_experiment(cfg);
  fingerprint += "c9 " + payload.dump() + "\n";
  int below = payload.at("final_below_first").get<int>();

  auto control_cfg = cli::parse_config(R"({"kind":"density","measure":{"type":"beta","base":2},)"
                                       R"("m":4,"n":2,"K":200,"ensemble":50,"seed":104})");
  auto control = cli::run_experiment(control_cfg);
  fingerprint += "c9ctl " + control.dump() + "\n";
  bool control_clean = true;
  for (const auto& rep : control.at("reports"))
    if (!rep.at("hits").empty()) control_clean = false;

  r.seconds = seconds_since(start);
  r.pass = below >= 40 && control_clean && r.seconds < r.budget_seconds;
  std::ostringstream d;
  d << below << "/50 seeds with final window density below the first (need >= 40); "
    << "refinement control " << (control_clean ? "clean" : "HAS HITS");
  r.detail = d.str();
  return r;
}

// Criterion 10: flat-measure windows are exactly uniform at depths 1 and 2,
// and the bucketed-descriptor histogram gap between the two halves of a
// 1000-sample zoom series stays under 0.1 for at least 90% of centers.
inline CriterionResult scenery_criterion(std::string& fingerprint) {
  auto start = clock::now();
  CriterionResult r{10, "scenery uniformity and scale-stationarity gap", false, 0, 60.0, ""};

  bool uniform_ok = true;
  auto leb = measures::lebesgue();
  exact_num::UnitRational center(mpz_class(1), mpz_class(2));
  for (int depth = 1; depth <= 2; ++depth) {
    auto series = scenery::scenery_series(leb, center, scenery::ScaleStep::log_of(2), 3, depth);
    mpq_class want(1, 1L << depth);
    for (const auto& s : series.samples)
      for (const auto& q : s.descriptor.entries)
        if (q != want) uniform_ok = false;
    if (series.samples.size() != 3) uniform_ok = false;
  }

  auto cfg = cli::parse_config(R"({"kind":"scenery","measure":{"type":"beta","base":2},)"
                               R"("k_max":1060,"step":{"log_of":2},"r":2,"W":500,)"
                               R"("ensemble":20,"seed":105})");
  auto payload = cli::run_experiment(cfg);
  fingerprint += "c10 " + payload.dump() + "\n";
  int small_gap = 0, usable = 0;
  double gap_sum = 0.0, drift_sum = 0.0;
  for (const auto& c : payload.at("centers")) {
    if (c.at("gap").is_null()) continue;
    ++usable;
    double gap = c.at("gap").get<double>();
    gap_sum += gap;
    drift_sum += c.at("mean_drift").get<double>();
    if (gap < 0.1) ++small_gap;
  }
  r.seconds = seconds_since(start);
  bool gap_ok = usable == 20 && small_gap >= 18;
  r.pass = uniform_ok && gap_ok && r.seconds < r.budget_seconds;
  std::ostringstream d;
  d << "flat windows " << (uniform_ok ? "uniform exactly" : "NOT uniform") << "; " << small_gap
    << "/" << usable << " centers with histogram gap < 0.1 (need >= 18); mean gap "
    << (usable ? gap_sum / usable : 0) << ", mean descriptor drift "
    << (usable ? drift_sum / usable : 0);
  r.detail = d.str();
  return r;
}

}  // namespace detail

/// Evaluate criteria 1 through 10 once, collecting a byte fingerprint of the
/// numerical payloads for the determinism check.
inline PassOutput one_pass() {
  PassOutput out;
  out.results.push_back(detail::orbit_equivalence());
  out.results.push_back(detail::fourier_identities(out.fingerprint));
  out.results.push_back(detail::nonvanishing(out.fingerprint));
  out.results.push_back(detail::dimension_formula());
  out.results.push_back(detail::convergence_criterion(
      5, "product-target convergence (factor pair 3,2)",
      R"({"kind":"equidist","measure":{"type":"beta","base":2},"case":"part1","m":3,"n":2,)"
      R"("p":2,"schedule":[5000,20000],"ensemble":20,"seed":101,"F":8,"G":64,"tol":1e-12})",
      out.fingerprint));
  out.results.push_back(detail::convergence_criterion(
      6, "flat-target convergence (factor pair 5,3)",
      R"({"kind":"equidist","measure":{"type":"beta","base":2},"case":"part2","m":5,"n":3,)"
      R"("p":2,"schedule":[5000,20000],"ensemble":20,"seed":102,"F":8,"G":64,"tol":1e-12})",
      out.fingerprint));
  out.results.push_back(detail::convergence_criterion(
      7, "perturbed-start convergence (first coordinate shifted)",
      R"({"kind":"equidist","measure":{"type":"beta","base":2},"case":"part1","m":3,"n":2,)"
      R"("p":2,"f":{"scale":"1/2","offset":"1/4"},"schedule":[5000,20000],"ensemble":20,)"
      R"("seed":103,"F":8,"G":64,"tol":1e-12})",
      out.fingerprint));
  out.results.push_back(detail::convolution_growth_criterion(out.fingerprint));
  out.results.push_back(detail::density_trend(out.fingerprint));
  out.results.push_back(detail::scenery_criterion(out.fingerprint));
  return out;
}

/// Run the full acceptance suite, including the double-run determinism
/// criterion, printing one verdict line per criterion as results arrive.
/// Returns all eleven results in order.
inline std::vector<CriterionResult> full_suite(std::ostream& out) {
  auto start = detail::clock::now();
  PassOutput first = one_pass();
  for (const auto& r : first.results) {
    out << (r.pass ? "[PASS]" : "[FAIL]") << " criterion " << r.id << ": " << r.name << " - "
        << r.detail << " [" << r.seconds << " s, budget " << r.budget_seconds << " s]\n";
  }

  PassOutput second = one_pass();
  double total = detail::seconds_since(start);
  bool identical = first.fingerprint == second.fingerprint;
  bool in_budget = total < 600.0;
  CriterionResult c11{11, "byte-identical payloads across a double run", false, total, 600.0, ""};
  c11.pass = identical && in_budget;
  std::ostringstream d;
  d << (identical ? "payload bytes identical" : "PAYLOADS DIFFER") << "; both passes in " << total
    << " s (budget 600 s)";
  c11.detail = d.str();
  out << (c11.pass ? "[PASS]" : "[FAIL]") << " criterion 11: " << c11.name << " - " << c11.detail
      << "\n";

  std::vector<CriterionResult> all = std::move(first.results);
  all.push_back(std::move(c11));
  int passed = 0;
  for (const auto& r : all) passed += r.pass ? 1 : 0;
  out << passed << "/11 criteria passed\n";
  return all;
}

/// Suite entry point for the CLI: exit status 0 iff every criterion passes.
inline int run_all(std::ostream& out) {
  auto all = full_suite(out);
  for (const auto& r : all)
    if (!r.pass) return 1;
  return 0;
}

}

#endif
