#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "eqlab/measures.hpp"
#include "eqlab/scenery.hpp"

using namespace eqlab;
using namespace eqlab::scenery;
using exact_num::UnitRational;

TEST_CASE("window descriptors around the midpoint are exact", "[scenery]") {
  auto beta = measures::make_beta(2);
  UnitRational half(1, 2);

  // radius 1/2: the window is all of [0,1], split at the midpoint
  auto s1 = detail::window_at_radius(beta, half, std::log(2.0), 1, mpq_class(1, 2), 1);
  REQUIRE(s1.descriptor.size() == 2);
  CHECK(s1.descriptor[0] == mpq_class(1, 3));
  CHECK(s1.descriptor[1] == mpq_class(2, 3));

  // radius 1/4: the window [1/4,3/4] is symmetric under the digit law
  auto s2 = detail::window_at_radius(beta, half, 2 * std::log(2.0), 2, mpq_class(1, 4), 1);
  CHECK(s2.descriptor[0] == mpq_class(1, 2));
  CHECK(s2.descriptor[1] == mpq_class(1, 2));

  // depth 2 splits into quarters and still sums to one exactly
  auto s3 = detail::window_at_radius(beta, half, std::log(2.0), 1, mpq_class(1, 2), 2);
  REQUIRE(s3.descriptor.size() == 4);
  mpq_class total(0);
  for (std::size_t i = 0; i < s3.descriptor.size(); ++i) total += s3.descriptor[i];
  CHECK(total == 1);
}

TEST_CASE("flat windows are always uniform", "[scenery]") {
  auto leb = measures::lebesgue();
  for (int r = 1; r <= 3; ++r) {
    auto series = scenery_series(leb, UnitRational(1, 2), ScaleStep::log_of(2), 6, r);
    REQUIRE(series.skipped.empty());
    for (const auto& s : series.samples)
      for (std::size_t i = 0; i < s.descriptor.size(); ++i)
        REQUIRE(s.descriptor[i] == mpq_class(1, 1L << r));
  }
}

TEST_CASE("exact log steps walk the radius through exact powers", "[scenery]") {
  auto beta = measures::make_beta(2);
  auto series = scenery_series(beta, UnitRational(1, 2), ScaleStep::log_of(3), 5, 1);
  REQUIRE(series.samples.size() == 5);
  mpq_class expect(1, 3);
  for (const auto& s : series.samples) {
    CHECK(s.radius == expect);
    expect /= 3;
  }
}

TEST_CASE("real steps produce certified rational radii", "[scenery]") {
  mpq_class r = detail::certified_radius(std::log(2.0));
  double err = std::abs(exact_num::to_double(r) - 0.5);
  CHECK(err < 1e-10);
  // denominators come straight from the binary float, so they are dyadic
  mpz_class den = r.get_den();
  while (den % 2 == 0) den /= 2;
  CHECK(den == 1);

  CHECK(detail::certified_radius(0.0) == 1);
  CHECK_THROWS_AS(detail::certified_radius(-1.0), validation_error);
}

TEST_CASE("windows that leave the interval are skipped, not clipped", "[scenery]") {
  auto beta = measures::make_beta(2);
  // center 1/100: radii 1/2 and 1/4 spill below zero, 1/8 onward fit... except
  // 1/8 also spills (1/100 < 1/8), so the first kept index is k with 2^-k <= 1/100
  auto series = scenery_series(beta, UnitRational(1, 100), ScaleStep::log_of(2), 9, 1);
  REQUIRE(series.skipped == std::vector<long>{1, 2, 3, 4, 5, 6});
  REQUIRE(series.samples.size() == 3);
  CHECK(series.samples.front().k == 7);

  CHECK_THROWS_AS(
      detail::window_at_radius(beta, UnitRational(1, 100), 0.7, 1, mpq_class(1, 2), 1),
      out_of_window_error);
}

TEST_CASE("zero-mass windows are reported as degenerate", "[scenery]") {
  auto spike = measures::atomic({{UnitRational(1, 63), mpq_class(1)}});
  CHECK_THROWS_AS(
      detail::window_at_radius(spike, UnitRational(1, 2), 2.0, 1, mpq_class(1, 8), 1),
      degenerate_window_error);
}

TEST_CASE("stationarity statistics are zero for self-similar flat series", "[scenery]") {
  auto leb = measures::lebesgue();
  auto series = scenery_series(leb, UnitRational(1, 2), ScaleStep::log_of(2), 8, 2);
  CHECK(stationarity_gap(series, 4) == 0.0);
  CHECK(mean_descriptor_drift(series, 4) == 0.0);
}

TEST_CASE("stationarity gap detects a drifting series", "[scenery]") {
  // build a fake series by hand: first half uniform, second half skewed
  ScenerySeries series;
  for (long k = 1; k <= 8; ++k) {
    auto descriptor = k <= 4 ? measures::ProbVector({mpq_class(1, 2), mpq_class(1, 2)})
                             : measures::ProbVector({mpq_class(9, 10), mpq_class(1, 10)});
    series.samples.push_back(ScenerySample{UnitRational(1, 2), static_cast<double>(k), k,
                                           mpq_class(1, 1 << k), std::move(descriptor)});
  }
  CHECK(stationarity_gap(series, 4) > 0.5);
  CHECK(mean_descriptor_drift(series, 4) == Catch::Approx(0.4).margin(1e-12));
}

TEST_CASE("series bookkeeping validates", "[scenery]") {
  auto beta = measures::make_beta(2);
  CHECK(scenery_series(beta, UnitRational(1, 2), ScaleStep::log_of(2), 0, 1).samples.empty());
  CHECK_THROWS_AS(scenery_series(beta, UnitRational(1, 2), ScaleStep::log_of(2), -1, 1),
                  validation_error);
  CHECK_THROWS_AS(ScaleStep::log_of(1), validation_error);
  CHECK_THROWS_AS(ScaleStep::real(0.0), validation_error);
  CHECK_THROWS_AS(
      detail::window_at_radius(beta, UnitRational(1, 2), 1.0, 1, mpq_class(1, 4), 0),
      validation_error);
}
