#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <numbers>
#include <random>

#include "eqlab/measures.hpp"

using namespace eqlab::measures;
using eqlab::exact_num::UnitRational;
using eqlab::unsupported_exact_error;
using eqlab::validation_error;

namespace {

ProbVector third_two_thirds() { return ProbVector({mpq_class(1, 3), mpq_class(2, 3)}); }

// random digit measure with small integer weights, for property sweeps
MeasureExpr random_digit(std::mt19937_64& eng) {
  int base = static_cast<int>(2 + eng() % 5);
  std::vector<long> w(static_cast<std::size_t>(base));
  long total = 0;
  for (auto& v : w) {
    v = static_cast<long>(eng() % 10);
    total += v;
  }
  if (total == 0) {
    w[0] = 1;
    total = 1;
  }
  std::vector<mpq_class> probs;
  for (long v : w) {
    mpq_class q(v, total);
    q.canonicalize();
    probs.push_back(std::move(q));
  }
  return digit_measure(base, ProbVector(probs));
}

}  // namespace

TEST_CASE("probability vectors must be exact distributions", "[measures]") {
  CHECK_NOTHROW(ProbVector({mpq_class(1)}));
  CHECK_NOTHROW(third_two_thirds());
  CHECK_THROWS_AS(ProbVector({}), validation_error);
  CHECK_THROWS_AS(ProbVector({mpq_class(1, 2)}), validation_error);
  CHECK_THROWS_AS(ProbVector({mpq_class(3, 2), mpq_class(-1, 2)}), validation_error);
}

TEST_CASE("entropy and dimension of the canonical weights", "[measures]") {
  double h = entropy(third_two_thirds());
  CHECK(h == Catch::Approx(0.6365141682948128).margin(1e-14));
  CHECK(digit_dimension(2, third_two_thirds()) ==
        Catch::Approx(0.9182958340544894).margin(1e-14));
  // uniform weights give full dimension
  CHECK(digit_dimension(3, ProbVector({mpq_class(1, 3), mpq_class(1, 3), mpq_class(1, 3)})) ==
        Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("flat measure has trivial coefficients", "[measures]") {
  auto leb = lebesgue();
  CHECK(fourier_1d(leb, 0, 1e-12) == std::complex<double>(1, 0));
  CHECK(fourier_1d(leb, 5, 1e-12) == std::complex<double>(0, 0));
  CHECK(fourier_1d(leb, -3, 1e-12) == std::complex<double>(0, 0));
}

TEST_CASE("atomic coefficients are closed-form exponential sums", "[measures]") {
  auto a = make_alpha(2, 2);  // atoms 1/15 and 4/15, weight 1/2 each
  auto c = fourier_1d(a, 1, 1e-12);
  CHECK(c.real() == Catch::Approx(0.4045084971874738).margin(1e-12));
  CHECK(c.imag() == Catch::Approx(0.7006292692220368).margin(1e-12));
  CHECK(fourier_1d(a, 0, 1e-12) == std::complex<double>(1, 0));
}

TEST_CASE("digit coefficients match the certified product", "[measures]") {
  auto beta = make_beta(2);
  auto f1 = fourier_1d(beta, 1, 1e-12);
  CHECK(f1.real() == Catch::Approx(0.12613182436813028).margin(5e-12));
  CHECK(f1.imag() == Catch::Approx(-0.18808895153979202).margin(5e-12));
  auto f3 = fourier_1d(beta, 3, 1e-12);
  CHECK(f3.real() == Catch::Approx(0.06902329608940555).margin(5e-12));
  CHECK(f3.imag() == Catch::Approx(-0.07056803280560545).margin(5e-12));
}

TEST_CASE("coefficient properties hold across random measures", "[measures]") {
  std::mt19937_64 eng(31);
  for (int rep = 0; rep < 20; ++rep) {
    auto mu = random_digit(eng);
    long k = static_cast<long>(1 + eng() % 40);
    // normalization, symmetry
    REQUIRE(std::abs(fourier_1d(mu, 0, 1e-12) - std::complex<double>(1, 0)) < 1e-12);
    auto plus = fourier_1d(mu, k, 1e-12);
    auto minus = fourier_1d(mu, -k, 1e-12);
    REQUIRE(std::abs(minus - std::conj(plus)) < 2e-12);
    REQUIRE(std::abs(plus) <= 1.0 + 1e-12);
  }
}

TEST_CASE("convolution coefficients factor into children", "[measures]") {
  auto conv = convolve(make_beta(2), make_alpha(2, 3));
  auto lhs = fourier_1d(conv, 5, 1e-12);
  auto rhs = fourier_1d(make_beta(2), 5, 5e-13) * fourier_1d(make_alpha(2, 3), 5, 5e-13);
  CHECK(std::abs(lhs - rhs) < 2e-12);
}

TEST_CASE("affine pushforward rescales the frequency", "[measures]") {
  auto shifted = affine_push(make_beta(2), mpq_class(1, 2), mpq_class(1, 4));
  auto got = fourier_1d(shifted, 2, 1e-12);
  auto expect = std::exp(std::complex<double>(0, std::numbers::pi)) *
                fourier_1d(make_beta(2), 1, 1e-12);
  CHECK(std::abs(got - expect) < 1e-11);
  // odd modes would need the child at a fractional frequency
  CHECK_THROWS_AS(fourier_1d(shifted, 1, 1e-12), unsupported_exact_error);

  // maps must keep the unit interval inside itself
  CHECK_THROWS_AS(affine_push(make_beta(2), mpq_class(2), mpq_class(0)), validation_error);
  CHECK_THROWS_AS(affine_push(make_beta(2), mpq_class(1, 2), mpq_class(3, 4)),
                  validation_error);
}

TEST_CASE("plane coefficients of product measures split", "[measures]") {
  auto prod = product(lebesgue(), make_beta(2));
  CHECK(std::abs(fourier_2d(prod, 0, 0, 1e-12) - std::complex<double>(1, 0)) < 1e-12);
  CHECK(std::abs(fourier_2d(prod, 0, 1, 1e-12) - fourier_1d(make_beta(2), 1, 1e-12)) < 1e-11);
  CHECK(std::abs(fourier_2d(prod, 1, 1, 1e-12)) < 1e-12);
  CHECK_THROWS_AS(fourier_1d(prod, 1, 1e-12), validation_error);
  CHECK_THROWS_AS(fourier_2d(make_beta(2), 1, 1, 1e-12), validation_error);
}

TEST_CASE("distribution function values are exact rationals", "[measures]") {
  auto beta = make_beta(2);
  CHECK(cdf(beta, UnitRational(3, 10)) == mpq_class(29, 231));
  CHECK(cdf(beta, UnitRational(3, 4)) == mpq_class(5, 9));
  CHECK(cdf_value(beta, mpq_class(0), true) == 0);
  CHECK(cdf_value(beta, mpq_class(1), true) == 1);

  // left limits at the endpoints of a middle cell
  mpq_class lo = cdf_value(beta, mpq_class(1, 3), false);
  mpq_class hi = cdf_value(beta, mpq_class(2, 3), false);
  CHECK(lo == mpq_class(1, 7));
  CHECK(hi == mpq_class(3, 7));
  CHECK(hi - lo == mpq_class(2, 7));

  // non-canonical input is accepted
  CHECK(cdf_value(beta, mpq_class(6, 9), false) == mpq_class(3, 7));
}

TEST_CASE("distribution function is monotone and atomless here", "[measures]") {
  auto beta = make_beta(2);
  std::mt19937_64 eng(55);
  mpq_class prev_x(0), prev_f(0);
  std::vector<mpq_class> xs;
  for (int i = 0; i < 60; ++i) {
    unsigned long den = 2 + eng() % 9999;
    xs.emplace_back(mpq_class(eng() % (den + 1), den));
  }
  std::sort(xs.begin(), xs.end());
  for (auto& q : xs) {
    q.canonicalize();
    mpq_class closed = cdf_value(beta, q, true);
    mpq_class open = cdf_value(beta, q, false);
    REQUIRE(closed == open);  // no atoms anywhere
    REQUIRE(closed >= prev_f);
    prev_f = closed;
  }
}

TEST_CASE("atomic distribution steps at its atoms", "[measures]") {
  auto a = atomic({{UnitRational(1, 4), mpq_class(1, 2)}, {UnitRational(3, 4), mpq_class(1, 2)}});
  CHECK(cdf_value(a, mpq_class(1, 4), true) == mpq_class(1, 2));
  CHECK(cdf_value(a, mpq_class(1, 4), false) == 0);
  CHECK(cdf_value(a, mpq_class(1, 2), true) == mpq_class(1, 2));
  CHECK(cdf_value(a, mpq_class(1), true) == 1);
}

TEST_CASE("cell masses agree between fast path and distribution path", "[measures]") {
  auto beta = make_beta(2);
  using eqlab::exact_num::PartitionCell;

  // matching base: product of digit weights
  CHECK(cell_mass(beta, PartitionCell{2, 2, mpz_class(3)}) == mpq_class(4, 9));
  CHECK(cell_mass(beta, PartitionCell{2, 1, mpz_class(0)}) == mpq_class(1, 3));

  // foreign base goes through the distribution function
  mpq_class m = cell_mass(beta, PartitionCell{3, 2, mpz_class(5)});
  mpq_class lo = cdf_value(beta, mpq_class(5, 9), false);
  mpq_class hi = cdf_value(beta, mpq_class(6, 9), false);
  mpq_class diff = hi - lo;
  CHECK(m == diff);
  CHECK(m == mpq_class(8, 103));
  CHECK(m > 0);

  // level masses sum to one exactly
  mpq_class total(0);
  for (long idx = 0; idx < 9; ++idx)
    total += cell_mass(beta, PartitionCell{3, 2, mpz_class(idx)});
  CHECK(total == 1);

  CHECK_THROWS_AS(cell_mass(convolve(beta, beta), PartitionCell{2, 1, mpz_class(0)}),
                  unsupported_exact_error);
}

TEST_CASE("sampling is deterministic and respects support", "[measures]") {
  auto beta = make_beta(2);
  auto s1 = sample(beta, 7, 40);
  auto s2 = sample(beta, 7, 40);
  CHECK(s1 == s2);
  CHECK(s1.digit_base == 2);
  CHECK(s1.digit_count == 40);
  CHECK(sample(beta, 8, 40) != s1);  // different seed, different point

  // a one-hot digit law can only produce the zero point
  auto degenerate = digit_measure(2, ProbVector({mpq_class(1), mpq_class(0)}));
  CHECK(sample(degenerate, 999, 30).value() == 0);

  auto a = make_alpha(2, 2);
  auto s3 = sample(a, 9, 40);
  CHECK((s3.value() == mpq_class(1, 15) || s3.value() == mpq_class(4, 15)));

  // Lebesgue draws dyadic digits
  auto u = sample(lebesgue(), 4, 53);
  CHECK(u.digit_base == 2);
  CHECK(u.digit_count == 53);
}

TEST_CASE("sampled digit frequencies track the law", "[measures]") {
  auto beta = make_beta(2);
  long ones = 0, total = 0;
  for (int s = 0; s < 50; ++s) {
    auto x = sample(beta, 1000 + s, 200);
    mpz_class num = x.num;
    for (int i = 0; i < 200; ++i) {
      ones += mpz_tstbit(num.get_mpz_t(), i);
      ++total;
    }
  }
  double freq = static_cast<double>(ones) / static_cast<double>(total);
  CHECK(freq == Catch::Approx(2.0 / 3.0).margin(0.02));
}

TEST_CASE("measure factories validate their inputs", "[measures]") {
  CHECK_THROWS_AS(make_beta(1), validation_error);
  CHECK_THROWS_AS(make_alpha(1, 1), validation_error);
  CHECK_THROWS_AS(make_alpha(2, 0), validation_error);
  CHECK_THROWS_AS(digit_measure(1, ProbVector({mpq_class(1)})), validation_error);
  // atom weights must sum to one
  CHECK_THROWS_AS(atomic({{UnitRational(1, 2), mpq_class(1, 3)}}), validation_error);
  CHECK_THROWS_AS(atomic({}), validation_error);
}
