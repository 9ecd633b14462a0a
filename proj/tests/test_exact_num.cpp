#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "eqlab/exact_num.hpp"

using namespace eqlab::exact_num;
using eqlab::error;
using eqlab::invalid_digit_error;
using eqlab::validation_error;

TEST_CASE("unit rationals validate their range", "[exact]") {
  CHECK_NOTHROW(UnitRational(0, 1));
  CHECK_NOTHROW(UnitRational(4, 5));
  CHECK_THROWS_AS(UnitRational(1, 0), error);
  CHECK_THROWS_AS(UnitRational(mpz_class(2), mpz_class(-3)), error);
  CHECK_THROWS_AS(UnitRational(5, 5), error);
  CHECK_THROWS_AS(UnitRational(mpz_class(-1), mpz_class(4)), error);
}

TEST_CASE("equality compares values, not representations", "[exact]") {
  UnitRational a(1, 2);
  UnitRational b(mpz_class(512), mpz_class(1024));
  CHECK(a == b);
  CHECK(UnitRational(1, 3) != a);
  CHECK(UnitRational(1, 3) < a);
}

TEST_CASE("points assemble from digit strings", "[exact]") {
  // 1*9 + 2*3 + 0 over 27
  auto x = make_point({1, 2, 0}, 3);
  CHECK(x.value() == mpq_class(5, 9));
  CHECK(x.digit_base == 3);
  CHECK(x.digit_count == 3);
  CHECK(x.den == 27);

  CHECK(make_point({0, 0, 0, 0}, 2).value() == 0);
  CHECK_THROWS_AS(make_point({3}, 3), invalid_digit_error);
  CHECK_THROWS_AS(make_point({-1}, 3), invalid_digit_error);
  CHECK_THROWS_AS(make_point({}, 2), validation_error);
  CHECK_THROWS_AS(make_point({0}, 1), validation_error);
}

TEST_CASE("one map step multiplies and wraps", "[exact]") {
  auto x = make_point({1, 2, 0}, 3);  // 5/9
  auto y = apply_T(x, 3);
  CHECK(y.value() == mpq_class(2, 3));
  CHECK(y.digit_base == 3);  // metadata survives the step
  CHECK(y.digit_count == 3);
  CHECK_THROWS_AS(apply_T(x, 1), validation_error);
}

TEST_CASE("closed-form orbit points match iterated stepping", "[exact]") {
  auto x = make_point({1, 2, 0}, 3);
  CHECK(orbit_point(x, 3, 2).value() == 0);

  std::mt19937_64 eng(2024);
  for (int rep = 0; rep < 200; ++rep) {
    unsigned long den = 2 + eng() % 99991;
    UnitRational p(mpz_class(eng() % den), mpz_class(den));
    int factor = static_cast<int>(2 + eng() % 7);
    int steps = static_cast<int>(eng() % 40);
    UnitRational walked = p;
    for (int i = 0; i < steps; ++i) walked = apply_T(walked, factor);
    REQUIRE(orbit_point(p, factor, steps) == walked);
  }
}

TEST_CASE("orbit of zero is fixed", "[exact]") {
  UnitRational zero(0, 1);
  CHECK(orbit_point(zero, 5, 1000000) == zero);
}

TEST_CASE("partition cells locate points and tile the interval", "[exact]") {
  UnitRational x(3, 10);
  auto cell = cell_of(x, 2, 2);
  CHECK(cell.index == 1);  // 3/10 lies in [1/4, 1/2)
  CHECK(cell.contains(x));
  CHECK(cell.lower() == mpq_class(1, 4));
  CHECK(cell.upper() == mpq_class(1, 2));

  // boundary points belong to the cell they open
  UnitRational q(1, 4);
  CHECK(cell_of(q, 2, 2).index == 1);
  CHECK(cell.contains(q));
  CHECK_FALSE(cell.contains(UnitRational(1, 2)));

  // every point lands in exactly one level-3 cell
  std::mt19937_64 eng(7);
  for (int rep = 0; rep < 100; ++rep) {
    unsigned long den = 2 + eng() % 5000;
    UnitRational p(mpz_class(eng() % den), mpz_class(den));
    int hits = 0;
    for (long idx = 0; idx < 27; ++idx) {
      PartitionCell c{3, 3, mpz_class(idx)};
      if (c.contains(p)) ++hits;
    }
    REQUIRE(hits == 1);
  }
}

TEST_CASE("interior-endpoint test agrees with a direct scan", "[exact]") {
  CHECK(in_A_k(UnitRational(2, 5), 3, 2, 1));
  CHECK_FALSE(in_A_k(UnitRational(1, 10), 3, 2, 1));
  CHECK_THROWS_AS(in_A_k(UnitRational(1, 2), 2, 3, 1), validation_error);
  CHECK_THROWS_AS(in_A_k(UnitRational(1, 2), 3, 2, 0), validation_error);

  // brute force: does the base-m cell of x strictly contain some s/n^k?
  auto brute = [](const UnitRational& x, int m, int n, int k) {
    mpz_class mk, nk;
    mpz_ui_pow_ui(mk.get_mpz_t(), m, k);
    mpz_ui_pow_ui(nk.get_mpz_t(), n, k);
    mpz_class z;
    mpz_fdiv_q(z.get_mpz_t(), mpz_class(x.num * mk).get_mpz_t(), x.den.get_mpz_t());
    for (mpz_class s = 1; s < nk; ++s)
      if (z * nk < s * mk && s * mk < (z + 1) * nk) return true;
    return false;
  };
  std::mt19937_64 eng(99);
  for (int rep = 0; rep < 300; ++rep) {
    unsigned long den = 2 + eng() % 9999;
    UnitRational p(mpz_class(eng() % den), mpz_class(den));
    int k = static_cast<int>(1 + eng() % 5);
    REQUIRE(in_A_k(p, 3, 2, k) == brute(p, 3, 2, k));
    REQUIRE(in_A_k(p, 5, 3, k) == brute(p, 5, 3, k));
  }
}

TEST_CASE("coincident-power pairs never hit interior endpoints", "[exact]") {
  // with m = 4, n = 2 every n^k-adic endpoint is also an m^k-adic cell
  // boundary, so no cell interior can contain one
  std::mt19937_64 eng(123);
  for (int rep = 0; rep < 200; ++rep) {
    unsigned long den = 2 + eng() % 99991;
    UnitRational p(mpz_class(eng() % den), mpz_class(den));
    int k = static_cast<int>(1 + eng() % 12);
    REQUIRE_FALSE(in_A_k(p, 4, 2, k));
  }
}

TEST_CASE("digit budget covers the orbit with guard room", "[exact]") {
  CHECK(required_digits(1000, 3, 2) == 1649);
  CHECK(required_digits(20000, 3, 2) == 31764);
  CHECK(required_digits(0, 3, 2) == 64);
  CHECK(required_digits(100, 2, 2) == 164);
}

TEST_CASE("huge-denominator fractions convert to doubles safely", "[exact]") {
  mpz_class num = 1, den = 1;
  mpz_ui_pow_ui(num.get_mpz_t(), 10, 400);
  mpz_ui_pow_ui(den.get_mpz_t(), 10, 400);
  den *= 3;
  CHECK(ratio_to_double(num, den) == Catch::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(ratio_to_double(mpz_class(0), den) == 0.0);
  CHECK(to_double(mpq_class(7, 8)) == 0.875);
}
