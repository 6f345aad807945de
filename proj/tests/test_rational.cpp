#include <doctest.h>

#include <random>

#include "lipforge/rational.hpp"

using lipforge::Rational;

namespace {

// Random rationals that hit both the inline and the GMP representation.
Rational random_rational(std::mt19937_64& rng) {
  switch (rng() % 4) {
    case 0:
      return Rational((long long)(rng() % 2001) - 1000, (long long)(rng() % 1000) + 1);
    case 1:
      return Rational((long long)(rng() >> 2) * (rng() % 2 ? 1 : -1),
                      (long long)(rng() >> 3) + 1);
    case 2:
      return Rational::pow2(int(rng() % 140) - 70) * Rational((long long)(rng() % 7) + 1, 3);
    default: {
      mpz_class n(std::to_string(rng()) + std::to_string(rng())), d(std::to_string(rng() | 1));
      if (rng() % 2) n = -n;
      return Rational(mpq_class(n, d));
    }
  }
}

mpq_class canon(mpq_class q) {
  q.canonicalize();
  return q;
}

}  // namespace

TEST_CASE("parse and print") {
  CHECK(Rational::parse("3/6").str() == "1/2");
  CHECK(Rational::parse("-4/2").str() == "-2");
  CHECK(Rational::parse("+7").str() == "7");
  CHECK(Rational::parse("0/5").str() == "0");
  CHECK(Rational::parse("123456789012345678901234567890/3").str() ==
        "41152263004115226300411522630");
  CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("1/-2"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("/2"), std::invalid_argument);
}

TEST_CASE("lowest terms and sign normalisation") {
  Rational a(6, -4);
  CHECK(a.str() == "-3/2");
  CHECK(a.den_str() == "2");
  CHECK(Rational(0, -9) == Rational(0));
  CHECK(Rational(0, -9).den_str() == "1");
}

TEST_CASE("powers of two") {
  CHECK(Rational::pow2(0) == Rational(1));
  CHECK(Rational::pow2(-3) == Rational(1, 8));
  CHECK(Rational::pow2(10) == Rational(1024));
  CHECK(Rational::pow2(-100) * Rational::pow2(100) == Rational(1));
  CHECK(Rational::pow2(-64).den_str() == "18446744073709551616");
}

TEST_CASE("overflow promotes and cancellation demotes") {
  Rational big(std::numeric_limits<long long>::max());
  Rational sq = big * big;
  CHECK_FALSE(sq.is_small());
  Rational back = sq / big;
  CHECK(back == big);
  CHECK(back.is_small());
  Rational tiny(1, std::numeric_limits<long long>::max());
  CHECK((tiny * tiny * big * big) == Rational(1));
}

TEST_CASE("division by zero throws") {
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
}

TEST_CASE("arithmetic agrees with GMP on random operands") {
  std::mt19937_64 rng(20240611);
  for (int i = 0; i < 20000; ++i) {
    Rational a = random_rational(rng), b = random_rational(rng);
    mpq_class qa = a.to_mpq(), qb = b.to_mpq();
    REQUIRE((a + b).to_mpq() == canon(qa + qb));
    REQUIRE((a - b).to_mpq() == canon(qa - qb));
    REQUIRE((a * b).to_mpq() == canon(qa * qb));
    if (!b.is_zero()) REQUIRE((a / b).to_mpq() == canon(qa / qb));
    int c = cmp(qa, qb);
    REQUIRE((a < b) == (c < 0));
    REQUIRE((a == b) == (c == 0));
    // Canonical representation: equal values print identically.
    Rational a2(qa);
    REQUIRE(a2 == a);
    REQUIRE(a2.str() == a.str());
  }
}

TEST_CASE("min, max, midpoint, abs") {
  Rational a(1, 3), b(-1, 2);
  CHECK(lipforge::min(a, b) == b);
  CHECK(lipforge::max(a, b) == a);
  CHECK(lipforge::midpoint(a, b) == Rational(-1, 12));
  CHECK(b.abs() == Rational(1, 2));
  CHECK(Rational(7, 2).to_double() == doctest::Approx(3.5));
}
