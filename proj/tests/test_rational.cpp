#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "pebtep/error.hpp"
#include "pebtep/rational.hpp"

using pebtep::Rational;

TEST_CASE("normalised form") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(3, -6) == Rational(-1, 2));
    CHECK(Rational(-3, -6).den() == 2);
    CHECK(Rational(0, 5) == Rational(0));
    CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("parse and print") {
    CHECK(Rational::parse("5/2") == Rational(5, 2));
    CHECK(Rational::parse("3") == Rational(3));
    CHECK(Rational::parse("4/2").str() == "2");
    CHECK(Rational(7, 3).str() == "7/3");
    CHECK_THROWS(Rational::parse("x"));
    CHECK_THROWS(Rational::parse("1/0"));
}

TEST_CASE("field laws on random values") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> num(-20, 20), den(1, 12);
    for (int i = 0; i < 2000; ++i) {
        Rational a(num(rng), den(rng)), b(num(rng), den(rng)), c(num(rng), den(rng));
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a - a == Rational(0));
        if (!b.is_zero()) CHECK((a / b) * b == a);
        CHECK(((a < b) || (b < a) || (a == b)));
    }
}
