#include <random>

#include "doctest.h"
#include "fusion/quadfield.hpp"
#include "fusion/rational.hpp"

using namespace fusion;

TEST_CASE("rational parsing and formatting") {
    CHECK(to_string(parse_rational("3/2")) == "3/2");
    CHECK(to_string(parse_rational("-6/4")) == "-3/2");
    CHECK(to_string(parse_rational("7")) == "7");
    CHECK_THROWS(parse_rational("1/0"));
}

TEST_CASE("phi arithmetic identities") {
    QuadPhi phi = QuadPhi::phi();
    CHECK(phi * phi == phi + 1);
    CHECK(phi.inverse() == phi - 1);
    CHECK(QuadPhi::sqrt5() * QuadPhi::sqrt5() == QuadPhi(5));
    CHECK((phi / phi) == QuadPhi(1));
    CHECK_THROWS(QuadPhi(0).inverse());
}

TEST_CASE("exact ordering") {
    QuadPhi phi = QuadPhi::phi();
    CHECK(phi > QuadPhi(BigRat(8, 5)));       // 1.6 < phi
    CHECK(phi < QuadPhi(BigRat(13, 8)));      // phi < 1.625
    CHECK((QuadPhi(2) - phi).sign() > 0);
    CHECK((QuadPhi(1) - phi).sign() < 0);
    // mixed signs resolve against phi: 8 - 5phi < 0 iff phi > 8/5
    CHECK(QuadPhi(BigRat(8), BigRat(-5)).sign() < 0);
    CHECK(QuadPhi(BigRat(5), BigRat(-3)).sign() > 0);  // 3phi < 5
    CHECK(QuadPhi(BigRat(-8), BigRat(5)).sign() > 0);  // 5phi > 8
}

TEST_CASE("floor and frac") {
    QuadPhi phi = QuadPhi::phi();
    CHECK(phi.floor() == 1);
    CHECK((phi * phi).floor() == 2);
    CHECK((-phi).floor() == -2);
    CHECK(QuadPhi(BigRat(-7, 2)).floor() == -4);
    CHECK(QuadPhi(3).frac().is_zero());
    QuadPhi f = phi.frac();
    CHECK(f.sign() >= 0);
    CHECK(f < QuadPhi(1));
    CHECK(f == phi - 1);
}

TEST_CASE("floor agrees with float on random elements") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> d(-50, 50);
    for (int i = 0; i < 500; ++i) {
        QuadPhi v(BigRat(d(rng), 1 + std::abs(d(rng))), BigRat(d(rng), 1 + std::abs(d(rng))));
        BigInt fl = v.floor();
        CHECK((v - QuadPhi(BigRat(fl))).sign() >= 0);
        CHECK((v - QuadPhi(BigRat(fl + 1))).sign() < 0);
    }
}

TEST_CASE("field laws on random elements") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> d(-20, 20);
    auto rnd = [&] { return QuadPhi(BigRat(d(rng), 1 + std::abs(d(rng))), BigRat(d(rng))); };
    for (int i = 0; i < 200; ++i) {
        QuadPhi a = rnd(), b = rnd(), c = rnd();
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a - b) + b == a);
        if (!b.is_zero()) CHECK((a / b) * b == a);
    }
}

TEST_CASE("float conversion accuracy") {
    double p = QuadPhi::phi().to_double();
    CHECK(p == doctest::Approx(1.6180339887498949).epsilon(1e-15));
    CHECK(QuadPhi(BigRat(1, 3)).to_double() == doctest::Approx(1.0 / 3).epsilon(1e-15));
}
