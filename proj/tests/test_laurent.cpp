#include <doctest.h>

#include "kmd/error.hpp"
#include "kmd/laurent.hpp"
#include "testutil.hpp"

using namespace kmd;
using kmdtest::Rng;

TEST_SUITE_BEGIN("laurent");

TEST_CASE("qint small values") {
    CHECK(qint(1) == LaurentPoly(1));
    CHECK(qint(2) == LaurentPoly::v(1) + LaurentPoly::v(-1));
    CHECK(qint(0).is_zero());
    CHECK(qint(-3) == -qint(3));
}

TEST_CASE("qbinom edge and hand values") {
    CHECK(qbinom(5, 0) == LaurentPoly(1));
    CHECK(qbinom(2, 1) == qint(2));
    // expected value computed from the factorial-division oracle below
    LaurentPoly expect = LaurentPoly::v(4) + LaurentPoly::v(2) + LaurentPoly(2) +
                         LaurentPoly::v(-2) + LaurentPoly::v(-4);
    CHECK(qbinom(4, 2) == expect);
    CHECK(qbinom(4, 2).coeff_sum() == 6);
    CHECK_THROWS_AS(qbinom(2, 3), Error);
}

TEST_CASE("qbinom agrees with factorial division for n <= 12") {
    for (long n = 0; n <= 12; ++n) {
        for (long k = 0; k <= n; ++k) {
            LaurentPoly byDivision = qfactorial(n).divide_exact(qfactorial(k) * qfactorial(n - k));
            CHECK(qbinom(n, k) == byDivision);
        }
    }
}

TEST_CASE("qbinom bar-invariant, nonnegative, counts subsets") {
    // binomial oracle by Pascal's triangle over plain integers
    long long pascal[13][13] = {};
    for (int n = 0; n <= 12; ++n) {
        pascal[n][0] = 1;
        for (int k = 1; k <= n; ++k) pascal[n][k] = pascal[n - 1][k - 1] + (k <= n - 1 ? pascal[n - 1][k] : 0);
    }
    for (long n = 0; n <= 12; ++n)
        for (long k = 0; k <= n; ++k) {
            LaurentPoly b = qbinom(n, k);
            CHECK(b.bar() == b);
            for (const auto& [e, c] : b.terms()) CHECK(c > 0);
            CHECK(b.coeff_sum() == BigInt(pascal[n][k]));
        }
}

TEST_CASE("bar is an involution and a ring map") {
    Rng rng(7);
    for (int t = 0; t < 200; ++t) {
        LaurentPoly p = kmdtest::random_poly(rng), q = kmdtest::random_poly(rng);
        CHECK(p.bar().bar() == p);
        CHECK((p * q).bar() == p.bar() * q.bar());
        CHECK((p + q).bar() == p.bar() + q.bar());
    }
    CHECK((LaurentPoly::v(2) + LaurentPoly(3)).bar() == LaurentPoly::v(-2) + LaurentPoly(3));
    CHECK(LaurentPoly::v(-1).bar() == LaurentPoly::v(1));
    for (long n = 1; n <= 8; ++n) CHECK(qint(n).bar() == qint(n));
}

TEST_CASE("ring axioms on random sample") {
    Rng rng(11);
    for (int t = 0; t < 100; ++t) {
        LaurentPoly a = kmdtest::random_poly(rng), b = kmdtest::random_poly(rng),
                    c = kmdtest::random_poly(rng);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK(a + b == b + a);
    }
}

TEST_CASE("lattice membership") {
    LaurentPoly p = LaurentPoly(1) + LaurentPoly::v(-2);
    CHECK(p.in_lattice_A(false));
    CHECK_FALSE(p.in_lattice_A(true));
    CHECK(LaurentPoly::v(-1).in_lattice_A(true));
    CHECK(LaurentPoly().in_lattice_A(true));
    CHECK_FALSE(LaurentPoly::v(1).in_lattice_A(false));
}

TEST_CASE("exact division") {
    LaurentPoly n = LaurentPoly::v(2) - LaurentPoly::v(-2);
    LaurentPoly d = LaurentPoly::v(1) - LaurentPoly::v(-1);
    CHECK(n.divide_exact(d) == qint(2));
    CHECK_THROWS_AS((LaurentPoly::v(1) + LaurentPoly(1)).divide_exact(LaurentPoly(2)), Error);
    Rng rng(13);
    for (int t = 0; t < 100; ++t) {
        LaurentPoly a = kmdtest::random_poly(rng), b = kmdtest::random_poly(rng);
        if (b.is_zero()) continue;
        CHECK((a * b).divide_exact(b) == a);
    }
}

TEST_CASE("rendering and parsing") {
    LaurentPoly p = LaurentPoly::v(2) + LaurentPoly(3) - LaurentPoly::term(2, -1);
    CHECK(p.str() == "v^2 + 3 - 2v^-1");
    CHECK(LaurentPoly::parse(p.str()) == p);
    CHECK(LaurentPoly().str() == "0");
    Rng rng(17);
    for (int t = 0; t < 100; ++t) {
        LaurentPoly a = kmdtest::random_poly(rng);
        CHECK(LaurentPoly::parse(a.str()) == a);
    }
}

TEST_CASE("rational functions canonical and arithmetic") {
    RationalFn half(LaurentPoly(1), LaurentPoly(2));
    CHECK((half + half).is_one());
    RationalFn r(qint(2) * qint(3), qint(2));
    CHECK(r.is_polynomial());
    CHECK(r.as_poly() == qint(3));
    RationalFn s(LaurentPoly(1), LaurentPoly::v(1) - LaurentPoly::v(-1));
    CHECK((s * RationalFn(LaurentPoly::v(1) - LaurentPoly::v(-1))).is_one());
    Rng rng(19);
    for (int t = 0; t < 60; ++t) {
        LaurentPoly a = kmdtest::random_poly(rng), b = kmdtest::random_poly(rng),
                    c = kmdtest::random_poly(rng), d = kmdtest::random_poly(rng);
        if (b.is_zero() || d.is_zero()) continue;
        RationalFn x(a, b), y(c, d);
        // equality of canonical forms matches cross-multiplied equality
        CHECK(((x == y) == ((a * d) == (c * b))));
        if (!y.is_zero()) CHECK(x / y * y == x);
        CHECK(x.bar().bar() == x);
        CHECK((x * y).bar() == x.bar() * y.bar());
    }
}

TEST_SUITE_END();
