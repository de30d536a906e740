#include <doctest.h>

#include "kmd/error.hpp"
#include "kmd/linalg.hpp"
#include "testutil.hpp"

using namespace kmd;
using kmdtest::Rng;

TEST_SUITE_BEGIN("linalg");

namespace {

ExactMatrix random_matrix(Rng& rng, size_t r, size_t c) {
    ExactMatrix m(r, c);
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < c; ++j) {
            if (rng.range(0, 2) == 0) continue;  // keep some zeros
            LaurentPoly n = kmdtest::random_poly(rng, 2, 2, 3);
            m.at(i, j) = RationalFn(n);
        }
    return m;
}

}  // namespace

TEST_CASE("identity system returns rhs") {
    ExactMatrix id = ExactMatrix::identity(3);
    std::vector<RationalFn> rhs{RationalFn(qint(2)), RationalFn(LaurentPoly::v(-1)), RationalFn(5)};
    auto sol = id.solve(rhs);
    REQUIRE(sol.consistent);
    CHECK(sol.particular == rhs);
    CHECK(sol.kernel.empty());
    CHECK(sol.rank == 3);
}

TEST_CASE("1x1 exact division solve") {
    ExactMatrix m(1, 1);
    m.at(0, 0) = RationalFn(LaurentPoly::v(1) - LaurentPoly::v(-1));
    auto sol = m.solve({RationalFn(LaurentPoly::v(2) - LaurentPoly::v(-2))});
    REQUIRE(sol.consistent);
    CHECK(sol.particular[0] == RationalFn(qint(2)));
}

TEST_CASE("proportional rows have rank 1") {
    ExactMatrix m(2, 1);
    m.at(0, 0) = RationalFn(qint(2));
    m.at(1, 0) = RationalFn(qint(2));
    CHECK(m.rank() == 1);
}

TEST_CASE("inconsistent system detected") {
    ExactMatrix m(2, 1);
    m.at(0, 0) = RationalFn(1);
    m.at(1, 0) = RationalFn(1);
    auto sol = m.solve({RationalFn(1), RationalFn(2)});
    CHECK_FALSE(sol.consistent);
}

TEST_CASE("residual is exactly zero on random systems") {
    Rng rng(23);
    for (int t = 0; t < 60; ++t) {
        size_t r = (size_t)rng.range(1, 4), c = (size_t)rng.range(1, 4);
        ExactMatrix m = random_matrix(rng, r, c);
        // build a consistent rhs from a random x
        std::vector<RationalFn> x(c);
        for (auto& v : x) v = RationalFn(kmdtest::random_poly(rng, 2, 2, 3));
        auto rhs = m.apply(x);
        auto sol = m.solve(rhs);
        REQUIRE(sol.consistent);
        auto back = m.apply(sol.particular);
        for (size_t i = 0; i < r; ++i) CHECK(back[i] == rhs[i]);
        // kernel vectors annihilate exactly
        for (const auto& k : sol.kernel) {
            auto z = m.apply(k);
            for (size_t i = 0; i < r; ++i) CHECK(z[i].is_zero());
        }
        CHECK(sol.kernel.size() == c - sol.rank);
    }
}

TEST_CASE("solve_matrix inverts") {
    Rng rng(29);
    for (int t = 0; t < 20; ++t) {
        ExactMatrix m = random_matrix(rng, 3, 3);
        if (m.rank() != 3) continue;
        ExactMatrix inv = m.solve_matrix(ExactMatrix::identity(3));
        CHECK(m * inv == ExactMatrix::identity(3));
    }
}

TEST_SUITE_END();
