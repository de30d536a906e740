#include <doctest.h>

#include "kmd/character.hpp"
#include "kmd/error.hpp"
#include "testutil.hpp"

using namespace kmd;
using kmdtest::dv;
using kmdtest::w;

TEST_SUITE_BEGIN("character");

TEST_CASE("rank-1 strings") {
    auto s = kmdtest::sl2();
    CharacterVector ch = freudenthal_character(s, w({3}));
    REQUIRE(ch.complete);
    CHECK(ch.mult.size() == 4);  // weights 3,1,-1,-3
    for (long long k = 0; k <= 3; ++k) CHECK(ch.at(dv({k})) == 1);
    CHECK(ch.dimension() == 4);
    CHECK(weyl_dimension(s, w({3})) == 4);
}

TEST_CASE("adjoint of A2: the Cartan slice has multiplicity 2") {
    auto a = kmdtest::a2();
    CharacterVector ch = freudenthal_character(a, w({1, 1}));
    CHECK(ch.at(dv({1, 1})) == 2);  // weight (0,0)
    CHECK(ch.at(dv({0, 0})) == 1);  // highest weight
    CHECK(ch.at(dv({1, 0})) == 1);
    CHECK(ch.dimension() == 8);
}

TEST_CASE("Weyl dimension oracle on A2") {
    auto a = kmdtest::a2();
    CHECK(weyl_dimension(a, w({0, 0})) == 1);
    CHECK(weyl_dimension(a, w({1, 0})) == 3);
    CHECK(weyl_dimension(a, w({1, 1})) == 8);
    CHECK(weyl_dimension(a, w({2, 1})) == 15);
    CHECK(weyl_dimension(a, w({3, 0})) == 10);
    CHECK(weyl_dimension(a, w({2, 2})) == 27);
}

TEST_CASE("character dimension equals the Weyl dimension") {
    auto a = kmdtest::a2();
    for (auto lam : {w({1, 0}), w({0, 1}), w({1, 1}), w({2, 0}), w({2, 1}), w({2, 2})}) {
        CharacterVector ch = freudenthal_character(a, lam);
        CHECK(BigInt(ch.dimension()) == weyl_dimension(a, lam));
    }
    auto s = kmdtest::sl2();
    for (long long m = 0; m <= 8; ++m) {
        CharacterVector ch = freudenthal_character(s, w({m}));
        CHECK(ch.dimension() == m + 1);
    }
}

TEST_CASE("disconnected datum factorizes") {
    auto d = kmdtest::a1a1();
    CharacterVector ch = freudenthal_character(d, w({1, 2}));
    CHECK(ch.dimension() == 2 * 3);
    CHECK(ch.at(dv({0, 1})) == 1);
}

TEST_CASE("tensor character is the convolution") {
    auto a = kmdtest::a2();
    CharacterVector t = tensor_character(a, {w({1, 0}), w({0, 1})});
    CHECK(t.dimension() == 9);
    CHECK(t.at(dv({1, 1})) == 3);  // weight (0,0): 2 from the 8 plus 1 from the 1
    CHECK(t.complete);
}

TEST_CASE("greedy decomposition recovers hand-checked tables") {
    auto a = kmdtest::a2();
    CharacterVector t = tensor_character(a, {w({1, 0}), w({0, 1})});
    auto dec = greedy_decompose(a, {w({1, 0}), w({0, 1})}, t);
    REQUIRE(dec.size() == 2);
    CHECK(dec.at(dv({0, 0})) == 1);  // L(1,1)
    CHECK(dec.at(dv({1, 1})) == 1);  // L(0,0)
}

TEST_CASE("character engine needs finite type") {
    auto k = kmdtest::kronecker();
    CHECK_THROWS_AS(freudenthal_character(k, w({1, 0})), Error);
}

TEST_SUITE_END();
