#include <doctest.h>

#include <map>
#include <set>

#include "kmd/character.hpp"
#include "kmd/decomp.hpp"
#include "kmd/error.hpp"
#include "kmd/tensmod.hpp"
#include "testutil.hpp"

using namespace kmd;
using kmdtest::dv;
using kmdtest::w;

TEST_SUITE_BEGIN("canonical");

TEST_CASE("theta degree one locks the regression value") {
    auto s = kmdtest::sl2();
    ThetaExpansion th = ThetaExpansion::compute(s, 3);
    const auto& t1 = th.at(dv({1}));
    REQUIRE(t1.size() == 1);
    CHECK(t1[0].f_word == Word({0}));
    CHECK(t1[0].e_word == Word({0}));
    // Theta_1 = -(v - v^-1) F (x) E, solved from the degree-one system
    CHECK(t1[0].coeff == RationalFn(LaurentPoly::v(-1) - LaurentPoly::v(1)));
    // every degree solved uniquely up to the cut
    CHECK(th.terms().size() == 3);
}

TEST_CASE("sl2 tensor square: Psi, lattice, canonical basis, filtration") {
    auto s = kmdtest::sl2();
    TensorModule m = TensorModule::build(s, {w({1}), w({1})}, 4);
    m.check_psi_involution();
    m.check_psi_equivariance();
    m.check_theta_intertwining();
    m.check_theta_lattice();
    m.check_canonical_basis();

    // hw (x) hw is already Psi-fixed
    const auto& top = m.canonical_basis(dv({0}));
    REQUIRE(top.size() == 1);
    CHECK(top[0].coeffs.size() == 1);

    // the weight-zero slice carries exactly one corrected element with the
    // correction coefficient -v^-1
    const auto& mid = m.canonical_basis(dv({1}));
    REQUIRE(mid.size() == 2);
    size_t corrected = 0;
    for (const auto& el : mid) {
        if (el.coeffs.size() == 1) continue;
        ++corrected;
        REQUIRE(el.coeffs.size() == 2);
        for (const auto& [c, pc] : el.coeffs)
            if (c != el.leading) CHECK(pc == LaurentPoly::v(-1));
    }
    CHECK(corrected == 1);

    // four elements in total
    size_t total = 0;
    for (const auto& nu : m.drops()) total += m.canonical_basis(nu).size();
    CHECK(total == 4);

    m.classify_filtration();
    std::map<Weight, long long> classes;
    for (const auto& nu : m.drops())
        for (const auto& el : m.canonical_basis(nu)) {
            REQUIRE(el.filtration_class.has_value());
            classes[*el.filtration_class] += 1;
        }
    CHECK(classes.size() == 2);
    CHECK(classes[w({2})] == 3);
    CHECK(classes[w({0})] == 1);

    // Prop 27.1.8 shape: B cap M[>= mu] spans M[>= mu]
    auto ge0 = m.submodule_dims(dv({1}), false);  // mu = (0)
    long long dim_ge0 = 0;
    for (const auto& [nu, d] : ge0) dim_ge0 += (long long)d;
    CHECK(dim_ge0 == 4);
    auto gt0 = m.submodule_dims(dv({1}), true);
    long long dim_gt0 = 0;
    for (const auto& [nu, d] : gt0) dim_gt0 += (long long)d;
    CHECK(dim_gt0 == 3);
}

TEST_CASE("canonical basis members span the filtration steps slice by slice") {
    auto s = kmdtest::sl2();
    TensorModule m = TensorModule::build(s, {w({1}), w({1})}, 4);
    m.classify_filtration();
    auto spans = m.submodule_spans(dv({1}), false);
    for (const auto& [nu, span] : spans) {
        // collect canonical elements of class >= (0), i.e. class drop <= (1)
        std::vector<std::vector<RationalFn>> members;
        for (const auto& el : m.canonical_basis(nu)) {
            auto cls = m.datum().exact_drop(m.lambdas(), *el.filtration_class);
            REQUIRE(cls.has_value());
            if (!cls->leq_componentwise(dv({1}))) continue;
            std::vector<RationalFn> coords(m.dim(nu));
            for (const auto& [c, pc] : el.coeffs) coords[c] = RationalFn(pc);
            members.push_back(std::move(coords));
        }
        REQUIRE(members.size() == span.cols());
        ExactMatrix mm(m.dim(nu), members.size());
        for (size_t c = 0; c < members.size(); ++c)
            for (size_t r = 0; r < m.dim(nu); ++r) mm.at(r, c) = members[c][r];
        CHECK(mm.rank() == span.cols());
    }
}

TEST_CASE("triple product: both bracketings produce the same canonical basis") {
    auto s = kmdtest::sl2();
    TensorModule left = TensorModule::build(s, {w({1}), w({1}), w({1})}, 6, false);
    TensorModule right = TensorModule::build(s, {w({1}), w({1}), w({1})}, 6, true);
    left.check_psi_involution();
    left.check_canonical_basis();
    size_t total = 0;
    for (const auto& nu : left.drops()) {
        REQUIRE(left.dim(nu) == right.dim(nu));
        CHECK(left.psi(nu) == right.psi(nu));
        const auto& bl = left.canonical_basis(nu);
        const auto& br = right.canonical_basis(nu);
        REQUIRE(bl.size() == br.size());
        // same set of coefficient vectors
        std::set<std::string> sl, sr;
        for (const auto& el : bl) {
            std::string k;
            for (const auto& [c, pc] : el.coeffs) k += std::to_string(c) + ":" + pc.str() + ";";
            sl.insert(k);
        }
        for (const auto& el : br) {
            std::string k;
            for (const auto& [c, pc] : el.coeffs) k += std::to_string(c) + ":" + pc.str() + ";";
            sr.insert(k);
        }
        CHECK(sl == sr);
        total += bl.size();
    }
    CHECK(total == 8);
}

TEST_CASE("A2 tensor square of fundamentals") {
    auto a = kmdtest::a2();
    TensorModule m = TensorModule::build(a, {w({1, 0}), w({0, 1})}, 8);
    m.check_psi_involution();
    m.check_psi_equivariance();
    m.check_theta_intertwining();
    m.check_theta_lattice();
    m.check_canonical_basis();
    m.classify_filtration();
    std::map<Weight, long long> classes;
    size_t total = 0;
    for (const auto& nu : m.drops())
        for (const auto& el : m.canonical_basis(nu)) {
            classes[*el.filtration_class] += 1;
            ++total;
        }
    CHECK(total == 9);
    CHECK(classes[w({1, 1})] == 8);
    CHECK(classes[w({0, 0})] == 1);
}

TEST_CASE("filtration counts agree with the decomposition engines") {
    auto a = kmdtest::a2();
    TensorModule m = TensorModule::build(a, {w({1, 1}), w({1, 0})}, 10);
    m.check_canonical_basis();
    m.classify_filtration();
    // class counts grouped by mu match m_mu * dim L(mu)
    MultiplicityTable t = decompose(a, {w({1, 1}), w({1, 0})}, 10, Engine::All);
    std::map<Weight, long long> classes;
    for (const auto& nu : m.drops())
        for (const auto& el : m.canonical_basis(nu)) classes[*el.filtration_class] += 1;
    std::map<Weight, long long> expected;
    for (const auto& r : t.rows)
        expected[r.mu] += r.multiplicity * weyl_dimension(a, r.mu).convert_to<long long>();
    CHECK(classes == expected);
    // hw vector count per drop equals the decomposition multiplicity
    for (const auto& r : t.rows)
        CHECK((long long)m.highest_vectors(r.drop).size() == r.multiplicity);
}

TEST_CASE("A2 adjoint square: 64 canonical elements split by class") {
    auto a = kmdtest::a2();
    TensorModule m = TensorModule::build(a, {w({1, 1}), w({1, 1})}, 8);
    m.check_psi_involution();
    m.check_canonical_basis();
    m.classify_filtration();
    std::map<Weight, long long> classes;
    size_t total = 0;
    for (const auto& nu : m.drops())
        for (const auto& el : m.canonical_basis(nu)) {
            classes[*el.filtration_class] += 1;
            ++total;
        }
    CHECK(total == 64);
    CHECK(classes[w({2, 2})] == 27);
    CHECK(classes[w({3, 0})] == 10);
    CHECK(classes[w({0, 3})] == 10);
    CHECK(classes[w({1, 1})] == 16);  // multiplicity two of the adjoint
    CHECK(classes[w({0, 0})] == 1);
}

TEST_CASE("theta depth guard and error paths") {
    auto s = kmdtest::sl2();
    CHECK_THROWS_AS(TensorModule::build(s, {w({3}), w({3})}, 4), Error);  // needs depth 6
}

TEST_SUITE_END();
