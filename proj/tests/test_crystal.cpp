#include <doctest.h>

#include <map>
#include <set>

#include "kmd/character.hpp"
#include "kmd/crystal.hpp"
#include "kmd/error.hpp"
#include "testutil.hpp"

using namespace kmd;
using kmdtest::dv;
using kmdtest::w;

TEST_SUITE_BEGIN("crystal");

namespace {

// axiom suite run over every node of a generated graph
void check_axioms(const CrystalModel& model, const CrystalGraph& g) {
    const CartanDatum& datum = model.datum();
    for (const auto& node : g.nodes()) {
        for (size_t i = 0; i < datum.rank(); ++i) {
            long long eps = model.eps(node.elt, i), phi = model.phi(node.elt, i);
            CHECK(eps >= 0);
            CHECK(phi >= 0);
            CHECK(phi - eps == node.wt[i]);
            // eps counts the exact e-cascade length (bounded probe)
            CrystalElt cur = node.elt;
            long long k = 0;
            while (k <= 6) {
                auto up = model.e(cur, i);
                if (!up) break;
                cur = *up;
                ++k;
            }
            if (eps <= 6) CHECK(k == eps);
            // f then e returns to the start
            auto down = model.f(node.elt, i);
            if (down) {
                auto back = model.e(*down, i);
                REQUIRE(back.has_value());
                CHECK(model.key(*back) == model.key(node.elt));
            }
            auto up = model.e(node.elt, i);
            if (up) {
                auto redo = model.f(*up, i);
                REQUIRE(redo.has_value());
                CHECK(model.key(*redo) == model.key(node.elt));
            }
        }
    }
    // stored edges satisfy wt(f b) = wt(b) - alpha_i
    for (const auto& e : g.edges()) {
        Weight alpha = datum.alpha(e.i);
        for (size_t j = 0; j < datum.rank(); ++j)
            CHECK(g.nodes()[e.dst].wt[j] == g.nodes()[e.src].wt[j] - alpha[j]);
    }
}

}  // namespace

TEST_CASE("signature rule on the rank-1 square") {
    auto s = kmdtest::sl2();
    CrystalModel m = CrystalModel::tensor(s, {w({1}), w({1})});
    CrystalElt top = m.highest();
    CHECK(m.eps(top, 0) == 0);
    CHECK(m.wt(top) == w({2}));

    auto b01 = m.f(top, 0);  // lowers the tensor product once
    REQUIRE(b01.has_value());
    CHECK(m.wt(*b01) == w({0}));
    CHECK(m.eps(*b01, 0) == 1);

    // the other weight-0 element is highest weight: eps = 0
    CrystalGraph g = CrystalGraph::generate(m, 6);
    REQUIRE(g.nodes().size() == 4);
    long long hw_zero = 0, eps_one = 0;
    for (const auto& node : g.nodes())
        if (node.drop == dv({1})) {
            if (node.eps[0] == 0) ++hw_zero;
            if (node.eps[0] == 1) ++eps_one;
            CHECK(node.eps[0] <= 1);  // never 2 at weight zero in B(1)x B(1)
        }
    CHECK(hw_zero == 1);
    CHECK(eps_one == 1);
}

TEST_CASE("generated graphs satisfy the axiom suite") {
    auto s = kmdtest::sl2();
    auto a = kmdtest::a2();
    auto k = kmdtest::kronecker();

    struct Case {
        CartanDatum* datum;
        std::vector<Weight> lambdas;
        long long depth;
    };
    std::vector<Case> cases{
        {&s, {w({1})}, 4},
        {&s, {w({3})}, 6},
        {&s, {w({1}), w({1})}, 6},
        {&a, {w({1, 0})}, 6},
        {&a, {w({1, 1})}, 8},
        {&a, {w({1, 0}), w({0, 1})}, 8},
        {&k, {w({1, 0})}, 4},
        {&k, {w({1, 0}), w({1, 0})}, 4},
    };
    for (auto& c : cases) {
        CrystalModel m = CrystalModel::tensor(*c.datum, c.lambdas);
        CrystalGraph g = CrystalGraph::generate(m, c.depth);
        check_axioms(m, g);
    }
}

TEST_CASE("generation counts and flags") {
    auto a = kmdtest::a2();
    CrystalGraph g = CrystalGraph::generate(CrystalModel::irreducible(a, w({1, 0})), 4);
    REQUIRE(g.nodes().size() == 3);
    CHECK(g.globally_complete());
    // chain: f1 then f2
    REQUIRE(g.edges().size() == 2);
    CHECK(g.edges()[0].i == 0);
    CHECK(g.edges()[1].i == 1);

    CrystalGraph g0 = CrystalGraph::generate(CrystalModel::irreducible(a, w({2, 2})), 0);
    CHECK(g0.nodes().size() == 1);
    CHECK_FALSE(g0.globally_complete());
}

TEST_CASE("highest weight elements by slice") {
    auto s = kmdtest::sl2();
    CrystalModel m = CrystalModel::tensor(s, {w({1}), w({1})});
    CrystalGraph g = CrystalGraph::generate(m, 6);
    CHECK(g.highest_weight_at(dv({0})).size() == 1);
    CHECK(g.highest_weight_at(dv({1})).size() == 1);
    CHECK(g.highest_weight_at(dv({2})).empty());

    // incomplete slice must fail loudly
    auto k = kmdtest::kronecker();
    CrystalGraph gk = CrystalGraph::generate(CrystalModel::irreducible(k, w({1, 0})), 2);
    CHECK_THROWS_AS(gk.highest_weight_at(dv({2, 1})), Error);
}

TEST_CASE("levi restriction forgets edges and relaxes hw detection") {
    auto a = kmdtest::a2();
    CrystalGraph g = CrystalGraph::generate(CrystalModel::irreducible(a, w({1, 0})), 6);
    CrystalGraph r = g.levi_restrict("L1");
    // eps_1-highest elements sit at weights (1,0) and (0,-1)
    auto table = r.highest_weight_table();
    std::set<Weight> hw_wts;
    for (const auto& [drop, idxs] : table)
        for (size_t idx : idxs) hw_wts.insert(r.nodes()[idx].wt);
    CHECK(hw_wts == std::set<Weight>{w({1, 0}), w({0, -1})});

    // J = I: identity on hw structure
    CrystalGraph full = g.levi_restrict("full");
    CHECK(full.highest_weight_table() == g.highest_weight_table());
    CHECK(full.edges().size() == g.edges().size());

    // J = {}: every node is highest weight
    CrystalGraph none = g.levi_restrict("empty");
    size_t hw_count = 0;
    for (const auto& [drop, idxs] : none.highest_weight_table()) hw_count += idxs.size();
    CHECK(hw_count == g.nodes().size());
}

TEST_CASE("tensor associativity: brackets produce identical structures") {
    auto s = kmdtest::sl2();
    auto a = kmdtest::a2();
    struct Case {
        CartanDatum* datum;
        std::vector<Weight> lambdas;
    };
    for (auto& c : std::vector<Case>{{&s, {w({1}), w({1}), w({1})}},
                                     {&a, {w({1, 0}), w({0, 1}), w({1, 0})}}}) {
        CrystalModel left = CrystalModel::tensor(*c.datum, c.lambdas,
                                                 Bracket::left_nested(c.lambdas.size()));
        CrystalModel right = CrystalModel::tensor(*c.datum, c.lambdas,
                                                  Bracket::right_nested(c.lambdas.size()));
        CrystalGraph gl = CrystalGraph::generate(left, 8);
        CrystalGraph gr = CrystalGraph::generate(right, 8);
        REQUIRE(gl.nodes().size() == gr.nodes().size());
        // node sets agree element-by-element (same payload keys in order)
        for (size_t i = 0; i < gl.nodes().size(); ++i) {
            CHECK(left.key(gl.nodes()[i].elt) == right.key(gr.nodes()[i].elt));
            CHECK(gl.nodes()[i].eps == gr.nodes()[i].eps);
            CHECK(gl.nodes()[i].phi == gr.nodes()[i].phi);
        }
        // edges agree as well: the tensor structure is associative on the nose
        REQUIRE(gl.edges().size() == gr.edges().size());
        for (size_t i = 0; i < gl.edges().size(); ++i) {
            CHECK(gl.edges()[i].src == gr.edges()[i].src);
            CHECK(gl.edges()[i].i == gr.edges()[i].i);
            CHECK(gl.edges()[i].dst == gr.edges()[i].dst);
        }
        // hw counts per weight match (multiplicity statement)
        auto tl = gl.highest_weight_table();
        auto tr = gr.highest_weight_table();
        REQUIRE(tl.size() == tr.size());
        for (const auto& [drop, idxs] : tl) {
            REQUIRE(tr.count(drop));
            CHECK(tr.at(drop).size() == idxs.size());
        }
    }
}

TEST_CASE("factor-order convention changes labels but not counts") {
    auto a = kmdtest::a2();
    CrystalGraph g1 = CrystalGraph::generate(CrystalModel::tensor(a, {w({1, 0}), w({1, 1})}), 8);
    CrystalGraph g2 = CrystalGraph::generate(CrystalModel::tensor(a, {w({1, 1}), w({1, 0})}), 8);
    auto t1 = g1.highest_weight_table();
    auto t2 = g2.highest_weight_table();
    REQUIRE(t1.size() == t2.size());
    for (const auto& [drop, idxs] : t1) CHECK(t2.at(drop).size() == idxs.size());
}

TEST_CASE("DOT export carries nodes and labeled edges") {
    auto a = kmdtest::a2();
    CrystalGraph g = CrystalGraph::generate(CrystalModel::irreducible(a, w({1, 0})), 4);
    std::string dot = g.to_dot();
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("label=\"1,0\"") != std::string::npos);
    CHECK(dot.find("label=\"1\"") != std::string::npos);  // edge label by vertex name
}

TEST_CASE("graph serialization round trip is byte-exact") {
    auto a = kmdtest::a2();
    CrystalGraph g = CrystalGraph::generate(CrystalModel::tensor(a, {w({1, 0}), w({0, 1})}), 6);
    std::string payload = g.serialize();
    CrystalGraph back = CrystalGraph::deserialize(a, payload);
    CHECK(back.serialize() == payload);
    CHECK(back.nodes().size() == g.nodes().size());
    CHECK(back.highest_weight_table() == g.highest_weight_table());
}

TEST_SUITE_END();
