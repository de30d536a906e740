#include "kmd/decomp.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "kmd/error.hpp"
#include "kmd/path.hpp"

namespace kmd {

Engine engine_from_string(const std::string& s) {
    if (s == "crystal") return Engine::Crystal;
    if (s == "path") return Engine::Path;
    if (s == "character") return Engine::Character;
    if (s == "all") return Engine::All;
    fail(Errc::Usage, "unknown engine '" + s + "'");
}

std::string engine_name(Engine e) {
    switch (e) {
        case Engine::Crystal: return "crystal";
        case Engine::Path: return "path";
        case Engine::Character: return "character";
        case Engine::All: return "all";
    }
    return "?";
}

long long MultiplicityTable::at(const DimVector& drop) const {
    for (const auto& r : rows)
        if (r.drop == drop) return r.multiplicity;
    return 0;
}

namespace {

std::string mu_label(const CartanDatum& datum, const Weight& mu, const DimVector& drop) {
    // singular GCMs need the drop to identify the slice unambiguously
    if (datum.finite_type()) return mu.str();
    return mu.str() + "@" + drop.str();
}

MultiplicityTable rows_from_map(const CartanDatum& datum, const std::vector<Weight>& lambdas,
                                long long depth, bool complete, const std::string& engine,
                                const std::map<DimVector, long long>& m,
                                bool rows_exact = true) {
    MultiplicityTable t;
    t.lambdas = lambdas;
    t.depth = depth;
    t.complete = complete;
    t.engine = engine;
    for (const auto& [drop, mult] : m) {
        if (mult == 0) continue;
        DecompRow r;
        r.drop = drop;
        r.mu = datum.wt(lambdas, drop);
        r.multiplicity = mult;
        r.exact = rows_exact;
        t.rows.push_back(std::move(r));
    }
    return t;
}

MultiplicityTable decompose_crystal(const CartanDatum& datum, const std::vector<Weight>& lambdas,
                                    long long depth, const CrystalGraph* prebuilt) {
    CrystalGraph local;
    const CrystalGraph* g = prebuilt;
    if (!g) {
        local = CrystalGraph::generate(CrystalModel::tensor(datum, lambdas), depth);
        g = &local;
    }
    std::map<DimVector, long long> m;
    for (const auto& [drop, idxs] : g->highest_weight_table()) m[drop] = (long long)idxs.size();
    return rows_from_map(datum, lambdas, depth, g->globally_complete(), "crystal", m);
}

MultiplicityTable decompose_path(const CartanDatum& datum, const std::vector<Weight>& lambdas,
                                 long long depth) {
    // fold two-factor dominant-path decompositions across the tensor product
    std::map<DimVector, long long> table{{DimVector::zero(datum.rank()), 1}};
    std::vector<Weight> sofar{lambdas[0]};
    bool complete = true;
    for (size_t l = 1; l < lambdas.size(); ++l) {
        std::map<DimVector, long long> next;
        for (const auto& [nu, m] : table) {
            Weight mu = datum.wt(sofar, nu);
            auto part = littelmann_decompose(datum, mu, lambdas[l], depth - nu.height());
            complete = complete && part.complete;
            for (const auto& r : part.rows) next[nu + r.drop] += m * r.multiplicity;
        }
        table = std::move(next);
        sofar.push_back(lambdas[l]);
    }
    return rows_from_map(datum, lambdas, depth, complete, "path", table);
}

MultiplicityTable decompose_character(const CartanDatum& datum,
                                      const std::vector<Weight>& lambdas, long long depth) {
    if (!datum.finite_type())
        fail(Errc::FiniteTypeOnly, "character engine needs a finite-type datum");
    CharacterVector ch = tensor_character(datum, lambdas, -1);
    auto m = greedy_decompose(datum, lambdas, ch);
    return rows_from_map(datum, lambdas, depth, true, "character", m);
}

// exact-agreement check of decomposition tables on their common trusted region
void compare_tables(const CartanDatum& datum, const std::vector<MultiplicityTable>& tables,
                    long long depth) {
    std::set<DimVector> keys;
    for (const auto& t : tables)
        for (const auto& r : t.rows) keys.insert(r.drop);
    std::ostringstream diff;
    bool bad = false;
    for (const auto& k : keys) {
        bool trusted_everywhere = true;
        for (const auto& t : tables)
            if (!t.complete && k.height() > depth) trusted_everywhere = false;
        if (!trusted_everywhere) continue;
        long long v0 = tables[0].at(k);
        for (size_t i = 1; i < tables.size(); ++i) {
            long long vi = tables[i].at(k);
            if (vi != v0) {
                bad = true;
                diff << " mu=" << datum.wt(tables[0].lambdas, k).str() << "@" << k.str() << ":";
                for (const auto& t : tables) diff << " " << t.engine << "=" << t.at(k);
                diff << ";";
            }
        }
    }
    if (bad) fail(Errc::EngineDisagreement, "engines disagree on" + diff.str());
}

}  // namespace

MultiplicityTable decompose(const CartanDatum& datum, const std::vector<Weight>& lambdas,
                            long long depth, Engine engine, const CrystalGraph* prebuilt) {
    for (const auto& l : lambdas)
        if (!datum.dominant(l)) fail(Errc::NotDominant, "decompose needs dominant weights");
    switch (engine) {
        case Engine::Crystal: return decompose_crystal(datum, lambdas, depth, prebuilt);
        case Engine::Path: return decompose_path(datum, lambdas, depth);
        case Engine::Character: return decompose_character(datum, lambdas, depth);
        case Engine::All: break;
    }
    std::vector<MultiplicityTable> tables;
    tables.push_back(decompose_crystal(datum, lambdas, depth, prebuilt));
    tables.push_back(decompose_path(datum, lambdas, depth));
    if (datum.finite_type()) tables.push_back(decompose_character(datum, lambdas, depth));
    compare_tables(datum, tables, depth);
    MultiplicityTable merged = datum.finite_type() ? tables.back() : tables.front();
    merged.engine = "all";
    return merged;
}

namespace {

RestrictTable restrict_finish(const CartanDatum& datum, const std::vector<Weight>& lambdas,
                              const std::string& leviName, long long depth, bool complete,
                              const std::string& engine,
                              const std::map<DimVector, long long>& rows) {
    const auto& J = datum.levi(leviName);
    std::set<size_t> inJ(J.begin(), J.end());
    RestrictTable t;
    t.lambdas = lambdas;
    t.levi = leviName;
    t.depth = depth;
    t.complete = complete;
    t.engine = engine;
    for (const auto& [drop, mult] : rows) {
        if (mult == 0) continue;
        RestrictRow r;
        r.drop = drop;
        r.muJ = datum.wtJ(leviName, lambdas, drop);
        std::vector<long long> sec;
        for (size_t i = 0; i < datum.rank(); ++i)
            if (!inJ.count(i)) sec.push_back(drop[i]);
        r.sector = DimVector(std::move(sec));
        r.multiplicity = mult;
        r.exact = true;
        t.rows.push_back(std::move(r));
    }
    for (const auto& r : t.rows) {
        auto& tot = t.totals[r.muJ];
        tot.first += r.multiplicity;
        tot.second = complete;  // totals close only when the table is complete
    }
    return t;
}

std::map<DimVector, long long> restrict_crystal_rows(const CartanDatum& datum,
                                                     const std::vector<Weight>& lambdas,
                                                     const std::string& leviName, long long depth,
                                                     bool& complete,
                                                     const CrystalGraph* prebuilt) {
    CrystalGraph local;
    const CrystalGraph* g = prebuilt;
    if (!g) {
        local = CrystalGraph::generate(CrystalModel::tensor(datum, lambdas), depth);
        g = &local;
    }
    CrystalGraph rg = g->levi_restrict(leviName);
    complete = rg.globally_complete();
    std::map<DimVector, long long> rows;
    for (const auto& [drop, idxs] : rg.highest_weight_table()) rows[drop] = (long long)idxs.size();
    return rows;
}

std::map<DimVector, long long> restrict_path_rows(const CartanDatum& datum,
                                                  const std::vector<Weight>& lambdas,
                                                  const std::string& leviName, long long depth,
                                                  bool& complete) {
    complete = true;
    // decompose the tensor product first, then branch each summand
    MultiplicityTable dec = decompose(datum, lambdas, depth, Engine::Path);
    complete = dec.complete;
    std::map<DimVector, long long> rows;
    for (const auto& r : dec.rows) {
        auto part = littelmann_restrict(datum, r.mu, leviName, depth - r.drop.height());
        complete = complete && part.complete;
        for (const auto& rr : part.rows)
            rows[r.drop + rr.drop] += r.multiplicity * rr.multiplicity;
    }
    return rows;
}

std::map<DimVector, long long> restrict_character_rows(const CartanDatum& datum,
                                                       const std::vector<Weight>& lambdas,
                                                       const std::string& leviName,
                                                       bool& complete) {
    if (!datum.finite_type())
        fail(Errc::FiniteTypeOnly, "character engine needs a finite-type datum");
    const auto& J = datum.levi(leviName);
    std::set<size_t> inJ(J.begin(), J.end());
    CharacterVector full = tensor_character(datum, lambdas, -1);
    complete = true;

    if (J.empty()) {
        // zero Levi: the whole character survives, every weight line is a row
        std::map<DimVector, long long> rows;
        for (const auto& [drop, m] : full.mult) rows[drop] = m;
        return rows;
    }

    CartanDatum sub = datum.sub_datum(J);
    // split by sector, decompose each as a Levi character
    std::map<DimVector, std::map<DimVector, long long>> by_sector;
    for (const auto& [drop, m] : full.mult) {
        std::vector<long long> sec, nuJ;
        for (size_t i = 0; i < datum.rank(); ++i)
            (inJ.count(i) ? nuJ : sec).push_back(drop[i]);
        by_sector[DimVector(sec)][DimVector(nuJ)] += m;
    }
    std::map<DimVector, long long> rows;
    for (const auto& [sector, sub_mult] : by_sector) {
        // effective top of this sector: wt_J at nu_J = 0
        std::vector<long long> full0(datum.rank(), 0);
        {
            size_t s = 0;
            for (size_t i = 0; i < datum.rank(); ++i)
                if (!inJ.count(i)) full0[i] = sector[s++];
        }
        LeviWeight top = datum.wtJ(leviName, lambdas, DimVector(full0));
        CharacterVector chJ;
        chJ.lambda = Weight(top.c);
        chJ.mult = sub_mult;
        chJ.complete = true;
        auto dec = greedy_decompose(sub, {chJ.lambda}, chJ);
        for (const auto& [nuJ, m] : dec) {
            std::vector<long long> fulldrop(datum.rank(), 0);
            size_t s = 0, t = 0;
            for (size_t i = 0; i < datum.rank(); ++i)
                fulldrop[i] = inJ.count(i) ? nuJ[t++] : sector[s++];
            rows[DimVector(fulldrop)] += m;
        }
    }
    return rows;
}

}  // namespace

RestrictTable restrict_module(const CartanDatum& datum, const std::vector<Weight>& lambdas,
                              const std::string& leviName, long long depth, Engine engine,
                              const CrystalGraph* prebuilt) {
    for (const auto& l : lambdas)
        if (!datum.dominant(l)) fail(Errc::NotDominant, "restrict needs dominant weights");
    datum.levi(leviName);  // throws UnknownLevi early
    bool complete = false;
    switch (engine) {
        case Engine::Crystal: {
            auto rows = restrict_crystal_rows(datum, lambdas, leviName, depth, complete, prebuilt);
            return restrict_finish(datum, lambdas, leviName, depth, complete, "crystal", rows);
        }
        case Engine::Path: {
            auto rows = restrict_path_rows(datum, lambdas, leviName, depth, complete);
            return restrict_finish(datum, lambdas, leviName, depth, complete, "path", rows);
        }
        case Engine::Character: {
            auto rows = restrict_character_rows(datum, lambdas, leviName, complete);
            return restrict_finish(datum, lambdas, leviName, depth, complete, "character", rows);
        }
        case Engine::All: break;
    }
    std::vector<RestrictTable> tables;
    {
        bool c;
        auto rows = restrict_crystal_rows(datum, lambdas, leviName, depth, c, prebuilt);
        tables.push_back(restrict_finish(datum, lambdas, leviName, depth, c, "crystal", rows));
        auto prow = restrict_path_rows(datum, lambdas, leviName, depth, c);
        tables.push_back(restrict_finish(datum, lambdas, leviName, depth, c, "path", prow));
        if (datum.finite_type()) {
            auto crow = restrict_character_rows(datum, lambdas, leviName, c);
            tables.push_back(restrict_finish(datum, lambdas, leviName, depth, c, "character", crow));
        }
    }
    std::set<DimVector> keys;
    for (const auto& t : tables)
        for (const auto& r : t.rows) keys.insert(r.drop);
    std::ostringstream diff;
    bool bad = false;
    for (const auto& k : keys) {
        bool trusted = true;
        for (const auto& t : tables)
            if (!t.complete && k.height() > depth) trusted = false;
        if (!trusted) continue;
        auto val = [&](const RestrictTable& t) -> long long {
            for (const auto& r : t.rows)
                if (r.drop == k) return r.multiplicity;
            return 0;
        };
        long long v0 = val(tables[0]);
        for (size_t i = 1; i < tables.size(); ++i)
            if (val(tables[i]) != v0) {
                bad = true;
                diff << " drop=" << k.str() << ":";
                for (const auto& t : tables) diff << " " << t.engine << "=" << val(t);
                diff << ";";
            }
    }
    if (bad) fail(Errc::EngineDisagreement, "restriction engines disagree on" + diff.str());
    RestrictTable merged = datum.finite_type() ? tables.back() : tables.front();
    merged.engine = "all";
    return merged;
}

std::pair<long long, bool> coinvariants_dim(const CartanDatum& datum,
                                            const std::vector<Weight>& lambdas, long long depth,
                                            Engine engine) {
    // locate the drop of the true zero weight: C nu = sum(lambda), aux(nu) = 0
    Weight zero(std::vector<long long>(datum.rank(), 0));
    auto nu = datum.exact_drop(lambdas, zero);
    if (!nu) return {0, true};  // sum(lambda) outside the positive root lattice
    MultiplicityTable t = decompose(datum, lambdas, depth, engine);
    if (nu->height() > depth && !t.complete) return {0, false};
    return {t.at(*nu), true};
}

FiltrationReport filtration_ranks(const CartanDatum& datum, const std::vector<Weight>& lambdas,
                                  const Weight& mu, long long depth) {
    if (!datum.finite_type())
        fail(Errc::FiniteTypeOnly, "filtration ranks need the character oracle");
    FiltrationReport rep;
    rep.mu = mu;
    auto dom = datum.exact_drop(lambdas, mu);
    if (!dom) return rep;  // mu incomparable to every summand weight: both ranks 0
    DimVector nu_mu = *dom;
    rep.comparable = true;

    MultiplicityTable dec = decompose(datum, lambdas, depth, Engine::Character);
    for (const auto& row : dec.rows) {
        if (!row.drop.leq_componentwise(nu_mu)) continue;  // need mu' >= mu
        bool strict = !(row.drop == nu_mu);
        CharacterVector ch = freudenthal_character(datum, row.mu, -1);
        for (const auto& [kappa, m] : ch.mult) {
            DimVector slice = row.drop + kappa;
            auto& cell = rep.slices[slice];
            cell.first += row.multiplicity * m;
            if (strict) cell.second += row.multiplicity * m;
        }
        BigInt d = weyl_dimension(datum, row.mu);
        long long dl = d.convert_to<long long>();
        rep.total_ge += row.multiplicity * dl;
        if (strict) rep.total_gt += row.multiplicity * dl;
    }
    return rep;
}

std::string MultiplicityTable::to_tsv(const CartanDatum& datum) const {
    std::ostringstream os;
    for (const auto& r : rows)
        os << mu_label(datum, r.mu, r.drop) << "\t" << r.multiplicity << "\t"
           << (r.exact ? "exact" : "lower-bound") << "\t" << engine << "\n";
    return os.str();
}

std::string MultiplicityTable::to_json(const CartanDatum& datum) const {
    std::ostringstream os;
    os << "{\"datum\":\"" << datum.hash_key() << "\",\"depth\":" << depth
       << ",\"complete\":" << (complete ? "true" : "false") << ",\"engine\":\"" << engine
       << "\",\"rows\":[";
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        os << (i ? "," : "") << "{\"mu\":\"" << r.mu.str() << "\",\"drop\":\"" << r.drop.str()
           << "\",\"multiplicity\":" << r.multiplicity
           << ",\"exact\":" << (r.exact ? "true" : "false") << "}";
    }
    os << "]}";
    return os.str();
}

std::string RestrictTable::to_tsv(const CartanDatum& datum) const {
    std::ostringstream os;
    for (const auto& r : rows)
        os << r.muJ.str() << "\t" << r.sector.str() << "\t" << r.multiplicity << "\t"
           << (r.exact ? "exact" : "lower-bound") << "\t" << engine << "\n";
    for (const auto& [muJ, tot] : totals)
        os << muJ.str() << "\ttotal\t" << tot.first << "\t"
           << (tot.second ? "exact" : "lower-bound") << "\t" << engine << "\n";
    return os.str();
}

std::string RestrictTable::to_json(const CartanDatum& datum) const {
    std::ostringstream os;
    os << "{\"datum\":\"" << datum.hash_key() << "\",\"levi\":\"" << levi
       << "\",\"depth\":" << depth << ",\"complete\":" << (complete ? "true" : "false")
       << ",\"engine\":\"" << engine << "\",\"rows\":[";
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        os << (i ? "," : "") << "{\"muJ\":\"" << r.muJ.str() << "\",\"sector\":\""
           << r.sector.str() << "\",\"drop\":\"" << r.drop.str()
           << "\",\"multiplicity\":" << r.multiplicity
           << ",\"exact\":" << (r.exact ? "true" : "false") << "}";
    }
    os << "],\"totals\":[";
    size_t i = 0;
    for (const auto& [muJ, tot] : totals) {
        os << (i++ ? "," : "") << "{\"muJ\":\"" << muJ.str() << "\",\"multiplicity\":"
           << tot.first << ",\"exact\":" << (tot.second ? "true" : "false") << "}";
    }
    os << "]}";
    return os.str();
}

}  // namespace kmd
