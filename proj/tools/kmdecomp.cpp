// kmdecomp: exact decomposition / restriction / canonical-basis workbench
// for integrable highest-weight modules over symmetric Kac-Moody algebras.

#include <cstdlib>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "kmd/cache.hpp"
#include "kmd/decomp.hpp"
#include "kmd/error.hpp"
#include "kmd/selfcheck.hpp"
#include "kmd/tensmod.hpp"

using namespace kmd;

namespace {

constexpr int kCacheFormatVersion = 1;

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kDisagreement = 2,
    kIncompleteStrict = 3,
    kUsage = 64,
};

struct CommonOpts {
    std::string cartan_path;
    std::vector<std::string> weights;
    std::string levi;
    long long depth = 12;
    std::string engine = "all";
    std::string format = "tsv";
    std::string cache_dir;
    bool strict = false;
};

std::vector<Weight> parse_weights(const CartanDatum& datum,
                                  const std::vector<std::string>& raw) {
    std::vector<Weight> out;
    for (const auto& s : raw) out.push_back(Weight::parse(s, datum.rank()));
    return out;
}

std::optional<CacheStore> cache_store(const CommonOpts& o) {
    std::string dir = o.cache_dir;
    if (dir.empty()) {
        const char* env = std::getenv("KMDECOMP_CACHE");
        if (env) dir = env;
    }
    if (dir.empty()) return std::nullopt;
    return CacheStore(dir);
}

// crystal graph with read-through caching; a corrupt entry is bypassed
std::optional<CrystalGraph> cached_graph(const CartanDatum& datum,
                                         const std::vector<Weight>& lambdas, long long depth,
                                         const std::optional<CacheStore>& cache) {
    CrystalModel model = CrystalModel::tensor(datum, lambdas);
    if (!cache) return std::nullopt;
    std::string key =
        CrystalGraph::cache_key_for(datum, model.model_key(), depth, kCacheFormatVersion);
    if (auto payload = cache->load(key)) {
        try {
            return CrystalGraph::deserialize(datum, *payload);
        } catch (const std::exception& e) {
            std::cerr << "warning: ignoring corrupt cache entry " << key << " (" << e.what()
                      << ")\n";
        }
    }
    CrystalGraph g = CrystalGraph::generate(model, depth);
    cache->store(key, g.serialize());
    return g;
}

int run_decompose(const CommonOpts& o) {
    CartanDatum datum = CartanDatum::from_file(o.cartan_path);
    auto lambdas = parse_weights(datum, o.weights);
    Engine engine = engine_from_string(o.engine);
    auto cache = cache_store(o);
    std::optional<CrystalGraph> pre;
    if (engine == Engine::Crystal || engine == Engine::All)
        pre = cached_graph(datum, lambdas, o.depth, cache);
    MultiplicityTable t =
        decompose(datum, lambdas, o.depth, engine, pre ? &*pre : nullptr);
    std::cout << (o.format == "json" ? t.to_json(datum) + "\n" : t.to_tsv(datum));
    if (o.strict) {
        bool exact = t.complete;
        for (const auto& r : t.rows) exact = exact && r.exact;
        if (!exact) {
            std::cerr << "strict: table is not exhaustively exact at depth " << o.depth << "\n";
            return kIncompleteStrict;
        }
    }
    return kOk;
}

int run_restrict(const CommonOpts& o) {
    CartanDatum datum = CartanDatum::from_file(o.cartan_path);
    auto lambdas = parse_weights(datum, o.weights);
    Engine engine = engine_from_string(o.engine);
    auto cache = cache_store(o);
    std::optional<CrystalGraph> pre;
    if (engine == Engine::Crystal || engine == Engine::All)
        pre = cached_graph(datum, lambdas, o.depth, cache);
    RestrictTable t =
        restrict_module(datum, lambdas, o.levi, o.depth, engine, pre ? &*pre : nullptr);
    std::cout << (o.format == "json" ? t.to_json(datum) + "\n" : t.to_tsv(datum));
    if (o.strict) {
        bool exact = t.complete;
        for (const auto& [muJ, tot] : t.totals) exact = exact && tot.second;
        if (!exact) {
            std::cerr << "strict: restriction totals stay lower bounds at depth " << o.depth
                      << "\n";
            return kIncompleteStrict;
        }
    }
    return kOk;
}

int run_coinvariants(const CommonOpts& o) {
    CartanDatum datum = CartanDatum::from_file(o.cartan_path);
    auto lambdas = parse_weights(datum, o.weights);
    auto [dim, exact] = coinvariants_dim(datum, lambdas, o.depth, engine_from_string(o.engine));
    if (o.format == "json") {
        std::cout << "{\"coinvariants\":" << dim << ",\"exact\":" << (exact ? "true" : "false")
                  << "}\n";
    } else {
        std::cout << dim << "\t" << (exact ? "exact" : "lower-bound") << "\n";
    }
    if (o.strict && !exact) return kIncompleteStrict;
    return kOk;
}

int run_canonical_basis(const CommonOpts& o) {
    CartanDatum datum = CartanDatum::from_file(o.cartan_path);
    auto lambdas = parse_weights(datum, o.weights);
    TensorModule m = TensorModule::build(datum, lambdas, o.depth);
    m.check_canonical_basis();
    if (datum.finite_type()) m.classify_filtration();
    std::cout << m.canonical_basis_json() << "\n";
    return kOk;
}

int run_crystal_graph(const CommonOpts& o) {
    CartanDatum datum = CartanDatum::from_file(o.cartan_path);
    auto lambdas = parse_weights(datum, o.weights);
    auto cache = cache_store(o);
    auto pre = cached_graph(datum, lambdas, o.depth, cache);
    CrystalGraph g =
        pre ? *pre : CrystalGraph::generate(CrystalModel::tensor(datum, lambdas), o.depth);
    if (!o.levi.empty()) g = g.levi_restrict(o.levi);
    if (o.format == "dot") {
        std::cout << g.to_dot();
    } else if (o.format == "json") {
        std::cout << "{\"nodes\":" << g.nodes().size() << ",\"edges\":" << g.edges().size()
                  << ",\"complete\":" << (g.globally_complete() ? "true" : "false") << "}\n";
    } else {
        std::cout << "nodes\t" << g.nodes().size() << "\nedges\t" << g.edges().size()
                  << "\ncomplete\t" << (g.globally_complete() ? "yes" : "no") << "\n";
    }
    return kOk;
}

int run_self_check(bool strict) {
    auto print = [](const selfcheck::Result& r) {
        std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name;
        if (!r.detail.empty()) std::cout << "  [" << r.detail << "]";
        std::cout << "\n";
    };
    bool all = true;
    std::cout << "acceptance criteria:\n";
    for (const auto& r : selfcheck::acceptance_criteria()) {
        print(r);
        all = all && r.pass;
    }
    std::cout << "invariant corpus:\n";
    for (const auto& r : selfcheck::invariant_corpus()) {
        print(r);
        all = all && r.pass;
    }
    if (!all) return kFailure;
    if (strict) {
        // the pinned corpus contains one genuinely open-ended table: the
        // affine product, whose full decomposition can never close
        auto k = CartanDatum::validate({"0", "1"}, {{2, -2}, {-2, 2}});
        MultiplicityTable t = decompose(k, {Weight({1, 0}), Weight({1, 0})}, 6, Engine::All);
        if (!t.complete) {
            std::cerr << "strict: affine corpus rows are lower bounds beyond depth 6\n";
            return kIncompleteStrict;
        }
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Kac-Moody tensor decomposition workbench"};
    app.require_subcommand(1);

    CommonOpts o;
    auto add_common = [&](CLI::App* cmd, bool needs_weights, bool needs_levi) {
        cmd->add_option("--cartan", o.cartan_path, "Cartan datum JSON file")->required();
        auto* ws = cmd->add_option("--weights", o.weights,
                                   "highest weights as comma lists, e.g. 1,0 0,1");
        if (needs_weights) ws->required();
        auto* lv = cmd->add_option("--levi", o.levi, "registered Levi subset name");
        if (needs_levi) lv->required();
        cmd->add_option("--depth", o.depth, "generation depth bound")->default_val(12);
        cmd->add_option("--engine", o.engine, "crystal|path|character|all")->default_val("all");
        cmd->add_option("--format", o.format, "tsv|json|dot")->default_val("tsv");
        cmd->add_option("--cache", o.cache_dir, "cache directory (or KMDECOMP_CACHE)");
        cmd->add_flag("--strict", o.strict, "exit 3 when any reported number is a lower bound");
    };

    auto* cmd_dec = app.add_subcommand("decompose", "tensor product into irreducibles");
    add_common(cmd_dec, true, false);
    auto* cmd_res = app.add_subcommand("restrict", "branch to a Levi subalgebra");
    add_common(cmd_res, true, true);
    auto* cmd_coi = app.add_subcommand("coinvariants", "multiplicity of the trivial module");
    add_common(cmd_coi, true, false);
    auto* cmd_cb = app.add_subcommand("canonical-basis",
                                      "Psi-fixed basis of the tensor product with classes");
    add_common(cmd_cb, true, false);
    auto* cmd_gr = app.add_subcommand("crystal-graph", "generate and export a crystal graph");
    add_common(cmd_gr, false, false);
    cmd_gr->add_option("--lambda", o.weights, "highest weight (alias of --weights)");
    auto* cmd_sc = app.add_subcommand("self-check", "run the pinned invariant corpus");
    bool sc_strict = false;
    cmd_sc->add_flag("--strict", sc_strict, "fail on lower-bound rows in the corpus");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kUsage;
    }

    try {
        if (cmd_dec->parsed()) return run_decompose(o);
        if (cmd_res->parsed()) return run_restrict(o);
        if (cmd_coi->parsed()) return run_coinvariants(o);
        if (cmd_cb->parsed()) return run_canonical_basis(o);
        if (cmd_gr->parsed()) {
            if (o.weights.empty()) {
                std::cerr << "crystal-graph needs --lambda or --weights\n";
                return kUsage;
            }
            return run_crystal_graph(o);
        }
        if (cmd_sc->parsed()) return run_self_check(sc_strict);
    } catch (const kmd::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.code()) {
            case Errc::EngineDisagreement: return kDisagreement;
            case Errc::IncompleteSlice: return kIncompleteStrict;
            case Errc::Usage:
            case Errc::NotDominant:
            case Errc::UnknownLevi: return kUsage;
            default: return kFailure;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kUsage;
}
