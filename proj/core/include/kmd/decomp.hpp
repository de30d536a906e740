#pragma once

#include <map>

#include "kmd/character.hpp"
#include "kmd/crystal.hpp"

namespace kmd {

enum class Engine { Crystal, Path, Character, All };
Engine engine_from_string(const std::string& s);
std::string engine_name(Engine e);

struct DecompRow {
    DimVector drop;
    Weight mu;
    long long multiplicity;
    bool exact;
};

/// Decomposition table of a tensor product, rows keyed by the drop
/// nu = sum(lambda) - mu in simple-root coordinates. `complete` states that
/// every nonzero row of the full decomposition is present.
struct MultiplicityTable {
    std::vector<Weight> lambdas;
    long long depth = 0;
    bool complete = false;
    std::string engine;
    std::vector<DecompRow> rows;  // sorted by drop (height, then lex)

    long long at(const DimVector& drop) const;
    std::string to_tsv(const CartanDatum& datum) const;
    std::string to_json(const CartanDatum& datum) const;
};

/// m_mu by counting highest-weight crystal elements (crystal engine), by the
/// Littelmann dominant-path rule (path engine), or by exact character
/// arithmetic (character engine, finite type). Engine::All runs every
/// applicable engine and demands exact agreement.
MultiplicityTable decompose(const CartanDatum& datum, const std::vector<Weight>& lambdas,
                            long long depth, Engine engine,
                            const CrystalGraph* prebuilt = nullptr);

struct RestrictRow {
    DimVector drop;    // full drop; the J-part locates the row inside its sector
    LeviWeight muJ;
    DimVector sector;  // pr_{I \ J} of the drop
    long long multiplicity;
    bool exact;
};

struct RestrictTable {
    std::vector<Weight> lambdas;
    std::string levi;
    long long depth = 0;
    bool complete = false;
    std::string engine;
    std::vector<RestrictRow> rows;  // sorted by drop
    /// per-muJ totals over all sectors; flag states the total is exact rather
    /// than a lower bound (infinite type tails stay open)
    std::map<LeviWeight, std::pair<long long, bool>> totals;

    std::string to_tsv(const CartanDatum& datum) const;
    std::string to_json(const CartanDatum& datum) const;
};

RestrictTable restrict_module(const CartanDatum& datum, const std::vector<Weight>& lambdas,
                              const std::string& leviName, long long depth, Engine engine,
                              const CrystalGraph* prebuilt = nullptr);

/// multiplicity of the trivial module; the flag states exactness
std::pair<long long, bool> coinvariants_dim(const CartanDatum& datum,
                                            const std::vector<Weight>& lambdas, long long depth,
                                            Engine engine);

struct FiltrationReport {
    Weight mu;
    bool comparable = false;  // mu below sum(lambda) at all
    std::map<DimVector, std::pair<long long, long long>> slices;  // slice drop -> (dim>=, dim>)
    long long total_ge = 0, total_gt = 0;
};

/// weight-space ranks of M[>=mu] and M[>mu] inside the tensor product,
/// finite type (character oracle supplies inner multiplicities)
FiltrationReport filtration_ranks(const CartanDatum& datum, const std::vector<Weight>& lambdas,
                                  const Weight& mu, long long depth);

}  // namespace kmd
