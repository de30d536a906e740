#pragma once

#include <map>

#include "kmd/cartan.hpp"

namespace kmd {

/// Weight multiplicities of a highest-weight module, keyed by the drop
/// nu = lambda - mu in simple-root coordinates.
struct CharacterVector {
    Weight lambda;
    std::map<DimVector, long long> mult;  // drop -> multiplicity, nonzero entries only
    bool complete = true;                 // full character vs depth-truncated
    long long depth = -1;                 // truncation depth when not complete

    long long at(const DimVector& drop) const {
        auto it = mult.find(drop);
        return it == mult.end() ? 0 : it->second;
    }
    long long dimension() const;  // sum of multiplicities (full characters only)
};

/// Exact weight multiplicities of L(lambda) by the Freudenthal recursion on
/// dominant weights plus Weyl-orbit transport. Finite type only.
/// depth < 0 computes the full character.
CharacterVector freudenthal_character(const CartanDatum& datum, const Weight& lambda,
                                      long long depth = -1);

/// dim L(lambda) by the Weyl dimension formula (finite type)
BigInt weyl_dimension(const CartanDatum& datum, const Weight& lambda);

/// character of a tensor product as drop-keyed convolution of factor characters.
/// Finite type only; depth < 0 for the full product character.
CharacterVector tensor_character(const CartanDatum& datum, const std::vector<Weight>& lambdas,
                                 long long depth = -1);

/// Greedy exact decomposition of a non-virtual character into irreducibles:
/// repeatedly subtract the full character of the dominance-maximal residual
/// weight. Deterministic (height, then lex drop). Finite type only.
std::map<DimVector, long long> greedy_decompose(const CartanDatum& datum,
                                                const std::vector<Weight>& lambdas,
                                                const CharacterVector& ch);

}  // namespace kmd
