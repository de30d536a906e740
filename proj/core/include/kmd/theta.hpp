#pragma once

#include <map>

#include "kmd/wordalg.hpp"

namespace kmd {

/// Truncated quasi-R-matrix: Theta = 1 (x) 1 + sum over nonzero drops of
/// F-word (x) E-word terms, solved degree by degree from the intertwining
/// equation Delta(u) Theta = Theta barDelta(bar u) for the coproduct
/// Delta(E_i) = E_i (x) 1 + K_i (x) E_i, Delta(F_i) = F_i (x) K_{-i} + 1 (x) F_i.
/// This chirality makes the corrected tensor bases compatible with the
/// isotypic filtration.
class ThetaExpansion {
public:
    struct Term {
        Word f_word, e_word;  // both of weight nu, over the certified word basis
        RationalFn coeff;     // Theta_nu = sum coeff . F_{f_word} (x) E_{e_word}
    };

    static ThetaExpansion compute(const CartanDatum& datum, long long depth);

    const CartanDatum& datum() const { return *datum_; }
    long long depth() const { return depth_; }
    /// terms at a nonzero drop; the nu = 0 term is the implicit 1 (x) 1
    const std::vector<Term>& at(const DimVector& nu) const;
    const std::map<DimVector, std::vector<Term>>& terms() const { return terms_; }

    /// rendering with divided-power monomials, e.g. "(v - v^-1) E[1] (x) F[1]"
    std::string str() const;

private:
    const CartanDatum* datum_ = nullptr;
    long long depth_ = 0;
    std::map<DimVector, std::vector<Term>> terms_;
};

}  // namespace kmd
