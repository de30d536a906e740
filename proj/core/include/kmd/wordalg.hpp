#pragma once

#include <map>
#include <string>
#include <vector>

#include "kmd/cartan.hpp"
#include "kmd/linalg.hpp"

namespace kmd {

/// Word in the Chevalley generators of one triangular half; letters[0] acts
/// last. (i,i,j) stands for F_i F_i F_j (or the mirror E-word).
struct Word {
    std::vector<int> letters;
    Word() = default;
    explicit Word(std::vector<int> l) : letters(std::move(l)) {}
    size_t size() const { return letters.size(); }
    bool operator==(const Word& o) const { return letters == o.letters; }
    bool operator<(const Word& o) const { return letters < o.letters; }
    Word prepend(int i) const;
    Word drop_at(size_t p) const;
    std::string str(const CartanDatum& datum, const std::string& gen) const;
};

/// Monomial in divided powers: (generator, power) runs with positive powers.
struct MonomialWord {
    std::vector<std::pair<int, long long>> runs;
    static MonomialWord from_word(const Word& w);
    Word expanded() const;
    DimVector weight(size_t rank) const;
    LaurentPoly run_factorial() const;  // product of [a]! over runs
    std::string str(const CartanDatum& datum, const std::string& gen) const;
    bool operator<(const MonomialWord& o) const { return runs < o.runs; }
    bool operator==(const MonomialWord& o) const { return runs == o.runs; }
};

/// Contravariant-form values <F_w v_lambda, F_u v_lambda> on a Verma module,
/// computed by the adjunction recursion and memoized.
class ShapovalovForm {
public:
    ShapovalovForm(const CartanDatum& datum, Weight lambda);
    const LaurentPoly& value(const Word& a, const Word& b);
    const Weight& lambda() const { return lambda_; }

private:
    const CartanDatum* datum_;
    Weight lambda_;
    std::map<std::pair<Word, Word>, LaurentPoly> memo_;
};

/// all single-power words of a given weight, lexicographically ordered
std::vector<Word> words_of_drop(const DimVector& nu);

/// Basis of U^-_nu as independent words, certified by the Shapovalov Gram
/// matrix at a deep dominant weight (coordinates >= certification height).
class UminusBasis {
public:
    UminusBasis(const CartanDatum& datum, long long height_bound);
    const std::vector<Word>& basis(const DimVector& nu);
    /// expansion of an arbitrary word over basis(weight of word)
    std::vector<RationalFn> expand(const Word& w);
    size_t dim(const DimVector& nu) { return basis(nu).size(); }

private:
    const CartanDatum* datum_;
    ShapovalovForm form_;
    std::map<DimVector, std::vector<Word>> bases_;
    std::map<DimVector, ExactMatrix> grams_;  // on the selected basis
    std::map<Word, std::vector<RationalFn>> expand_memo_;
    const ExactMatrix& gram(const DimVector& nu);
};

/// Exact model of the irreducible integrable module L(lambda) at small rank:
/// weight spaces cut out of the Verma module by the radical of the
/// contravariant form, with all actions in canonical-basis coordinates.
class IrredModule {
public:
    static IrredModule build(const CartanDatum& datum, const Weight& lambda, long long depth);

    const CartanDatum& datum() const { return *datum_; }
    const Weight& lambda() const { return lambda_; }
    long long depth() const { return depth_; }
    bool complete() const { return complete_; }

    const std::vector<DimVector>& drops() const { return drops_; }
    size_t dim(const DimVector& nu) const;
    bool has_drop(const DimVector& nu) const { return dim_.count(nu) > 0; }

    /// canonical basis bookkeeping: elements indexed per drop, labels stable
    struct CBElement {
        DimVector drop;
        MonomialWord label;
        std::vector<RationalFn> word_coords;  // over the internal word basis
    };
    const std::vector<CBElement>& cb(const DimVector& nu) const;

    /// action matrices in canonical coordinates, from-slice on the right:
    /// F_i : L_nu -> L_{nu+e_i},  E_i : L_nu -> L_{nu-e_i}. Absent slices count
    /// as zero-dimensional, so shapes always compose.
    ExactMatrix matF(size_t i, const DimVector& from) const;
    ExactMatrix matE(size_t i, const DimVector& from) const;
    ExactMatrix matF_div(size_t i, long long r, const DimVector& from) const;
    ExactMatrix matE_div(size_t i, long long r, const DimVector& from) const;
    /// K_kappa eigenvalue exponent on the slice at nu: <kappa, lambda - C nu>
    long long k_exponent(const DimVector& kappa, const DimVector& nu) const;

    ExactMatrix apply_e_word(const Word& w, const DimVector& from) const;  // to from - wt(w)
    ExactMatrix apply_f_word(const Word& w, const DimVector& from) const;

    /// full relation suite as exact matrix identities; throws on violation
    void check_relations() const;

private:
    IrredModule() = default;
    const CartanDatum* datum_ = nullptr;
    Weight lambda_;
    long long depth_ = 0;
    bool complete_ = false;
    std::vector<DimVector> drops_;
    std::map<DimVector, size_t> dim_;
    std::map<DimVector, std::vector<CBElement>> cb_;
    std::map<std::pair<size_t, DimVector>, ExactMatrix> matF_, matE_;
};

}  // namespace kmd
