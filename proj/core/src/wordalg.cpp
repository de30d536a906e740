#include "kmd/wordalg.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "kmd/error.hpp"
#include "kmd/laurent.hpp"

namespace kmd {

Word Word::prepend(int i) const {
    Word w;
    w.letters.reserve(letters.size() + 1);
    w.letters.push_back(i);
    w.letters.insert(w.letters.end(), letters.begin(), letters.end());
    return w;
}

Word Word::drop_at(size_t p) const {
    Word w = *this;
    w.letters.erase(w.letters.begin() + p);
    return w;
}

std::string Word::str(const CartanDatum& datum, const std::string& gen) const {
    std::ostringstream os;
    for (int i : letters) os << gen << "[" << datum.labels()[i] << "]";
    if (letters.empty()) os << "1";
    return os.str();
}

MonomialWord MonomialWord::from_word(const Word& w) {
    MonomialWord m;
    for (int i : w.letters) {
        if (!m.runs.empty() && m.runs.back().first == i)
            m.runs.back().second += 1;
        else
            m.runs.push_back({i, 1});
    }
    return m;
}

Word MonomialWord::expanded() const {
    Word w;
    for (const auto& [i, a] : runs)
        for (long long t = 0; t < a; ++t) w.letters.push_back(i);
    return w;
}

DimVector MonomialWord::weight(size_t rank) const {
    DimVector d = DimVector::zero(rank);
    for (const auto& [i, a] : runs) d.c[i] += a;
    return d;
}

LaurentPoly MonomialWord::run_factorial() const {
    LaurentPoly p(1);
    for (const auto& [i, a] : runs) p *= qfactorial(a);
    return p;
}

std::string MonomialWord::str(const CartanDatum& datum, const std::string& gen) const {
    if (runs.empty()) return "1";
    std::ostringstream os;
    for (const auto& [i, a] : runs) {
        os << gen << "[" << datum.labels()[i] << "]";
        if (a > 1) os << "^(" << a << ")";
    }
    return os.str();
}

ShapovalovForm::ShapovalovForm(const CartanDatum& datum, Weight lambda)
    : datum_(&datum), lambda_(std::move(lambda)) {}

const LaurentPoly& ShapovalovForm::value(const Word& a, const Word& b) {
    auto key = std::make_pair(a, b);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    LaurentPoly out;
    if (a.letters.empty()) {
        out = b.letters.empty() ? LaurentPoly(1) : LaurentPoly();
    } else {
        int i = a.letters[0];
        Word u;
        u.letters.assign(a.letters.begin() + 1, a.letters.end());
        // <F_i F_u v, F_b v> = <F_u v, E_i F_b v>
        size_t n = datum_->rank();
        std::vector<long long> suffix(n, 0);
        // precompute suffix weights from the right
        std::vector<long long> pairing(b.size());
        for (size_t p = b.size(); p-- > 0;) {
            long long cb = 0;
            for (size_t j = 0; j < n; ++j) cb += datum_->a(i, j) * suffix[j];
            pairing[p] = lambda_[i] - cb;
            suffix[size_t(b.letters[p])] += 1;
        }
        for (size_t p = 0; p < b.size(); ++p) {
            if (b.letters[p] != i) continue;
            LaurentPoly c = qint(pairing[p]);
            if (c.is_zero()) continue;
            out += c * value(u, b.drop_at(p));
        }
    }
    return memo_.emplace(std::move(key), std::move(out)).first->second;
}

std::vector<Word> words_of_drop(const DimVector& nu) {
    std::vector<Word> out;
    std::vector<long long> counts = nu.c;
    Word cur;
    std::function<void()> rec = [&] {
        bool any = false;
        for (size_t i = 0; i < counts.size(); ++i) {
            if (counts[i] == 0) continue;
            any = true;
            counts[i] -= 1;
            cur.letters.push_back(int(i));
            rec();
            cur.letters.pop_back();
            counts[i] += 1;
        }
        if (!any) out.push_back(cur);
    };
    rec();
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// greedy selection of words whose Gram matrix stays invertible
std::vector<size_t> select_independent(const std::vector<Word>& words,
                                       const std::vector<std::vector<LaurentPoly>>& gram) {
    std::vector<size_t> sel;
    for (size_t w = 0; w < words.size(); ++w) {
        std::vector<size_t> trial = sel;
        trial.push_back(w);
        ExactMatrix g(trial.size(), trial.size());
        for (size_t a = 0; a < trial.size(); ++a)
            for (size_t b = 0; b < trial.size(); ++b)
                g.at(a, b) = RationalFn(gram[trial[a]][trial[b]]);
        if (g.rank() == trial.size()) sel = std::move(trial);
    }
    return sel;
}

}  // namespace

UminusBasis::UminusBasis(const CartanDatum& datum, long long height_bound)
    : datum_(&datum),
      form_(datum, Weight(std::vector<long long>(datum.rank(), height_bound))) {}

const std::vector<Word>& UminusBasis::basis(const DimVector& nu) {
    auto it = bases_.find(nu);
    if (it != bases_.end()) return it->second;
    std::vector<Word> words = words_of_drop(nu);
    std::vector<std::vector<LaurentPoly>> gram(words.size(),
                                               std::vector<LaurentPoly>(words.size()));
    for (size_t a = 0; a < words.size(); ++a)
        for (size_t b = a; b < words.size(); ++b) {
            gram[a][b] = form_.value(words[a], words[b]);
            gram[b][a] = gram[a][b];
        }
    auto sel = select_independent(words, gram);
    std::vector<Word> basis_words;
    ExactMatrix g(sel.size(), sel.size());
    for (size_t a = 0; a < sel.size(); ++a) {
        basis_words.push_back(words[sel[a]]);
        for (size_t b = 0; b < sel.size(); ++b) g.at(a, b) = RationalFn(gram[sel[a]][sel[b]]);
    }
    grams_[nu] = std::move(g);
    return bases_.emplace(nu, std::move(basis_words)).first->second;
}

const ExactMatrix& UminusBasis::gram(const DimVector& nu) {
    basis(nu);
    return grams_.at(nu);
}

std::vector<RationalFn> UminusBasis::expand(const Word& w) {
    auto it = expand_memo_.find(w);
    if (it != expand_memo_.end()) return it->second;
    DimVector nu = DimVector::zero(datum_->rank());
    for (int i : w.letters) nu.c[i] += 1;
    const auto& bs = basis(nu);
    std::vector<RationalFn> rhs(bs.size());
    for (size_t j = 0; j < bs.size(); ++j) rhs[j] = RationalFn(form_.value(bs[j], w));
    auto sol = gram(nu).solve(rhs);
    if (!sol.consistent || !sol.kernel.empty())
        fail(Errc::SingularSystem, "word expansion over a degenerate Gram matrix");
    expand_memo_[w] = sol.particular;
    return sol.particular;
}

namespace {

struct SliceData {
    std::vector<Word> basis;
    ExactMatrix gram;
};

// candidate canonical-basis monomials of one connected component at the
// prescribed component drop
std::vector<MonomialWord> component_candidates(const CartanDatum& datum,
                                               const std::vector<size_t>& comp,
                                               const DimVector& nu) {
    std::vector<MonomialWord> out;
    auto push = [&](std::vector<std::pair<int, long long>> runs) {
        MonomialWord m;
        for (auto& r : runs)
            if (r.second > 0) m.runs.push_back(r);
        out.push_back(std::move(m));
    };
    if (comp.size() == 1) {
        int i = int(comp[0]);
        push({{i, nu[comp[0]]}});
        return out;
    }
    int i = int(comp[0]), j = int(comp[1]);
    long long ni = nu[comp[0]], nj = nu[comp[1]];
    // F_i^(a) F_j^(b) F_i^(c) with b >= a + c
    if (nj >= ni)
        for (long long a = 0; a <= ni; ++a) push({{i, a}, {j, nj}, {i, ni - a}});
    if (ni >= nj)
        for (long long a = 0; a <= nj; ++a) push({{j, a}, {i, ni}, {j, nj - a}});
    return out;
}

}  // namespace

IrredModule IrredModule::build(const CartanDatum& datum, const Weight& lambda, long long depth) {
    if (!datum.dominant(lambda)) fail(Errc::NotDominant, "module of a non-dominant weight");
    if (depth < 0) fail(Errc::Usage, "depth must be >= 0");

    // connected components; the canonical-basis model covers A1 and A2 pieces
    size_t n = datum.rank();
    std::vector<std::vector<size_t>> comps;
    {
        std::vector<bool> seen(n, false);
        for (size_t i = 0; i < n; ++i) {
            if (seen[i]) continue;
            std::vector<size_t> comp{i};
            seen[i] = true;
            std::vector<size_t> stack{i};
            while (!stack.empty()) {
                size_t u = stack.back();
                stack.pop_back();
                for (size_t v = 0; v < n; ++v)
                    if (!seen[v] && datum.a(u, v) < 0) {
                        seen[v] = true;
                        comp.push_back(v);
                        stack.push_back(v);
                    }
            }
            std::sort(comp.begin(), comp.end());
            comps.push_back(std::move(comp));
        }
        for (const auto& comp : comps) {
            if (comp.size() == 1) continue;
            bool a2 = comp.size() == 2 && datum.a(comp[0], comp[1]) == -1;
            if (!a2)
                fail(Errc::RankUnsupported,
                     "module layer supports components of type A1 and A2 only");
        }
    }

    IrredModule mod;
    mod.datum_ = &datum;
    mod.lambda_ = lambda;
    mod.depth_ = depth;

    ShapovalovForm form(datum, lambda);
    std::map<DimVector, SliceData> slices;

    // weight spaces level by level: Gram rank on Verma words equals dim L_nu
    std::vector<DimVector> level{DimVector::zero(n)};
    {
        SliceData top;
        top.basis = {Word()};
        top.gram = ExactMatrix(1, 1);
        top.gram.at(0, 0) = RationalFn(1);
        slices[level[0]] = std::move(top);
        mod.drops_.push_back(level[0]);
        mod.dim_[level[0]] = 1;
    }
    long long h = 0;
    while (!level.empty() && h < depth) {
        std::set<DimVector> cand;
        for (const auto& nu : level)
            for (size_t i = 0; i < n; ++i) cand.insert(nu + DimVector::unit(n, i));
        std::vector<DimVector> next;
        for (const auto& nu : cand) {
            std::vector<Word> words = words_of_drop(nu);
            std::vector<std::vector<LaurentPoly>> gram(words.size(),
                                                       std::vector<LaurentPoly>(words.size()));
            for (size_t a = 0; a < words.size(); ++a)
                for (size_t b = a; b < words.size(); ++b) {
                    gram[a][b] = form.value(words[a], words[b]);
                    gram[b][a] = gram[a][b];
                }
            auto sel = select_independent(words, gram);
            if (sel.empty()) continue;
            SliceData sd;
            sd.gram = ExactMatrix(sel.size(), sel.size());
            for (size_t a = 0; a < sel.size(); ++a) {
                sd.basis.push_back(words[sel[a]]);
                for (size_t b = 0; b < sel.size(); ++b)
                    sd.gram.at(a, b) = RationalFn(gram[sel[a]][sel[b]]);
            }
            mod.dim_[nu] = sd.basis.size();
            slices[nu] = std::move(sd);
            mod.drops_.push_back(nu);
            next.push_back(nu);
        }
        level = std::move(next);
        ++h;
    }
    mod.complete_ = level.empty();
    std::sort(mod.drops_.begin(), mod.drops_.end());

    // expansion of an arbitrary word over the slice basis, via the Gram system
    auto expand = [&](const Word& w, const DimVector& nu) -> std::vector<RationalFn> {
        auto it = slices.find(nu);
        if (it == slices.end()) return {};
        const SliceData& sd = it->second;
        std::vector<RationalFn> rhs(sd.basis.size());
        for (size_t j = 0; j < sd.basis.size(); ++j)
            rhs[j] = RationalFn(form.value(sd.basis[j], w));
        auto sol = sd.gram.solve(rhs);
        if (!sol.consistent || !sol.kernel.empty())
            fail(Errc::Internal, "slice Gram matrix must be invertible");
        return sol.particular;
    };

    // word-coordinate action matrices
    std::map<std::pair<size_t, DimVector>, ExactMatrix> wF, wE;
    for (const auto& nu : mod.drops_) {
        const SliceData& sd = slices.at(nu);
        for (size_t i = 0; i < n; ++i) {
            DimVector up = nu + DimVector::unit(n, i);
            size_t updim = mod.dim_.count(up) ? mod.dim_.at(up) : 0;
            ExactMatrix f(updim, sd.basis.size());
            if (updim > 0) {
                for (size_t col = 0; col < sd.basis.size(); ++col) {
                    auto coords = expand(sd.basis[col].prepend(int(i)), up);
                    for (size_t row = 0; row < updim; ++row) f.at(row, col) = coords[row];
                }
            }
            wF[{i, nu}] = std::move(f);

            auto dn = nu.minus(DimVector::unit(n, i));
            size_t dndim = dn && mod.dim_.count(*dn) ? mod.dim_.at(*dn) : 0;
            ExactMatrix e(dndim, sd.basis.size());
            if (dndim > 0) {
                for (size_t col = 0; col < sd.basis.size(); ++col) {
                    const Word& w = sd.basis[col];
                    // E_i F_w v = sum over i-letters of [pairing] F_{w minus p} v
                    std::vector<long long> suffix(n, 0);
                    std::vector<long long> pairing(w.size());
                    for (size_t p = w.size(); p-- > 0;) {
                        long long cb = 0;
                        for (size_t j = 0; j < n; ++j) cb += datum.a(i, j) * suffix[j];
                        pairing[p] = lambda[i] - cb;
                        suffix[size_t(w.letters[p])] += 1;
                    }
                    for (size_t p = 0; p < w.size(); ++p) {
                        if (w.letters[p] != int(i)) continue;
                        LaurentPoly c = qint(pairing[p]);
                        if (c.is_zero()) continue;
                        auto coords = expand(w.drop_at(p), *dn);
                        for (size_t row = 0; row < dndim; ++row)
                            e.at(row, col) += RationalFn(c) * coords[row];
                    }
                }
            }
            wE[{i, nu}] = std::move(e);
        }
    }

    // canonical basis candidates per drop (word coordinates)
    auto word_f_div = [&](size_t i, long long r, const DimVector& from) {
        size_t fromdim = mod.dim_.count(from) ? mod.dim_.at(from) : 0;
        ExactMatrix acc = ExactMatrix::identity(fromdim);
        DimVector cur = from;
        for (long long t = 0; t < r; ++t) {
            auto it = wF.find({i, cur});
            if (it == wF.end()) {
                acc = ExactMatrix(0, fromdim);
                break;
            }
            acc = it->second * acc;
            cur = cur + DimVector::unit(n, i);
        }
        if (r >= 2 && acc.rows() > 0) acc = acc.scaled(RationalFn(1) / RationalFn(qfactorial(r)));
        return acc;
    };

    for (const auto& nu : mod.drops_) {
        size_t d = mod.dim_.at(nu);
        // all ways to realize nu as component-wise canonical monomials
        std::vector<MonomialWord> cands{MonomialWord{}};
        for (const auto& comp : comps) {
            bool touched = false;
            for (size_t i : comp) touched = touched || nu[i] > 0;
            if (!touched) continue;
            std::vector<MonomialWord> here = component_candidates(datum, comp, nu);
            std::vector<MonomialWord> merged;
            for (const auto& base : cands)
                for (const auto& add : here) {
                    MonomialWord m = base;
                    for (const auto& r : add.runs) m.runs.push_back(r);
                    merged.push_back(std::move(m));
                }
            cands = std::move(merged);
        }
        std::sort(cands.begin(), cands.end());
        cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

        std::vector<CBElement> kept;
        std::vector<std::vector<RationalFn>> seen_vectors;
        for (const auto& m : cands) {
            // apply divided-power runs right-to-left from the highest vector
            std::vector<RationalFn> vec{RationalFn(1)};
            DimVector cur = DimVector::zero(n);
            bool dead = false;
            for (size_t ri = m.runs.size(); ri-- > 0;) {
                auto [gi, a] = m.runs[ri];
                ExactMatrix mat = word_f_div(size_t(gi), a, cur);
                if (mat.rows() == 0) { dead = true; break; }
                std::vector<RationalFn> nxt(mat.rows());
                for (size_t r2 = 0; r2 < mat.rows(); ++r2)
                    for (size_t c2 = 0; c2 < mat.cols(); ++c2)
                        if (!mat.at(r2, c2).is_zero() && !vec[c2].is_zero())
                            nxt[r2] += mat.at(r2, c2) * vec[c2];
                vec = std::move(nxt);
                for (long long t = 0; t < a; ++t) cur = cur + DimVector::unit(n, size_t(gi));
            }
            if (dead) continue;
            bool zero = std::all_of(vec.begin(), vec.end(),
                                    [](const RationalFn& f) { return f.is_zero(); });
            if (zero) continue;
            bool dup = false;
            for (const auto& sv : seen_vectors)
                if (sv == vec) { dup = true; break; }
            if (dup) continue;
            seen_vectors.push_back(vec);
            CBElement el;
            el.drop = nu;
            el.label = m;
            el.word_coords = std::move(vec);
            kept.push_back(std::move(el));
        }
        if (kept.size() != d)
            fail(Errc::Internal, "canonical monomial count " + std::to_string(kept.size()) +
                                     " != weight space dimension " + std::to_string(d) +
                                     " at drop " + nu.str());
        // independence and bar symmetry of the candidate columns
        ExactMatrix B(d, d);
        for (size_t c2 = 0; c2 < d; ++c2)
            for (size_t r2 = 0; r2 < d; ++r2) {
                B.at(r2, c2) = kept[c2].word_coords[r2];
                if (!(B.at(r2, c2).bar() == B.at(r2, c2)))
                    fail(Errc::Internal, "canonical vector is not bar-invariant at drop " +
                                             nu.str());
            }
        if (B.rank() != d)
            fail(Errc::Internal, "canonical vectors are dependent at drop " + nu.str());
        mod.cb_[nu] = std::move(kept);
    }

    // action matrices in canonical coordinates: B_target^{-1} * M * B_source
    auto cb_matrix = [&](const DimVector& nu) {
        size_t d = mod.dim_.at(nu);
        ExactMatrix B(d, d);
        const auto& els = mod.cb_.at(nu);
        for (size_t c2 = 0; c2 < d; ++c2)
            for (size_t r2 = 0; r2 < d; ++r2) B.at(r2, c2) = els[c2].word_coords[r2];
        return B;
    };
    for (const auto& nu : mod.drops_) {
        ExactMatrix B = cb_matrix(nu);
        for (size_t i = 0; i < n; ++i) {
            DimVector up = nu + DimVector::unit(n, i);
            const ExactMatrix& f = wF.at({i, nu});
            ExactMatrix fc(f.rows(), f.cols());
            if (f.rows() > 0) fc = cb_matrix(up).solve_matrix(f * B);
            for (size_t r2 = 0; r2 < fc.rows(); ++r2)
                for (size_t c2 = 0; c2 < fc.cols(); ++c2) fc.at(r2, c2).as_poly();
            mod.matF_[{i, nu}] = std::move(fc);

            auto dnOpt = nu.minus(DimVector::unit(n, i));
            const ExactMatrix& e = wE.at({i, nu});
            ExactMatrix ec(e.rows(), e.cols());
            if (e.rows() > 0) ec = cb_matrix(*dnOpt).solve_matrix(e * B);
            for (size_t r2 = 0; r2 < ec.rows(); ++r2)
                for (size_t c2 = 0; c2 < ec.cols(); ++c2) ec.at(r2, c2).as_poly();
            mod.matE_[{i, nu}] = std::move(ec);
        }
    }
    return mod;
}

size_t IrredModule::dim(const DimVector& nu) const {
    auto it = dim_.find(nu);
    return it == dim_.end() ? 0 : it->second;
}

const std::vector<IrredModule::CBElement>& IrredModule::cb(const DimVector& nu) const {
    static const std::vector<CBElement> none;
    auto it = cb_.find(nu);
    return it == cb_.end() ? none : it->second;
}

ExactMatrix IrredModule::matF(size_t i, const DimVector& from) const {
    auto it = matF_.find({i, from});
    if (it != matF_.end()) return it->second;
    return ExactMatrix(dim(from + DimVector::unit(datum_->rank(), i)), dim(from));
}

ExactMatrix IrredModule::matE(size_t i, const DimVector& from) const {
    auto it = matE_.find({i, from});
    if (it != matE_.end()) return it->second;
    auto dn = from.minus(DimVector::unit(datum_->rank(), i));
    return ExactMatrix(dn ? dim(*dn) : 0, dim(from));
}

ExactMatrix IrredModule::matF_div(size_t i, long long r, const DimVector& from) const {
    ExactMatrix acc = ExactMatrix::identity(dim(from));
    DimVector cur = from;
    for (long long t = 0; t < r; ++t) {
        acc = matF(i, cur) * acc;
        cur = cur + DimVector::unit(datum_->rank(), i);
    }
    if (r >= 2) acc = acc.scaled(RationalFn(1) / RationalFn(qfactorial(r)));
    return acc;
}

ExactMatrix IrredModule::matE_div(size_t i, long long r, const DimVector& from) const {
    ExactMatrix acc = ExactMatrix::identity(dim(from));
    DimVector cur = from;
    for (long long t = 0; t < r; ++t) {
        acc = matE(i, cur) * acc;
        auto dn = cur.minus(DimVector::unit(datum_->rank(), i));
        if (!dn) {
            // below the lattice floor: everything is annihilated
            return ExactMatrix(0, dim(from));
        }
        cur = *dn;
    }
    if (r >= 2) acc = acc.scaled(RationalFn(1) / RationalFn(qfactorial(r)));
    return acc;
}

long long IrredModule::k_exponent(const DimVector& kappa, const DimVector& nu) const {
    Weight mu = datum_->wt({lambda_}, nu);
    long long s = 0;
    for (size_t i = 0; i < datum_->rank(); ++i) s += kappa[i] * mu[i];
    return s;
}

ExactMatrix IrredModule::apply_e_word(const Word& w, const DimVector& from) const {
    size_t n = datum_->rank();
    std::optional<DimVector> tgt = from;
    for (int l : w.letters)
        if (tgt) tgt = tgt->minus(DimVector::unit(n, size_t(l)));
    size_t tdim = tgt ? dim(*tgt) : 0;
    ExactMatrix acc = ExactMatrix::identity(dim(from));
    DimVector cur = from;
    for (size_t p = w.size(); p-- > 0;) {
        size_t i = size_t(w.letters[p]);
        acc = matE(i, cur) * acc;
        auto dn = cur.minus(DimVector::unit(n, i));
        if (!dn) return ExactMatrix(tdim, dim(from));
        cur = *dn;
    }
    return acc;
}

ExactMatrix IrredModule::apply_f_word(const Word& w, const DimVector& from) const {
    ExactMatrix acc = ExactMatrix::identity(dim(from));
    DimVector cur = from;
    for (size_t p = w.size(); p-- > 0;) {
        size_t i = size_t(w.letters[p]);
        acc = matF(i, cur) * acc;
        cur = cur + DimVector::unit(datum_->rank(), i);
    }
    return acc;
}

void IrredModule::check_relations() const {
    size_t n = datum_->rank();

    // composition of generator steps applied right-to-left, tracking the slice
    // so that paths through empty or invalid slices collapse to shaped zeros
    struct Step {
        bool lower;  // F vs E
        size_t i;
        long long power;  // divided power
    };
    auto run = [&](const std::vector<Step>& steps, const DimVector& src,
                   const DimVector& tgt) -> ExactMatrix {
        ExactMatrix acc = ExactMatrix::identity(dim(src));
        std::optional<DimVector> cur = src;
        for (size_t s = steps.size(); s-- > 0;) {
            const Step& st = steps[s];
            if (!cur) break;
            if (st.lower) {
                acc = matF_div(st.i, st.power, *cur) * acc;
                DimVector next = *cur;
                for (long long t = 0; t < st.power; ++t)
                    next = next + DimVector::unit(n, st.i);
                cur = next;
            } else {
                acc = matE_div(st.i, st.power, *cur) * acc;
                std::optional<DimVector> next = *cur;
                for (long long t = 0; t < st.power && next; ++t)
                    next = next->minus(DimVector::unit(n, st.i));
                cur = next;
            }
        }
        if (!cur || acc.rows() != dim(tgt)) return ExactMatrix(dim(tgt), dim(src));
        return acc;
    };

    for (const auto& nu : drops_) {
        size_t d = dim(nu);
        // relation (d): E_i F_j - F_j E_i = delta_ij [<h_i, mu>]
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                DimVector up = nu + DimVector::unit(n, j);
                if (!complete_ && up.height() > depth_) continue;  // beyond the cut
                auto tgtOpt = up.minus(DimVector::unit(n, i));
                size_t tdim = tgtOpt ? dim(*tgtOpt) : 0;
                if (tdim == 0 && i != j) continue;
                DimVector tgt = tgtOpt ? *tgtOpt : nu;
                ExactMatrix lhs = run({{false, i, 1}, {true, j, 1}}, nu, tgt) -
                                  run({{true, j, 1}, {false, i, 1}}, nu, tgt);
                if (i == j) {
                    LaurentPoly scalar = qint(k_exponent(DimVector::unit(n, i), nu));
                    ExactMatrix expect = ExactMatrix::identity(d).scaled(RationalFn(scalar));
                    if (!(lhs == expect)) fail(Errc::Internal, "relation (d) fails at " + nu.str());
                } else if (!lhs.is_zero()) {
                    fail(Errc::Internal, "mixed commutator fails at " + nu.str());
                }
            }
        // Serre (f) and (e)
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                long long bound = 1 - datum_->a(i, j);
                DimVector up = nu + DimVector::unit(n, j);
                for (long long t = 0; t < bound; ++t) up = up + DimVector::unit(n, i);
                if (complete_ || up.height() <= depth_) {
                    ExactMatrix acc(dim(up), d);
                    for (long long p = 0; p <= bound; ++p) {
                        ExactMatrix term =
                            run({{true, i, p}, {true, j, 1}, {true, i, bound - p}}, nu, up);
                        acc = (p % 2 == 0) ? acc + term : acc - term;
                    }
                    if (!acc.is_zero()) fail(Errc::Internal, "Serre (f) fails at " + nu.str());
                }
                DimVector need = DimVector::unit(n, j);
                for (long long t = 0; t < bound; ++t) need = need + DimVector::unit(n, i);
                auto dnOpt = nu.minus(need);
                if (dnOpt) {
                    ExactMatrix acc(dim(*dnOpt), d);
                    for (long long p = 0; p <= bound; ++p) {
                        ExactMatrix term =
                            run({{false, i, p}, {false, j, 1}, {false, i, bound - p}}, nu, *dnOpt);
                        acc = (p % 2 == 0) ? acc + term : acc - term;
                    }
                    if (!acc.is_zero()) fail(Errc::Internal, "Serre (e) fails at " + nu.str());
                }
            }
        // divided-power law [r]! F^(r) = F^r
        for (size_t i = 0; i < n; ++i)
            for (long long r = 2; r <= 3; ++r) {
                DimVector up = nu;
                for (long long t = 0; t < r; ++t) up = up + DimVector::unit(n, i);
                if (!complete_ && up.height() > depth_) continue;
                ExactMatrix lhs = matF_div(i, r, nu).scaled(RationalFn(qfactorial(r)));
                ExactMatrix rhs = ExactMatrix::identity(d);
                DimVector cur = nu;
                for (long long t = 0; t < r; ++t) {
                    rhs = matF(i, cur) * rhs;
                    cur = cur + DimVector::unit(n, i);
                }
                if (!(lhs == rhs)) fail(Errc::Internal, "divided power law fails at " + nu.str());
            }
    }
    // integrability: F_i^{<h_i,lambda>+1} annihilates the highest vector
    for (size_t i = 0; i < n; ++i) {
        long long power = lambda_[i] + 1;
        if (!complete_ && power > depth_) continue;
        ExactMatrix m = matF_div(i, power, DimVector::zero(n));
        if (!m.is_zero())
            fail(Errc::Internal, "integrability bound fails for vertex " + std::to_string(i));
    }
}

}  // namespace kmd
