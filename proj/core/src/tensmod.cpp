#include "kmd/tensmod.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "kmd/error.hpp"

namespace kmd {

namespace {

// assembled tensor stage over a contiguous run of factors
struct Stage {
    std::vector<Weight> lambdas;
    size_t nparts = 0;  // factor count
    std::vector<DimVector> drops;
    std::map<DimVector, std::vector<TensorModule::BasisElt>> basis;
    std::map<DimVector, std::map<TensorModule::BasisElt, size_t>> index;
    std::map<std::pair<size_t, DimVector>, ExactMatrix> matE, matF;
    std::map<DimVector, ExactMatrix> psi;

    size_t dim(const DimVector& nu) const {
        auto it = basis.find(nu);
        return it == basis.end() ? 0 : it->second.size();
    }
    ExactMatrix getE(size_t i, const DimVector& from, size_t rank) const {
        auto it = matE.find({i, from});
        if (it != matE.end()) return it->second;
        auto dn = from.minus(DimVector::unit(rank, i));
        return ExactMatrix(dn ? dim(*dn) : 0, dim(from));
    }
    ExactMatrix getF(size_t i, const DimVector& from, size_t rank) const {
        auto it = matF.find({i, from});
        if (it != matF.end()) return it->second;
        return ExactMatrix(dim(from + DimVector::unit(rank, i)), dim(from));
    }
    // composed word matrices, letters applied right to left
    ExactMatrix eword(const Word& w, const DimVector& from, size_t rank) const {
        std::optional<DimVector> tgt = from;
        for (int l : w.letters)
            if (tgt) tgt = tgt->minus(DimVector::unit(rank, size_t(l)));
        size_t tdim = tgt ? dim(*tgt) : 0;
        ExactMatrix acc = ExactMatrix::identity(dim(from));
        std::optional<DimVector> cur = from;
        for (size_t p = w.size(); p-- > 0;) {
            if (!cur) return ExactMatrix(tdim, dim(from));
            acc = getE(size_t(w.letters[p]), *cur, rank) * acc;
            cur = cur->minus(DimVector::unit(rank, size_t(w.letters[p])));
        }
        if (acc.rows() != tdim) return ExactMatrix(tdim, dim(from));
        return acc;
    }
    ExactMatrix fword(const Word& w, const DimVector& from, size_t rank) const {
        ExactMatrix acc = ExactMatrix::identity(dim(from));
        DimVector cur = from;
        for (size_t p = w.size(); p-- > 0;) {
            acc = getF(size_t(w.letters[p]), cur, rank) * acc;
            cur = cur + DimVector::unit(rank, size_t(w.letters[p]));
        }
        return acc;
    }
};

Stage stage_of_factor(const IrredModule& f, const Weight& lambda, size_t rank) {
    Stage s;
    s.lambdas = {lambda};
    s.nparts = 1;
    for (const auto& nu : f.drops()) {
        std::vector<TensorModule::BasisElt> els;
        for (size_t idx = 0; idx < f.dim(nu); ++idx)
            els.push_back(TensorModule::BasisElt{{{nu, idx}}});
        for (size_t idx = 0; idx < els.size(); ++idx) s.index[nu][els[idx]] = idx;
        s.basis[nu] = std::move(els);
        s.drops.push_back(nu);
        s.psi[nu] = ExactMatrix::identity(f.dim(nu));
        for (size_t i = 0; i < rank; ++i) {
            s.matE[{i, nu}] = f.matE(i, nu);
            s.matF[{i, nu}] = f.matF(i, nu);
        }
    }
    return s;
}

// tensor of two assembled stages: coproduct actions and
// Psi_{AB} = Theta o (Psi_A (x) Psi_B)
Stage combine(const CartanDatum& datum, const Stage& A, const Stage& B,
              const ThetaExpansion& theta) {
    size_t n = datum.rank();
    Stage out;
    out.lambdas = A.lambdas;
    out.lambdas.insert(out.lambdas.end(), B.lambdas.begin(), B.lambdas.end());
    out.nparts = A.nparts + B.nparts;

    std::set<DimVector> alldrops;
    for (const auto& nu1 : A.drops)
        for (const auto& nu2 : B.drops) alldrops.insert(nu1 + nu2);
    for (const auto& nu : alldrops) {
        std::vector<TensorModule::BasisElt> els;
        for (const auto& nu1 : A.drops) {
            auto nu2 = nu.minus(nu1);
            if (!nu2 || B.dim(*nu2) == 0) continue;
            for (const auto& s : A.basis.at(nu1))
                for (const auto& t : B.basis.at(*nu2)) {
                    TensorModule::BasisElt e = s;
                    e.parts.insert(e.parts.end(), t.parts.begin(), t.parts.end());
                    els.push_back(std::move(e));
                }
        }
        std::sort(els.begin(), els.end());
        for (size_t idx = 0; idx < els.size(); ++idx) out.index[nu][els[idx]] = idx;
        out.basis[nu] = std::move(els);
        out.drops.push_back(nu);
    }
    std::sort(out.drops.begin(), out.drops.end());

    // split a combined element at the A|B boundary
    auto split = [&](const TensorModule::BasisElt& e) {
        TensorModule::BasisElt s, t;
        s.parts.assign(e.parts.begin(), e.parts.begin() + A.nparts);
        t.parts.assign(e.parts.begin() + A.nparts, e.parts.end());
        DimVector nu1 = DimVector::zero(n), nu2 = DimVector::zero(n);
        for (const auto& [d, idx] : s.parts) nu1 = nu1 + d;
        for (const auto& [d, idx] : t.parts) nu2 = nu2 + d;
        return std::make_tuple(s, nu1, t, nu2);
    };
    auto join = [&](const TensorModule::BasisElt& s, const TensorModule::BasisElt& t) {
        TensorModule::BasisElt e = s;
        e.parts.insert(e.parts.end(), t.parts.begin(), t.parts.end());
        return e;
    };

    for (const auto& nu : out.drops) {
        const auto& els = out.basis.at(nu);
        for (size_t i = 0; i < n; ++i) {
            DimVector ei = DimVector::unit(n, i);
            auto dnOpt = nu.minus(ei);
            size_t ddim = dnOpt ? out.dim(*dnOpt) : 0;
            ExactMatrix E(ddim, els.size());
            DimVector up = nu + ei;
            ExactMatrix F(out.dim(up), els.size());
            for (size_t col = 0; col < els.size(); ++col) {
                auto [s, nu1, t, nu2] = split(els[col]);
                Weight muA = datum.wt(A.lambdas, nu1);
                Weight muB = datum.wt(B.lambdas, nu2);
                size_t sidx = A.index.at(nu1).at(s);
                size_t tidx = B.index.at(nu2).at(t);
                if (ddim > 0) {
                    // Delta(E_i) = E_i (x) 1 + K_i (x) E_i
                    ExactMatrix ea = A.getE(i, nu1, n);
                    if (ea.rows() > 0) {
                        for (const auto& [srow, sridx] : A.index.at(nu1.minus(ei).value())) {
                            const RationalFn& v = ea.at(sridx, sidx);
                            if (!v.is_zero())
                                E.at(out.index.at(*dnOpt).at(join(srow, t)), col) += v;
                        }
                    }
                    ExactMatrix eb = B.getE(i, nu2, n);
                    if (eb.rows() > 0) {
                        RationalFn ka(LaurentPoly::v(int(muA[i])));
                        for (const auto& [trow, tridx] : B.index.at(nu2.minus(ei).value())) {
                            const RationalFn& v = eb.at(tridx, tidx);
                            if (!v.is_zero())
                                E.at(out.index.at(*dnOpt).at(join(s, trow)), col) += v * ka;
                        }
                    }
                }
                if (F.rows() > 0) {
                    // Delta(F_i) = F_i (x) K_{-i} + 1 (x) F_i
                    ExactMatrix fa = A.getF(i, nu1, n);
                    if (fa.rows() > 0) {
                        RationalFn kb(LaurentPoly::v(int(-muB[i])));
                        for (const auto& [srow, sridx] : A.index.at(nu1 + ei)) {
                            const RationalFn& v = fa.at(sridx, sidx);
                            if (!v.is_zero())
                                F.at(out.index.at(up).at(join(srow, t)), col) += v * kb;
                        }
                    }
                    ExactMatrix fb = B.getF(i, nu2, n);
                    if (fb.rows() > 0) {
                        for (const auto& [trow, tridx] : B.index.at(nu2 + ei)) {
                            const RationalFn& v = fb.at(tridx, tidx);
                            if (!v.is_zero())
                                F.at(out.index.at(up).at(join(s, trow)), col) += v;
                        }
                    }
                }
            }
            out.matE[{i, nu}] = std::move(E);
            out.matF[{i, nu}] = std::move(F);
        }
    }

    for (const auto& nu : out.drops) {
        const auto& els = out.basis.at(nu);
        ExactMatrix theta_mat = ExactMatrix::identity(els.size());
        for (const auto& [kappa, terms] : theta.terms()) {
            for (size_t col = 0; col < els.size(); ++col) {
                auto [s, nu1, t, nu2] = split(els[col]);
                DimVector tgt1 = nu1 + kappa;
                if (A.dim(tgt1) == 0) continue;
                auto tgt2 = nu2.minus(kappa);
                if (!tgt2 || B.dim(*tgt2) == 0) continue;
                size_t sidx = A.index.at(nu1).at(s);
                size_t tidx = B.index.at(nu2).at(t);
                for (const auto& term : terms) {
                    ExactMatrix am = A.fword(term.f_word, nu1, n);
                    ExactMatrix bm = B.eword(term.e_word, nu2, n);
                    if (am.rows() == 0 || bm.rows() == 0) continue;
                    for (const auto& [srow, sridx] : A.index.at(tgt1)) {
                        const RationalFn& va = am.at(sridx, sidx);
                        if (va.is_zero()) continue;
                        for (const auto& [trow, tridx] : B.index.at(*tgt2)) {
                            const RationalFn& vb = bm.at(tridx, tidx);
                            if (vb.is_zero()) continue;
                            theta_mat.at(out.index.at(nu).at(join(srow, trow)), col) +=
                                term.coeff * va * vb;
                        }
                    }
                }
            }
        }
        // Psi_AB = Theta * (Psi_A (x) Psi_B)
        ExactMatrix lift(els.size(), els.size());
        for (size_t col = 0; col < els.size(); ++col) {
            auto [s, nu1, t, nu2] = split(els[col]);
            const ExactMatrix& PA = A.psi.at(nu1);
            const ExactMatrix& PB = B.psi.at(nu2);
            size_t sidx = A.index.at(nu1).at(s);
            size_t tidx = B.index.at(nu2).at(t);
            for (const auto& [srow, sridx] : A.index.at(nu1)) {
                const RationalFn& va = PA.at(sridx, sidx);
                if (va.is_zero()) continue;
                for (const auto& [trow, tridx] : B.index.at(nu2)) {
                    const RationalFn& vb = PB.at(tridx, tidx);
                    if (vb.is_zero()) continue;
                    lift.at(out.index.at(nu).at(join(srow, trow)), col) += va * vb;
                }
            }
        }
        out.psi[nu] = theta_mat * lift;
    }
    return out;
}

}  // namespace

TensorModule TensorModule::build(const CartanDatum& datum, const std::vector<Weight>& lambdas,
                                 long long depth, bool right_nested) {
    if (lambdas.empty()) fail(Errc::Usage, "tensor module needs at least one factor");
    TensorModule mod;
    mod.datum_ = &datum;
    mod.lambdas_ = lambdas;
    mod.depth_ = depth;
    size_t n = datum.rank();

    long long total_height = 0;
    for (const auto& lam : lambdas) {
        mod.factors_.push_back(IrredModule::build(datum, lam, depth));
        const IrredModule& f = mod.factors_.back();
        if (!f.complete())
            fail(Errc::DepthTooSmall, "factor L(" + lam.str() + ") not closed at depth " +
                                          std::to_string(depth));
        total_height += f.drops().empty() ? 0 : f.drops().back().height();
    }
    if (total_height > depth)
        fail(Errc::DepthTooSmall, "tensor product needs depth >= " +
                                      std::to_string(total_height));

    long long theta_depth = 0;
    {
        long long prefix = mod.factors_[0].drops().back().height();
        for (size_t k = 1; k < mod.factors_.size(); ++k) {
            long long fk = mod.factors_[k].drops().back().height();
            theta_depth = std::max(theta_depth, std::min(prefix, fk));
            prefix += fk;
        }
    }
    mod.theta_ = ThetaExpansion::compute(datum, theta_depth);

    Stage stage;
    if (!right_nested) {
        stage = stage_of_factor(mod.factors_[0], lambdas[0], n);
        for (size_t k = 1; k < mod.factors_.size(); ++k)
            stage = combine(datum, stage, stage_of_factor(mod.factors_[k], lambdas[k], n),
                            mod.theta_);
    } else {
        size_t last = mod.factors_.size() - 1;
        stage = stage_of_factor(mod.factors_[last], lambdas[last], n);
        for (size_t k = last; k-- > 0;)
            stage = combine(datum, stage_of_factor(mod.factors_[k], lambdas[k], n), stage,
                            mod.theta_);
    }

    mod.drops_ = stage.drops;
    mod.basis_ = std::move(stage.basis);
    mod.index_ = std::move(stage.index);
    mod.matE_ = std::move(stage.matE);
    mod.matF_ = std::move(stage.matF);
    mod.psi_ = std::move(stage.psi);
    mod.compute_canonical_bases();
    return mod;
}

size_t TensorModule::dim(const DimVector& nu) const {
    auto it = basis_.find(nu);
    return it == basis_.end() ? 0 : it->second.size();
}

const std::vector<TensorModule::BasisElt>& TensorModule::basis(const DimVector& nu) const {
    static const std::vector<BasisElt> none;
    auto it = basis_.find(nu);
    return it == basis_.end() ? none : it->second;
}

std::vector<size_t> TensorModule::leading_indices(const BasisElt& b) const {
    std::vector<size_t> out;
    for (size_t l = 0; l < b.parts.size(); ++l) {
        const IrredModule& f = factors_[l];
        size_t global = 0;
        for (const auto& d : f.drops()) {
            if (d == b.parts[l].first) break;
            global += f.dim(d);
        }
        out.push_back(global + b.parts[l].second);
    }
    return out;
}

ExactMatrix TensorModule::matE(size_t i, const DimVector& from) const {
    auto it = matE_.find({i, from});
    if (it != matE_.end()) return it->second;
    auto dn = from.minus(DimVector::unit(datum_->rank(), i));
    return ExactMatrix(dn ? dim(*dn) : 0, dim(from));
}

ExactMatrix TensorModule::matF(size_t i, const DimVector& from) const {
    auto it = matF_.find({i, from});
    if (it != matF_.end()) return it->second;
    return ExactMatrix(dim(from + DimVector::unit(datum_->rank(), i)), dim(from));
}

const ExactMatrix& TensorModule::psi(const DimVector& nu) const {
    auto it = psi_.find(nu);
    if (it == psi_.end()) fail(Errc::Usage, "no slice at drop " + nu.str());
    return it->second;
}

std::vector<RationalFn> TensorModule::apply_psi(const DimVector& nu,
                                                const std::vector<RationalFn>& coords) const {
    std::vector<RationalFn> barred;
    barred.reserve(coords.size());
    for (const auto& c : coords) barred.push_back(c.bar());
    return psi(nu).apply(barred);
}

Weight TensorModule::slice_weight(const DimVector& nu) const {
    return datum_->wt(lambdas_, nu);
}

void TensorModule::compute_canonical_bases() {
    for (const auto& nu : drops_) {
        const ExactMatrix& P = psi_.at(nu);
        size_t d = P.rows();
        // entries must already sit in the integral lattice
        std::vector<std::vector<LaurentPoly>> L(d, std::vector<LaurentPoly>(d));
        for (size_t r = 0; r < d; ++r)
            for (size_t c = 0; c < d; ++c) {
                if (!P.at(r, c).is_polynomial())
                    fail(Errc::LatticeViolation,
                         "Psi matrix entry escapes Z[v,v^-1] at drop " + nu.str());
                L[r][c] = P.at(r, c).as_poly();
            }
        for (size_t t = 0; t < d; ++t)
            if (!L[t][t].is_one())
                fail(Errc::NotUnitriangular, "Psi diagonal is not 1 at drop " + nu.str());

        // topological order: everything Psi(b) touches must precede b
        std::vector<size_t> indeg(d, 0);
        for (size_t t = 0; t < d; ++t)
            for (size_t s = 0; s < d; ++s)
                if (s != t && !L[s][t].is_zero()) ++indeg[t];
        std::vector<size_t> order;
        std::vector<bool> placed(d, false);
        for (size_t step = 0; step < d; ++step) {
            size_t pick = d;
            for (size_t t = 0; t < d; ++t)
                if (!placed[t] && indeg[t] == 0) { pick = t; break; }
            if (pick == d)
                fail(Errc::NotUnitriangular,
                     "Psi dependency digraph has a cycle at drop " + nu.str());
            placed[pick] = true;
            order.push_back(pick);
            for (size_t t = 0; t < d; ++t)
                if (!placed[t] && !L[pick][t].is_zero()) --indeg[t];
        }
        std::vector<size_t> pos(d);
        for (size_t p = 0; p < d; ++p) pos[order[p]] = p;

        // triangular correction: beta_b = b + sum over earlier c of p_c c
        std::vector<CBTElement> out;
        for (size_t p = 0; p < d; ++p) {
            size_t b = order[p];
            CBTElement el;
            el.drop = nu;
            el.leading = b;
            std::map<size_t, LaurentPoly> corr;  // index -> p_c
            for (size_t q = p; q-- > 0;) {
                size_t c = order[q];
                LaurentPoly K = L[c][b];
                for (size_t q2 = q + 1; q2 < p; ++q2) {
                    size_t dmid = order[q2];
                    auto it = corr.find(dmid);
                    if (it == corr.end() || L[c][dmid].is_zero()) continue;
                    K += it->second.bar() * L[c][dmid];
                }
                if (K.is_zero()) continue;
                if (!(K.bar() == -K) || K.coeff(0) != 0)
                    fail(Errc::LatticeViolation,
                         "triangular correction has no v^-1 solution at drop " + nu.str());
                LaurentPoly pc;
                for (const auto& [e, cf] : K.terms())
                    if (e < 0) pc += LaurentPoly::term(cf, e);
                if (!pc.is_zero()) corr[c] = pc;
            }
            el.coeffs[b] = LaurentPoly(1);
            for (const auto& [c, pc] : corr) el.coeffs[c] = pc;
            // exact fixedness of the corrected element
            std::vector<RationalFn> coords(d);
            for (const auto& [c, pc] : el.coeffs) coords[c] = RationalFn(pc);
            auto img = apply_psi(nu, coords);
            for (size_t r = 0; r < d; ++r)
                if (!(img[r] == coords[r]))
                    fail(Errc::Internal, "corrected element is not Psi-fixed at drop " + nu.str());
            out.push_back(std::move(el));
        }
        cb_[nu] = std::move(out);
    }
}

const std::vector<TensorModule::CBTElement>& TensorModule::canonical_basis(
    const DimVector& nu) const {
    static const std::vector<CBTElement> none;
    auto it = cb_.find(nu);
    return it == cb_.end() ? none : it->second;
}

std::vector<std::vector<RationalFn>> TensorModule::highest_vectors(const DimVector& nu) const {
    size_t d = dim(nu);
    size_t n = datum_->rank();
    size_t rows = 0;
    std::vector<ExactMatrix> mats;
    for (size_t i = 0; i < n; ++i) {
        mats.push_back(matE(i, nu));
        rows += mats.back().rows();
    }
    ExactMatrix stacked(rows, d);
    size_t r0 = 0;
    for (const auto& m : mats) {
        for (size_t r = 0; r < m.rows(); ++r)
            for (size_t c = 0; c < d; ++c) stacked.at(r0 + r, c) = m.at(r, c);
        r0 += m.rows();
    }
    return stacked.kernel();
}

std::map<DimVector, ExactMatrix> TensorModule::submodule_spans(const DimVector& nu_mu,
                                                               bool strict) const {
    // spans per drop as column collections, closed under every F_i
    std::map<DimVector, ExactMatrix> span;
    std::map<DimVector, size_t> rank_of;
    auto try_add = [&](const DimVector& nu, const std::vector<RationalFn>& vec) {
        size_t d = dim(nu);
        auto it = span.find(nu);
        size_t cur = it == span.end() ? 0 : it->second.cols();
        ExactMatrix m(d, cur + 1);
        for (size_t c = 0; c < cur; ++c)
            for (size_t r = 0; r < d; ++r) m.at(r, c) = it->second.at(r, c);
        for (size_t r = 0; r < d; ++r) m.at(r, cur) = vec[r];
        if (m.rank() == rank_of[nu]) return false;
        span[nu] = std::move(m);
        rank_of[nu] += 1;
        return true;
    };

    std::vector<std::pair<DimVector, std::vector<RationalFn>>> work;
    for (const auto& nu : drops_) {
        if (!nu.leq_componentwise(nu_mu)) continue;
        if (strict && nu == nu_mu) continue;
        for (const auto& v : highest_vectors(nu))
            if (try_add(nu, v)) work.push_back({nu, v});
    }
    size_t n = datum_->rank();
    while (!work.empty()) {
        auto [nu, vec] = work.back();
        work.pop_back();
        for (size_t i = 0; i < n; ++i) {
            DimVector up = nu + DimVector::unit(n, i);
            if (dim(up) == 0) continue;
            auto img = matF(i, nu).apply(vec);
            bool zero = std::all_of(img.begin(), img.end(),
                                    [](const RationalFn& f) { return f.is_zero(); });
            if (!zero && try_add(up, img)) work.push_back({up, img});
        }
    }
    return span;
}

std::map<DimVector, size_t> TensorModule::submodule_dims(const DimVector& nu_mu,
                                                         bool strict) const {
    std::map<DimVector, size_t> dims;
    for (const auto& [nu, m] : submodule_spans(nu_mu, strict)) dims[nu] = m.cols();
    return dims;
}

void TensorModule::classify_filtration() {
    if (!datum_->finite_type())
        fail(Errc::FiniteTypeOnly, "filtration classes need a finite-type datum");
    // candidate classes: drops carrying highest-weight vectors
    std::vector<DimVector> hw_drops;
    for (const auto& nu : drops_)
        if (!highest_vectors(nu).empty()) hw_drops.push_back(nu);

    std::map<DimVector, std::map<DimVector, ExactMatrix>> sub_ge;
    for (const auto& numu : hw_drops) sub_ge[numu] = submodule_spans(numu, false);

    for (auto& [nu, els] : cb_) {
        for (auto& el : els) {
            std::vector<RationalFn> coords(dim(nu));
            for (const auto& [c, pc] : el.coeffs) coords[c] = RationalFn(pc);
            std::vector<DimVector> member;
            for (const auto& numu : hw_drops) {
                auto it = sub_ge.at(numu).find(nu);
                if (it == sub_ge.at(numu).end()) continue;
                const ExactMatrix& spanm = it->second;
                if (spanm.cols() == dim(nu)) {
                    member.push_back(numu);
                    continue;
                }
                ExactMatrix test(dim(nu), spanm.cols() + 1);
                for (size_t c = 0; c < spanm.cols(); ++c)
                    for (size_t r = 0; r < dim(nu); ++r) test.at(r, c) = spanm.at(r, c);
                for (size_t r = 0; r < dim(nu); ++r) test.at(r, spanm.cols()) = coords[r];
                if (test.rank() == spanm.cols()) member.push_back(numu);
            }
            // maximal mu = componentwise-minimal drop among memberships
            std::vector<DimVector> minimal;
            for (const auto& cand : member) {
                bool is_min = true;
                for (const auto& other : member)
                    if (!(other == cand) && other.leq_componentwise(cand)) is_min = false;
                if (is_min) minimal.push_back(cand);
            }
            if (minimal.size() != 1)
                fail(Errc::Internal, "filtration class is not unique at drop " + nu.str());
            el.filtration_class = slice_weight(minimal[0]);
        }
    }
}

void TensorModule::check_psi_involution() const {
    for (const auto& nu : drops_) {
        const ExactMatrix& P = psi_.at(nu);
        ExactMatrix Pbar(P.rows(), P.cols());
        for (size_t r = 0; r < P.rows(); ++r)
            for (size_t c = 0; c < P.cols(); ++c) Pbar.at(r, c) = P.at(r, c).bar();
        if (!(P * Pbar == ExactMatrix::identity(P.rows())))
            fail(Errc::Internal, "Psi is not an involution at drop " + nu.str());
    }
}

void TensorModule::check_psi_equivariance() const {
    size_t n = datum_->rank();
    for (const auto& nu : drops_) {
        const ExactMatrix& P = psi_.at(nu);
        for (size_t i = 0; i < n; ++i) {
            auto dn = nu.minus(DimVector::unit(n, i));
            if (dn && dim(*dn) > 0) {
                ExactMatrix E = matE(i, nu);
                ExactMatrix Ebar(E.rows(), E.cols());
                for (size_t r = 0; r < E.rows(); ++r)
                    for (size_t c = 0; c < E.cols(); ++c) Ebar.at(r, c) = E.at(r, c).bar();
                if (!(psi_.at(*dn) * Ebar == E * P))
                    fail(Errc::Internal, "Psi does not intertwine E at drop " + nu.str());
            }
            DimVector up = nu + DimVector::unit(n, i);
            if (dim(up) > 0) {
                ExactMatrix F = matF(i, nu);
                ExactMatrix Fbar(F.rows(), F.cols());
                for (size_t r = 0; r < F.rows(); ++r)
                    for (size_t c = 0; c < F.cols(); ++c) Fbar.at(r, c) = F.at(r, c).bar();
                if (!(psi_.at(up) * Fbar == F * P))
                    fail(Errc::Internal, "Psi does not intertwine F at drop " + nu.str());
            }
        }
    }
}

namespace {

// two-factor Theta action and coproduct matrices, for the explicit
// intertwining and lattice checks
struct TwoFactor {
    const TensorModule* mod;
    const IrredModule *A, *B;

    std::tuple<DimVector, size_t, DimVector, size_t> split(
        const TensorModule::BasisElt& e) const {
        return {e.parts[0].first, e.parts[0].second, e.parts[1].first, e.parts[1].second};
    }
    size_t index_of(const DimVector& nu, const TensorModule::BasisElt& e) const {
        const auto& els = mod->basis(nu);
        for (size_t i = 0; i < els.size(); ++i)
            if (els[i] == e) return i;
        fail(Errc::Internal, "basis element not found");
    }

    ExactMatrix theta_mat(const DimVector& nu) const {
        const auto& els = mod->basis(nu);
        ExactMatrix T = ExactMatrix::identity(els.size());
        for (const auto& [kappa, terms] : mod->theta().terms())
            for (size_t col = 0; col < els.size(); ++col) {
                auto [nu1, a, nu2, b] = split(els[col]);
                auto tgt2 = nu2.minus(kappa);
                if (!tgt2 || B->dim(*tgt2) == 0 || A->dim(nu1 + kappa) == 0) continue;
                for (const auto& term : terms) {
                    ExactMatrix am = A->apply_f_word(term.f_word, nu1);
                    ExactMatrix bm = B->apply_e_word(term.e_word, nu2);
                    if (am.rows() == 0 || bm.rows() == 0) continue;
                    for (size_t r1 = 0; r1 < am.rows(); ++r1) {
                        if (am.at(r1, a).is_zero()) continue;
                        for (size_t r2 = 0; r2 < bm.rows(); ++r2) {
                            if (bm.at(r2, b).is_zero()) continue;
                            TensorModule::BasisElt t;
                            t.parts = {{nu1 + kappa, r1}, {*tgt2, r2}};
                            T.at(index_of(nu, t), col) +=
                                term.coeff * am.at(r1, a) * bm.at(r2, b);
                        }
                    }
                }
            }
        return T;
    }

    // coproduct actions; barred=true uses the bar-conjugated coproduct
    ExactMatrix act_e(size_t i, const DimVector& nu, bool barred) const {
        size_t n = mod->datum().rank();
        const auto& els = mod->basis(nu);
        auto dn = nu.minus(DimVector::unit(n, i));
        size_t ddim = dn ? mod->dim(*dn) : 0;
        ExactMatrix E(ddim, els.size());
        if (ddim == 0) return E;
        for (size_t col = 0; col < els.size(); ++col) {
            auto [nu1, a, nu2, b] = split(els[col]);
            Weight muA = mod->datum().wt({mod->lambdas()[0]}, nu1);
            ExactMatrix ea = A->matE(i, nu1);
            if (ea.rows() > 0) {
                for (size_t r = 0; r < ea.rows(); ++r) {
                    if (ea.at(r, a).is_zero()) continue;
                    TensorModule::BasisElt t;
                    t.parts = {{nu1.minus(DimVector::unit(n, i)).value(), r}, {nu2, b}};
                    E.at(index_of(*dn, t), col) += ea.at(r, a);
                }
            }
            ExactMatrix eb = B->matE(i, nu2);
            if (eb.rows() > 0) {
                RationalFn ka(LaurentPoly::v(int(barred ? -muA[i] : muA[i])));
                for (size_t r = 0; r < eb.rows(); ++r) {
                    if (eb.at(r, b).is_zero()) continue;
                    TensorModule::BasisElt t;
                    t.parts = {{nu1, a}, {nu2.minus(DimVector::unit(n, i)).value(), r}};
                    E.at(index_of(*dn, t), col) += eb.at(r, b) * ka;
                }
            }
        }
        return E;
    }

    ExactMatrix act_f(size_t i, const DimVector& nu, bool barred) const {
        size_t n = mod->datum().rank();
        const auto& els = mod->basis(nu);
        DimVector up = nu + DimVector::unit(n, i);
        size_t udim = mod->dim(up);
        ExactMatrix F(udim, els.size());
        if (udim == 0) return F;
        for (size_t col = 0; col < els.size(); ++col) {
            auto [nu1, a, nu2, b] = split(els[col]);
            Weight muB = mod->datum().wt({mod->lambdas()[1]}, nu2);
            ExactMatrix fa = A->matF(i, nu1);
            if (fa.rows() > 0) {
                RationalFn kb(LaurentPoly::v(int(barred ? muB[i] : -muB[i])));
                for (size_t r = 0; r < fa.rows(); ++r) {
                    if (fa.at(r, a).is_zero()) continue;
                    TensorModule::BasisElt t;
                    t.parts = {{nu1 + DimVector::unit(n, i), r}, {nu2, b}};
                    F.at(index_of(up, t), col) += fa.at(r, a) * kb;
                }
            }
            ExactMatrix fb = B->matF(i, nu2);
            if (fb.rows() > 0) {
                for (size_t r = 0; r < fb.rows(); ++r) {
                    if (fb.at(r, b).is_zero()) continue;
                    TensorModule::BasisElt t;
                    t.parts = {{nu1, a}, {nu2 + DimVector::unit(n, i), r}};
                    F.at(index_of(up, t), col) += fb.at(r, b);
                }
            }
        }
        return F;
    }
};

}  // namespace

void TensorModule::check_theta_intertwining() const {
    if (factors_.size() != 2)
        fail(Errc::Usage, "the explicit Theta check runs on two-factor products");
    TwoFactor tf{this, &factors_[0], &factors_[1]};
    size_t n = datum_->rank();
    for (const auto& nu : drops_) {
        ExactMatrix T = tf.theta_mat(nu);
        for (size_t i = 0; i < n; ++i) {
            auto dn = nu.minus(DimVector::unit(n, i));
            if (dn && dim(*dn) > 0) {
                ExactMatrix lhs = tf.act_e(i, nu, false);  // Delta(E) after Theta
                ExactMatrix rhs = tf.act_e(i, nu, true);   // Theta after barDelta(E)
                if (!(lhs * T == tf.theta_mat(*dn) * rhs))
                    fail(Errc::Internal, "Theta intertwining fails for E at drop " + nu.str());
            }
            DimVector up = nu + DimVector::unit(n, i);
            if (dim(up) > 0) {
                ExactMatrix lhs = tf.act_f(i, nu, false);
                ExactMatrix rhs = tf.act_f(i, nu, true);
                if (!(lhs * T == tf.theta_mat(up) * rhs))
                    fail(Errc::Internal, "Theta intertwining fails for F at drop " + nu.str());
            }
        }
    }
}

void TensorModule::check_theta_lattice() const {
    if (factors_.size() != 2)
        fail(Errc::Usage, "the Theta lattice check runs on two-factor products");
    TwoFactor tf{this, &factors_[0], &factors_[1]};
    for (const auto& nu : drops_) {
        ExactMatrix T = tf.theta_mat(nu);
        for (size_t r = 0; r < T.rows(); ++r)
            for (size_t c = 0; c < T.cols(); ++c)
                if (!T.at(r, c).is_polynomial())
                    fail(Errc::LatticeViolation,
                         "Theta action escapes the A-lattice at drop " + nu.str());
    }
}

void TensorModule::check_canonical_basis() const {
    for (const auto& nu : drops_) {
        const auto& els = canonical_basis(nu);
        if (els.size() != dim(nu))
            fail(Errc::Internal, "canonical basis size mismatch at drop " + nu.str());
        std::set<size_t> seen;
        for (const auto& el : els) {
            auto lead = el.coeffs.find(el.leading);
            if (lead == el.coeffs.end() || !lead->second.is_one())
                fail(Errc::Internal, "leading coefficient must be 1");
            for (const auto& [c, pc] : el.coeffs) {
                if (c == el.leading) continue;
                if (!pc.in_lattice_A(true))
                    fail(Errc::LatticeViolation, "correction escapes v^-1 Z[v^-1]");
            }
            // Psi-fixedness
            std::vector<RationalFn> coords(dim(nu));
            for (const auto& [c, pc] : el.coeffs) coords[c] = RationalFn(pc);
            auto img = apply_psi(nu, coords);
            for (size_t r = 0; r < coords.size(); ++r)
                if (!(img[r] == coords[r]))
                    fail(Errc::Internal, "canonical element is not Psi-fixed");
            seen.insert(el.leading);
        }
        if (seen.size() != els.size())
            fail(Errc::Internal, "leading tensors must be distinct at drop " + nu.str());
    }
}

std::string TensorModule::canonical_basis_json() const {
    std::ostringstream os;
    os << "[";
    bool first = true;
    for (const auto& nu : drops_) {
        const auto& els = canonical_basis(nu);
        const auto& bas = basis(nu);
        for (const auto& el : els) {
            if (!first) os << ",";
            first = false;
            auto lead = leading_indices(bas[el.leading]);
            os << "{\"leading\":[";
            for (size_t l = 0; l < lead.size(); ++l) os << (l ? "," : "") << lead[l];
            os << "],\"coeffs\":{";
            bool f2 = true;
            for (const auto& [c, pc] : el.coeffs) {
                auto key = leading_indices(bas[c]);
                os << (f2 ? "" : ",") << "\"";
                for (size_t l = 0; l < key.size(); ++l) os << (l ? "," : "") << key[l];
                os << "\":\"" << pc.str() << "\"";
                f2 = false;
            }
            os << "},\"class\":\""
               << (el.filtration_class ? el.filtration_class->str() : "") << "\"}";
        }
    }
    os << "]";
    return os.str();
}

}  // namespace kmd
