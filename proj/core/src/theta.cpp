#include "kmd/theta.hpp"

#include <functional>
#include <sstream>

#include "kmd/error.hpp"

namespace kmd {

namespace {

void for_each_drop_of_height(size_t n, long long h, const std::function<void(DimVector)>& emit) {
    std::vector<long long> cur(n, 0);
    std::function<void(size_t, long long)> rec = [&](size_t i, long long rem) {
        if (i + 1 == n) {
            cur[i] = rem;
            emit(DimVector(std::vector<long long>(cur)));
            return;
        }
        for (long long v = 0; v <= rem; ++v) {
            cur[i] = v;
            rec(i + 1, rem - v);
        }
    };
    rec(0, h);
}

}  // namespace

ThetaExpansion ThetaExpansion::compute(const CartanDatum& datum, long long depth) {
    ThetaExpansion theta;
    theta.datum_ = &datum;
    theta.depth_ = depth;
    size_t n = datum.rank();
    UminusBasis ub(datum, depth + 1);

    // known coefficients per drop, keyed by (row word index, col word index)
    std::map<DimVector, std::vector<std::vector<RationalFn>>> coeffs;
    coeffs[DimVector::zero(n)] = {{RationalFn(1)}};

    RationalFn vminus = RationalFn(LaurentPoly::v(1) - LaurentPoly::v(-1));

    for (long long h = 1; h <= depth; ++h) {
        for_each_drop_of_height(n, h, [&](DimVector nu) {
            const auto& W = ub.basis(nu);
            size_t m = W.size();
            if (m == 0) return;

            // unknowns c_{a,b}: coefficient of E_{W[a]} (x) F_{W[b]}
            // equations per direction i: indexed by (U+ basis of nu, U- basis
            // of nu - e_i, K_i / K_{-i} component)
            struct Block {
                size_t i;
                std::vector<Word> lower;  // basis at nu - e_i
            };
            std::vector<Block> blocks;
            size_t rows = 0;
            for (size_t i = 0; i < n; ++i) {
                auto dn = nu.minus(DimVector::unit(n, i));
                if (!dn) continue;
                Block b;
                b.i = i;
                b.lower = ub.basis(*dn);
                rows += m * b.lower.size() * 2;
                blocks.push_back(std::move(b));
            }

            ExactMatrix A(rows, m * m);
            std::vector<RationalFn> rhs(rows);
            size_t row0 = 0;
            for (const auto& blk : blocks) {
                size_t i = blk.i;
                size_t lm = blk.lower.size();
                auto row_at = [&](size_t a, size_t b, size_t kpart) {
                    return row0 + (a * lm + b) * 2 + kpart;  // kpart 0: K_i, 1: K_{-i}
                };

                // LHS: (1 (x) F_i) Theta_nu - Theta_nu (1 (x) F_i), with
                // [F_i, E_w] = sum_p E_{w minus p} (-v^{(i,beta)} K_i
                //                                   + v^{-(i,beta)} K_{-i}) / (v - v^-1)
                for (size_t a = 0; a < m; ++a)
                    for (size_t b2 = 0; b2 < m; ++b2) {
                        const Word& w2 = W[b2];
                        std::vector<long long> suffix(n, 0);
                        std::vector<long long> pair_i(w2.size());
                        for (size_t p = w2.size(); p-- > 0;) {
                            long long cb = 0;
                            for (size_t j = 0; j < n; ++j) cb += datum.a(i, j) * suffix[j];
                            pair_i[p] = cb;  // (alpha_i, suffix weight)
                            suffix[size_t(w2.letters[p])] += 1;
                        }
                        for (size_t p = 0; p < w2.size(); ++p) {
                            if (w2.letters[p] != int(i)) continue;
                            auto coords = ub.expand(w2.drop_at(p));
                            RationalFn kplus =
                                -RationalFn(LaurentPoly::v(int(pair_i[p]))) / vminus;
                            RationalFn kminus =
                                RationalFn(LaurentPoly::v(int(-pair_i[p]))) / vminus;
                            for (size_t b = 0; b < lm; ++b) {
                                if (coords[b].is_zero()) continue;
                                A.at(row_at(a, b, 0), a * m + b2) += kplus * coords[b];
                                A.at(row_at(a, b, 1), a * m + b2) += kminus * coords[b];
                            }
                        }
                    }

                // RHS: Theta_{nu-e_i} (F_i (x) K_i) - (F_i (x) K_{-i}) Theta_{nu-e_i}
                auto dn = nu.minus(DimVector::unit(n, i)).value();
                const auto& prev = coeffs.at(dn);
                const auto& Wp = ub.basis(dn);
                long long pair_mu = 0;  // (alpha_i, nu - e_i)
                for (size_t j = 0; j < n; ++j) pair_mu += datum.a(i, j) * dn[j];
                for (size_t u1 = 0; u1 < Wp.size(); ++u1)
                    for (size_t u2 = 0; u2 < Wp.size(); ++u2) {
                        const RationalFn& d = prev[u1][u2];
                        if (d.is_zero()) continue;
                        // F_{u1} F_i : append i
                        Word app = Wp[u1];
                        app.letters.push_back(int(i));
                        auto ca = ub.expand(app);
                        for (size_t a = 0; a < m; ++a)
                            if (!ca[a].is_zero()) rhs[row_at(a, u2, 0)] += d * ca[a];
                        // F_i F_{u1} : prepend i, with the K_{-i} commutation factor
                        auto cp = ub.expand(Wp[u1].prepend(int(i)));
                        RationalFn scale = RationalFn(LaurentPoly::v(int(-pair_mu)));
                        for (size_t a = 0; a < m; ++a)
                            if (!cp[a].is_zero()) rhs[row_at(a, u2, 1)] -= scale * d * cp[a];
                    }
                row0 += m * lm * 2;
            }

            auto sol = A.solve(rhs);
            if (!sol.consistent || !sol.kernel.empty())
                fail(Errc::SingularSystem,
                     "quasi-R-matrix level " + nu.str() + " is not uniquely solvable");
            std::vector<std::vector<RationalFn>> c(m, std::vector<RationalFn>(m));
            std::vector<Term> terms;
            for (size_t a = 0; a < m; ++a)
                for (size_t b = 0; b < m; ++b) {
                    c[a][b] = sol.particular[a * m + b];
                    if (!c[a][b].is_zero()) terms.push_back({W[a], W[b], c[a][b]});
                }
            coeffs[nu] = std::move(c);
            if (!terms.empty()) theta.terms_[nu] = std::move(terms);
        });
    }
    return theta;
}

const std::vector<ThetaExpansion::Term>& ThetaExpansion::at(const DimVector& nu) const {
    static const std::vector<Term> none;
    auto it = terms_.find(nu);
    return it == terms_.end() ? none : it->second;
}

std::string ThetaExpansion::str() const {
    std::ostringstream os;
    os << "1 (x) 1";
    for (const auto& [nu, terms] : terms_) {
        for (const auto& t : terms) {
            MonomialWord mf = MonomialWord::from_word(t.f_word);
            MonomialWord me = MonomialWord::from_word(t.e_word);
            RationalFn c = t.coeff * RationalFn(me.run_factorial() * mf.run_factorial());
            os << " + (" << c.str() << ") " << mf.str(*datum_, "F") << " (x) "
               << me.str(*datum_, "E");
        }
    }
    return os.str();
}

}  // namespace kmd
