#include "kmd/character.hpp"

#include <algorithm>
#include <functional>

#include "kmd/detail/ratlin.hpp"
#include "kmd/error.hpp"

namespace kmd {

namespace {

// coordinate sum of C^{-1} * lambda, exact
Rat inv_cartan_height(const CartanDatum& datum, const Weight& lambda) {
    size_t n = datum.rank();
    detail::RatMat a(n, std::vector<Rat>(n));
    std::vector<Rat> b(n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) a[i][j] = Rat(BigInt(datum.a(i, j)));
        b[i] = Rat(BigInt(lambda[i]));
    }
    auto x = detail::solve_unique(std::move(a), b);
    if (!x) fail(Errc::Internal, "finite-type GCM must be invertible");
    Rat s(0);
    for (const auto& v : *x) s += v;
    return s;
}

void enumerate_level(size_t n, long long h, std::vector<long long>& cur, size_t i,
                     const std::function<void(const DimVector&)>& emit) {
    if (i + 1 == n) {
        cur[i] = h;
        emit(DimVector(std::vector<long long>(cur)));
        return;
    }
    for (long long v = 0; v <= h; ++v) {
        cur[i] = v;
        enumerate_level(n, h - v, cur, i + 1, emit);
    }
}

// multiplicity lookup with Weyl-orbit transport onto the dominant chamber
long long dom_lookup(const CartanDatum& datum, const std::vector<Weight>& lambdas,
                     const std::map<DimVector, long long>& domMult, DimVector drop) {
    Weight mu = datum.wt(lambdas, drop);
    size_t n = datum.rank();
    for (;;) {
        size_t neg = n;
        for (size_t i = 0; i < n; ++i)
            if (mu.c[i] < 0) { neg = i; break; }
        if (neg == n) break;
        long long t = mu.c[neg];
        drop.c[neg] += t;
        if (drop.c[neg] < 0) return 0;
        for (size_t j = 0; j < n; ++j) mu.c[j] -= t * datum.a(j, neg);
    }
    auto it = domMult.find(drop);
    return it == domMult.end() ? 0 : it->second;
}

}  // namespace

long long CharacterVector::dimension() const {
    long long s = 0;
    for (const auto& [d, m] : mult) s += m;
    return s;
}

CharacterVector freudenthal_character(const CartanDatum& datum, const Weight& lambda,
                                      long long depth) {
    if (!datum.finite_type())
        fail(Errc::FiniteTypeOnly, "Freudenthal characters need a finite-type datum");
    if (!datum.dominant(lambda)) fail(Errc::NotDominant, "character of a non-dominant weight");
    size_t n = datum.rank();
    auto posroots = datum.positive_roots(1);
    Weight rho = datum.rho();
    std::vector<Weight> lams{lambda};

    Rat hdom = inv_cartan_height(datum, lambda);
    long long H_dom = rat_floor(hdom).convert_to<long long>();
    long long H_full = rat_floor(Rat(2) * hdom).convert_to<long long>();

    // dominant multiplicities by increasing drop height
    std::map<DimVector, long long> domMult;
    std::vector<long long> cur(n, 0);
    for (long long h = 0; h <= H_dom; ++h) {
        enumerate_level(n, h, cur, 0, [&](const DimVector& nu) {
            Weight mu = datum.wt(lams, nu);
            if (!datum.dominant(mu)) return;
            if (h == 0) {
                domMult[nu] = 1;
                return;
            }
            long long num = 0;
            for (const auto& alpha : posroots) {
                Weight aw = datum.root_to_weight(alpha);
                for (long long k = 1;; ++k) {
                    DimVector up = nu;
                    bool ok = true;
                    for (size_t i = 0; i < n; ++i) {
                        up.c[i] -= k * alpha[i];
                        if (up.c[i] < 0) { ok = false; break; }
                    }
                    if (!ok) break;
                    long long m_up = dom_lookup(datum, lams, domMult, up);
                    if (m_up == 0) continue;
                    long long pairing = 0;  // <mu + k*alpha, alpha>
                    for (size_t i = 0; i < n; ++i)
                        pairing += alpha[i] * (mu[i] + k * aw[i]);
                    num += 2 * m_up * pairing;
                }
            }
            long long den = 0;  // <lambda + mu + 2 rho, sum nu_i alpha_i>
            for (size_t i = 0; i < n; ++i) den += nu[i] * (lambda[i] + mu[i] + 2 * rho[i]);
            if (den <= 0) fail(Errc::Internal, "Freudenthal denominator must be positive");
            if (num % den != 0) fail(Errc::Internal, "Freudenthal division not exact");
            long long m = num / den;
            if (m > 0) domMult[nu] = m;
        });
    }

    CharacterVector ch;
    ch.lambda = lambda;
    long long D = depth < 0 ? H_full : std::min(depth, H_full);
    ch.complete = depth < 0 || depth >= H_full;
    ch.depth = ch.complete ? -1 : depth;
    for (long long h = 0; h <= D; ++h) {
        enumerate_level(n, h, cur, 0, [&](const DimVector& nu) {
            long long m = dom_lookup(datum, lams, domMult, nu);
            if (m > 0) ch.mult[nu] = m;
        });
    }
    return ch;
}

BigInt weyl_dimension(const CartanDatum& datum, const Weight& lambda) {
    if (!datum.finite_type()) fail(Errc::FiniteTypeOnly, "Weyl dimension needs finite type");
    auto posroots = datum.positive_roots(1);
    Weight rho = datum.rho();
    BigInt num = 1, den = 1;
    for (const auto& alpha : posroots) {
        long long a = 0, b = 0;
        for (size_t i = 0; i < datum.rank(); ++i) {
            a += alpha[i] * (lambda[i] + rho[i]);
            b += alpha[i] * rho[i];
        }
        num *= a;
        den *= b;
    }
    if (num % den != 0) fail(Errc::Internal, "Weyl dimension not integral");
    return num / den;
}

CharacterVector tensor_character(const CartanDatum& datum, const std::vector<Weight>& lambdas,
                                 long long depth) {
    CharacterVector acc;
    acc.lambda = datum.sum(lambdas);
    acc.mult[DimVector::zero(datum.rank())] = 1;
    acc.complete = true;
    for (const auto& l : lambdas) {
        CharacterVector f = freudenthal_character(datum, l, -1);
        std::map<DimVector, long long> next;
        for (const auto& [d1, m1] : acc.mult)
            for (const auto& [d2, m2] : f.mult) {
                DimVector d = d1 + d2;
                if (depth >= 0 && d.height() > depth) continue;
                next[d] += m1 * m2;
            }
        acc.mult = std::move(next);
        acc.complete = acc.complete && f.complete;
    }
    if (depth >= 0) {
        // a cut may or may not have removed rows; conservative flag
        long long maxh = 0;
        for (const auto& l : lambdas) {
            Rat r = inv_cartan_height(datum, l);
            maxh += rat_floor(Rat(2) * r).convert_to<long long>();
        }
        acc.complete = acc.complete && maxh <= depth;
        acc.depth = acc.complete ? -1 : depth;
    }
    return acc;
}

std::map<DimVector, long long> greedy_decompose(const CartanDatum& datum,
                                                const std::vector<Weight>& lambdas,
                                                const CharacterVector& ch) {
    if (!ch.complete)
        fail(Errc::IncompleteSlice, "greedy decomposition needs a complete character");
    std::map<DimVector, long long> residual = ch.mult;
    std::map<DimVector, long long> out;
    while (!residual.empty()) {
        auto it = residual.begin();  // minimum in (height, lex): dominance-maximal
        DimVector nu0 = it->first;
        long long m0 = it->second;
        if (m0 <= 0) fail(Errc::Internal, "greedy residual not positive at a maximal weight");
        Weight mu0 = datum.wt(lambdas, nu0);
        if (!datum.dominant(mu0))
            fail(Errc::Internal, "greedy residual maximal weight is not dominant");
        CharacterVector irr = freudenthal_character(datum, mu0, -1);
        for (const auto& [kappa, c] : irr.mult) {
            DimVector d = nu0 + kappa;
            auto jt = residual.find(d);
            long long cur = jt == residual.end() ? 0 : jt->second;
            cur -= m0 * c;
            if (cur < 0) fail(Errc::Internal, "greedy subtraction went negative");
            if (cur == 0) {
                if (jt != residual.end()) residual.erase(jt);
            } else {
                residual[d] = cur;
            }
        }
        out[nu0] = m0;
    }
    return out;
}

}  // namespace kmd
