#include "kmd/laurent.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

#include "kmd/error.hpp"

namespace kmd {

namespace {

// Dense ordinary polynomial in v, coefficient of v^i at index i.
// Invariant: empty or nonzero back().
using Dense = std::vector<BigInt>;

void dtrim(Dense& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

Dense to_dense(const LaurentPoly& p, int shift) {
    // p * v^shift must be an ordinary polynomial
    Dense d;
    if (p.is_zero()) return d;
    d.assign(p.max_exp() + shift + 1, BigInt(0));
    for (const auto& [e, c] : p.terms()) d[e + shift] = c;
    return d;
}

LaurentPoly from_dense(const Dense& d, int shift) {
    LaurentPoly out;
    for (size_t i = 0; i < d.size(); ++i)
        if (d[i] != 0) out += LaurentPoly::term(d[i], int(i) + shift);
    return out;
}

Dense dmul(const Dense& a, const Dense& b) {
    if (a.empty() || b.empty()) return {};
    Dense r(a.size() + b.size() - 1, BigInt(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            if (b[j] != 0) r[i + j] += a[i] * b[j];
    }
    dtrim(r);
    return r;
}

BigInt dcontent(const Dense& p) {
    BigInt g = 0;
    for (const auto& c : p) g = big_gcd(g, c);
    return g;
}

Dense dscale_div(const Dense& p, const BigInt& g) {
    Dense r = p;
    for (auto& c : r) c /= g;
    return r;
}

// exact division over Z[v]; returns false when not exactly divisible
bool ddivide(const Dense& n, const Dense& d, Dense& q) {
    if (d.empty()) return false;
    Dense rem = n;
    q.assign(n.size() >= d.size() ? n.size() - d.size() + 1 : 0, BigInt(0));
    while (rem.size() >= d.size()) {
        if (rem.back() % d.back() != 0) return false;
        BigInt c = rem.back() / d.back();
        size_t off = rem.size() - d.size();
        q[off] = c;
        for (size_t i = 0; i < d.size(); ++i) rem[off + i] -= c * d[i];
        dtrim(rem);  // the leading term cancels exactly, so off strictly drops
    }
    dtrim(q);
    return rem.empty();
}

// pseudo-remainder of a by b (deg a >= deg b > 0 assumed checked by caller)
Dense dprem(Dense a, const Dense& b) {
    while (!a.empty() && a.size() >= b.size()) {
        BigInt lb = b.back();
        size_t off = a.size() - b.size();
        BigInt la = a.back();
        for (auto& c : a) c *= lb;
        for (size_t i = 0; i < b.size(); ++i) a[off + i] -= la * b[i];
        dtrim(a);
    }
    return a;
}

// gcd over Z[v] via primitive PRS
Dense dgcd(Dense a, Dense b) {
    dtrim(a);
    dtrim(b);
    if (a.empty()) return b;
    if (b.empty()) return a;
    BigInt ca = dcontent(a), cb = dcontent(b);
    Dense pa = dscale_div(a, ca), pb = dscale_div(b, cb);
    if (pa.size() < pb.size()) std::swap(pa, pb);
    while (!pb.empty()) {
        Dense r = dprem(pa, pb);
        if (!r.empty()) {
            BigInt cr = dcontent(r);
            r = dscale_div(r, cr);
        }
        pa = std::move(pb);
        pb = std::move(r);
    }
    BigInt cg = big_gcd(ca, cb);
    Dense g = pa;
    for (auto& c : g) c *= cg;
    if (!g.empty() && g.back() < 0)
        for (auto& c : g) c = -c;
    return g;
}

}  // namespace

LaurentPoly LaurentPoly::term(const BigInt& c, int e) {
    LaurentPoly p;
    if (c != 0) p.c_[e] = c;
    return p;
}

int LaurentPoly::min_exp() const {
    if (is_zero()) fail(Errc::DomainError, "min_exp of zero");
    return c_.begin()->first;
}

int LaurentPoly::max_exp() const {
    if (is_zero()) fail(Errc::DomainError, "max_exp of zero");
    return c_.rbegin()->first;
}

BigInt LaurentPoly::coeff(int e) const {
    auto it = c_.find(e);
    return it == c_.end() ? BigInt(0) : it->second;
}

void LaurentPoly::add_term(int e, const BigInt& c) {
    if (c == 0) return;
    auto it = c_.find(e);
    if (it == c_.end()) {
        c_[e] = c;
    } else {
        it->second += c;
        if (it->second == 0) c_.erase(it);
    }
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r = *this;
    for (auto& [e, c] : r.c_) c = -c;
    return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
    for (const auto& [e, c] : o.c_) add_term(e, c);
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
    for (const auto& [e, c] : o.c_) add_term(e, -c);
    return *this;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
    LaurentPoly r;
    for (const auto& [e1, c1] : c_)
        for (const auto& [e2, c2] : o.c_) r.add_term(e1 + e2, c1 * c2);
    return r;
}

LaurentPoly LaurentPoly::shifted(int e) const {
    LaurentPoly r;
    for (const auto& [ex, c] : c_) r.c_[ex + e] = c;
    return r;
}

LaurentPoly LaurentPoly::bar() const {
    LaurentPoly r;
    for (const auto& [e, c] : c_) r.c_[-e] = c;
    return r;
}

BigInt LaurentPoly::coeff_sum() const {
    BigInt s = 0;
    for (const auto& [e, c] : c_) s += c;
    return s;
}

bool LaurentPoly::in_lattice_A(bool strict) const {
    if (is_zero()) return true;
    return strict ? max_exp() < 0 : max_exp() <= 0;
}

bool LaurentPoly::try_divide(const LaurentPoly& n, const LaurentPoly& d, LaurentPoly& q) {
    if (d.is_zero()) return false;
    if (n.is_zero()) {
        q = LaurentPoly();
        return true;
    }
    int sn = -n.min_exp(), sd = -d.min_exp();
    Dense dn = to_dense(n, sn), dd = to_dense(d, sd);
    Dense dq;
    if (!ddivide(dn, dd, dq)) return false;
    q = from_dense(dq, sd - sn);
    return true;
}

LaurentPoly LaurentPoly::divide_exact(const LaurentPoly& d) const {
    LaurentPoly q;
    if (!try_divide(*this, d, q))
        fail(Errc::NotDivisible, "(" + str() + ") / (" + d.str() + ")");
    return q;
}

std::string LaurentPoly::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        BigInt c = it->second;
        int e = it->first;
        if (first) {
            if (c < 0) { os << "-"; c = -c; }
        } else {
            os << (c < 0 ? " - " : " + ");
            if (c < 0) c = -c;
        }
        first = false;
        if (e == 0) {
            os << c.str();
        } else {
            if (c != 1) os << c.str();
            os << "v";
            if (e != 1) os << "^" << e;
        }
    }
    return os.str();
}

LaurentPoly LaurentPoly::parse(const std::string& s) {
    LaurentPoly out;
    size_t i = 0;
    auto skip_ws = [&] { while (i < s.size() && s[i] == ' ') ++i; };
    skip_ws();
    if (i < s.size() && s.compare(i, 1, "0") == 0 && i + 1 == s.size()) return out;
    bool neg = false;
    while (i < s.size()) {
        skip_ws();
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            neg = s[i] == '-';
            ++i;
            skip_ws();
        }
        BigInt c = 1;
        bool have_digits = false;
        std::string digits;
        while (i < s.size() && isdigit(static_cast<unsigned char>(s[i]))) {
            digits += s[i++];
            have_digits = true;
        }
        if (have_digits) c = BigInt(digits);
        int e = 0;
        if (i < s.size() && s[i] == 'v') {
            ++i;
            e = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                bool eneg = false;
                if (i < s.size() && s[i] == '-') { eneg = true; ++i; }
                std::string ed;
                while (i < s.size() && isdigit(static_cast<unsigned char>(s[i]))) ed += s[i++];
                if (ed.empty()) fail(Errc::DomainError, "bad exponent in '" + s + "'");
                e = std::stoi(ed);
                if (eneg) e = -e;
            }
        } else if (!have_digits) {
            fail(Errc::DomainError, "cannot parse laurent term in '" + s + "'");
        }
        out.add_term(e, neg ? -c : c);
        neg = false;
        skip_ws();
    }
    return out;
}

LaurentPoly qint(long n) {
    if (n == 0) return LaurentPoly();
    if (n < 0) return -qint(-n);
    LaurentPoly p;
    // [n] = v^{n-1} + v^{n-3} + ... + v^{1-n}
    for (long e = n - 1; e >= 1 - n; e -= 2) p += LaurentPoly::v(int(e));
    return p;
}

LaurentPoly qfactorial(long n) {
    LaurentPoly p(1);
    for (long s = 2; s <= n; ++s) p *= qint(s);
    return p;
}

LaurentPoly qbinom(long n, long k) {
    if (k < 0 || k > n) fail(Errc::DomainError, "qbinom out of range");
    // balanced Pascal recurrence: [n,k] = v^k [n-1,k] + v^{k-n} [n-1,k-1]
    std::vector<LaurentPoly> row{LaurentPoly(1)};
    for (long m = 1; m <= n; ++m) {
        std::vector<LaurentPoly> next(std::min(m, k) + 1);
        next[0] = LaurentPoly(1);
        for (long j = 1; j < long(next.size()); ++j) {
            LaurentPoly a = j < long(row.size()) ? row[j].shifted(int(j)) : LaurentPoly();
            LaurentPoly b = row[j - 1].shifted(int(j - m));
            next[j] = a + b;
        }
        row = std::move(next);
    }
    return row[k];
}

RationalFn::RationalFn(const LaurentPoly& n, const LaurentPoly& d) : num_(n), den_(d) {
    if (d.is_zero()) fail(Errc::DomainError, "zero denominator");
    normalize();
}

void RationalFn::normalize() {
    if (num_.is_zero()) {
        den_ = LaurentPoly(1);
        return;
    }
    // split off v-powers: num = v^a N, den = v^b D with N, D ordinary, nonzero constant term
    int a = num_.min_exp(), b = den_.min_exp();
    Dense N = to_dense(num_, -a), D = to_dense(den_, -b);
    Dense G = dgcd(N, D);
    if (!(G.size() == 1 && G[0] == 1)) {
        Dense q;
        ddivide(N, G, q);
        N = q;
        ddivide(D, G, q);
        D = q;
    }
    if (D.back() < 0) {
        for (auto& c : N) c = -c;
        for (auto& c : D) c = -c;
    }
    num_ = from_dense(N, a - b);
    den_ = from_dense(D, 0);
}

const LaurentPoly& RationalFn::as_poly() const {
    if (!den_.is_one()) fail(Errc::NotDivisible, "non-polynomial rational function " + str());
    return num_;
}

RationalFn RationalFn::operator-() const {
    RationalFn r = *this;
    r.num_ = -r.num_;
    return r;
}

RationalFn RationalFn::operator+(const RationalFn& o) const {
    return RationalFn(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalFn RationalFn::operator-(const RationalFn& o) const {
    return RationalFn(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RationalFn RationalFn::operator*(const RationalFn& o) const {
    return RationalFn(num_ * o.num_, den_ * o.den_);
}

RationalFn RationalFn::operator/(const RationalFn& o) const {
    if (o.is_zero()) fail(Errc::DomainError, "division by zero");
    return RationalFn(num_ * o.den_, den_ * o.num_);
}

RationalFn RationalFn::bar() const { return RationalFn(num_.bar(), den_.bar()); }

std::string RationalFn::str() const {
    if (is_polynomial()) return num_.str();
    return "(" + num_.str() + ") / (" + den_.str() + ")";
}

}  // namespace kmd
