#pragma once

#include <map>
#include <string>

#include "kmd/numeric.hpp"

namespace kmd {

/// Element of Z[v, v^-1] in canonical form: no zero coefficients stored.
class LaurentPoly {
public:
    LaurentPoly() = default;
    LaurentPoly(long c) { if (c != 0) c_[0] = c; }
    explicit LaurentPoly(const BigInt& c) { if (c != 0) c_[0] = c; }

    // c * v^e
    static LaurentPoly term(const BigInt& c, int e);
    static LaurentPoly v(int e = 1) { return term(1, e); }

    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_.begin()->first == 0 && c_.begin()->second == 1; }
    bool is_constant() const { return c_.empty() || (c_.size() == 1 && c_.begin()->first == 0); }

    int min_exp() const;  // valuation; requires nonzero
    int max_exp() const;  // degree; requires nonzero
    BigInt coeff(int e) const;
    const std::map<int, BigInt>& terms() const { return c_; }
    size_t term_count() const { return c_.size(); }

    LaurentPoly operator-() const;
    LaurentPoly& operator+=(const LaurentPoly& o);
    LaurentPoly& operator-=(const LaurentPoly& o);
    LaurentPoly operator+(const LaurentPoly& o) const { LaurentPoly r = *this; r += o; return r; }
    LaurentPoly operator-(const LaurentPoly& o) const { LaurentPoly r = *this; r -= o; return r; }
    LaurentPoly operator*(const LaurentPoly& o) const;
    LaurentPoly& operator*=(const LaurentPoly& o) { *this = *this * o; return *this; }
    bool operator==(const LaurentPoly& o) const { return c_ == o.c_; }
    bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

    LaurentPoly shifted(int e) const;  // * v^e

    /// v -> v^-1
    LaurentPoly bar() const;

    /// evaluation at v = 1
    BigInt coeff_sum() const;

    /// membership in Z[v^-1] (strict=false) or v^-1 Z[v^-1] (strict=true)
    bool in_lattice_A(bool strict) const;

    /// exact quotient; throws NotDivisible when remainder is nonzero
    LaurentPoly divide_exact(const LaurentPoly& d) const;
    static bool try_divide(const LaurentPoly& n, const LaurentPoly& d, LaurentPoly& q);

    /// deterministic rendering, descending exponents: "v^2 + 3 - 2v^-1"
    std::string str() const;
    static LaurentPoly parse(const std::string& s);

private:
    std::map<int, BigInt> c_;
    void add_term(int e, const BigInt& c);
};

LaurentPoly qint(long n);         // [n]
LaurentPoly qfactorial(long n);   // [n]!
LaurentPoly qbinom(long n, long k);

/// Element of Q(v) as a reduced fraction num/den with den an ordinary
/// polynomial in v (min exponent 0) with positive leading coefficient.
class RationalFn {
public:
    RationalFn() : num_(), den_(1) {}
    RationalFn(long c) : num_(c), den_(1) {}
    RationalFn(const LaurentPoly& p) : num_(p), den_(1) {}
    RationalFn(const LaurentPoly& n, const LaurentPoly& d);

    const LaurentPoly& num() const { return num_; }
    const LaurentPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_polynomial() const { return den_.is_one(); }
    const LaurentPoly& as_poly() const;  // throws NotDivisible if denominator is not 1

    RationalFn operator-() const;
    RationalFn operator+(const RationalFn& o) const;
    RationalFn operator-(const RationalFn& o) const;
    RationalFn operator*(const RationalFn& o) const;
    RationalFn operator/(const RationalFn& o) const;  // throws DomainError on zero divisor
    RationalFn& operator+=(const RationalFn& o) { *this = *this + o; return *this; }
    RationalFn& operator-=(const RationalFn& o) { *this = *this - o; return *this; }
    RationalFn& operator*=(const RationalFn& o) { *this = *this * o; return *this; }
    RationalFn& operator/=(const RationalFn& o) { *this = *this / o; return *this; }
    bool operator==(const RationalFn& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RationalFn& o) const { return !(*this == o); }

    RationalFn bar() const;
    std::string str() const;

private:
    LaurentPoly num_, den_;
    void normalize();
};

}  // namespace kmd
