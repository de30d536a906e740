#include "kmd/cartan.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "kmd/detail/ratlin.hpp"
#include "kmd/error.hpp"

namespace kmd {

namespace {

using detail::RatMat;
using detail::rref;

std::vector<BigInt> clear_denominators(const std::vector<Rat>& x) {
    BigInt lcm = 1;
    for (const auto& r : x) lcm = lcm / big_gcd(lcm, r.denominator()) * r.denominator();
    std::vector<BigInt> v(x.size());
    BigInt g = 0;
    for (size_t j = 0; j < x.size(); ++j) {
        v[j] = x[j].numerator() * (lcm / x[j].denominator());
        g = big_gcd(g, v[j]);
    }
    if (g > 1)
        for (auto& c : v) c /= g;
    return v;
}

// determinant of an integer submatrix, exact
Rat det(const std::vector<std::vector<long long>>& a, const std::vector<size_t>& idx) {
    size_t n = idx.size();
    RatMat m(n, std::vector<Rat>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) m[i][j] = Rat(BigInt(a[idx[i]][idx[j]]));
    Rat d(1);
    for (size_t col = 0; col < n; ++col) {
        size_t sel = n;
        for (size_t i = col; i < n; ++i)
            if (m[i][col] != Rat(0)) { sel = i; break; }
        if (sel == n) return Rat(0);
        if (sel != col) { std::swap(m[sel], m[col]); d = -d; }
        d *= m[col][col];
        Rat p = m[col][col];
        for (size_t i = col + 1; i < n; ++i) {
            Rat f = m[i][col] / p;
            for (size_t j = col; j < n; ++j) m[i][j] -= f * m[col][j];
        }
    }
    return d;
}

}  // namespace

Weight Weight::operator+(const Weight& o) const {
    Weight r = *this;
    for (size_t i = 0; i < c.size(); ++i) r.c[i] += o.c[i];
    return r;
}

Weight Weight::operator-(const Weight& o) const {
    Weight r = *this;
    for (size_t i = 0; i < c.size(); ++i) r.c[i] -= o.c[i];
    return r;
}

std::string Weight::str() const {
    std::ostringstream os;
    for (size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
    return os.str();
}

Weight Weight::parse(const std::string& s, size_t rank) {
    std::vector<long long> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) fail(Errc::Usage, "empty weight coordinate in '" + s + "'");
        v.push_back(std::stoll(tok));
    }
    if (v.size() != rank)
        fail(Errc::Usage, "weight '" + s + "' has arity " + std::to_string(v.size()) +
                              ", datum rank is " + std::to_string(rank));
    return Weight(std::move(v));
}

DimVector DimVector::unit(size_t n, size_t i) {
    DimVector d = zero(n);
    d.c[i] = 1;
    return d;
}

long long DimVector::height() const {
    long long h = 0;
    for (long long x : c) h += x;
    return h;
}

bool DimVector::is_zero() const {
    return std::all_of(c.begin(), c.end(), [](long long x) { return x == 0; });
}

bool DimVector::operator<(const DimVector& o) const {
    long long h = height(), oh = o.height();
    if (h != oh) return h < oh;
    return c < o.c;
}

bool DimVector::leq_componentwise(const DimVector& o) const {
    for (size_t i = 0; i < c.size(); ++i)
        if (c[i] > o.c[i]) return false;
    return true;
}

DimVector DimVector::operator+(const DimVector& o) const {
    DimVector r = *this;
    for (size_t i = 0; i < c.size(); ++i) r.c[i] += o.c[i];
    return r;
}

std::optional<DimVector> DimVector::minus(const DimVector& o) const {
    DimVector r = *this;
    for (size_t i = 0; i < c.size(); ++i) {
        r.c[i] -= o.c[i];
        if (r.c[i] < 0) return std::nullopt;
    }
    return r;
}

std::string DimVector::str() const {
    std::ostringstream os;
    for (size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
    return os.str();
}

std::string LeviWeight::str() const {
    std::ostringstream os;
    for (size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
    return os.str();
}

CartanDatum CartanDatum::validate(std::vector<std::string> labels,
                                  std::vector<std::vector<long long>> gcm,
                                  std::map<std::string, std::vector<std::string>> levis) {
    size_t n = labels.size();
    if (n == 0) fail(Errc::Usage, "empty Cartan datum");
    if (gcm.size() != n) fail(Errc::Usage, "gcm row count != label count");
    for (const auto& row : gcm)
        if (row.size() != n) fail(Errc::Usage, "gcm is not square");
    for (size_t i = 0; i < n; ++i) {
        if (gcm[i][i] != 2) fail(Errc::BadDiagonal, "a_{" + labels[i] + "," + labels[i] + "} != 2");
        for (size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (gcm[i][j] != gcm[j][i])
                fail(Errc::NonSymmetric, "a_{" + labels[i] + "," + labels[j] + "} != a_{" +
                                             labels[j] + "," + labels[i] + "}");
            if (gcm[i][j] > 0)
                fail(Errc::PositiveOffDiagonal,
                     "a_{" + labels[i] + "," + labels[j] + "} > 0");
        }
    }
    std::set<std::string> seen(labels.begin(), labels.end());
    if (seen.size() != n) fail(Errc::Usage, "duplicate vertex labels");

    CartanDatum d;
    d.labels_ = std::move(labels);
    d.gcm_ = std::move(gcm);
    for (const auto& [name, members] : levis) {
        std::vector<size_t> idx;
        for (const auto& m : members) {
            auto it = std::find(d.labels_.begin(), d.labels_.end(), m);
            if (it == d.labels_.end())
                fail(Errc::UnknownLevi, "levi '" + name + "' names unknown vertex '" + m + "'");
            idx.push_back(size_t(it - d.labels_.begin()));
        }
        std::sort(idx.begin(), idx.end());
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
        d.levis_[name] = std::move(idx);
    }

    // type by definiteness: positive definite <=> finite
    bool posdef = true;
    std::vector<size_t> lead;
    for (size_t k = 0; k < n; ++k) {
        lead.push_back(k);
        if (det(d.gcm_, lead) <= Rat(0)) { posdef = false; break; }
    }
    if (posdef) {
        d.type_ = DatumType::Finite;
    } else {
        // positive semidefinite <=> every principal minor >= 0
        bool psd = true;
        for (size_t mask = 1; mask < (size_t(1) << n) && psd; ++mask) {
            std::vector<size_t> idx;
            for (size_t i = 0; i < n; ++i)
                if (mask & (size_t(1) << i)) idx.push_back(i);
            if (det(d.gcm_, idx) < Rat(0)) psd = false;
        }
        d.type_ = psd ? DatumType::Affine : DatumType::Indefinite;
        RatMat m(n, std::vector<Rat>(n));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) m[i][j] = Rat(BigInt(d.gcm_[i][j]));
        auto piv = rref(m);
        std::vector<bool> is_piv(n, false);
        for (size_t c : piv) is_piv[c] = true;
        for (size_t f = 0; f < n; ++f) {
            if (is_piv[f]) continue;
            std::vector<Rat> x(n, Rat(0));
            x[f] = Rat(1);
            for (size_t k = piv.size(); k-- > 0;) {
                Rat acc(0);
                for (size_t j = piv[k] + 1; j < n; ++j) acc -= m[k][j] * x[j];
                x[piv[k]] = acc;
            }
            auto v = clear_denominators(x);
            std::vector<long long> vi(n);
            for (size_t j = 0; j < n; ++j) vi[j] = v[j].convert_to<long long>();
            d.kernel_.push_back(DimVector(std::move(vi)));
        }
    }
    return d;
}

CartanDatum CartanDatum::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        fail(Errc::Usage, std::string("bad cartan JSON: ") + e.what());
    }
    std::vector<std::string> labels = j.at("labels").get<std::vector<std::string>>();
    std::vector<std::vector<long long>> gcm =
        j.at("gcm").get<std::vector<std::vector<long long>>>();
    std::map<std::string, std::vector<std::string>> levis;
    if (j.contains("levis"))
        levis = j.at("levis").get<std::map<std::string, std::vector<std::string>>>();
    return validate(std::move(labels), std::move(gcm), std::move(levis));
}

CartanDatum CartanDatum::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::Usage, "cannot open cartan file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

long long CartanDatum::sym(const DimVector& x, const DimVector& y) const {
    long long s = 0;
    for (size_t i = 0; i < rank(); ++i)
        for (size_t j = 0; j < rank(); ++j) s += x[i] * gcm_[i][j] * y[j];
    return s;
}

long long CartanDatum::pair(const DimVector& nu, const Weight& w) const {
    long long s = 0;
    for (size_t i = 0; i < rank(); ++i) s += nu[i] * w[i];
    return s;
}

Weight CartanDatum::alpha(size_t i) const {
    std::vector<long long> v(rank());
    for (size_t j = 0; j < rank(); ++j) v[j] = gcm_[j][i];
    return Weight(std::move(v));
}

Weight CartanDatum::root_to_weight(const DimVector& nu) const {
    std::vector<long long> v(rank(), 0);
    for (size_t j = 0; j < rank(); ++j)
        for (size_t i = 0; i < rank(); ++i) v[j] += gcm_[j][i] * nu[i];
    return Weight(std::move(v));
}

bool CartanDatum::dominant(const Weight& w) const {
    return std::all_of(w.c.begin(), w.c.end(), [](long long x) { return x >= 0; });
}

Weight CartanDatum::rho() const { return Weight(std::vector<long long>(rank(), 1)); }

Weight CartanDatum::sum(const std::vector<Weight>& lambdas) const {
    Weight s(std::vector<long long>(rank(), 0));
    for (const auto& l : lambdas) {
        if (l.size() != rank()) fail(Errc::Usage, "weight arity != datum rank");
        s = s + l;
    }
    return s;
}

Weight CartanDatum::wt(const std::vector<Weight>& lambdas, const DimVector& nu) const {
    return sum(lambdas) - root_to_weight(nu);
}

std::vector<long long> CartanDatum::aux(const DimVector& nu) const {
    std::vector<long long> a;
    a.reserve(kernel_.size());
    for (const auto& k : kernel_) {
        long long s = 0;
        for (size_t i = 0; i < rank(); ++i) s += k[i] * nu[i];
        a.push_back(s);
    }
    return a;
}

const std::vector<size_t>& CartanDatum::levi(const std::string& name) const {
    auto it = levis_.find(name);
    if (it == levis_.end()) fail(Errc::UnknownLevi, "levi '" + name + "' is not registered");
    return it->second;
}

std::vector<std::string> CartanDatum::levi_names() const {
    std::vector<std::string> names;
    for (const auto& [n, _] : levis_) names.push_back(n);
    return names;
}

CartanDatum CartanDatum::sub_datum(const std::vector<size_t>& J) const {
    std::vector<std::string> labels;
    std::vector<std::vector<long long>> gcm(J.size(), std::vector<long long>(J.size()));
    for (size_t a = 0; a < J.size(); ++a) {
        labels.push_back(labels_[J[a]]);
        for (size_t b = 0; b < J.size(); ++b) gcm[a][b] = gcm_[J[a]][J[b]];
    }
    return validate(std::move(labels), std::move(gcm));
}

LeviWeight CartanDatum::wtJ(const std::string& name, const std::vector<Weight>& lambdas,
                            const DimVector& nu) const {
    const auto& J = levi(name);
    std::set<size_t> inJ(J.begin(), J.end());
    Weight lam = sum(lambdas);
    LeviWeight lw;
    lw.levi = name;
    for (size_t j : J) {
        long long v = lam[j];
        for (size_t k = 0; k < rank(); ++k) {
            if (inJ.count(k))
                v -= gcm_[j][k] * nu[k];        // - sum_{k in J} a_jk nu_k
            else
                v += (-gcm_[j][k]) * nu[k];     // framing arrows from k outside J
        }
        lw.c.push_back(v);
    }
    // coordinate identity with the full weight map
    Weight full = wt(lambdas, nu);
    for (size_t a = 0; a < J.size(); ++a)
        if (lw.c[a] != full[J[a]]) fail(Errc::Internal, "wtJ/wt coordinate identity violated");
    return lw;
}

CartanDatum::DomResult CartanDatum::dominance_diff(const Weight& hi, const Weight& lo,
                                                   long long bound) const {
    size_t n = rank();
    std::vector<long long> diff(n);
    for (size_t i = 0; i < n; ++i) diff[i] = hi[i] - lo[i];

    // rational solve C nu = diff
    RatMat m(n, std::vector<Rat>(n + 1));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) m[i][j] = Rat(BigInt(gcm_[i][j]));
        m[i][n] = Rat(BigInt(diff[i]));
    }
    auto piv = rref(m, n);
    bool rank_full = piv.size() == n;
    for (size_t i = piv.size(); i < n; ++i)
        if (m[i][n] != Rat(0)) return {DomResult::Status::None, DimVector()};

    if (rank_full) {
        std::vector<long long> nu(n);
        for (size_t k = 0; k < n; ++k) {
            const Rat& x = m[k][n];
            if (!rat_is_integer(x) || x < Rat(0)) return {DomResult::Status::None, DimVector()};
            nu[piv[k]] = x.numerator().convert_to<long long>();
        }
        return {DomResult::Status::Found, DimVector(std::move(nu))};
    }

    // singular GCM: bounded search over N^I with sum <= bound
    std::vector<long long> nu(n, 0);
    std::function<bool(size_t, long long)> rec = [&](size_t i, long long rem) -> bool {
        if (i == n) {
            for (size_t r = 0; r < n; ++r) {
                long long s = 0;
                for (size_t j = 0; j < n; ++j) s += gcm_[r][j] * nu[j];
                if (s != diff[r]) return false;
            }
            return true;
        }
        for (long long v = 0; v <= rem; ++v) {
            nu[i] = v;
            if (rec(i + 1, rem - v)) return true;
        }
        nu[i] = 0;
        return false;
    };
    if (rec(0, bound)) return {DomResult::Status::Found, DimVector(nu)};
    return {DomResult::Status::Unresolved, DimVector()};
}

std::optional<DimVector> CartanDatum::exact_drop(const std::vector<Weight>& lambdas,
                                                 const Weight& mu) const {
    size_t n = rank(), k = kernel_.size();
    Weight diff = sum(lambdas) - mu;
    RatMat a(n + k, std::vector<Rat>(n));
    std::vector<Rat> b(n + k);
    for (size_t r = 0; r < n; ++r) {
        for (size_t j = 0; j < n; ++j) a[r][j] = Rat(BigInt(gcm_[r][j]));
        b[r] = Rat(BigInt(diff.c[r]));
    }
    for (size_t t = 0; t < k; ++t) {
        for (size_t j = 0; j < n; ++j) a[n + t][j] = Rat(BigInt(kernel_[t][j]));
        b[n + t] = Rat(0);
    }
    auto x = detail::solve_unique(std::move(a), b);
    if (!x) return std::nullopt;
    std::vector<long long> nu(n);
    for (size_t j = 0; j < n; ++j) {
        if (!rat_is_integer((*x)[j]) || (*x)[j] < Rat(0)) return std::nullopt;
        nu[j] = (*x)[j].numerator().convert_to<long long>();
    }
    return DimVector(std::move(nu));
}

bool CartanDatum::support_connected(const DimVector& b) const {
    std::vector<size_t> supp;
    for (size_t i = 0; i < rank(); ++i)
        if (b[i] > 0) supp.push_back(i);
    if (supp.empty()) return false;
    std::set<size_t> seen{supp[0]};
    std::vector<size_t> stack{supp[0]};
    while (!stack.empty()) {
        size_t i = stack.back();
        stack.pop_back();
        for (size_t j : supp)
            if (!seen.count(j) && gcm_[i][j] < 0) {
                seen.insert(j);
                stack.push_back(j);
            }
    }
    return seen.size() == supp.size();
}

std::vector<DimVector> CartanDatum::positive_roots(long long height_bound) const {
    if (height_bound < 1) fail(Errc::Usage, "height bound must be >= 1");
    std::set<DimVector> roots;
    std::vector<DimVector> level;
    for (size_t i = 0; i < rank(); ++i) level.push_back(DimVector::unit(rank(), i));
    for (const auto& r : level) roots.insert(r);
    long long h = 1;
    while (!level.empty()) {
        if (!finite_type() && h >= height_bound) break;
        std::set<DimVector> next;
        for (const auto& b : level)
            for (size_t i = 0; i < rank(); ++i) {
                DimVector cand = b + DimVector::unit(rank(), i);
                if (roots.count(cand) || next.count(cand)) continue;
                if (sym(cand, cand) > 2) continue;
                if (!support_connected(cand)) continue;
                next.insert(cand);
            }
        level.assign(next.begin(), next.end());
        for (const auto& r : level) roots.insert(r);
        ++h;
    }
    return std::vector<DimVector>(roots.begin(), roots.end());
}

std::string CartanDatum::hash_key() const {
    std::ostringstream os;
    os << "cartan{";
    for (size_t i = 0; i < rank(); ++i) os << labels_[i] << ";";
    os << "|";
    for (const auto& row : gcm_) {
        for (long long x : row) os << x << ",";
        os << ";";
    }
    os << "|";
    for (const auto& [n, idx] : levis_) {
        os << n << ":";
        for (size_t i : idx) os << i << ",";
        os << ";";
    }
    os << "}";
    return os.str();
}

}  // namespace kmd
