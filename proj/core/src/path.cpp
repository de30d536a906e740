#include "kmd/path.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "kmd/detail/ratlin.hpp"
#include "kmd/error.hpp"

namespace kmd {

namespace {

std::string rat_str(const Rat& r) {
    std::ostringstream os;
    os << r.numerator().str();
    if (r.denominator() != 1) os << "/" << r.denominator().str();
    return os.str();
}

Rat rat_parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(BigInt(s));
    return Rat(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

long long to_ll_checked(const Rat& r, const char* what) {
    if (!rat_is_integer(r)) fail(Errc::Internal, std::string(what) + " is not an integer");
    return r.numerator().convert_to<long long>();
}

}  // namespace

RatPoint RatPoint::operator+(const RatPoint& o) const {
    RatPoint r = *this;
    for (size_t i = 0; i < c.size(); ++i) r.c[i] += o.c[i];
    return r;
}

RatPoint RatPoint::operator-(const RatPoint& o) const {
    RatPoint r = *this;
    for (size_t i = 0; i < c.size(); ++i) r.c[i] -= o.c[i];
    return r;
}

RatPoint RatPoint::scaled(const Rat& s) const {
    RatPoint r = *this;
    for (auto& x : r.c) x *= s;
    return r;
}

PLPath PLPath::straight(const RatPoint& target) {
    PLPath p;
    RatPoint zero;
    zero.c.assign(target.c.size(), Rat(0));
    p.v_ = {zero, target};
    p.canonicalize();
    return p;
}

PLPath PLPath::from_vertices(std::vector<RatPoint> vs) {
    PLPath p;
    p.v_ = std::move(vs);
    p.canonicalize();
    return p;
}

void PLPath::canonicalize() {
    // drop zero-length segments, then merge positively-proportional neighbors
    std::vector<RatPoint> w;
    for (const auto& pt : v_)
        if (w.empty() || !(w.back() == pt)) w.push_back(pt);
    std::vector<RatPoint> out;
    for (const auto& pt : w) {
        while (out.size() >= 2) {
            RatPoint d1 = out.back() - out[out.size() - 2];
            RatPoint d2 = pt - out.back();
            size_t k = 0;
            while (k < d1.c.size() && d1.c[k] == Rat(0)) ++k;
            bool mergeable = k < d1.c.size() && d2.c[k] != Rat(0) &&
                             ((d1.c[k] > Rat(0)) == (d2.c[k] > Rat(0)));
            for (size_t j = 0; j < d1.c.size() && mergeable; ++j)
                if (d2.c[j] * d1.c[k] != d1.c[j] * d2.c[k]) mergeable = false;
            if (!mergeable) break;
            out.pop_back();
        }
        out.push_back(pt);
    }
    v_ = std::move(out);
}

std::string PLPath::key() const {
    std::ostringstream os;
    for (const auto& pt : v_) {
        os << "(";
        for (size_t i = 0; i < pt.c.size(); ++i) os << (i ? "," : "") << rat_str(pt.c[i]);
        os << ")";
    }
    return os.str();
}

std::string PLPath::to_json() const {
    std::ostringstream os;
    size_t m = v_.size() - 1;
    os << "[";
    for (size_t r = 0; r < v_.size(); ++r) {
        if (r) os << ",";
        // uniform time grid r/m (single-vertex zero path: time 0)
        long long tn = m == 0 ? 0 : (long long)r;
        long long td = m == 0 ? 1 : (long long)m;
        os << "[" << tn << "," << td << ",[";
        for (size_t i = 0; i < v_[r].c.size(); ++i) {
            if (i) os << ",";
            os << "\"" << rat_str(v_[r].c[i]) << "\"";
        }
        os << "]]";
    }
    os << "]";
    return os.str();
}

PLPath PLPath::from_json(const std::string& s) {
    // minimal parser for the fixed shape emitted by to_json
    std::vector<RatPoint> vs;
    size_t i = 0;
    auto expect = [&](char c) {
        while (i < s.size() && isspace((unsigned char)s[i])) ++i;
        if (i >= s.size() || s[i] != c) fail(Errc::Usage, "malformed path json");
        ++i;
    };
    auto peek = [&](char c) {
        while (i < s.size() && isspace((unsigned char)s[i])) ++i;
        return i < s.size() && s[i] == c;
    };
    auto read_until = [&](const std::string& stops) {
        std::string tok;
        while (i < s.size() && stops.find(s[i]) == std::string::npos) tok += s[i++];
        return tok;
    };
    expect('[');
    while (!peek(']')) {
        expect('[');
        read_until(",");  // time numerator
        expect(',');
        read_until(",");  // time denominator
        expect(',');
        expect('[');
        RatPoint pt;
        while (!peek(']')) {
            expect('"');
            pt.c.push_back(rat_parse(read_until("\"")));
            expect('"');
            if (peek(',')) expect(',');
        }
        expect(']');
        expect(']');
        vs.push_back(std::move(pt));
        if (peek(',')) expect(',');
    }
    return from_vertices(std::move(vs));
}

PLPath PLPath::concat(const PLPath& o) const {
    std::vector<RatPoint> vs = v_;
    for (size_t r = 1; r < o.v_.size(); ++r) vs.push_back(endpoint() + o.v_[r]);
    return from_vertices(std::move(vs));
}

PathModel::PathModel(const CartanDatum& datum, Weight lambda)
    : datum_(&datum), lambda_(std::move(lambda)) {
    if (lambda_.size() != datum.rank()) fail(Errc::Usage, "weight arity != datum rank");
    if (!datum.dominant(lambda_)) fail(Errc::NotDominant, "path model needs a dominant weight");
    dim_ = datum.rank() + datum.kernel_basis().size();
}

RatPoint PathModel::alpha_point(size_t i) const {
    RatPoint p;
    p.c.assign(dim_, Rat(0));
    for (size_t j = 0; j < datum_->rank(); ++j) p.c[j] = Rat(BigInt(datum_->a(j, i)));
    const auto& ker = datum_->kernel_basis();
    for (size_t t = 0; t < ker.size(); ++t) p.c[datum_->rank() + t] = Rat(BigInt(ker[t][i]));
    return p;
}

RatPoint PathModel::weight_point(const Weight& w) const {
    RatPoint p;
    p.c.assign(dim_, Rat(0));
    for (size_t j = 0; j < w.size(); ++j) p.c[j] = Rat(BigInt(w[j]));
    return p;
}

PLPath PathModel::highest() const { return PLPath::straight(weight_point(lambda_)); }

std::optional<PLPath> PathModel::f(const PLPath& p, size_t i) const {
    const auto& vs = p.vertices();
    std::vector<Rat> vals;
    vals.reserve(vs.size());
    for (const auto& pt : vs) vals.push_back(h(pt, i));
    Rat m = *std::min_element(vals.begin(), vals.end());
    Rat one(1);
    if (vals.back() - m < one) return std::nullopt;

    size_t q = 0;
    for (size_t r = 0; r < vals.size(); ++r)
        if (vals[r] == m) q = r;  // last attainment

    // first crossing of m+1 after q; may subdivide a segment
    std::vector<RatPoint> w(vs.begin(), vs.end());
    std::vector<Rat> hv = vals;
    size_t s_idx = 0;
    for (size_t r = q; r + 1 < w.size(); ++r) {
        if (hv[r + 1] >= m + one) {
            if (hv[r + 1] == m + one) {
                s_idx = r + 1;
            } else {
                Rat t = (m + one - hv[r]) / (hv[r + 1] - hv[r]);
                RatPoint mid = w[r] + (w[r + 1] - w[r]).scaled(t);
                w.insert(w.begin() + r + 1, mid);
                hv.insert(hv.begin() + r + 1, m + one);
                s_idx = r + 1;
            }
            break;
        }
    }
    if (s_idx == 0) fail(Errc::Internal, "f_i: no rise despite phi >= 1");

    RatPoint ai = alpha_point(i);
    for (size_t r = q + 1; r < w.size(); ++r) {
        Rat d = r <= s_idx ? hv[r] - m : Rat(1);
        w[r] = w[r] - ai.scaled(d);
    }
    return PLPath::from_vertices(std::move(w));
}

std::optional<PLPath> PathModel::e(const PLPath& p, size_t i) const {
    const auto& vs = p.vertices();
    std::vector<Rat> vals;
    vals.reserve(vs.size());
    for (const auto& pt : vs) vals.push_back(h(pt, i));
    Rat m = *std::min_element(vals.begin(), vals.end());
    Rat one(1);
    if (-m < one) return std::nullopt;

    size_t q = 0;
    while (vals[q] != m) ++q;  // first attainment

    // last crossing of m+1 before q; may subdivide
    std::vector<RatPoint> w(vs.begin(), vs.end());
    std::vector<Rat> hv = vals;
    size_t s_idx = q + 1;  // sentinel: not found
    for (size_t r = q; r-- > 0;) {
        if (hv[r] >= m + one) {
            if (hv[r] == m + one) {
                s_idx = r;
            } else {
                Rat t = (hv[r] - (m + one)) / (hv[r] - hv[r + 1]);
                RatPoint mid = w[r] + (w[r + 1] - w[r]).scaled(t);
                w.insert(w.begin() + r + 1, mid);
                hv.insert(hv.begin() + r + 1, m + one);
                s_idx = r + 1;
                ++q;
            }
            break;
        }
    }
    if (s_idx > q) fail(Errc::Internal, "e_i: no prior descent despite eps >= 1");

    RatPoint ai = alpha_point(i);
    for (size_t r = s_idx + 1; r < w.size(); ++r) {
        Rat d = r <= q ? (m + one) - hv[r] : Rat(1);
        w[r] = w[r] + ai.scaled(d);
    }
    return PLPath::from_vertices(std::move(w));
}

long long PathModel::eps(const PLPath& p, size_t i) const {
    Rat m(0);
    for (const auto& pt : p.vertices()) m = std::min(m, h(pt, i));
    return to_ll_checked(-m, "eps");
}

long long PathModel::phi(const PLPath& p, size_t i) const {
    Rat m(0);
    for (const auto& pt : p.vertices()) m = std::min(m, h(pt, i));
    return to_ll_checked(h(p.endpoint(), i) - m, "phi");
}

Weight PathModel::wt(const PLPath& p) const {
    std::vector<long long> c(datum_->rank());
    for (size_t i = 0; i < datum_->rank(); ++i)
        c[i] = to_ll_checked(p.endpoint().c[i], "endpoint coordinate");
    return Weight(std::move(c));
}

DimVector PathModel::drop(const PLPath& p) const {
    // solve [C; K] nu = lifted(lambda) - endpoint
    size_t n = datum_->rank(), k = datum_->kernel_basis().size();
    detail::RatMat a(n + k, std::vector<Rat>(n));
    std::vector<Rat> b(n + k);
    RatPoint diff = weight_point(lambda_) - p.endpoint();
    for (size_t r = 0; r < n; ++r) {
        for (size_t j = 0; j < n; ++j) a[r][j] = Rat(BigInt(datum_->a(r, j)));
        b[r] = diff.c[r];
    }
    for (size_t t = 0; t < k; ++t) {
        for (size_t j = 0; j < n; ++j) a[n + t][j] = Rat(BigInt(datum_->kernel_basis()[t][j]));
        b[n + t] = diff.c[n + t];
    }
    auto x = detail::solve_unique(std::move(a), b);
    if (!x) fail(Errc::Internal, "drop: lifted root system not faithful");
    std::vector<long long> nu(n);
    for (size_t j = 0; j < n; ++j) {
        nu[j] = to_ll_checked((*x)[j], "drop coordinate");
        if (nu[j] < 0) fail(Errc::Internal, "drop: negative coordinate");
    }
    return DimVector(std::move(nu));
}

namespace {

struct PathBall {
    std::map<std::string, std::pair<PLPath, long long>> seen;  // key -> (path, height)
    bool complete;  // crystal exhausted before the depth cut
};

// BFS closure of the straight path under the f_i, up to ball height `depth`
PathBall path_ball(const PathModel& model, long long depth) {
    PathBall ball;
    std::vector<PLPath> frontier{model.highest()};
    ball.seen[model.highest().key()] = {model.highest(), 0};
    for (long long h = 0; h < depth && !frontier.empty(); ++h) {
        std::vector<PLPath> next;
        for (const auto& p : frontier)
            for (size_t i = 0; i < model.datum().rank(); ++i) {
                auto q = model.f(p, i);
                if (!q) continue;
                auto key = q->key();
                if (ball.seen.count(key)) continue;
                ball.seen[key] = {*q, h + 1};
                next.push_back(*q);
            }
        frontier = std::move(next);
    }
    ball.complete = frontier.empty();
    return ball;
}

}  // namespace

PathDecomposeResult littelmann_decompose(const CartanDatum& datum, const Weight& la,
                                         const Weight& lb, long long depth) {
    if (!datum.dominant(la) || !datum.dominant(lb))
        fail(Errc::NotDominant, "littelmann_decompose needs dominant weights");
    PathModel model(datum, lb);
    auto ball = path_ball(model, depth);
    std::map<DimVector, long long> rows;
    RatPoint laPt = model.weight_point(la);
    for (const auto& [key, entry] : ball.seen) {
        const PLPath& p = entry.first;
        bool dom = true;
        for (const auto& pt : p.vertices()) {
            for (size_t i = 0; i < datum.rank() && dom; ++i)
                if (laPt.c[i] + pt.c[i] < Rat(0)) dom = false;
            if (!dom) break;
        }
        if (!dom) continue;
        rows[model.drop(p)] += 1;
    }
    PathDecomposeResult res;
    res.complete = ball.complete;
    for (const auto& [drop, mult] : rows) {
        PathDecomposeRow r;
        r.drop = drop;
        r.mu = datum.wt({la, lb}, drop);
        r.multiplicity = mult;
        r.exact = true;  // ball of height <= depth is exhaustively generated
        res.rows.push_back(std::move(r));
    }
    return res;
}

PathRestrictResult littelmann_restrict(const CartanDatum& datum, const Weight& lambda,
                                       const std::string& leviName, long long depth) {
    const auto& J = datum.levi(leviName);
    PathModel model(datum, lambda);
    auto ball = path_ball(model, depth);
    std::map<DimVector, long long> rows;
    for (const auto& [key, entry] : ball.seen) {
        const PLPath& p = entry.first;
        bool jdom = true;
        for (const auto& pt : p.vertices()) {
            for (size_t j : J)
                if (pt.c[j] < Rat(0)) { jdom = false; break; }
            if (!jdom) break;
        }
        if (!jdom) continue;
        rows[model.drop(p)] += 1;
    }
    std::set<size_t> inJ(J.begin(), J.end());
    PathRestrictResult res;
    res.complete = ball.complete;
    for (const auto& [drop, mult] : rows) {
        PathRestrictRow r;
        r.drop = drop;
        r.muJ = datum.wtJ(leviName, {lambda}, drop);
        std::vector<long long> sec;
        for (size_t i = 0; i < datum.rank(); ++i)
            if (!inJ.count(i)) sec.push_back(drop[i]);
        r.sector = DimVector(std::move(sec));
        r.multiplicity = mult;
        r.exact = true;
        res.rows.push_back(std::move(r));
    }
    return res;
}

}  // namespace kmd
