#include "kmd/crystal.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "kmd/cache.hpp"
#include "kmd/error.hpp"

namespace kmd {

std::unique_ptr<Bracket> Bracket::leaf_node(int i) {
    auto b = std::make_unique<Bracket>();
    b->leaf = i;
    return b;
}

std::unique_ptr<Bracket> Bracket::pair_node(std::unique_ptr<Bracket> l,
                                            std::unique_ptr<Bracket> r) {
    auto b = std::make_unique<Bracket>();
    b->left = std::move(l);
    b->right = std::move(r);
    return b;
}

std::unique_ptr<Bracket> Bracket::left_nested(size_t n) {
    auto b = leaf_node(0);
    for (size_t i = 1; i < n; ++i) b = pair_node(std::move(b), leaf_node(int(i)));
    return b;
}

std::unique_ptr<Bracket> Bracket::right_nested(size_t n) {
    auto b = leaf_node(int(n - 1));
    for (size_t i = n - 1; i-- > 0;) b = pair_node(leaf_node(int(i)), std::move(b));
    return b;
}

std::unique_ptr<Bracket> Bracket::clone() const {
    if (leaf >= 0) return leaf_node(leaf);
    return pair_node(left->clone(), right->clone());
}

namespace {

std::string bracket_str(const Bracket& b) {
    if (b.leaf >= 0) return std::to_string(b.leaf);
    return "(" + bracket_str(*b.left) + "," + bracket_str(*b.right) + ")";
}

}  // namespace

CrystalModel CrystalModel::irreducible(const CartanDatum& datum, Weight lambda) {
    return tensor(datum, {std::move(lambda)});
}

CrystalModel CrystalModel::tensor(const CartanDatum& datum, std::vector<Weight> lambdas,
                                  std::unique_ptr<Bracket> bracket) {
    if (lambdas.empty()) fail(Errc::Usage, "tensor crystal needs at least one factor");
    CrystalModel m;
    m.datum_ = &datum;
    m.lambdas_ = std::move(lambdas);
    for (const auto& l : m.lambdas_) m.models_.emplace_back(datum, l);
    m.bracket_ = bracket ? std::move(bracket) : Bracket::left_nested(m.lambdas_.size());
    return m;
}

CrystalElt CrystalModel::highest() const {
    CrystalElt b;
    for (const auto& pm : models_) b.factors.push_back(pm.highest());
    return b;
}

CrystalModel::NodeStats CrystalModel::stats(const Bracket& n, const CrystalElt& b,
                                            size_t i) const {
    if (n.leaf >= 0) {
        const PathModel& pm = models_[n.leaf];
        const PLPath& p = b.factors[n.leaf];
        NodeStats s;
        s.eps = pm.eps(p, i);
        s.phi = pm.phi(p, i);
        s.hpair = p.endpoint().c[i].numerator().convert_to<long long>();
        return s;
    }
    NodeStats L = stats(*n.left, b, i), R = stats(*n.right, b, i);
    NodeStats s;
    s.eps = std::max(L.eps, R.eps - L.hpair);
    s.phi = std::max(R.phi, L.phi + R.hpair);
    s.hpair = L.hpair + R.hpair;
    return s;
}

std::optional<CrystalElt> CrystalModel::apply(const Bracket& n, CrystalElt b, size_t i,
                                              bool lower) const {
    if (n.leaf >= 0) {
        const PathModel& pm = models_[n.leaf];
        auto q = lower ? pm.f(b.factors[n.leaf], i) : pm.e(b.factors[n.leaf], i);
        if (!q) return std::nullopt;
        b.factors[n.leaf] = std::move(*q);
        return b;
    }
    NodeStats L = stats(*n.left, b, i), R = stats(*n.right, b, i);
    bool go_left = lower ? (L.phi > R.eps) : (L.phi >= R.eps);
    return apply(go_left ? *n.left : *n.right, std::move(b), i, lower);
}

std::optional<CrystalElt> CrystalModel::f(const CrystalElt& b, size_t i) const {
    if (phi(b, i) < 1) return std::nullopt;
    auto r = apply(*bracket_, b, i, true);
    if (!r) fail(Errc::Internal, "signature rule routed f_i to an undefined factor operator");
    return r;
}

std::optional<CrystalElt> CrystalModel::e(const CrystalElt& b, size_t i) const {
    if (eps(b, i) < 1) return std::nullopt;
    auto r = apply(*bracket_, b, i, false);
    if (!r) fail(Errc::Internal, "signature rule routed e_i to an undefined factor operator");
    return r;
}

long long CrystalModel::eps(const CrystalElt& b, size_t i) const {
    return stats(*bracket_, b, i).eps;
}

long long CrystalModel::phi(const CrystalElt& b, size_t i) const {
    return stats(*bracket_, b, i).phi;
}

Weight CrystalModel::wt(const CrystalElt& b) const {
    std::vector<long long> c(datum_->rank(), 0);
    for (size_t l = 0; l < models_.size(); ++l) {
        Weight w = models_[l].wt(b.factors[l]);
        for (size_t i = 0; i < c.size(); ++i) c[i] += w[i];
    }
    return Weight(std::move(c));
}

DimVector CrystalModel::drop(const CrystalElt& b) const {
    DimVector d = DimVector::zero(datum_->rank());
    for (size_t l = 0; l < models_.size(); ++l) d = d + models_[l].drop(b.factors[l]);
    return d;
}

std::string CrystalModel::key(const CrystalElt& b) const {
    std::string k;
    for (const auto& p : b.factors) {
        k += p.key();
        k += "|";
    }
    return k;
}

std::string CrystalModel::model_key() const {
    std::string k = "tensor{";
    for (const auto& l : lambdas_) k += l.str() + ";";
    k += "}bracket{" + bracket_str(*bracket_) + "}";
    return k;
}

namespace {

struct FactorBall {
    std::vector<PLPath> paths;           // sorted by (height, key)
    std::vector<long long> heights;
    bool complete = false;               // crystal exhausted before the depth cut
};

FactorBall factor_ball(const PathModel& pm, long long depth) {
    std::map<std::string, std::pair<PLPath, long long>> seen;
    PLPath top = pm.highest();
    seen[top.key()] = {top, 0};
    std::vector<PLPath> frontier{top};
    long long h = 0;
    while (h < depth && !frontier.empty()) {
        std::vector<PLPath> next;
        for (const auto& p : frontier)
            for (size_t i = 0; i < pm.datum().rank(); ++i) {
                auto q = pm.f(p, i);
                if (!q) continue;
                auto key = q->key();
                if (seen.count(key)) continue;
                seen[key] = {*q, h + 1};
                next.push_back(*q);
            }
        frontier = std::move(next);
        ++h;
    }
    FactorBall ball;
    ball.complete = frontier.empty();
    std::vector<std::pair<std::pair<long long, std::string>, const PLPath*>> order;
    for (const auto& [key, entry] : seen)
        order.push_back({{entry.second, key}, &entry.first});
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [hk, p] : order) {
        ball.paths.push_back(*p);
        ball.heights.push_back(hk.first);
    }
    return ball;
}

}  // namespace

CrystalGraph CrystalGraph::generate(const CrystalModel& model, long long depth) {
    if (depth < 0) fail(Errc::Usage, "depth must be >= 0");
    const CartanDatum& datum = model.datum();
    size_t n = datum.rank();
    size_t N = model.factor_count();

    std::vector<FactorBall> balls;
    long long total_max = 0;
    bool all_complete = true;
    for (size_t l = 0; l < N; ++l) {
        PathModel pm(datum, model.lambdas()[l]);
        balls.push_back(factor_ball(pm, depth));
        all_complete = all_complete && balls.back().complete;
        total_max += balls.back().heights.empty() ? 0 : balls.back().heights.back();
    }

    CrystalGraph g;
    g.datum_ = &datum;
    g.lambdas_ = model.lambdas();
    g.depth_ = depth;
    g.globally_complete_ = all_complete && total_max <= depth;
    g.model_key_ = model.model_key();
    for (size_t i = 0; i < n; ++i) g.active_.push_back(i);

    // product of factor balls with total height <= depth
    std::vector<size_t> pick(N, 0);
    std::vector<CrystalElt> elts;
    std::function<void(size_t, long long)> rec = [&](size_t l, long long budget) {
        if (l == N) {
            CrystalElt b;
            for (size_t m = 0; m < N; ++m) b.factors.push_back(balls[m].paths[pick[m]]);
            elts.push_back(std::move(b));
            return;
        }
        for (size_t idx = 0; idx < balls[l].paths.size(); ++idx) {
            if (balls[l].heights[idx] > budget) break;  // heights sorted ascending
            pick[l] = idx;
            rec(l + 1, budget - balls[l].heights[idx]);
        }
    };
    rec(0, depth);

    struct Keyed {
        std::pair<DimVector, std::string> k;
        size_t idx;
    };
    std::vector<Keyed> order;
    for (size_t idx = 0; idx < elts.size(); ++idx)
        order.push_back({{model.drop(elts[idx]), model.key(elts[idx])}, idx});
    std::sort(order.begin(), order.end(), [](const Keyed& a, const Keyed& b) { return a.k < b.k; });

    std::map<std::string, size_t> index;
    for (const auto& o : order) {
        CrystalNode node;
        node.elt = std::move(elts[o.idx]);
        node.drop = o.k.first;
        node.wt = model.wt(node.elt);
        for (size_t i = 0; i < n; ++i) {
            node.eps.push_back(model.eps(node.elt, i));
            node.phi.push_back(model.phi(node.elt, i));
        }
        index[o.k.second] = g.nodes_.size();
        g.nodes_.push_back(std::move(node));
    }

    for (size_t s = 0; s < g.nodes_.size(); ++s) {
        const CrystalNode& node = g.nodes_[s];
        long long h = node.drop.height();
        for (size_t i = 0; i < n; ++i) {
            if (node.phi[i] < 1) continue;
            if (h + 1 > depth && !g.globally_complete_) continue;
            auto t = model.f(node.elt, i);
            if (!t) fail(Errc::Internal, "phi >= 1 but f undefined");
            auto it = index.find(model.key(*t));
            if (it == index.end()) {
                if (g.globally_complete_) fail(Errc::Internal, "f target missing from a complete graph");
                continue;
            }
            g.edges_.push_back({s, i, it->second});
        }
    }
    return g;
}

bool CrystalGraph::slice_complete(const DimVector& drop) const {
    return globally_complete_ || drop.height() <= depth_;
}

std::vector<size_t> CrystalGraph::highest_weight_at(const DimVector& drop) const {
    if (!slice_complete(drop))
        fail(Errc::IncompleteSlice,
             "weight slice at drop " + drop.str() + " is not exhaustively generated at depth " +
                 std::to_string(depth_));
    std::vector<size_t> out;
    for (size_t idx = 0; idx < nodes_.size(); ++idx) {
        const CrystalNode& node = nodes_[idx];
        if (!(node.drop == drop)) continue;
        bool hw = true;
        for (size_t i : active_)
            if (node.eps[i] != 0) { hw = false; break; }
        if (hw) out.push_back(idx);
    }
    return out;
}

std::map<DimVector, std::vector<size_t>> CrystalGraph::highest_weight_table() const {
    std::map<DimVector, std::vector<size_t>> out;
    for (size_t idx = 0; idx < nodes_.size(); ++idx) {
        const CrystalNode& node = nodes_[idx];
        bool hw = true;
        for (size_t i : active_)
            if (node.eps[i] != 0) { hw = false; break; }
        if (hw) out[node.drop].push_back(idx);
    }
    return out;
}

CrystalGraph CrystalGraph::levi_restrict(const std::string& leviName) const {
    const auto& J = datum_->levi(leviName);
    CrystalGraph g = *this;
    g.levi_name_ = leviName;
    g.active_.assign(J.begin(), J.end());
    std::vector<CrystalEdge> kept;
    std::set<size_t> inJ(J.begin(), J.end());
    for (const auto& e : edges_)
        if (inJ.count(e.i)) kept.push_back(e);
    g.edges_ = std::move(kept);
    return g;
}

std::string CrystalGraph::to_dot() const {
    std::ostringstream os;
    os << "digraph crystal {\n  rankdir=TB;\n";
    for (size_t idx = 0; idx < nodes_.size(); ++idx)
        os << "  n" << idx << " [label=\"" << nodes_[idx].wt.str() << "\"];\n";
    for (const auto& e : edges_)
        os << "  n" << e.src << " -> n" << e.dst << " [label=\"" << datum_->labels()[e.i]
           << "\"];\n";
    os << "}\n";
    return os.str();
}

std::string CrystalGraph::serialize() const {
    std::ostringstream os;
    os << "kmdgraph 1\n";
    os << "model " << model_key_ << "\n";
    os << "depth " << depth_ << "\n";
    os << "complete " << (globally_complete_ ? 1 : 0) << "\n";
    os << "levi " << (levi_name_.empty() ? "-" : levi_name_) << "\n";
    os << "lambdas " << lambdas_.size() << "\n";
    for (const auto& l : lambdas_) os << l.str() << "\n";
    os << "active";
    for (size_t i : active_) os << " " << i;
    os << "\n";
    os << "nodes " << nodes_.size() << "\n";
    for (const auto& node : nodes_) {
        for (size_t l = 0; l < node.elt.factors.size(); ++l)
            os << (l ? "|" : "") << node.elt.factors[l].to_json();
        os << "\n";
    }
    os << "edges " << edges_.size() << "\n";
    for (const auto& e : edges_) os << e.src << " " << e.i << " " << e.dst << "\n";
    return os.str();
}

CrystalGraph CrystalGraph::deserialize(const CartanDatum& datum, const std::string& payload) {
    std::istringstream is(payload);
    std::string tag;
    int version = 0;
    is >> tag >> version;
    if (tag != "kmdgraph" || version != 1) fail(Errc::Usage, "cache payload version mismatch");
    CrystalGraph g;
    g.datum_ = &datum;
    std::string word;
    is >> word;  // "model"
    std::getline(is, g.model_key_);
    if (!g.model_key_.empty() && g.model_key_[0] == ' ') g.model_key_.erase(0, 1);
    long long complete = 0;
    is >> word >> g.depth_;
    is >> word >> complete;
    g.globally_complete_ = complete != 0;
    is >> word >> g.levi_name_;
    if (g.levi_name_ == "-") g.levi_name_.clear();
    size_t nl = 0;
    is >> word >> nl;
    is.ignore();
    for (size_t l = 0; l < nl; ++l) {
        std::string line;
        std::getline(is, line);
        g.lambdas_.push_back(Weight::parse(line, datum.rank()));
    }
    std::string active_line;
    std::getline(is, active_line);
    {
        std::istringstream as(active_line);
        as >> word;
        size_t i;
        while (as >> i) g.active_.push_back(i);
    }
    std::string nodes_word;
    size_t nn = 0;
    is >> nodes_word >> nn;
    is.ignore();
    CrystalModel model = CrystalModel::tensor(datum, g.lambdas_);
    for (size_t idx = 0; idx < nn; ++idx) {
        std::string line;
        std::getline(is, line);
        CrystalNode node;
        std::stringstream ls(line);
        std::string part;
        while (std::getline(ls, part, '|')) node.elt.factors.push_back(PLPath::from_json(part));
        if (node.elt.factors.size() != g.lambdas_.size())
            fail(Errc::Usage, "cache payload factor count mismatch");
        node.wt = model.wt(node.elt);
        node.drop = model.drop(node.elt);
        for (size_t i = 0; i < datum.rank(); ++i) {
            node.eps.push_back(model.eps(node.elt, i));
            node.phi.push_back(model.phi(node.elt, i));
        }
        g.nodes_.push_back(std::move(node));
    }
    size_t ne = 0;
    is >> word >> ne;
    for (size_t idx = 0; idx < ne; ++idx) {
        CrystalEdge e{};
        is >> e.src >> e.i >> e.dst;
        g.edges_.push_back(e);
    }
    return g;
}

std::string CrystalGraph::cache_key(int format_version) const {
    return cache_key_for(*datum_, model_key_, depth_, format_version);
}

std::string CrystalGraph::cache_key_for(const CartanDatum& datum, const std::string& model_key,
                                        long long depth, int format_version) {
    std::string material = datum.hash_key() + "|" + model_key + "|depth=" +
                           std::to_string(depth) + "|v=" + std::to_string(format_version);
    return hex64(fnv1a(material));
}

}  // namespace kmd
