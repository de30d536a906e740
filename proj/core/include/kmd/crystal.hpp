#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kmd/path.hpp"

namespace kmd {

/// Crystal element: tuple of Littelmann paths, one per tensor factor.
/// Single-factor crystals use a one-element tuple.
struct CrystalElt {
    std::vector<PLPath> factors;
    bool operator==(const CrystalElt& o) const { return factors == o.factors; }
};

/// Binary bracketing of the tensor factors; leaves are factor indices.
struct Bracket {
    int leaf = -1;  // >= 0 at leaves
    std::unique_ptr<Bracket> left, right;
    static std::unique_ptr<Bracket> leaf_node(int i);
    static std::unique_ptr<Bracket> pair_node(std::unique_ptr<Bracket> l,
                                              std::unique_ptr<Bracket> r);
    static std::unique_ptr<Bracket> left_nested(size_t n);
    static std::unique_ptr<Bracket> right_nested(size_t n);
    std::unique_ptr<Bracket> clone() const;
};

/// Tensor-product crystal of highest-weight path crystals with the standard
/// signature rule. e_i/f_i routing is decided per bracket node by comparing
/// phi of the left part with eps of the right part.
class CrystalModel {
public:
    static CrystalModel irreducible(const CartanDatum& datum, Weight lambda);
    static CrystalModel tensor(const CartanDatum& datum, std::vector<Weight> lambdas,
                               std::unique_ptr<Bracket> bracket = nullptr);

    const CartanDatum& datum() const { return *datum_; }
    const std::vector<Weight>& lambdas() const { return lambdas_; }
    size_t factor_count() const { return models_.size(); }

    CrystalElt highest() const;
    std::optional<CrystalElt> f(const CrystalElt& b, size_t i) const;
    std::optional<CrystalElt> e(const CrystalElt& b, size_t i) const;
    long long eps(const CrystalElt& b, size_t i) const;
    long long phi(const CrystalElt& b, size_t i) const;
    Weight wt(const CrystalElt& b) const;
    DimVector drop(const CrystalElt& b) const;
    std::string key(const CrystalElt& b) const;

    std::string model_key() const;  // cache key material (lambdas + bracket)

private:
    const CartanDatum* datum_ = nullptr;
    std::vector<Weight> lambdas_;
    std::vector<PathModel> models_;
    std::unique_ptr<Bracket> bracket_;

    struct NodeStats {
        long long eps, phi, hpair;  // hpair = <h_i, wt(part)>
    };
    NodeStats stats(const Bracket& n, const CrystalElt& b, size_t i) const;
    std::optional<CrystalElt> apply(const Bracket& n, CrystalElt b, size_t i, bool lower) const;
};

struct CrystalNode {
    CrystalElt elt;
    Weight wt;
    DimVector drop;
    std::vector<long long> eps, phi;
};

struct CrystalEdge {
    size_t src;
    size_t i;
    size_t dst;  // f_i(src) = dst
};

/// Generated ball of a crystal: all elements with drop height <= depth,
/// with f-edges between stored nodes. Immutable once built.
class CrystalGraph {
public:
    static CrystalGraph generate(const CrystalModel& model, long long depth);

    const CartanDatum& datum() const { return *datum_; }
    const std::vector<Weight>& lambdas() const { return lambdas_; }
    long long depth() const { return depth_; }
    bool globally_complete() const { return globally_complete_; }
    const std::vector<CrystalNode>& nodes() const { return nodes_; }
    const std::vector<CrystalEdge>& edges() const { return edges_; }
    /// active directions: indices used for hw detection and DOT export
    const std::vector<size_t>& active() const { return active_; }
    const std::string& levi_name() const { return levi_name_; }

    bool slice_complete(const DimVector& drop) const;
    /// elements with eps_i = 0 for all active i at the given drop slice;
    /// throws IncompleteSlice unless the slice is exhaustively generated
    std::vector<size_t> highest_weight_at(const DimVector& drop) const;
    /// all hw node indices grouped by drop (complete slices only; throws on
    /// incomplete slices when strict)
    std::map<DimVector, std::vector<size_t>> highest_weight_table() const;

    /// same nodes, edges filtered to J; eps/phi and hw detection restricted
    CrystalGraph levi_restrict(const std::string& leviName) const;

    std::string to_dot() const;
    std::string serialize() const;  // cache payload
    static CrystalGraph deserialize(const CartanDatum& datum, const std::string& payload);
    std::string cache_key(int format_version) const;
    static std::string cache_key_for(const CartanDatum& datum, const std::string& model_key,
                                     long long depth, int format_version);

private:
    const CartanDatum* datum_ = nullptr;
    std::vector<Weight> lambdas_;
    long long depth_ = 0;
    bool globally_complete_ = false;
    std::vector<CrystalNode> nodes_;
    std::vector<CrystalEdge> edges_;
    std::vector<size_t> active_;
    std::string levi_name_;  // empty = full
    std::string model_key_;
    friend class CrystalModel;
};

}  // namespace kmd
