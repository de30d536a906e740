#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kmd/cartan.hpp"

namespace kmd {

/// Point of weight space over Q. The first `rank` coordinates are
/// fundamental-weight coordinates; trailing coordinates are the kernel lift
/// that keeps the simple-root embedding faithful for singular GCMs.
struct RatPoint {
    std::vector<Rat> c;
    bool operator==(const RatPoint& o) const { return c == o.c; }
    RatPoint operator+(const RatPoint& o) const;
    RatPoint operator-(const RatPoint& o) const;
    RatPoint scaled(const Rat& s) const;
};

/// Piecewise-linear path from 0, canonical form: vertices only, collinear
/// segments merged, uniform time grid r/m on serialization.
class PLPath {
public:
    PLPath() = default;
    static PLPath straight(const RatPoint& target);

    const std::vector<RatPoint>& vertices() const { return v_; }  // v_[0] = 0
    const RatPoint& endpoint() const { return v_.back(); }
    size_t segments() const { return v_.size() - 1; }

    bool operator==(const PLPath& o) const { return v_ == o.v_; }
    std::string key() const;            // canonical serialization
    std::string to_json() const;        // [[t_num,t_den,[coords...]],...]
    static PLPath from_json(const std::string& s);

    /// concatenation (this then other, both time-halved)
    PLPath concat(const PLPath& o) const;

    static PLPath from_vertices(std::vector<RatPoint> vs);  // canonicalizes

private:
    std::vector<RatPoint> v_;
    void canonicalize();
};

/// Littelmann root operators on paths for a fixed datum.
class PathModel {
public:
    PathModel(const CartanDatum& datum, Weight lambda);

    const CartanDatum& datum() const { return *datum_; }
    const Weight& lambda() const { return lambda_; }

    PLPath highest() const;  // straight path to lambda (aux = 0)

    std::optional<PLPath> f(const PLPath& p, size_t i) const;
    std::optional<PLPath> e(const PLPath& p, size_t i) const;
    long long eps(const PLPath& p, size_t i) const;
    long long phi(const PLPath& p, size_t i) const;
    Weight wt(const PLPath& p) const;          // integral endpoint, fundamental coords
    DimVector drop(const PLPath& p) const;     // lambda - endpoint as a root-lattice point

    RatPoint alpha_point(size_t i) const;      // simple root with kernel lift
    RatPoint weight_point(const Weight& w) const;  // aux = 0

private:
    const CartanDatum* datum_;
    Weight lambda_;
    size_t dim_;  // rank + kernel dimension
    Rat h(const RatPoint& pt, size_t i) const { return pt.c[i]; }
};

struct PathDecomposeRow {
    DimVector drop;      // drop of the endpoint inside B(lambda_b)
    Weight mu;           // lambda_a + endpoint
    long long multiplicity;
    bool exact;
};

struct PathDecomposeResult {
    std::vector<PathDecomposeRow> rows;
    bool complete;  // B(lambda_b) exhausted within the depth ball
};

/// Generalized Littlewood-Richardson by dominant-translate paths:
/// L(a) (x) L(b) = direct sum of L(a + pi(1)) over pi in B(b) with a + pi
/// staying dominant. Rows keyed by the drop of a+b minus mu.
PathDecomposeResult littelmann_decompose(const CartanDatum& datum, const Weight& la,
                                         const Weight& lb, long long depth);

struct PathRestrictRow {
    DimVector drop;             // full drop inside B(lambda)
    LeviWeight muJ;
    DimVector sector;           // pr_{I \ J} of the drop (coords outside J, in I order)
    long long multiplicity;
    bool exact;
};

struct PathRestrictResult {
    std::vector<PathRestrictRow> rows;
    bool complete;
};

/// Restriction rule by J-dominant paths: res_J L(lambda) = sum of L_J(pi(1)|_J)
/// over pi in B(lambda) with <h_j, pi(t)> >= 0 for all j in J, t in [0,1].
PathRestrictResult littelmann_restrict(const CartanDatum& datum, const Weight& lambda,
                                       const std::string& leviName, long long depth);

}  // namespace kmd
