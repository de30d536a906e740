#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kmd/numeric.hpp"

namespace kmd {

/// Integral weight in fundamental-weight coordinates: coords[i] = <h_i, w>.
struct Weight {
    std::vector<long long> c;
    Weight() = default;
    explicit Weight(std::vector<long long> v) : c(std::move(v)) {}
    size_t size() const { return c.size(); }
    long long operator[](size_t i) const { return c[i]; }
    bool operator==(const Weight& o) const { return c == o.c; }
    bool operator!=(const Weight& o) const { return !(*this == o); }
    bool operator<(const Weight& o) const { return c < o.c; }
    Weight operator+(const Weight& o) const;
    Weight operator-(const Weight& o) const;
    std::string str() const;  // "1,0"
    static Weight parse(const std::string& s, size_t rank);
};

/// Element of the positive root lattice in simple-root coordinates.
struct DimVector {
    std::vector<long long> c;
    DimVector() = default;
    explicit DimVector(std::vector<long long> v) : c(std::move(v)) {}
    static DimVector zero(size_t n) { return DimVector(std::vector<long long>(n, 0)); }
    static DimVector unit(size_t n, size_t i);
    size_t size() const { return c.size(); }
    long long operator[](size_t i) const { return c[i]; }
    long long height() const;
    bool is_zero() const;
    bool operator==(const DimVector& o) const { return c == o.c; }
    bool operator!=(const DimVector& o) const { return !(*this == o); }
    bool operator<(const DimVector& o) const;  // height, then lex: deterministic table order
    bool leq_componentwise(const DimVector& o) const;
    DimVector operator+(const DimVector& o) const;
    /// componentwise difference; nullopt when any coordinate would go negative
    std::optional<DimVector> minus(const DimVector& o) const;
    std::string str() const;
};

/// Weight of a Levi subalgebra, coordinates indexed by the members of J in order.
struct LeviWeight {
    std::string levi;
    std::vector<long long> c;
    bool operator==(const LeviWeight& o) const { return levi == o.levi && c == o.c; }
    bool operator<(const LeviWeight& o) const { return std::tie(levi, c) < std::tie(o.levi, o.c); }
    std::string str() const;
};

enum class DatumType { Finite, Affine, Indefinite };

/// Symmetric generalized Cartan matrix with vertex labels and registered Levi
/// subsets. Immutable after validation.
class CartanDatum {
public:
    static CartanDatum validate(std::vector<std::string> labels,
                                std::vector<std::vector<long long>> gcm,
                                std::map<std::string, std::vector<std::string>> levis = {});
    static CartanDatum from_json_text(const std::string& text);
    static CartanDatum from_file(const std::string& path);

    size_t rank() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    long long a(size_t i, size_t j) const { return gcm_[i][j]; }
    const std::vector<std::vector<long long>>& gcm() const { return gcm_; }
    DatumType type() const { return type_; }
    bool finite_type() const { return type_ == DatumType::Finite; }

    /// symmetric bilinear form on the root lattice, (alpha_i, alpha_j) = a_ij
    long long sym(const DimVector& x, const DimVector& y) const;
    /// cross pairing (sum nu_i alpha_i, w) = sum nu_i w_i
    long long pair(const DimVector& nu, const Weight& w) const;

    Weight alpha(size_t i) const;           // simple root in fundamental coordinates
    Weight root_to_weight(const DimVector& nu) const;  // C * nu
    bool dominant(const Weight& w) const;
    Weight rho() const;                      // <h_i, rho> = 1
    Weight sum(const std::vector<Weight>& lambdas) const;

    /// wt(nu) = sum(lambdas) - C*nu
    Weight wt(const std::vector<Weight>& lambdas, const DimVector& nu) const;

    /// kernel of the GCM as primitive integer vectors; empty for finite type
    const std::vector<DimVector>& kernel_basis() const { return kernel_; }
    /// faithful lift: aux coordinates separating drops with equal C*nu
    std::vector<long long> aux(const DimVector& nu) const;

    // Levi registry
    bool has_levi(const std::string& name) const { return levis_.count(name) > 0; }
    /// vertex indices of a registered Levi, sorted ascending; throws UnknownLevi
    const std::vector<size_t>& levi(const std::string& name) const;
    std::vector<std::string> levi_names() const;
    CartanDatum sub_datum(const std::vector<size_t>& J) const;

    /// Levi weight map: wt_J(nu)_j = sum_l lambda^l_j + sum_{k notin J}(-a_jk) nu_k
    /// - sum_{k in J} a_jk nu_k; cross-checked against <h_j, wt(nu)>.
    LeviWeight wtJ(const std::string& name, const std::vector<Weight>& lambdas,
                   const DimVector& nu) const;

    struct DomResult {
        enum class Status { Found, None, Unresolved } status;
        DimVector nu;  // valid when Found
    };
    /// dominance witness: nu in N^I with C*nu = hi - lo. Exact for invertible
    /// GCM; bounded search (sum nu_i <= bound) otherwise, reporting Unresolved
    /// when the bound is exhausted without a decision.
    DomResult dominance_diff(const Weight& hi, const Weight& lo, long long bound = 24) const;

    /// drop of a classical weight below sum(lambdas) in the lifted lattice:
    /// the unique nu in N^I with C*nu = sum(lambdas) - mu and aux(nu) = 0,
    /// or nullopt. Exact for every GCM type.
    std::optional<DimVector> exact_drop(const std::vector<Weight>& lambdas,
                                        const Weight& mu) const;

    /// positive roots as dimension vectors: complete list in finite type,
    /// all roots of height <= bound otherwise (norm <= 2, connected support)
    std::vector<DimVector> positive_roots(long long height_bound) const;

    /// canonical serialization of (labels, gcm, levis); cache key material
    std::string hash_key() const;

private:
    CartanDatum() = default;
    std::vector<std::string> labels_;
    std::vector<std::vector<long long>> gcm_;
    std::map<std::string, std::vector<size_t>> levis_;
    DatumType type_ = DatumType::Finite;
    std::vector<DimVector> kernel_;
    bool support_connected(const DimVector& b) const;
};

}  // namespace kmd
