#pragma once

#include <map>
#include <optional>

#include "kmd/theta.hpp"
#include "kmd/wordalg.hpp"

namespace kmd {

/// Exact tensor product of irreducible modules in canonical-basis coordinates,
/// with the bar involution Psi = Theta o (bar (x) bar) built factor by factor
/// and Lusztig's triangular correction producing the canonical basis.
class TensorModule {
public:
    /// builds the product left-nested by default; right_nested recomputes Psi
    /// through the opposite bracketing (the results must coincide)
    static TensorModule build(const CartanDatum& datum, const std::vector<Weight>& lambdas,
                              long long depth, bool right_nested = false);

    const CartanDatum& datum() const { return *datum_; }
    const std::vector<Weight>& lambdas() const { return lambdas_; }
    const std::vector<IrredModule>& factors() const { return factors_; }
    const ThetaExpansion& theta() const { return theta_; }

    /// pure tensor basis element: per factor (drop, slice index)
    struct BasisElt {
        std::vector<std::pair<DimVector, size_t>> parts;
        bool operator<(const BasisElt& o) const { return parts < o.parts; }
        bool operator==(const BasisElt& o) const { return parts == o.parts; }
    };

    const std::vector<DimVector>& drops() const { return drops_; }
    size_t dim(const DimVector& nu) const;
    const std::vector<BasisElt>& basis(const DimVector& nu) const;
    /// per-factor global canonical index of each leg, for reports
    std::vector<size_t> leading_indices(const BasisElt& b) const;

    ExactMatrix matE(size_t i, const DimVector& from) const;
    ExactMatrix matF(size_t i, const DimVector& from) const;
    /// Psi matrix on the slice: Psi(x) = psi(nu) * bar(x)
    const ExactMatrix& psi(const DimVector& nu) const;
    std::vector<RationalFn> apply_psi(const DimVector& nu,
                                      const std::vector<RationalFn>& coords) const;

    struct CBTElement {
        DimVector drop;
        size_t leading;                          // basis index within the slice
        std::map<size_t, LaurentPoly> coeffs;    // basis index -> coefficient
        std::optional<Weight> filtration_class;  // set by classify_filtration
    };
    /// canonical basis of the slice, in the triangular processing order
    const std::vector<CBTElement>& canonical_basis(const DimVector& nu) const;

    /// joint kernel of every E_i on the slice: highest-weight vectors
    std::vector<std::vector<RationalFn>> highest_vectors(const DimVector& nu) const;

    /// assigns each canonical-basis element its maximal dominant weight mu
    /// with b in M[>= mu]; finite type, fully generated modules only
    void classify_filtration();
    /// weight-space spans/dimensions of the submodule generated by all highest
    /// vectors at drops componentwise <= nu_mu (strict: excluding nu_mu)
    std::map<DimVector, ExactMatrix> submodule_spans(const DimVector& nu_mu, bool strict) const;
    std::map<DimVector, size_t> submodule_dims(const DimVector& nu_mu, bool strict) const;

    // exact verification suites
    void check_psi_involution() const;
    void check_psi_equivariance() const;
    void check_theta_intertwining() const;
    void check_theta_lattice() const;         // Theta preserves the A-lattice
    void check_canonical_basis() const;       // Psi-fixed, unitriangular, v^-1 corrections

    std::string canonical_basis_json() const;

private:
    TensorModule() = default;
    const CartanDatum* datum_ = nullptr;
    std::vector<Weight> lambdas_;
    std::vector<IrredModule> factors_;
    ThetaExpansion theta_;
    long long depth_ = 0;

    std::vector<DimVector> drops_;
    std::map<DimVector, std::vector<BasisElt>> basis_;
    std::map<DimVector, std::map<BasisElt, size_t>> index_;
    std::map<std::pair<size_t, DimVector>, ExactMatrix> matE_, matF_;
    std::map<DimVector, ExactMatrix> psi_;
    std::map<DimVector, std::vector<CBTElement>> cb_;

    Weight slice_weight(const DimVector& nu) const;
    void compute_canonical_bases();
};

}  // namespace kmd
