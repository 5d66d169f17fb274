#pragma once

// L^i(lambda, mu): the U-submodule of V(lambda) (x) V(mu) generated by
// v_{w_black lambda} (x) v_mu, its defining relations, integrability
// certificates and the splitting into simple U^i-modules.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iqg/iqsp.hpp"

namespace iqg {

struct LiModule {
    Weight lambda, mu;
    WeightModule left, right;  // V(lambda), V(mu)
    WeightModule ambient;      // V(lambda) (x) V(mu)
    MatrixR inclusion;         // columns: basis of L in the ambient module
    IModule module;            // L with the U^i action
    VectorR cyclic;            // v^i in L coordinates

    const SatakeDatum& satake() const { return module.satake(); }
    int dim() const { return module.dim(); }
    /// w_black lambda + mu, the weight of v^i.
    Weight nu() const;
};

LiModule build_Li(const SatakeDatum& sd, const IParams& p, const Weight& lambda, const Weight& mu);

/// 2 * (height of lambda + mu) + 4.
int depth_bound(const RootDatum& rd, const Weight& lambda, const Weight& mu);

/// On v^i: E_j^(<h_j, -w_black lambda> + 1), F_j^(<h_j, mu> + 1) (j black),
/// F_k^(<h_k, nu> + 1) (k white) all vanish, and E_k kills the closure of v^i
/// under the black E_j.
CheckReport check_Li_annihilators(const LiModule& l);

/// The U^i relations on v^i: the E and F families above and, for k white and
/// b a product of black divided powers F_j^(m_j) with m_j <= depth,
/// B_{k, nu + wt b}^(<h_k, nu + wt b> + 1) b v^i = 0. Only for pairwise
/// orthogonal black nodes; std::invalid_argument otherwise.
CheckReport check_theorem_relations(const LiModule& l, int depth);

/// Closure of the seeds under the given operators.
Span<RatScalar> operator_closure(const std::vector<SparseOp>& ops, const std::vector<VectorR>& seeds);
/// Matrices of every U^i generator (generator_names order).
std::vector<SparseOp> ui_generators(const IModule& m);
/// dim of the span of all U^i-words applied to v^i.
int ui_cyclic_dim(const LiModule& l);

struct IntegrabilityCertificate {
    IWeight zeta;
    std::map<int, int> a, b;  // black j -> a_j, b_j
    std::map<int, int> c;     // white k -> c_k
};

enum class CertStatus { certified, failed, inconclusive };
std::string to_string(CertStatus s);

struct CertificateResult {
    CertStatus status = CertStatus::inconclusive;
    std::optional<IntegrabilityCertificate> certificate;
    std::string witness;  // the family that did not vanish, when not certified
};

/// Whether E_j^(a_j+1) v, F_j^(b_j+1) v and B_{k,zeta}^(c_k+1) v all vanish.
bool verify_certificate(const IModule& m, const VectorR& v, const IntegrabilityCertificate& cert);

/// Smallest exponents with all exponent + 1 <= bound. A family that cannot
/// vanish (a power of a single operator not nilpotent on v) is a failure; an
/// exhausted bound otherwise is inconclusive. v must lie in one i-weight
/// space (std::invalid_argument otherwise).
CertificateResult integrability_certificate(const IModule& m, const VectorR& v, int bound);

/// The contravariant form on L normalized by (v^i, v^i) = 1.
ContravariantForm li_form(const LiModule& l);

/// Nondegeneracy of the form on each weight space, and
/// (B_k u, v) = (u, rho(B_k) v) on the whole basis.
CheckReport check_Li_form(const LiModule& l);

struct UiSummand {
    MatrixR basis;          // columns, module coordinates
    int end_dim = 0;        // dimension of the U^i-endomorphism algebra
    bool resolved = false;  // end_dim == 1
    /// B_k eigenvalue when B_k acts as a scalar on the summand.
    std::map<int, std::string> b_scalars;
};

struct UiDecomposition {
    std::vector<UiSummand> summands;
    std::vector<std::string> failures;
};

/// Splits m into U^i-submodules W_1 + W_2 + ... with W_{s+1} inside the form
/// complement of W_1 + ... + W_s. A summand is simple when its endomorphism
/// algebra is one-dimensional; larger ones are split along eigenspaces of an
/// endomorphism when one has an eigenvalue in Q(q), else left unresolved.
UiDecomposition decompose_ui(const IModule& m, const ContravariantForm& form);
UiDecomposition decompose_ui(const LiModule& l);

/// Checks on a decomposition: dimensions add up, summands are mutually
/// orthogonal and closed under the generators, and the form is nondegenerate
/// on each summand.
CheckReport check_decomposition(const IModule& m, const ContravariantForm& form, const UiDecomposition& d);

/// Highest weights of L v^i as a Levi module and of L as a U-module.
struct HighestWeightMultisets {
    std::map<Weight, int, LatticeLess> levi, u;
    bool match() const { return levi == u; }
};
HighestWeightMultisets levi_and_u_highest_weights(const LiModule& l);

}  // namespace iqg
