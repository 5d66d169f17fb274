#pragma once

// The coideal generators B_k, the auxiliary Y_k and Z_k, the kappa^(n)
// sequence, and the i-divided powers as operators on weight modules.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iqg/linalg.hpp"
#include "iqg/modules.hpp"
#include "iqg/satake.hpp"

namespace iqg {

struct CoidealGen {
    int k = -1;
    KCase kcase = KCase::I;
    OperatorExpr B, Y;
    std::optional<OperatorExpr> Z;  // case II only
};

/// B_k = F_k + sigma_k T_{w_black}(E_tau(k)) K_k^{-1} + kappa_k K_k^{-1},
/// Y_k = B_k - F_k, Z_k = F_k Y_k - q_k^{-2} Y_k F_k. Throws
/// std::invalid_argument on an invalid datum or parameters.
CoidealGen build_Bk(const SatakeDatum& sd, const IParams& p, int k);

/// The two-sided sequence with kappa^(0) = kappa0, kappa^(1) = branch and
/// kappa^(n+1) + kappa^(n-1) = (q_k + q_k^{-1}) kappa^(n).
template <class T>
class KappaSeq {
public:
    /// Rejects a branch that does not solve
    /// x^2 - (q_k + q_k^{-1}) kappa0 x + kappa0^2 - b = 0.
    KappaSeq(T kappa0, T b, T branch, int d = 1);
    T operator()(int n) const;
    const T& b() const { return b_; }
    /// The other root of the quadratic, i.e. kappa^(-1).
    T other_branch() const { return (*this)(-1); }

private:
    T k0_, k1_, b_;
    int d_;
};

/// kappa^(n) for the given branch; see KappaSeq.
template <class T>
T kappa_sequence(const T& kappa0, const T& b, const T& branch, int n, int d = 1) {
    return KappaSeq<T>(kappa0, b, branch, d)(n);
}

/// The roots of (QE)_{kappa0, b}; in Q(q) when the discriminant is a square,
/// else in the quadratic extension by its square root.
std::pair<QuadExt, QuadExt> kappa_branches(const RatScalar& kappa0, const RatScalar& b, int d = 1);

/// P_n(x) = prod_j (x - kappa^(n-2j)) written over Q(q) by pairing
/// kappa^(m) with kappa^(-m): coefficients, constant term first.
std::vector<RatScalar> minimal_polynomial(const RatScalar& kappa0, const RatScalar& b, int n, int d = 1);

/// A weight U-module seen as a U^i-module for a Satake datum and parameters.
/// All generator matrices are built on construction; the object is
/// immutable afterwards.
class IModule {
public:
    IModule(WeightModule v, SatakeDatum sd, IParams p);

    const WeightModule& module() const { return v_; }
    const SatakeDatum& satake() const { return sd_; }
    const IParams& params() const { return p_; }
    int dim() const { return v_.dim(); }

    const SparseOp& B(int k) const { return b_.at(k); }
    const SparseOp& Y(int k) const { return y_.at(k); }
    /// F_k Y_k - q_k^{-2} Y_k F_k (every white k).
    const SparseOp& Z(int k) const { return z_.at(k); }

    /// Distinct i-weights, sorted.
    const std::vector<IWeight>& iweights() const { return iweights_; }
    /// i-weight of the k-th X-weight space.
    const IWeight& iweight_of_block(int k) const { return block_iweight_[static_cast<std::size_t>(k)]; }
    /// X-weight spaces projecting to zeta.
    std::vector<int> blocks_of(const IWeight& zeta) const;
    /// 1_zeta: projection onto the sum of those weight spaces.
    SparseOp projector(const IWeight& zeta) const;
    /// The i-weight of a nonzero vector lying in one i-weight component.
    std::optional<IWeight> iweight_of(const VectorR& v) const;

    /// Matrix of one U^i generator: "E<j>", "F<j>" (j black), "B<k>" (k white).
    SparseOp generator(const std::string& name) const;
    /// Names of all U^i generators: E_j, F_j for black j, B_k, and K_h for a
    /// basis of Y^i.
    std::vector<std::string> generator_names() const;

private:
    WeightModule v_;
    SatakeDatum sd_;
    IParams p_;
    std::map<int, SparseOp> b_, y_, z_;
    std::vector<IWeight> iweights_, block_iweight_;
};

/// The i-divided power B_{k,zeta}^(n), composed with 1_zeta, as an operator
/// on the module.
SparseOp idivided_power(const IModule& m, int k, const IWeight& zeta, int n);
/// All of B_{k,zeta}^(0..n_max) in one pass.
std::vector<SparseOp> idivided_powers(const IModule& m, int k, const IWeight& zeta, int n_max);
/// B_{k,zeta}^(n) v for n = 0..n_max, without forming the operators.
std::vector<VectorR> idivided_power_vectors(const IModule& m, int k, const IWeight& zeta, const VectorR& v,
                                            int n_max);

/// B_k on V_n: the U_k-submodule generated by v_{n w_k} in V(n w_k).
struct SpectrumReport {
    int k = -1, n = 0;
    std::vector<std::string> expected;  // kappa^(n), kappa^(n-2), ..., kappa^(-n)
    bool distinct = false;              // the expected values are pairwise distinct
    bool annihilated = false;           // prod (B - kappa^(n-2j)) = 0
    bool simple = false;                // each kappa^(n-2j) has a 1-dimensional eigenspace
    bool ok() const { return distinct && annihilated && simple; }
};
/// Requires case I at k and a fundamental weight w_k in X. swap_branch picks
/// kappa^(-1) as the first step of the sequence instead of kappa^(1).
SpectrumReport minimal_polynomial_check(const SatakeDatum& sd, const IParams& p, int k, int n,
                                        bool swap_branch = false);

/// B_{k,zeta}^(n+1) against P_n(B_k) 1_zeta / [n]_k! and / [n+1]_k!.
struct MinPolyIdentity {
    int n = 0;
    bool over_n_factorial = false;
    bool over_n_plus_1_factorial = false;
};
/// Requires case I and p_k(zeta) = n mod 2.
MinPolyIdentity minimal_polynomial_identity(const IModule& m, int k, const IWeight& zeta, int n);

/// Eigenvalues of B_k on each i-weight component (RatScalar or QuadExt
/// strings, with multiplicity), when B_k acts diagonalizably with eigenvalues
/// in Q(q) or one quadratic extension; "unresolved" entries otherwise.
struct ComponentSpectrum {
    /// The i-weight, or "all" when B_k does not preserve i-weight components.
    std::string component;
    int dim = 0;
    std::vector<std::string> eigenvalues;
    bool diagonalizable = false;
};
std::vector<ComponentSpectrum> spectrum(const IModule& m, int k);

/// Distinct eigenvalues of m in Q(q) found among 0, +-q^j, +-[j] and extra,
/// plus the roots of a leftover linear factor, or of a quadratic one with a
/// square discriminant.
std::vector<RatScalar> rational_eigenvalues(const MatrixR& m, const std::vector<RatScalar>& extra = {});

struct CheckReport {
    std::vector<std::string> failures;
    std::vector<std::string> notes;
    bool ok() const { return failures.empty(); }
};

/// Case II: [Z_k, F_k] = [Z_k, Y_k] = 0, Z_k shifts weights by
/// w_black alpha_k - alpha_k and Y_k by -theta(alpha_k). Case III:
/// F_k Y_k - q_k^{-2} Y_k F_k = 0 and Y_k shifts by -theta(alpha_k).
CheckReport case_structure_check(const IModule& m, int k);

/// B_k V_zeta lies in V_{zeta - alpha_k bar} for every zeta.
CheckReport b_shift_check(const IModule& m, int k);

/// Closure of v under E_j for black j.
Span<RatScalar> levi_plus_span(const IModule& m, const VectorR& v);

enum class FrBStatus { holds, fails, precondition };
struct FrBResult {
    FrBStatus status = FrBStatus::fails;
    std::string detail;
};
/// B_{k, wt(v)}^(n+1) v against F_k^(n+1) v, n = <h_k, wt v> (case II: the
/// leading term and span{F_k^(f) Z_k^z v : f + 2z = n+1, z >= 1}).
FrBResult frB_highest_check(const IModule& m, int k, const VectorR& v);

}  // namespace iqg
