#pragma once

// Generalized Satake data (I, I_black, tau) on a root datum, the involution
// theta = -w_black tau, the lattices X^i = X / {lambda - theta lambda} and
// Y^i = {h : theta h = h}, and the parameters (sigma, kappa) of B_k.

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "iqg/rootdata.hpp"
#include "iqg/scalars.hpp"

namespace iqg {

/// U * M * V = D with U, V unimodular and D diagonal with d_1 | d_2 | ...
struct SmithForm {
    Eigen::MatrixXi U, Uinv, D, V;
    int rank = 0;
};
SmithForm smith_normal_form(const Eigen::MatrixXi& m);
/// Columns form a Z-basis of {x in Z^n : m x = 0}.
Eigen::MatrixXi integer_kernel(const Eigen::MatrixXi& m);

/// Class in X^i: coordinates in the Smith basis, reduced modulo the
/// invariant factors (free coordinates kept as integers).
struct IWeight {
    Eigen::VectorXi coords;
    bool operator==(const IWeight& o) const { return coords == o.coords; }
    bool operator!=(const IWeight& o) const { return !(*this == o); }
    bool operator<(const IWeight& o) const { return LatticeLess{}(coords, o.coords); }
};

enum class KCase { I, II, III };
std::string to_string(KCase c);

class SatakeDatum {
public:
    /// black and tau are 0-based. tau_X / tau_Y default to the coordinate
    /// permutation when X has the fundamental weights or the simple roots as
    /// basis. Throws std::invalid_argument on malformed input; the axioms
    /// themselves are checked by validate().
    SatakeDatum(RootDatum rd, std::vector<int> black, std::vector<int> tau,
                std::optional<Eigen::MatrixXi> tau_X = std::nullopt,
                std::optional<Eigen::MatrixXi> tau_Y = std::nullopt, std::string name = "");

    /// {"datum":"A3","lattice":"adjoint","black":[1,3],"tau":"id"|"flip"|[2,1,3],
    ///  "tau_X":[[..]],"tau_Y":[[..]],"name":".."}; indices 1-based.
    static SatakeDatum from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    const std::string& name() const { return name_; }
    const RootDatum& datum() const { return rd_; }
    int rank() const { return rd_.rank(); }
    const std::vector<int>& black() const { return black_; }
    const std::vector<int>& white() const { return white_; }
    bool is_black(int i) const;
    int tau(int i) const { return tau_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& tau_perm() const { return tau_; }
    bool black_finite() const { return finite_; }
    /// Reduced word of w_black (empty when I_black is not of finite type).
    const WeylWord& w_black() const { return w_black_; }

    const Eigen::MatrixXi& tau_X() const { return tau_X_; }
    const Eigen::MatrixXi& tau_Y() const { return tau_Y_; }
    const Eigen::MatrixXi& theta_X() const { return theta_X_; }
    const Eigen::MatrixXi& theta_Y() const { return theta_Y_; }
    /// theta on the root lattice, simple-root coordinates.
    const Eigen::MatrixXi& theta_root() const { return theta_root_; }
    Weight theta(const Weight& lambda) const { return theta_X_ * lambda; }
    Coweight theta_coweight(const Coweight& h) const { return theta_Y_ * h; }

    /// Failed axioms, one line each; empty for a generalized Satake datum.
    std::vector<std::string> validate() const;
    bool valid() const { return validate().empty(); }

    /// <h_i, theta(alpha_i)>.
    int gsat4_value(int i) const;
    /// <h_k, w_black alpha_k - alpha_k>.
    int lemma_value(int k) const;
    /// k . theta(k) for the symmetric pairing i.j = d_i a_ij.
    int dot_theta(int k) const;
    /// Case of a white index; for case II asserts lemma_value(k) <= -2
    /// (std::logic_error otherwise). Throws std::invalid_argument for black k.
    KCase case_of(int k) const;

    IWeight project(const Weight& lambda) const;
    /// Some lambda in X with project(lambda) = zeta.
    Weight lift(const IWeight& zeta) const;
    /// The class of alpha_k.
    IWeight project_root(int k) const { return project(rd_.alpha(k)); }
    /// Moduli of the class coordinates (0 for a free coordinate).
    const std::vector<int>& moduli() const { return moduli_; }
    std::string iweight_to_string(const IWeight& zeta) const;

    /// Columns: a Z-basis of Y^i.
    const Eigen::MatrixXi& y_fixed_basis() const { return y_fixed_; }
    bool in_y_fixed(const Coweight& h) const { return theta_Y_ * h == h; }
    /// <h, zeta> for h in Y^i; throws when h is not theta-fixed.
    int pair(const Coweight& h, const IWeight& zeta) const;

    /// p_k(zeta) in {0, 1}; case I only (std::invalid_argument otherwise).
    int parity(int k, const IWeight& zeta) const;

private:
    void derive();

    std::string name_;
    RootDatum rd_;
    std::vector<int> black_, white_, tau_;
    bool finite_ = false;
    WeylWord w_black_;
    Eigen::MatrixXi tau_X_, tau_Y_, theta_X_, theta_Y_, theta_root_;
    SmithForm snf_;
    std::vector<int> moduli_;
    std::vector<int> kept_;  // Smith coordinates with modulus != 1
    Eigen::MatrixXi y_fixed_;
};

/// Parameters indexed by I (entries at black indices are unused).
struct IParams {
    std::vector<RatScalar> sigma, kappa;

    /// sigma_k = q_k^{-1}, kappa_k = 0.
    static IParams defaults(const SatakeDatum& sd);
    /// {"sigma":{"2":"q^-1"},"kappa":{"2":"0"}} over the defaults.
    static IParams from_json(const SatakeDatum& sd, const nlohmann::json& j);
    nlohmann::json to_json(const SatakeDatum& sd) const;
};

/// Whether kappa_k may be nonzero: tau(k) = k, a_kj = 0 for all black j, and
/// a_kk' even for every white tau-fixed k' orthogonal to I_black.
bool kappa_allowed(const SatakeDatum& sd, int k);
/// Violated parameter constraints, one line each.
std::vector<std::string> validate_params(const SatakeDatum& sd, const IParams& p);

struct CatalogueEntry {
    std::string name;
    std::string description;
    nlohmann::json spec;
};
/// The shipped data: split-a1, a2-flip, a3-aii, b2-bi, c2-ci.
const std::vector<CatalogueEntry>& satake_catalogue();
/// (A2, I_black = {1}, tau = id): violates <h_i, theta alpha_i> != -1.
nlohmann::json rejected_example();
/// A catalogue name, or a JSON text / parsed object.
SatakeDatum load_satake(const nlohmann::json& j);
std::optional<SatakeDatum> catalogue_datum(const std::string& name);

}  // namespace iqg
