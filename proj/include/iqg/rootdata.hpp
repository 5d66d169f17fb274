#pragma once

// Cartan and root data, Weyl group action, dominance order.
//
// Indices are 0-based in code and 1-based in every textual form.
// X (weights) and Y (coweights) are coordinate vectors in fixed bases; the
// pairing <y, x> = y^T P x.

#include <Eigen/Core>
#include <json.hpp>

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace iqg {

using Weight = Eigen::VectorXi;     // element of X
using Coweight = Eigen::VectorXi;   // element of Y
using WeylWord = std::vector<int>;  // (i1, ..., il) means s_i1 ... s_il, acting rightmost first

/// Lexicographic order so lattice points can key ordered containers.
struct LatticeLess {
    bool operator()(const Eigen::VectorXi& a, const Eigen::VectorXi& b) const {
        const Eigen::Index n = std::min(a.size(), b.size());
        for (Eigen::Index i = 0; i < n; ++i)
            if (a(i) != b(i)) return a(i) < b(i);
        return a.size() < b.size();
    }
};

std::string format_vector(const Eigen::VectorXi& v);

class RootDatum {
public:
    /// X has the fundamental weights as basis, Y the simple coroots.
    static RootDatum simply_connected(const Eigen::MatrixXi& cartan, const std::string& name = "");
    /// X has the simple roots as basis, Y the fundamental coweights.
    static RootDatum adjoint(const Eigen::MatrixXi& cartan, const std::string& name = "");
    /// "A3", "B2", "C2", "D4", "G2"; lattice "simply-connected" or "adjoint".
    static RootDatum of_type(const std::string& type, const std::string& lattice = "simply-connected");
    static RootDatum from_json(const nlohmann::json& j);
    /// Arbitrary root datum; validates <h_i, alpha_j> = a_ij and regularity.
    RootDatum(Eigen::MatrixXi cartan, Eigen::MatrixXi pairing, Eigen::MatrixXi coroots, Eigen::MatrixXi roots,
              std::string name);

    static Eigen::MatrixXi cartan_of_type(const std::string& type);

    const std::string& name() const { return name_; }
    int rank() const { return static_cast<int>(cartan_.rows()); }
    int x_rank() const { return static_cast<int>(roots_.rows()); }
    int y_rank() const { return static_cast<int>(coroots_.rows()); }
    const Eigen::MatrixXi& cartan() const { return cartan_; }
    int a(int i, int j) const { return cartan_(i, j); }
    /// i.i / 2, so that q_i = q^{d_i}.
    int d(int i) const { return d_[static_cast<std::size_t>(i)]; }
    /// The symmetric pairing i.j.
    int dot(int i, int j) const { return d(i) * cartan_(i, j); }
    const Eigen::MatrixXi& pairing_matrix() const { return pairing_; }
    /// Columns h_i in Y coordinates / alpha_i in X coordinates.
    const Eigen::MatrixXi& coroot_matrix() const { return coroots_; }
    const Eigen::MatrixXi& root_matrix() const { return roots_; }

    Coweight h(int i) const { return coroots_.col(i); }
    Weight alpha(int i) const { return roots_.col(i); }
    Weight zero_weight() const { return Weight::Zero(x_rank()); }
    Coweight zero_coweight() const { return Coweight::Zero(y_rank()); }

    int pair(const Coweight& y, const Weight& x) const;
    /// (<h_i, lambda>)_i.
    Eigen::VectorXi labels(const Weight& lambda) const;
    /// The weight with the given Dynkin labels, when it lies in X.
    std::optional<Weight> from_labels(const Eigen::VectorXi& labels) const;
    std::optional<Weight> fundamental_weight(int i) const;

    Weight reflect_X(int i, const Weight& lambda) const;
    Coweight reflect_Y(int i, const Coweight& y) const;
    /// Simple root coordinates: s_i(alpha_j) = alpha_j - a_ij alpha_i.
    Eigen::VectorXi reflect_root(int i, const Eigen::VectorXi& coords) const;

    Weight act_X(const WeylWord& w, Weight lambda) const;
    Coweight act_Y(const WeylWord& w, Coweight y) const;
    Eigen::VectorXi act_root(const WeylWord& w, Eigen::VectorXi coords) const;
    Eigen::MatrixXi matrix_X(const WeylWord& w) const;
    Eigen::MatrixXi matrix_Y(const WeylWord& w) const;
    Eigen::MatrixXi matrix_root(const WeylWord& w) const;

    /// Coordinates of lambda in the simple roots when lambda is in their Z-span.
    std::optional<Eigen::VectorXi> root_coordinates(const Weight& lambda) const;
    /// Rational coordinates (numerator, common denominator); nullopt outside the Q-span.
    std::optional<std::pair<Eigen::VectorXi, int>> rational_root_coordinates(const Weight& lambda) const;
    bool dominance_leq(const Weight& lambda, const Weight& mu) const;
    bool is_dominant(const Weight& lambda) const;
    /// Sum of Dynkin labels.
    int label_height(const Weight& lambda) const;
    /// Ceiling of the sum of (rational) simple-root coordinates.
    int root_height(const Weight& lambda) const;

    WeylWord longest_element(const std::vector<int>& sub) const;
    WeylWord reduced_word(const WeylWord& w) const;
    int length(const WeylWord& w) const { return static_cast<int>(reduced_word(w).size()); }
    bool same_element(const WeylWord& a, const WeylWord& b) const;
    /// Coxeter exponent m_ij from a_ij a_ji in {0,1,2,3}.
    int coxeter_m(int i, int j) const;

    std::set<Weight, LatticeLess> orbit(const Weight& lambda) const;
    /// The dominant element of the Weyl orbit of lambda.
    Weight dominant_conjugate(const Weight& lambda) const;
    /// w0 lambda for the full Weyl group.
    Weight lowest_weight(const Weight& dominant) const;

    /// Dominant weights with label height at most h (only when X contains
    /// all fundamental weights).
    std::vector<Weight> dominant_weights_up_to(int h) const;

    /// Integer combination of w_i (fundamental weights) and a_i (simple roots),
    /// e.g. "2*w1 - a2". A bare integer n means n*w1 in rank one.
    Weight parse_weight(const std::string& text) const;
    /// Integer combination of h_i (simple coroots) and y_i (basis of Y).
    Coweight parse_coweight(const std::string& text) const;
    /// "2*w1+w2" style rendering through Dynkin labels when possible.
    std::string weight_to_string(const Weight& lambda) const;

    nlohmann::json to_json() const;

private:
    void validate();

    std::string name_;
    Eigen::MatrixXi cartan_;
    std::vector<int> d_;
    Eigen::MatrixXi pairing_;  // y_rank x x_rank
    Eigen::MatrixXi coroots_;  // y_rank x n, column i = h_i
    Eigen::MatrixXi roots_;    // x_rank x n, column i = alpha_i
};

/// Symmetrizing vector d with d_i a_ij = d_j a_ji, minimal positive integers;
/// throws when the matrix is not a symmetrizable generalized Cartan matrix.
std::vector<int> symmetrizer(const Eigen::MatrixXi& cartan);

}  // namespace iqg
