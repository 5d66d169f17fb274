#pragma once

// Finite-dimensional weight U-modules: V(lambda), omega twists, tensor
// products, submodules, evaluation of operator expressions.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iqg/algebra.hpp"
#include "iqg/eigen_support.hpp"
#include "iqg/rootdata.hpp"

namespace iqg {

/// Generator blocks: blocks[i][k] is the matrix of E_i (or F_i) from the
/// k-th weight space to the space of weight wt(k) +- alpha_i; it has no rows
/// when that weight does not occur.
using GeneratorBlocks = std::vector<std::vector<MatrixR>>;

class WeightModule {
public:
    WeightModule(RootDatum rd, std::vector<Weight> weights, std::vector<int> dims, GeneratorBlocks e,
                 GeneratorBlocks f);

    const RootDatum& datum() const { return rd_; }
    int dim() const { return dim_; }
    int weight_count() const { return static_cast<int>(weights_.size()); }
    const std::vector<Weight>& weights() const { return weights_; }
    const Weight& weight(int k) const { return weights_[static_cast<std::size_t>(k)]; }
    int offset(int k) const { return offsets_[static_cast<std::size_t>(k)]; }
    int block_dim(int k) const { return dims_[static_cast<std::size_t>(k)]; }
    std::optional<int> find(const Weight& mu) const;
    int multiplicity(const Weight& mu) const;
    /// Weight-space index of a basis vector.
    int block_of(int basis_index) const { return block_of_[static_cast<std::size_t>(basis_index)]; }
    /// Index of the weight space wt(k) + sign*alpha_i, or -1.
    int shifted(int k, int i, int sign) const {
        return (sign > 0 ? up_ : down_)[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    }

    const MatrixR& E_block(int i, int k) const { return e_[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]; }
    const MatrixR& F_block(int i, int k) const { return f_[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]; }
    const SparseOp& E(int i) const { return e_op_[static_cast<std::size_t>(i)]; }
    const SparseOp& F(int i) const { return f_op_[static_cast<std::size_t>(i)]; }
    SparseOp K(const Coweight& h) const;
    SparseOp letter(const Letter& l) const;
    /// Matrix of the action of x.
    SparseOp op(const OperatorExpr& x) const;

    VectorR zero_vector() const { return VectorR::Constant(dim_, RatScalar(0)); }
    VectorR basis_vector(int index) const;
    VectorR apply(const Letter& l, const VectorR& v) const;
    VectorR apply(const OperatorExpr& x, const VectorR& v) const;
    /// The weight of a nonzero weight-homogeneous vector; nullopt otherwise.
    std::optional<Weight> weight_of(const VectorR& v) const;
    /// Weight components of v (nonzero ones only).
    std::map<int, VectorR> components(const VectorR& v) const;
    /// Restriction of v to weight space k.
    VectorR local(const VectorR& v, int k) const { return v.segment(offset(k), block_dim(k)); }
    VectorR global(const VectorR& local, int k) const;

    /// Gram blocks of a contravariant form carried along by the
    /// constructions (irreducible, twisted, tensor, submodule); not normalized.
    const std::optional<std::vector<MatrixR>>& form_blocks() const { return form_; }
    void set_form_blocks(std::vector<MatrixR> blocks);

    /// For modules from build_irrep: basis vector b equals F_{w[0]} ... F_{w[m-1]} v_lambda.
    const std::vector<std::vector<int>>& basis_words() const { return words_; }
    void set_basis_words(std::vector<std::vector<int>> words) { words_ = std::move(words); }

private:
    RootDatum rd_;
    std::vector<Weight> weights_;
    std::vector<int> dims_, offsets_, block_of_;
    std::map<Weight, int, LatticeLess> index_;
    int dim_ = 0;
    std::vector<std::vector<int>> up_, down_;
    GeneratorBlocks e_, f_;
    std::vector<SparseOp> e_op_, f_op_;
    std::optional<std::vector<MatrixR>> form_;
    std::vector<std::vector<int>> words_;
};

/// The one-dimensional module of weight 0.
WeightModule trivial_module(const RootDatum& rd);

/// V(lambda) for dominant lambda in finite type. Weight spaces are built by
/// descending depth; each basis vector is F_i applied to a basis vector one
/// level up, and the basis of every weight space is the lexicographically
/// least independent set of such candidates. A vector below the top is
/// detected as zero by the vanishing of all E_j on it.
WeightModule build_irrep(const RootDatum& rd, const Weight& lambda);

/// omega-twisted module: weights negated, E and F exchanged.
WeightModule twist_omega(const WeightModule& v);

/// V (x) W with the action through the coproduct. Basis of each weight space:
/// pairs (a, b) ordered by V's weight space, W's weight space, then a, b.
WeightModule tensor(const WeightModule& v, const WeightModule& w);
/// Basis index in tensor(v, w) of a (x) b.
int tensor_index(const WeightModule& vw, const WeightModule& v, const WeightModule& w, int a, int b);
/// a (x) b as a vector of tensor(v, w).
VectorR tensor_vectors(const WeightModule& vw, const WeightModule& v, const WeightModule& w, const VectorR& a,
                       const VectorR& b);

struct Submodule {
    WeightModule module;
    /// Columns are the basis of the submodule inside the ambient module.
    MatrixR inclusion;
};

/// The weight-graded subspace spanned by the given columns per weight space
/// (local coordinates) as a module; throws std::domain_error when not stable
/// under the generators.
Submodule restrict_to(const WeightModule& v, const std::map<int, MatrixR>& blocks);
/// The U-submodule generated by weight-homogeneous seed vectors.
Submodule generated_submodule(const WeightModule& v, const std::vector<VectorR>& seeds);

/// The vector of weight w(lambda) obtained from v_lambda by the divided-power
/// string along w (rightmost letter first); throws std::domain_error when
/// the string kills the vector.
VectorR extremal_vector(const WeightModule& v, const VectorR& highest, const WeylWord& w);

/// The highest weight vector of V(lambda) (top weight space has dimension one).
VectorR highest_vector(const WeightModule& v, const Weight& lambda);

struct ContravariantForm {
    std::vector<MatrixR> blocks;  // per weight space, symmetric
    RatScalar operator()(const WeightModule& v, const VectorR& a, const VectorR& b) const;
    /// The block-diagonal Gram matrix.
    MatrixR gram(const WeightModule& v) const;
};

/// The carried form scaled so (seed, seed) = 1, after asserting symmetry and
/// (x u, v) = (u, rho(x) v) for all generators. Throws std::logic_error
/// when the assertion fails and std::invalid_argument if (seed, seed) = 0.
ContravariantForm build_contravariant_form(const WeightModule& v, const VectorR& seed);

/// Names of failing contravariance identities (empty when all hold).
std::vector<std::string> contravariance_failures(const WeightModule& v, const ContravariantForm& form);

/// Names of defining relations of U that fail on v (empty when all hold).
std::vector<std::string> relation_failures(const WeightModule& v);

/// Per weight space, a basis (columns, local coordinates) of the vectors
/// killed by every E_i; blocks with none are omitted.
std::map<int, MatrixR> highest_weight_vectors(const WeightModule& v);

/// Multiplicities of the simple summands V(nu) of a finite-dimensional module.
std::map<Weight, int, LatticeLess> u_decomposition(const WeightModule& v);

std::map<Weight, int, LatticeLess> character(const WeightModule& v);

/// Matrix of T_w(x) on v without expanding T_w(x) symbolically: the images
/// of single letters under each suffix of w are memoized as matrices.
SparseOp braid_op(const WeightModule& v, const WeylWord& w, const OperatorExpr& x);

/// Dense block of a sparse operator between two weight spaces.
MatrixR dense_block(const WeightModule& v, const SparseOp& m, int row_block, int col_block);

}  // namespace iqg
