#include "iqg/modules.hpp"

#include <Eigen/Cholesky>

#include <deque>
#include <stdexcept>

#include "iqg/linalg.hpp"

namespace iqg {

namespace {

std::size_t sz(int k) { return static_cast<std::size_t>(k); }

SparseOp assemble(const std::vector<int>& offsets, int dim, const std::vector<MatrixR>& blocks,
                  const std::vector<int>& target) {
    std::vector<Eigen::Triplet<RatScalar>> trip;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        const int t = target[k];
        if (t < 0) continue;
        const MatrixR& b = blocks[k];
        for (Eigen::Index c = 0; c < b.cols(); ++c)
            for (Eigen::Index r = 0; r < b.rows(); ++r)
                if (!b(r, c).is_zero())
                    trip.emplace_back(offsets[sz(t)] + static_cast<int>(r), offsets[k] + static_cast<int>(c), b(r, c));
    }
    SparseOp m(dim, dim);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

MatrixR zeros(Eigen::Index r, Eigen::Index c) { return MatrixR::Constant(r, c, RatScalar(0)); }

}  // namespace

WeightModule::WeightModule(RootDatum rd, std::vector<Weight> weights, std::vector<int> dims, GeneratorBlocks e,
                           GeneratorBlocks f)
    : rd_(std::move(rd)), weights_(std::move(weights)), dims_(std::move(dims)), e_(std::move(e)), f_(std::move(f)) {
    const int n = rd_.rank();
    const int nw = weight_count();
    if (dims_.size() != weights_.size()) throw std::invalid_argument("WeightModule: weights and dims differ in length");
    if (static_cast<int>(e_.size()) != n || static_cast<int>(f_.size()) != n)
        throw std::invalid_argument("WeightModule: one block list per generator expected");
    offsets_.resize(sz(nw));
    for (int k = 0; k < nw; ++k) {
        if (weights_[sz(k)].size() != rd_.x_rank()) throw std::invalid_argument("WeightModule: weight of wrong rank");
        if (dims_[sz(k)] <= 0) throw std::invalid_argument("WeightModule: weight spaces must be nonzero");
        if (!index_.emplace(weights_[sz(k)], k).second) throw std::invalid_argument("WeightModule: repeated weight");
        offsets_[sz(k)] = dim_;
        dim_ += dims_[sz(k)];
        block_of_.insert(block_of_.end(), sz(dims_[sz(k)]), k);
    }
    up_.assign(sz(n), std::vector<int>(sz(nw), -1));
    down_.assign(sz(n), std::vector<int>(sz(nw), -1));
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(e_[sz(i)].size()) != nw || static_cast<int>(f_[sz(i)].size()) != nw)
            throw std::invalid_argument("WeightModule: one block per weight space expected");
        for (int k = 0; k < nw; ++k) {
            if (auto t = find(weight(k) + rd_.alpha(i))) up_[sz(i)][sz(k)] = *t;
            if (auto t = find(weight(k) - rd_.alpha(i))) down_[sz(i)][sz(k)] = *t;
            for (int sign : {1, -1}) {
                MatrixR& b = (sign > 0 ? e_ : f_)[sz(i)][sz(k)];
                const int t = shifted(k, i, sign);
                if (t < 0) {
                    if (b.size() != 0 && !is_zero(b))
                        throw std::invalid_argument("WeightModule: generator leaves the set of weights");
                    b = zeros(0, block_dim(k));
                } else if (b.rows() != block_dim(t) || b.cols() != block_dim(k)) {
                    throw std::invalid_argument("WeightModule: generator block of wrong shape");
                }
            }
        }
        e_op_.push_back(assemble(offsets_, dim_, e_[sz(i)], up_[sz(i)]));
        f_op_.push_back(assemble(offsets_, dim_, f_[sz(i)], down_[sz(i)]));
    }
}

std::optional<int> WeightModule::find(const Weight& mu) const {
    auto it = index_.find(mu);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

int WeightModule::multiplicity(const Weight& mu) const {
    auto k = find(mu);
    return k ? block_dim(*k) : 0;
}

SparseOp WeightModule::K(const Coweight& h) const {
    SparseOp m(dim_, dim_);
    m.reserve(Eigen::VectorXi::Constant(dim_, 1));
    for (int k = 0; k < weight_count(); ++k) {
        RatScalar c = RatScalar::q_pow(rd_.pair(h, weight(k)));
        for (int a = 0; a < block_dim(k); ++a) m.insert(offset(k) + a, offset(k) + a) = c;
    }
    m.makeCompressed();
    return m;
}

SparseOp WeightModule::letter(const Letter& l) const {
    switch (l.kind) {
        case Letter::Kind::E: return E(l.index);
        case Letter::Kind::F: return F(l.index);
        case Letter::Kind::K: return K(l.h);
    }
    throw std::logic_error("unreachable");
}

SparseOp WeightModule::op(const OperatorExpr& x) const {
    SparseOp out(dim_, dim_);
    for (const auto& [w, c] : x.terms()) {
        SparseOp m = identity_op(dim_);
        for (const auto& l : w) {
            if (l.kind == Letter::Kind::K) {
                // scale rows in place: the K letter is diagonal
                SparseOp k = K(l.h);
                m = SparseOp(m * k);
            } else {
                m = SparseOp(m * letter(l));
            }
        }
        out += c * m;
    }
    prune(out);
    return out;
}

VectorR WeightModule::basis_vector(int index) const {
    VectorR v = zero_vector();
    v(index) = RatScalar(1);
    return v;
}

VectorR WeightModule::apply(const Letter& l, const VectorR& v) const {
    switch (l.kind) {
        case Letter::Kind::E: return E(l.index) * v;
        case Letter::Kind::F: return F(l.index) * v;
        case Letter::Kind::K: {
            VectorR out = v;
            for (int k = 0; k < weight_count(); ++k) {
                RatScalar c;
                bool have = false;
                for (int a = 0; a < block_dim(k); ++a) {
                    RatScalar& x = out(offset(k) + a);
                    if (x.is_zero()) continue;
                    if (!have) {
                        c = RatScalar::q_pow(rd_.pair(l.h, weight(k)));
                        have = true;
                    }
                    x *= c;
                }
            }
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

VectorR WeightModule::apply(const OperatorExpr& x, const VectorR& v) const {
    VectorR out = zero_vector();
    for (const auto& [w, c] : x.terms()) {
        VectorR u = v;
        for (auto it = w.rbegin(); it != w.rend(); ++it) {
            u = apply(*it, u);
            if (is_zero(u)) break;
        }
        if (!is_zero(u)) out += c * u;
    }
    return out;
}

std::optional<Weight> WeightModule::weight_of(const VectorR& v) const {
    auto comps = components(v);
    if (comps.size() != 1) return std::nullopt;
    return weight(comps.begin()->first);
}

std::map<int, VectorR> WeightModule::components(const VectorR& v) const {
    if (v.size() != dim_) throw std::invalid_argument("vector does not belong to this module");
    std::map<int, VectorR> out;
    for (int k = 0; k < weight_count(); ++k) {
        VectorR l = local(v, k);
        if (!is_zero(l)) out.emplace(k, std::move(l));
    }
    return out;
}

VectorR WeightModule::global(const VectorR& loc, int k) const {
    VectorR v = zero_vector();
    v.segment(offset(k), block_dim(k)) = loc;
    return v;
}

void WeightModule::set_form_blocks(std::vector<MatrixR> blocks) {
    if (static_cast<int>(blocks.size()) != weight_count()) throw std::invalid_argument("form: one block per weight");
    for (int k = 0; k < weight_count(); ++k)
        if (blocks[sz(k)].rows() != block_dim(k) || blocks[sz(k)].cols() != block_dim(k))
            throw std::invalid_argument("form: block of wrong shape");
    form_ = std::move(blocks);
}

MatrixR dense_block(const WeightModule& v, const SparseOp& m, int row_block, int col_block) {
    MatrixR out = zeros(v.block_dim(row_block), v.block_dim(col_block));
    const int r0 = v.offset(row_block), r1 = r0 + v.block_dim(row_block);
    for (int a = 0; a < v.block_dim(col_block); ++a)
        for (SparseOp::InnerIterator it(m, v.offset(col_block) + a); it; ++it)
            if (it.row() >= r0 && it.row() < r1) out(it.row() - r0, a) = it.value();
    return out;
}

WeightModule trivial_module(const RootDatum& rd) {
    GeneratorBlocks e(sz(rd.rank()), std::vector<MatrixR>(1)), f = e;
    WeightModule m(rd, {rd.zero_weight()}, {1}, e, f);
    m.set_form_blocks({MatrixR::Constant(1, 1, RatScalar(1))});
    return m;
}

// --------------------------------------------------------------- V(lambda)

namespace {

void require_finite_type(const RootDatum& rd) {
    const int n = rd.rank();
    Eigen::MatrixXd s(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s(i, j) = rd.dot(i, j);
    Eigen::LLT<Eigen::MatrixXd> llt(s);
    if (llt.info() != Eigen::Success) throw std::invalid_argument("build_irrep: Cartan matrix is not of finite type");
}

}  // namespace

WeightModule build_irrep(const RootDatum& rd, const Weight& lambda) {
    require_finite_type(rd);
    if (lambda.size() != rd.x_rank()) throw std::invalid_argument("build_irrep: weight of wrong rank");
    if (!rd.is_dominant(lambda))
        throw std::invalid_argument("build_irrep: " + rd.weight_to_string(lambda) + " is not dominant");
    const int n = rd.rank();

    std::vector<Weight> weights{lambda};
    std::vector<int> dims{1};
    std::map<Weight, int, LatticeLess> index{{lambda, 0}};
    // e_blk[i][k]: E_i from k to k+alpha_i; f_blk[i][k]: F_i from k to k-alpha_i.
    std::vector<std::map<int, MatrixR>> e_blk(sz(n)), f_blk(sz(n));
    std::vector<MatrixR> gram{MatrixR::Constant(1, 1, RatScalar(1))};
    std::vector<std::vector<int>> words{{}};
    std::vector<int> word_start{0};  // first global basis index of each weight space

    auto lookup = [&](const Weight& mu) {
        auto it = index.find(mu);
        return it == index.end() ? -1 : it->second;
    };

    std::vector<int> level{0};
    while (!level.empty()) {
        std::set<Weight, LatticeLess> next_weights;
        for (int k : level)
            for (int i = 0; i < n; ++i) next_weights.insert(weights[sz(k)] - rd.alpha(i));
        std::vector<int> next_level;
        // Descending lexicographic order within a level.
        for (auto wit = next_weights.rbegin(); wit != next_weights.rend(); ++wit) {
            const Weight& nu = *wit;
            struct Cand {
                int i, p, b;
            };
            std::vector<Cand> cands;
            for (int i = 0; i < n; ++i) {
                int p = lookup(nu + rd.alpha(i));
                if (p < 0) continue;
                for (int b = 0; b < dims[sz(p)]; ++b) cands.push_back({i, p, b});
            }
            // Rows of Phi: the E_j-images, for each j with nu+alpha_j a weight.
            std::vector<std::pair<int, int>> row_blocks;  // (j, block index of nu+alpha_j)
            int rows = 0;
            for (int j = 0; j < n; ++j) {
                int p = lookup(nu + rd.alpha(j));
                if (p < 0) continue;
                row_blocks.emplace_back(j, rows);
                rows += dims[sz(p)];
            }
            MatrixR phi = zeros(rows, static_cast<Eigen::Index>(cands.size()));
            for (std::size_t c = 0; c < cands.size(); ++c) {
                const auto [i, p, b] = cands[c];
                for (const auto& [j, r0] : row_blocks) {
                    // F_i E_j b, where E_j b lies in wt(p)+alpha_j.
                    auto eit = e_blk[sz(j)].find(p);
                    if (eit != e_blk[sz(j)].end()) {
                        const int mid = lookup(weights[sz(p)] + rd.alpha(j));
                        VectorR ejb = eit->second.col(b);
                        const MatrixR& fi = f_blk[sz(i)].at(mid);
                        VectorR img = fi * ejb;
                        for (Eigen::Index r = 0; r < img.size(); ++r) phi(r0 + r, static_cast<Eigen::Index>(c)) += img(r);
                    }
                    if (i == j) {
                        // p is then the block nu+alpha_i itself.
                        const int m = rd.pair(rd.h(i), weights[sz(p)]);
                        phi(r0 + b, static_cast<Eigen::Index>(c)) += qint(m, rd.d(i));
                    }
                }
            }
            Echelon<RatScalar> ech = rref<RatScalar>(phi);
            const Eigen::Index r = ech.rank();
            if (r == 0) continue;
            const int k = static_cast<int>(weights.size());
            weights.push_back(nu);
            dims.push_back(static_cast<int>(r));
            index.emplace(nu, k);
            next_level.push_back(k);

            // E_j on the new basis: Phi restricted to pivot columns.
            for (const auto& [j, r0] : row_blocks) {
                const int target = lookup(nu + rd.alpha(j));
                MatrixR blk(dims[sz(target)], r);
                for (Eigen::Index c = 0; c < r; ++c)
                    blk.col(c) = phi.block(r0, ech.pivots[sz(static_cast<int>(c))], dims[sz(target)], 1);
                e_blk[sz(j)][k] = std::move(blk);
            }
            // F_i from each parent: coordinates of the candidates in the pivot basis.
            for (std::size_t c = 0; c < cands.size(); ++c) {
                const auto [i, p, b] = cands[c];
                auto& blk = f_blk[sz(i)][p];
                if (blk.size() == 0) blk = zeros(r, dims[sz(p)]);
                blk.col(b) = ech.reduced.col(static_cast<Eigen::Index>(c)).head(r);
            }
            // Basis words and the contravariant form on the new space.
            MatrixR g(r, r);
            for (Eigen::Index a = 0; a < r; ++a) {
                const Cand& ca = cands[sz(static_cast<int>(ech.pivots[sz(static_cast<int>(a))]))];
                std::vector<int> w{ca.i};
                const auto& pw = words[sz(word_start[sz(ca.p)] + ca.b)];
                w.insert(w.end(), pw.begin(), pw.end());
                words.push_back(std::move(w));
                // (F_i b', x) = q_i q^{-d_i <h_i, wt b'>} (b', E_i x)
                const int m = rd.pair(rd.h(ca.i), weights[sz(ca.p)]);
                const RatScalar s = RatScalar::q_pow(rd.d(ca.i) * (1 - m));
                const MatrixR& ei = e_blk[sz(ca.i)].at(k);
                for (Eigen::Index x = 0; x < r; ++x) {
                    RatScalar acc;
                    for (Eigen::Index y = 0; y < ei.rows(); ++y)
                        if (!ei(y, x).is_zero()) acc += gram[sz(ca.p)](ca.b, y) * ei(y, x);
                    g(a, x) = s * acc;
                }
            }
            gram.push_back(std::move(g));
            word_start.push_back(word_start.back() + dims[dims.size() - 2]);
        }
        level = std::move(next_level);
    }

    const int nw = static_cast<int>(weights.size());
    GeneratorBlocks e(sz(n), std::vector<MatrixR>(sz(nw))), f = e;
    for (int i = 0; i < n; ++i) {
        for (auto& [k, b] : e_blk[sz(i)]) e[sz(i)][sz(k)] = std::move(b);
        for (auto& [k, b] : f_blk[sz(i)]) f[sz(i)][sz(k)] = std::move(b);
    }
    WeightModule mod(rd, std::move(weights), std::move(dims), std::move(e), std::move(f));
    mod.set_form_blocks(std::move(gram));
    mod.set_basis_words(std::move(words));
    return mod;
}

WeightModule twist_omega(const WeightModule& v) {
    std::vector<Weight> weights;
    std::vector<int> dims;
    for (int k = 0; k < v.weight_count(); ++k) {
        weights.push_back(-v.weight(k));
        dims.push_back(v.block_dim(k));
    }
    const int n = v.datum().rank();
    GeneratorBlocks e(sz(n)), f(sz(n));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < v.weight_count(); ++k) {
            e[sz(i)].push_back(v.F_block(i, k));
            f[sz(i)].push_back(v.E_block(i, k));
        }
    WeightModule out(v.datum(), std::move(weights), std::move(dims), std::move(e), std::move(f));
    if (v.form_blocks()) out.set_form_blocks(*v.form_blocks());
    return out;
}

// ------------------------------------------------------------------ tensor

namespace {

struct TensorLayout {
    std::vector<Weight> weights;
    std::vector<int> dims;
    std::map<std::pair<int, int>, std::pair<int, int>> place;  // (k1, k2) -> (block, local offset)
};

TensorLayout tensor_layout(const WeightModule& v, const WeightModule& w) {
    TensorLayout t;
    std::map<Weight, int, LatticeLess> idx;
    for (int k1 = 0; k1 < v.weight_count(); ++k1)
        for (int k2 = 0; k2 < w.weight_count(); ++k2) {
            Weight nu = v.weight(k1) + w.weight(k2);
            auto [it, fresh] = idx.emplace(nu, static_cast<int>(t.weights.size()));
            if (fresh) {
                t.weights.push_back(nu);
                t.dims.push_back(0);
            }
            const int b = it->second;
            t.place[{k1, k2}] = {b, t.dims[sz(b)]};
            t.dims[sz(b)] += v.block_dim(k1) * w.block_dim(k2);
        }
    return t;
}

}  // namespace

WeightModule tensor(const WeightModule& v, const WeightModule& w) {
    const RootDatum& rd = v.datum();
    if (rd.cartan() != w.datum().cartan() || rd.x_rank() != w.datum().x_rank())
        throw std::invalid_argument("tensor: modules over different root data");
    const int n = rd.rank();
    TensorLayout t = tensor_layout(v, w);
    const int nw = static_cast<int>(t.weights.size());
    std::map<Weight, int, LatticeLess> idx;
    for (int b = 0; b < nw; ++b) idx.emplace(t.weights[sz(b)], b);
    auto target = [&](int b, int i, int sign) {
        auto it = idx.find(t.weights[sz(b)] + sign * rd.alpha(i));
        return it == idx.end() ? -1 : it->second;
    };

    GeneratorBlocks e(sz(n), std::vector<MatrixR>(sz(nw))), f = e;
    for (int i = 0; i < n; ++i)
        for (int b = 0; b < nw; ++b) {
            if (int tb = target(b, i, 1); tb >= 0) e[sz(i)][sz(b)] = zeros(t.dims[sz(tb)], t.dims[sz(b)]);
            if (int tb = target(b, i, -1); tb >= 0) f[sz(i)][sz(b)] = zeros(t.dims[sz(tb)], t.dims[sz(b)]);
        }

    for (const auto& [key, pl] : t.place) {
        const auto [k1, k2] = key;
        const auto [b, off] = pl;
        const int d1 = v.block_dim(k1), d2 = w.block_dim(k2);
        for (int i = 0; i < n; ++i) {
            const int di = rd.d(i);
            // E_i (x) 1
            if (int u1 = v.shifted(k1, i, 1); u1 >= 0) {
                const auto [tb, toff] = t.place.at({u1, k2});
                (void)tb;
                MatrixR& blk = e[sz(i)][sz(b)];
                const MatrixR& m = v.E_block(i, k1);
                for (int a = 0; a < d1; ++a)
                    for (int a2 = 0; a2 < m.rows(); ++a2)
                        if (!m(a2, a).is_zero())
                            for (int c = 0; c < d2; ++c) blk(toff + a2 * d2 + c, off + a * d2 + c) += m(a2, a);
            }
            // K_i (x) E_i
            if (int u2 = w.shifted(k2, i, 1); u2 >= 0) {
                const auto [tb, toff] = t.place.at({k1, u2});
                (void)tb;
                MatrixR& blk = e[sz(i)][sz(b)];
                const RatScalar s = RatScalar::q_pow(di * rd.pair(rd.h(i), v.weight(k1)));
                const MatrixR& m = w.E_block(i, k2);
                const int d2u = w.block_dim(u2);
                for (int a = 0; a < d1; ++a)
                    for (int c = 0; c < d2; ++c)
                        for (int c2 = 0; c2 < d2u; ++c2)
                            if (!m(c2, c).is_zero()) blk(toff + a * d2u + c2, off + a * d2 + c) += s * m(c2, c);
            }
            // F_i (x) K_i^{-1}
            if (int l1 = v.shifted(k1, i, -1); l1 >= 0) {
                const auto [tb, toff] = t.place.at({l1, k2});
                (void)tb;
                MatrixR& blk = f[sz(i)][sz(b)];
                const RatScalar s = RatScalar::q_pow(-di * rd.pair(rd.h(i), w.weight(k2)));
                const MatrixR& m = v.F_block(i, k1);
                for (int a = 0; a < d1; ++a)
                    for (int a2 = 0; a2 < m.rows(); ++a2)
                        if (!m(a2, a).is_zero())
                            for (int c = 0; c < d2; ++c) blk(toff + a2 * d2 + c, off + a * d2 + c) += s * m(a2, a);
            }
            // 1 (x) F_i
            if (int l2 = w.shifted(k2, i, -1); l2 >= 0) {
                const auto [tb, toff] = t.place.at({k1, l2});
                (void)tb;
                MatrixR& blk = f[sz(i)][sz(b)];
                const MatrixR& m = w.F_block(i, k2);
                const int d2l = w.block_dim(l2);
                for (int a = 0; a < d1; ++a)
                    for (int c = 0; c < d2; ++c)
                        for (int c2 = 0; c2 < d2l; ++c2)
                            if (!m(c2, c).is_zero()) blk(toff + a * d2l + c2, off + a * d2 + c) += m(c2, c);
            }
        }
    }

    WeightModule out(rd, t.weights, t.dims, std::move(e), std::move(f));
    if (v.form_blocks() && w.form_blocks()) {
        std::vector<MatrixR> g;
        for (int b = 0; b < nw; ++b) g.push_back(zeros(t.dims[sz(b)], t.dims[sz(b)]));
        for (const auto& [key, pl] : t.place) {
            const MatrixR& g1 = (*v.form_blocks())[sz(key.first)];
            const MatrixR& g2 = (*w.form_blocks())[sz(key.second)];
            MatrixR& blk = g[sz(pl.first)];
            const int d2 = static_cast<int>(g2.rows());
            for (Eigen::Index a = 0; a < g1.rows(); ++a)
                for (Eigen::Index a2 = 0; a2 < g1.cols(); ++a2) {
                    if (g1(a, a2).is_zero()) continue;
                    for (int c = 0; c < d2; ++c)
                        for (int c2 = 0; c2 < d2; ++c2)
                            if (!g2(c, c2).is_zero())
                                blk(pl.second + a * d2 + c, pl.second + a2 * d2 + c2) = g1(a, a2) * g2(c, c2);
                }
        }
        out.set_form_blocks(std::move(g));
    }
    return out;
}

int tensor_index(const WeightModule& vw, const WeightModule& v, const WeightModule& w, int a, int b) {
    TensorLayout t = tensor_layout(v, w);
    const int k1 = v.block_of(a), k2 = w.block_of(b);
    const auto [blk, off] = t.place.at({k1, k2});
    if (vw.weight(blk) != t.weights[sz(blk)]) throw std::invalid_argument("tensor_index: module is not tensor(v, w)");
    return vw.offset(blk) + off + (a - v.offset(k1)) * w.block_dim(k2) + (b - w.offset(k2));
}

VectorR tensor_vectors(const WeightModule& vw, const WeightModule& v, const WeightModule& w, const VectorR& a,
                       const VectorR& b) {
    TensorLayout t = tensor_layout(v, w);
    VectorR out = vw.zero_vector();
    for (int x = 0; x < v.dim(); ++x) {
        if (a(x).is_zero()) continue;
        const int k1 = v.block_of(x);
        for (int y = 0; y < w.dim(); ++y) {
            if (b(y).is_zero()) continue;
            const int k2 = w.block_of(y);
            const auto [blk, off] = t.place.at({k1, k2});
            out(vw.offset(blk) + off + (x - v.offset(k1)) * w.block_dim(k2) + (y - w.offset(k2))) = a(x) * b(y);
        }
    }
    return out;
}

// -------------------------------------------------------------- submodules

Submodule restrict_to(const WeightModule& v, const std::map<int, MatrixR>& blocks) {
    const int n = v.datum().rank();
    std::vector<int> ks;
    std::map<int, int> sub_index;
    std::vector<Weight> weights;
    std::vector<int> dims;
    for (const auto& [k, b] : blocks) {
        if (b.cols() == 0) continue;
        if (b.rows() != v.block_dim(k)) throw std::invalid_argument("restrict_to: block of wrong height");
        if (rank<RatScalar>(b) != b.cols()) throw std::invalid_argument("restrict_to: dependent columns");
        sub_index[k] = static_cast<int>(ks.size());
        ks.push_back(k);
        weights.push_back(v.weight(k));
        dims.push_back(static_cast<int>(b.cols()));
    }
    const int nw = static_cast<int>(ks.size());
    GeneratorBlocks e(sz(n), std::vector<MatrixR>(sz(nw))), f = e;
    for (int i = 0; i < n; ++i)
        for (int s = 0; s < nw; ++s) {
            const int k = ks[sz(s)];
            const MatrixR& bk = blocks.at(k);
            for (int sign : {1, -1}) {
                const int t = v.shifted(k, i, sign);
                if (t < 0) continue;
                MatrixR img = (sign > 0 ? v.E_block(i, k) : v.F_block(i, k)) * bk;
                auto it = sub_index.find(t);
                if (it == sub_index.end()) {
                    if (!is_zero(img)) throw std::domain_error("restrict_to: subspace is not a submodule");
                    continue;
                }
                auto x = solve_matrix<RatScalar>(blocks.at(t), img);
                if (!x) throw std::domain_error("restrict_to: subspace is not a submodule");
                (sign > 0 ? e : f)[sz(i)][sz(s)] = std::move(*x);
            }
        }
    int total = 0;
    for (int d : dims) total += d;
    MatrixR incl = zeros(v.dim(), total);
    int col = 0;
    for (int s = 0; s < nw; ++s) {
        const int k = ks[sz(s)];
        incl.block(v.offset(k), col, v.block_dim(k), dims[sz(s)]) = blocks.at(k);
        col += dims[sz(s)];
    }
    WeightModule mod(v.datum(), std::move(weights), dims, std::move(e), std::move(f));
    if (v.form_blocks()) {
        std::vector<MatrixR> g;
        for (int s = 0; s < nw; ++s) {
            const MatrixR& bk = blocks.at(ks[sz(s)]);
            g.push_back(bk.transpose() * (*v.form_blocks())[sz(ks[sz(s)])] * bk);
        }
        mod.set_form_blocks(std::move(g));
    }
    return {std::move(mod), std::move(incl)};
}

Submodule generated_submodule(const WeightModule& v, const std::vector<VectorR>& seeds) {
    const int n = v.datum().rank();
    std::map<int, Span<RatScalar>> spans;
    std::deque<std::pair<int, VectorR>> queue;
    for (const auto& s : seeds)
        for (auto& [k, loc] : v.components(s)) queue.emplace_back(k, std::move(loc));
    while (!queue.empty()) {
        auto [k, loc] = std::move(queue.front());
        queue.pop_front();
        auto it = spans.try_emplace(k, v.block_dim(k)).first;
        if (!it->second.insert(loc)) continue;
        for (int i = 0; i < n; ++i)
            for (int sign : {1, -1}) {
                const int t = v.shifted(k, i, sign);
                if (t < 0) continue;
                VectorR img = (sign > 0 ? v.E_block(i, k) : v.F_block(i, k)) * loc;
                if (!is_zero(img)) queue.emplace_back(t, std::move(img));
            }
    }
    std::map<int, MatrixR> blocks;
    for (const auto& [k, s] : spans) blocks.emplace(k, s.matrix());
    return restrict_to(v, blocks);
}

// ------------------------------------------------------ extremal and forms

VectorR highest_vector(const WeightModule& v, const Weight& lambda) {
    auto k = v.find(lambda);
    if (!k || v.block_dim(*k) != 1) throw std::invalid_argument("highest_vector: weight space is not one-dimensional");
    return v.basis_vector(v.offset(*k));
}

VectorR extremal_vector(const WeightModule& v, const VectorR& highest, const WeylWord& w) {
    const RootDatum& rd = v.datum();
    auto wt = v.weight_of(highest);
    if (!wt) throw std::invalid_argument("extremal_vector: seed is not a weight vector");
    Weight mu = *wt;
    VectorR x = highest;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        const int i = *it;
        const int m = rd.pair(rd.h(i), mu);
        if (m < 0) throw std::domain_error("extremal_vector: word is not reduced for this weight");
        for (int r = 0; r < m; ++r) x = v.F(i) * x;
        x *= qfact(m, rd.d(i)).inverse();
        mu = rd.reflect_X(i, mu);
    }
    if (is_zero(x)) throw std::domain_error("extremal_vector: divided-power string vanishes");
    return x;
}

RatScalar ContravariantForm::operator()(const WeightModule& v, const VectorR& a, const VectorR& b) const {
    RatScalar s;
    for (int k = 0; k < v.weight_count(); ++k) {
        VectorR la = v.local(a, k), lb = v.local(b, k);
        if (is_zero(la) || is_zero(lb)) continue;
        s += (la.transpose() * blocks[sz(k)] * lb)(0, 0);
    }
    return s;
}

MatrixR ContravariantForm::gram(const WeightModule& v) const {
    MatrixR g = zeros(v.dim(), v.dim());
    for (int k = 0; k < v.weight_count(); ++k)
        g.block(v.offset(k), v.offset(k), v.block_dim(k), v.block_dim(k)) = blocks[sz(k)];
    return g;
}

std::vector<std::string> contravariance_failures(const WeightModule& v, const ContravariantForm& form) {
    std::vector<std::string> out;
    const RootDatum& rd = v.datum();
    for (int k = 0; k < v.weight_count(); ++k)
        if (form.blocks[sz(k)] != form.blocks[sz(k)].transpose())
            out.push_back("symmetry at weight " + rd.weight_to_string(v.weight(k)));
    for (int i = 0; i < rd.rank(); ++i)
        for (int sign : {1, -1}) {
            // x maps k to t; check X^T G_t = G_k rho(x)|_{t -> k}
            const OperatorExpr x = sign > 0 ? OperatorExpr::E(i) : OperatorExpr::F(i);
            const SparseOp rx = v.op(rho_twist(rd, x));
            for (int k = 0; k < v.weight_count(); ++k) {
                const int t = v.shifted(k, i, sign);
                if (t < 0) continue;
                const MatrixR& xb = sign > 0 ? v.E_block(i, k) : v.F_block(i, k);
                MatrixR lhs = xb.transpose() * form.blocks[sz(t)];
                MatrixR rhs = form.blocks[sz(k)] * dense_block(v, rx, k, t);
                if (lhs != rhs)
                    out.push_back("(" + x.to_string(rd) + " u, v) at weight " + rd.weight_to_string(v.weight(k)));
            }
        }
    return out;
}

ContravariantForm build_contravariant_form(const WeightModule& v, const VectorR& seed) {
    if (!v.form_blocks()) throw std::invalid_argument("build_contravariant_form: module carries no form");
    ContravariantForm f{*v.form_blocks()};
    auto bad = contravariance_failures(v, f);
    if (!bad.empty())
        throw std::logic_error("contravariant form: convention mismatch, first failure: " + bad.front());
    RatScalar s = f(v, seed, seed);
    if (s.is_zero()) throw std::invalid_argument("build_contravariant_form: seed has zero norm");
    const RatScalar inv = s.inverse();
    for (auto& b : f.blocks) b *= inv;
    return f;
}

namespace {

using LetterMemo = std::map<std::pair<std::size_t, Letter>, SparseOp>;

SparseOp braid_op_rec(const WeightModule& v, const WeylWord& w, std::size_t len, const OperatorExpr& x,
                      LetterMemo& memo) {
    if (len == 0) return v.op(x);
    const OperatorExpr y = braid_apply(v.datum(), w[len - 1], x);
    SparseOp out(v.dim(), v.dim());
    for (const auto& [word, c] : y.terms()) {
        SparseOp m = identity_op(v.dim());
        for (const auto& l : word) {
            auto key = std::make_pair(len - 1, l);
            auto it = memo.find(key);
            if (it == memo.end())
                it = memo.emplace(key, braid_op_rec(v, w, len - 1, OperatorExpr::word({l}), memo)).first;
            m = SparseOp(m * it->second);
        }
        out += c * m;
    }
    prune(out);
    return out;
}

}  // namespace

SparseOp braid_op(const WeightModule& v, const WeylWord& w, const OperatorExpr& x) {
    LetterMemo memo;
    return braid_op_rec(v, w, w.size(), x, memo);
}

std::vector<std::string> relation_failures(const WeightModule& v) {
    std::vector<std::string> out;
    for (const auto& rel : defining_relations(v.datum()))
        if (!is_zero(v.op(rel.expr))) out.push_back(rel.name);
    return out;
}

std::map<int, MatrixR> highest_weight_vectors(const WeightModule& v) {
    std::map<int, MatrixR> out;
    const int n = v.datum().rank();
    for (int k = 0; k < v.weight_count(); ++k) {
        int rows = 0;
        for (int i = 0; i < n; ++i) rows += static_cast<int>(v.E_block(i, k).rows());
        MatrixR stack = zeros(rows, v.block_dim(k));
        int r = 0;
        for (int i = 0; i < n; ++i) {
            const MatrixR& b = v.E_block(i, k);
            stack.block(r, 0, b.rows(), b.cols()) = b;
            r += static_cast<int>(b.rows());
        }
        MatrixR ker = nullspace<RatScalar>(stack);
        if (ker.cols() > 0) out.emplace(k, std::move(ker));
    }
    return out;
}

std::map<Weight, int, LatticeLess> u_decomposition(const WeightModule& v) {
    std::map<Weight, int, LatticeLess> out;
    for (const auto& [k, ker] : highest_weight_vectors(v)) out[v.weight(k)] += static_cast<int>(ker.cols());
    return out;
}

std::map<Weight, int, LatticeLess> character(const WeightModule& v) {
    std::map<Weight, int, LatticeLess> out;
    for (int k = 0; k < v.weight_count(); ++k) out[v.weight(k)] = v.block_dim(k);
    return out;
}

}  // namespace iqg
