#include "iqg/integrable.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace iqg {

namespace {

std::string label(int i) { return std::to_string(i + 1); }

// x^(n) v for x = E_i or F_i; zero once some power vanishes.
VectorR divided_apply(const WeightModule& v, const SparseOp& x, int i, int n, VectorR w) {
    for (int r = 0; r < n && !is_zero(w); ++r) w = x * w;
    return qfact(n, v.datum().d(i)).inverse() * w;
}

MatrixR dense(const SparseOp& op) { return MatrixR(op); }

}  // namespace

Weight LiModule::nu() const {
    const SatakeDatum& sd = satake();
    return sd.datum().act_X(sd.w_black(), lambda) + mu;
}

LiModule build_Li(const SatakeDatum& sd, const IParams& p, const Weight& lambda, const Weight& mu) {
    const RootDatum& rd = sd.datum();
    if (!rd.is_dominant(lambda) || !rd.is_dominant(mu)) throw std::invalid_argument("build_Li: weights must be dominant");
    WeightModule left = build_irrep(rd, lambda);
    WeightModule right = build_irrep(rd, mu);
    WeightModule amb = tensor(left, right);
    const VectorR x = extremal_vector(left, highest_vector(left, lambda), sd.w_black());
    const VectorR seed = tensor_vectors(amb, left, right, x, highest_vector(right, mu));
    Submodule sub = generated_submodule(amb, {seed});
    auto c = solve<RatScalar>(sub.inclusion, seed);
    if (!c) throw std::logic_error("build_Li: seed outside its own submodule");
    IModule m(std::move(sub.module), sd, p);
    return LiModule{lambda, mu, std::move(left), std::move(right), std::move(amb), std::move(sub.inclusion),
                    std::move(m), std::move(*c)};
}

int depth_bound(const RootDatum& rd, const Weight& lambda, const Weight& mu) {
    return 2 * rd.root_height(lambda + mu) + 4;
}

// ------------------------------------------------------------ relations

CheckReport check_Li_annihilators(const LiModule& l) {
    const SatakeDatum& sd = l.satake();
    const RootDatum& rd = sd.datum();
    const WeightModule& v = l.module.module();
    const Weight wl = rd.act_X(sd.w_black(), l.lambda);
    const Weight nu = l.nu();
    CheckReport r;
    if (v.weight_of(l.cyclic) != nu) r.failures.push_back("v^i does not have weight w_black lambda + mu");
    for (int j : sd.black()) {
        const int a = -rd.pair(rd.h(j), wl) + 1;
        if (!is_zero(divided_apply(v, v.E(j), j, a, l.cyclic)))
            r.failures.push_back("E_" + label(j) + "^(" + std::to_string(a) + ") v^i != 0");
        const int b = rd.pair(rd.h(j), l.mu) + 1;
        if (!is_zero(divided_apply(v, v.F(j), j, b, l.cyclic)))
            r.failures.push_back("F_" + label(j) + "^(" + std::to_string(b) + ") v^i != 0");
    }
    for (int k : sd.white()) {
        const int f = rd.pair(rd.h(k), nu) + 1;
        if (f <= 0) {
            r.failures.push_back("F_" + label(k) + ": exponent " + std::to_string(f) + " is not positive");
            continue;
        }
        if (!is_zero(divided_apply(v, v.F(k), k, f, l.cyclic)))
            r.failures.push_back("F_" + label(k) + "^(" + std::to_string(f) + ") v^i != 0");
    }
    const Span<RatScalar> lplus = levi_plus_span(l.module, l.cyclic);
    for (int k : sd.white())
        for (const auto& w : lplus.basis())
            if (!is_zero(VectorR(v.E(k) * w))) {
                r.failures.push_back("E_" + label(k) + " L+ v^i != 0");
                break;
            }
    if (sd.white().empty() || lplus.dim() == 0) r.notes.push_back("R+ family empty");
    return r;
}

CheckReport check_theorem_relations(const LiModule& l, int depth) {
    const SatakeDatum& sd = l.satake();
    const RootDatum& rd = sd.datum();
    for (int i : sd.black())
        for (int j : sd.black())
            if (i != j && rd.a(i, j) != 0)
                throw std::invalid_argument("check_theorem_relations: unsupported Levi (black nodes " + label(i) +
                                            " and " + label(j) + " are joined)");
    const WeightModule& v = l.module.module();
    const Weight wl = rd.act_X(sd.w_black(), l.lambda);
    const Weight nu = l.nu();
    CheckReport r;
    for (int j : sd.black()) {
        const int a = -rd.pair(rd.h(j), wl) + 1;
        if (!is_zero(divided_apply(v, v.E(j), j, a, l.cyclic)))
            r.failures.push_back("E' family: E_" + label(j) + "^(" + std::to_string(a) + ") v^i != 0");
        const int b = rd.pair(rd.h(j), l.mu) + 1;
        if (!is_zero(divided_apply(v, v.F(j), j, b, l.cyclic)))
            r.failures.push_back("F' family: F_" + label(j) + "^(" + std::to_string(b) + ") v^i != 0");
    }

    // b = prod_j F_j^(m_j): black nodes commute, so the order is immaterial.
    const std::vector<int>& black = sd.black();
    int checked = 0, vacuous = 0;
    std::function<void(std::size_t, const VectorR&, const Weight&, std::string)> walk =
        [&](std::size_t pos, const VectorR& u, const Weight& wt, std::string name) {
            if (pos == black.size()) {
                if (is_zero(u)) {
                    ++vacuous;
                    return;
                }
                const IWeight zeta = sd.project(wt);
                for (int k : sd.white()) {
                    ++checked;
                    const int n = rd.pair(rd.h(k), wt) + 1;
                    if (n <= 0) {
                        r.failures.push_back("B' family: k=" + label(k) + ", b=" + name + ": exponent " +
                                             std::to_string(n) + " is not positive");
                        continue;
                    }
                    auto seq = idivided_power_vectors(l.module, k, zeta, u, n);
                    if (!is_zero(seq.back()))
                        r.failures.push_back("B' family: k=" + label(k) + ", b=" + (name.empty() ? "1" : name) +
                                             ", n=" + std::to_string(n));
                }
                return;
            }
            const int j = black[pos];
            VectorR w = u;
            Weight wt2 = wt;
            for (int m = 0; m <= depth; ++m) {
                if (m > 0) {
                    w = qint(m, rd.d(j)).inverse() * VectorR(v.F(j) * w);
                    wt2 -= rd.alpha(j);
                }
                const std::string part = m == 0 ? "" : "F_" + label(j) + "^(" + std::to_string(m) + ")";
                walk(pos + 1, w, wt2, name + part);
                if (is_zero(w)) break;
            }
        };
    walk(0, l.cyclic, nu, "");
    r.notes.push_back(std::to_string(checked) + " B' relations checked, " + std::to_string(vacuous) +
                      " with b v^i = 0");
    return r;
}

Span<RatScalar> operator_closure(const std::vector<SparseOp>& ops, const std::vector<VectorR>& seeds) {
    if (seeds.empty()) throw std::invalid_argument("operator_closure: no seeds");
    Span<RatScalar> span(seeds.front().size());
    std::vector<VectorR> queue;
    for (const auto& s : seeds)
        if (span.insert(s)) queue.push_back(s);
    while (!queue.empty()) {
        VectorR w = std::move(queue.back());
        queue.pop_back();
        for (const auto& op : ops) {
            VectorR img = op * w;
            if (span.insert(img)) queue.push_back(std::move(img));
        }
    }
    return span;
}

std::vector<SparseOp> ui_generators(const IModule& m) {
    std::vector<SparseOp> out;
    for (const auto& name : m.generator_names()) out.push_back(m.generator(name));
    return out;
}

int ui_cyclic_dim(const LiModule& l) {
    return static_cast<int>(operator_closure(ui_generators(l.module), {l.cyclic}).dim());
}

// ------------------------------------------------------------ certificates

std::string to_string(CertStatus s) {
    switch (s) {
        case CertStatus::certified: return "certified";
        case CertStatus::failed: return "failed";
        case CertStatus::inconclusive: return "inconclusive";
    }
    return "?";
}

bool verify_certificate(const IModule& m, const VectorR& v, const IntegrabilityCertificate& cert) {
    const WeightModule& w = m.module();
    for (const auto& [j, a] : cert.a)
        if (!is_zero(divided_apply(w, w.E(j), j, a + 1, v))) return false;
    for (const auto& [j, b] : cert.b)
        if (!is_zero(divided_apply(w, w.F(j), j, b + 1, v))) return false;
    for (const auto& [k, c] : cert.c)
        if (!is_zero(idivided_power_vectors(m, k, cert.zeta, v, c + 1).back())) return false;
    return true;
}

CertificateResult integrability_certificate(const IModule& m, const VectorR& v, int bound) {
    const SatakeDatum& sd = m.satake();
    const WeightModule& w = m.module();
    auto zeta = m.iweight_of(v);
    if (!zeta) throw std::invalid_argument("integrability_certificate: vector is not in one i-weight space");
    CertificateResult res;
    IntegrabilityCertificate cert{*zeta, {}, {}, {}};

    // Smallest e < bound with x^(e+1) v = 0 for a single operator x; nullopt
    // when none. Powers of one operator: vanishing is decided by x^dim v.
    auto power_search = [&](const SparseOp& x, const std::string& name,
                            const std::vector<VectorR>& seq) -> std::optional<int> {
        for (std::size_t e = 1; e < seq.size(); ++e)
            if (is_zero(seq[e])) return static_cast<int>(e) - 1;
        VectorR y = v;
        for (int r = 0; r < w.dim() && !is_zero(y); ++r) y = x * y;
        if (!is_zero(y)) {
            res.status = CertStatus::failed;
            res.witness = name + " is not nilpotent on v";
        } else if (res.status != CertStatus::failed) {
            res.witness = name + " does not vanish below the bound";
        }
        return std::nullopt;
    };
    auto powers = [&](const SparseOp& x) {
        std::vector<VectorR> seq{v};
        for (int e = 1; e <= bound; ++e) seq.push_back(x * seq.back());
        return seq;
    };

    bool complete = true;
    for (int j : sd.black()) {
        auto a = power_search(w.E(j), "E_" + label(j), powers(w.E(j)));
        auto b = power_search(w.F(j), "F_" + label(j), powers(w.F(j)));
        if (a) cert.a[j] = *a;
        if (b) cert.b[j] = *b;
        complete = complete && a && b;
    }
    for (int k : sd.white()) {
        const auto seq = idivided_power_vectors(m, k, *zeta, v, bound);
        const std::string name = "B_" + label(k) + "^(n)";
        std::optional<int> c;
        if (sd.case_of(k) == KCase::I) {
            for (std::size_t e = 1; e < seq.size(); ++e)
                if (is_zero(seq[e])) {
                    c = static_cast<int>(e) - 1;
                    break;
                }
            if (!c && res.status != CertStatus::failed) res.witness = name + " does not vanish below the bound";
        } else {
            c = power_search(m.B(k), name, seq);
        }
        if (c) cert.c[k] = *c;
        complete = complete && c;
    }
    if (!complete) {
        if (res.status != CertStatus::failed) res.status = CertStatus::inconclusive;
        return res;
    }
    if (!verify_certificate(m, v, cert)) throw std::logic_error("integrability_certificate: recheck failed");
    res.status = CertStatus::certified;
    res.certificate = std::move(cert);
    res.witness.clear();
    return res;
}

// ------------------------------------------------------------ form

ContravariantForm li_form(const LiModule& l) { return build_contravariant_form(l.module.module(), l.cyclic); }

CheckReport check_Li_form(const LiModule& l) {
    const WeightModule& v = l.module.module();
    const SatakeDatum& sd = l.satake();
    CheckReport r;
    const ContravariantForm f = li_form(l);
    for (std::size_t b = 0; b < f.blocks.size(); ++b)
        if (determinant<RatScalar>(f.blocks[b]).is_zero())
            r.failures.push_back("form degenerate on weight " + sd.datum().weight_to_string(v.weight(static_cast<int>(b))));
    const MatrixR g = f.gram(v);
    for (int k : sd.white()) {
        const CoidealGen gen = build_Bk(sd, l.module.params(), k);
        const MatrixR b = dense(l.module.B(k));
        const MatrixR rb = dense(v.op(rho_twist(sd.datum(), gen.B)));
        if (MatrixR(b.transpose() * g) != MatrixR(g * rb))
            r.failures.push_back("(B_" + label(k) + " u, v) != (u, rho(B_" + label(k) + ") v)");
    }
    return r;
}

// ------------------------------------------------------------ decomposition

namespace {

struct Splitter {
    const IModule& m;
    std::vector<MatrixR> ops;  // generators and i-weight projectors
    MatrixR gram;

    Span<RatScalar> closure(const VectorR& seed) const {
        Span<RatScalar> span(seed.size());
        std::vector<VectorR> queue;
        if (span.insert(seed)) queue.push_back(seed);
        while (!queue.empty()) {
            VectorR w = std::move(queue.back());
            queue.pop_back();
            for (const auto& op : ops) {
                VectorR img = op * w;
                if (span.insert(img)) queue.push_back(std::move(img));
            }
        }
        return span;
    }

    // Vectors of the subspace (columns of s) lying in one i-weight space.
    std::vector<VectorR> weight_vectors(const MatrixR& s) const {
        std::vector<VectorR> out;
        for (const auto& z : m.iweights()) {
            const MatrixR p = dense(m.projector(z));
            for (Eigen::Index c = 0; c < s.cols(); ++c) {
                VectorR w = p * s.col(c);
                if (!is_zero(w)) out.push_back(std::move(w));
            }
        }
        return out;
    }

    // The action of each op on the subspace spanned by the columns of w.
    std::vector<MatrixR> restrict(const MatrixR& w) const {
        std::vector<MatrixR> out;
        for (const auto& op : ops) {
            auto c = solve_matrix<RatScalar>(w, MatrixR(op * w));
            if (!c) throw std::logic_error("decompose_ui: subspace not stable");
            out.push_back(std::move(*c));
        }
        return out;
    }

    // Basis (as matrices in w-coordinates) of the commutant of the ops on w.
    std::vector<MatrixR> endomorphisms(const MatrixR& w) const {
        const std::vector<MatrixR> act = restrict(w);
        const Eigen::Index n = w.cols();
        MatrixR sys = MatrixR::Zero(static_cast<Eigen::Index>(act.size()) * n * n, n * n);
        for (std::size_t g = 0; g < act.size(); ++g) {
            const MatrixR& a = act[g];
            // (X a - a X)(r, s) in terms of x(t, u), unknown index t * n + u
            for (Eigen::Index rr = 0; rr < n; ++rr)
                for (Eigen::Index ss = 0; ss < n; ++ss) {
                    const Eigen::Index row = static_cast<Eigen::Index>(g) * n * n + rr * n + ss;
                    for (Eigen::Index t = 0; t < n; ++t) {
                        if (!a(t, ss).is_zero()) sys(row, rr * n + t) += a(t, ss);
                        if (!a(rr, t).is_zero()) sys(row, t * n + ss) -= a(rr, t);
                    }
                }
        }
        const MatrixR null = nullspace<RatScalar>(sys);
        std::vector<MatrixR> out;
        for (Eigen::Index c = 0; c < null.cols(); ++c) {
            MatrixR x(n, n);
            for (Eigen::Index t = 0; t < n; ++t)
                for (Eigen::Index u = 0; u < n; ++u) x(t, u) = null(t * n + u, c);
            out.push_back(std::move(x));
        }
        return out;
    }

    // A proper nonzero submodule of w cut out by an endomorphism eigenspace.
    std::optional<MatrixR> eigen_split(const MatrixR& w, const std::vector<MatrixR>& ends) const {
        const Eigen::Index n = w.cols();
        for (const auto& x : ends) {
            for (const auto& c : rational_eigenvalues(x)) {
                const MatrixR k = nullspace<RatScalar>(MatrixR(x - c * MatrixR::Identity(n, n)));
                if (k.cols() > 0 && k.cols() < n) return MatrixR(w * k);
            }
        }
        return std::nullopt;
    }
};

}  // namespace

UiDecomposition decompose_ui(const IModule& m, const ContravariantForm& form) {
    Splitter sp{m, {}, form.gram(m.module())};
    for (const auto& g : ui_generators(m)) sp.ops.push_back(dense(g));
    for (const auto& z : m.iweights()) sp.ops.push_back(dense(m.projector(z)));

    UiDecomposition out;
    MatrixR rest = MatrixR::Identity(m.dim(), m.dim());
    while (rest.cols() > 0) {
        // smallest cyclic span of an i-weight vector of the remaining space
        std::optional<MatrixR> best;
        for (const auto& w : sp.weight_vectors(rest)) {
            MatrixR c = sp.closure(w).matrix();
            if (!best || c.cols() < best->cols()) best = std::move(c);
        }
        MatrixR w = std::move(*best);
        UiSummand s;
        for (;;) {
            bool descended = false;
            for (const auto& u : sp.weight_vectors(w)) {
                MatrixR c = sp.closure(u).matrix();
                if (c.cols() < w.cols()) {
                    w = std::move(c);
                    descended = true;
                    break;
                }
            }
            if (descended) continue;
            const auto ends = sp.endomorphisms(w);
            s.end_dim = static_cast<int>(ends.size());
            if (s.end_dim == 1) break;
            if (auto sub = sp.eigen_split(w, ends)) {
                w = std::move(*sub);
                continue;
            }
            break;
        }
        s.resolved = s.end_dim == 1;
        s.basis = w;
        for (int k : m.satake().white()) {
            const MatrixR bw = dense(m.B(k)) * w;
            auto c = solve_matrix<RatScalar>(w, bw);
            if (!c) continue;
            const RatScalar lam = (*c)(0, 0);
            if (MatrixR(*c) == MatrixR(lam * MatrixR::Identity(w.cols(), w.cols()))) s.b_scalars[k] = lam.pretty();
        }

        // complement of w inside rest
        const MatrixR pairing = MatrixR(w.transpose() * sp.gram * rest);
        const MatrixR comp = rest * nullspace<RatScalar>(pairing);
        if (comp.cols() + w.cols() != rest.cols()) {
            out.failures.push_back("form degenerate on a summand of dimension " + std::to_string(w.cols()));
            out.summands.push_back(std::move(s));
            break;
        }
        out.summands.push_back(std::move(s));
        if (comp.cols() > 0) {
            try {
                (void)sp.restrict(comp);
            } catch (const std::logic_error&) {
                out.failures.push_back("form complement is not a U^i-submodule");
                UiSummand left;
                left.basis = comp;
                out.summands.push_back(std::move(left));
                break;
            }
        }
        rest = comp;
    }
    return out;
}

UiDecomposition decompose_ui(const LiModule& l) { return decompose_ui(l.module, li_form(l)); }

CheckReport check_decomposition(const IModule& m, const ContravariantForm& form, const UiDecomposition& d) {
    CheckReport r;
    const MatrixR g = form.gram(m.module());
    std::vector<MatrixR> ops;
    for (const auto& op : ui_generators(m)) ops.push_back(dense(op));
    Eigen::Index total = 0;
    for (std::size_t i = 0; i < d.summands.size(); ++i) {
        const MatrixR& w = d.summands[i].basis;
        total += w.cols();
        for (const auto& op : ops)
            if (!solve_matrix<RatScalar>(w, MatrixR(op * w))) {
                r.failures.push_back("summand " + std::to_string(i + 1) + " not closed");
                break;
            }
        if (determinant<RatScalar>(MatrixR(w.transpose() * g * w)).is_zero())
            r.failures.push_back("form degenerate on summand " + std::to_string(i + 1));
        for (std::size_t j = i + 1; j < d.summands.size(); ++j)
            if (!is_zero(MatrixR(w.transpose() * g * d.summands[j].basis)))
                r.failures.push_back("summands " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                     " not orthogonal");
    }
    if (total != m.dim()) r.failures.push_back("dimensions add up to " + std::to_string(total));
    MatrixR all(m.dim(), total);
    Eigen::Index col = 0;
    for (const auto& s : d.summands) {
        all.middleCols(col, s.basis.cols()) = s.basis;
        col += s.basis.cols();
    }
    if (rank<RatScalar>(all) != m.dim()) r.failures.push_back("summands do not span the module");
    return r;
}

HighestWeightMultisets levi_and_u_highest_weights(const LiModule& l) {
    const SatakeDatum& sd = l.satake();
    const WeightModule& v = l.module.module();
    HighestWeightMultisets out;
    out.u = u_decomposition(v);

    std::vector<SparseOp> levi;
    for (int j : sd.black()) {
        levi.push_back(v.E(j));
        levi.push_back(v.F(j));
    }
    const Span<RatScalar> lv = operator_closure(levi, {l.cyclic});
    const MatrixR basis = lv.matrix();
    // per weight space: the part of L v^i killed by every black E_j
    for (int blk = 0; blk < v.weight_count(); ++blk) {
        std::vector<Eigen::Index> cols;
        for (Eigen::Index c = 0; c < basis.cols(); ++c)
            if (!is_zero(VectorR(v.local(basis.col(c), blk)))) cols.push_back(c);
        if (cols.empty()) continue;
        // the closure is weight-graded, so its echelon basis vectors are homogeneous
        MatrixR sub(v.dim(), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t i = 0; i < cols.size(); ++i) sub.col(static_cast<Eigen::Index>(i)) = basis.col(cols[i]);
        MatrixR eq(0, sub.cols());
        for (int j : sd.black()) {
            const MatrixR e = dense(v.E(j)) * sub;
            MatrixR grown(eq.rows() + e.rows(), sub.cols());
            grown << eq, e;
            eq = std::move(grown);
        }
        const Eigen::Index mult = eq.rows() == 0 ? sub.cols() : nullspace<RatScalar>(eq).cols();
        if (mult > 0) out.levi[v.weight(blk)] += static_cast<int>(mult);
    }
    return out;
}

}  // namespace iqg
