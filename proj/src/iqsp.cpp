#include "iqg/iqsp.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>
#include <type_traits>

namespace iqg {

namespace {

using Poly = std::vector<RatScalar>;  // constant term first

void trim(Poly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, RatScalar(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    trim(out);
    return out;
}

// Quotient and remainder of a by b (b nonzero).
std::pair<Poly, Poly> poly_divmod(Poly a, const Poly& b) {
    trim(a);
    Poly quo;
    if (a.size() < b.size()) return {quo, a};
    quo.assign(a.size() - b.size() + 1, RatScalar(0));
    const RatScalar lead = b.back().inverse();
    for (std::size_t i = a.size() - 1;; --i) {
        const RatScalar c = a[i] * lead;
        quo[i - (b.size() - 1)] = c;
        if (!c.is_zero())
            for (std::size_t j = 0; j < b.size(); ++j) a[i - (b.size() - 1) + j] -= c * b[j];
        if (i == b.size() - 1) break;
    }
    a.resize(b.size() - 1);
    trim(a);
    trim(quo);
    return {quo, a};
}

RatScalar qsum(int d) { return RatScalar::q_pow(d) + RatScalar::q_pow(-d); }

std::string label(int i) { return std::to_string(i + 1); }

// Minimal polynomial of a square matrix, monic, constant term first.
Poly matrix_minimal_polynomial(const MatrixR& m) {
    const Eigen::Index d = m.rows();
    Span<RatScalar> span(d * d);
    std::vector<VectorR> flat;
    MatrixR power = MatrixR::Identity(d, d);
    for (Eigen::Index e = 0; e <= d; ++e) {
        VectorR f = Eigen::Map<const VectorR>(power.data(), d * d);
        if (!span.contains(f)) {
            span.insert(f);
            flat.push_back(f);
            power = MatrixR(m * power);
            continue;
        }
        // f = sum c_i flat_i
        MatrixR a(d * d, static_cast<Eigen::Index>(flat.size()));
        for (std::size_t i = 0; i < flat.size(); ++i) a.col(static_cast<Eigen::Index>(i)) = flat[i];
        auto c = solve<RatScalar>(a, f);
        Poly p(flat.size() + 1, RatScalar(0));
        for (std::size_t i = 0; i < flat.size(); ++i) p[i] = -(*c)(static_cast<Eigen::Index>(i));
        p.back() = RatScalar(1);
        return p;
    }
    throw std::logic_error("minimal polynomial: degree exceeds dimension");
}

RatScalar eval(const Poly& p, const RatScalar& x) {
    RatScalar acc(0);
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

template <class T>
Eigen::Index nullity(const Mat<T>& m) {
    return m.cols() - rank<T>(m);
}

}  // namespace

// ------------------------------------------------------------ generators

CoidealGen build_Bk(const SatakeDatum& sd, const IParams& p, int k) {
    if (auto f = sd.validate(); !f.empty()) throw std::invalid_argument("invalid Satake datum: " + f.front());
    if (auto f = validate_params(sd, p); !f.empty()) throw std::invalid_argument("invalid parameters: " + f.front());
    const RootDatum& rd = sd.datum();
    CoidealGen g;
    g.k = k;
    g.kcase = sd.case_of(k);
    const auto uk = static_cast<std::size_t>(k);
    const OperatorExpr kinv = Ki(rd, k, -1);
    g.Y = p.sigma[uk] * (braid_apply(rd, sd.w_black(), OperatorExpr::E(sd.tau(k))) * kinv) + p.kappa[uk] * kinv;
    g.B = OperatorExpr::F(k) + g.Y;
    if (g.kcase == KCase::II)
        g.Z = OperatorExpr::F(k) * g.Y - RatScalar::q_pow(-2 * rd.d(k)) * (g.Y * OperatorExpr::F(k));
    return g;
}

template <class T>
KappaSeq<T>::KappaSeq(T kappa0, T b, T branch, int d)
    : k0_(std::move(kappa0)), k1_(std::move(branch)), b_(std::move(b)), d_(d) {
    const T s(qsum(d_));
    if (!is_zero(T(k1_ * k1_ - s * k0_ * k1_ + k0_ * k0_ - b_)))
        throw std::invalid_argument("kappa branch does not solve the quadratic equation");
}

template <class T>
T KappaSeq<T>::operator()(int n) const {
    const T s(qsum(d_));
    T prev = k0_;
    T cur = n >= 0 ? k1_ : T(s * k0_ - k1_);
    if (n == 0) return k0_;
    for (int m = 1; m < std::abs(n); ++m) {
        T next = s * cur - prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

template class KappaSeq<RatScalar>;
template class KappaSeq<QuadExt>;

std::pair<QuadExt, QuadExt> kappa_branches(const RatScalar& kappa0, const RatScalar& b, int d) {
    const RatScalar s = qsum(d);
    const RatScalar disc = s * s * kappa0 * kappa0 - RatScalar(4) * (kappa0 * kappa0 - b);
    const RatScalar half = RatScalar(1) / RatScalar(2);
    if (auto r = sqrt_exact(disc)) return {QuadExt(half * (s * kappa0 + *r)), QuadExt(half * (s * kappa0 - *r))};
    const QuadExt t = QuadExt::root_of(disc);
    return {QuadExt(half * s * kappa0) + QuadExt(half) * t, QuadExt(half * s * kappa0) - QuadExt(half) * t};
}

std::vector<RatScalar> minimal_polynomial(const RatScalar& kappa0, const RatScalar& b, int n, int d) {
    Poly p{RatScalar(1)};
    for (int m = n; m > 0; m -= 2) {
        const RatScalar qm = qint(m, d);
        p = poly_mul(p, {kappa0 * kappa0 - qm * qm * b, -qsum(d * m) * kappa0, RatScalar(1)});
    }
    if (n % 2 == 0) p = poly_mul(p, {-kappa0, RatScalar(1)});
    return p;
}

// ------------------------------------------------------------ IModule

IModule::IModule(WeightModule v, SatakeDatum sd, IParams p) : v_(std::move(v)), sd_(std::move(sd)), p_(std::move(p)) {
    if (auto f = sd_.validate(); !f.empty()) throw std::invalid_argument("invalid Satake datum: " + f.front());
    if (auto f = validate_params(sd_, p_); !f.empty()) throw std::invalid_argument("invalid parameters: " + f.front());
    const RootDatum& rd = sd_.datum();
    if (v_.datum().cartan() != rd.cartan() || v_.datum().pairing_matrix() != rd.pairing_matrix() ||
        v_.datum().root_matrix() != rd.root_matrix() || v_.datum().coroot_matrix() != rd.coroot_matrix())
        throw std::invalid_argument("module and Satake datum use different root data");
    for (int k : sd_.white()) {
        const auto uk = static_cast<std::size_t>(k);
        const SparseOp kinv = v_.K(-rd.d(k) * rd.h(k));
        SparseOp t = braid_op(v_, sd_.w_black(), OperatorExpr::E(sd_.tau(k)));
        SparseOp y = p_.sigma[uk] * SparseOp(t * kinv);
        if (!p_.kappa[uk].is_zero()) y += p_.kappa[uk] * kinv;
        prune(y);
        SparseOp b = v_.F(k) + y;
        SparseOp z = SparseOp(v_.F(k) * y) - RatScalar::q_pow(-2 * rd.d(k)) * SparseOp(y * v_.F(k));
        prune(b);
        prune(z);
        b_.emplace(k, std::move(b));
        y_.emplace(k, std::move(y));
        z_.emplace(k, std::move(z));
    }
    std::set<IWeight> seen;
    for (int k = 0; k < v_.weight_count(); ++k) {
        block_iweight_.push_back(sd_.project(v_.weight(k)));
        seen.insert(block_iweight_.back());
    }
    iweights_.assign(seen.begin(), seen.end());
}

std::vector<int> IModule::blocks_of(const IWeight& zeta) const {
    std::vector<int> out;
    for (int k = 0; k < v_.weight_count(); ++k)
        if (block_iweight_[static_cast<std::size_t>(k)] == zeta) out.push_back(k);
    return out;
}

SparseOp IModule::projector(const IWeight& zeta) const {
    SparseOp m(dim(), dim());
    std::vector<Eigen::Triplet<RatScalar>> trip;
    for (int k : blocks_of(zeta))
        for (int i = 0; i < v_.block_dim(k); ++i) trip.emplace_back(v_.offset(k) + i, v_.offset(k) + i, RatScalar(1));
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

std::optional<IWeight> IModule::iweight_of(const VectorR& v) const {
    std::optional<IWeight> out;
    for (const auto& [k, loc] : v_.components(v)) {
        (void)loc;
        const IWeight& z = block_iweight_[static_cast<std::size_t>(k)];
        if (out && *out != z) return std::nullopt;
        out = z;
    }
    return out;
}

SparseOp IModule::generator(const std::string& name) const {
    const RootDatum& rd = sd_.datum();
    if (name.size() >= 2 && name[0] == 'K' && name[1] == '[' && name.back() == ']') {
        Coweight h = rd.parse_coweight(name.substr(2, name.size() - 3));
        if (!sd_.in_y_fixed(h)) throw std::invalid_argument(name + " is not in Y^i");
        return v_.K(h);
    }
    if (name.size() < 2) throw std::invalid_argument("unknown generator " + name);
    const int i = std::stoi(name.substr(1)) - 1;
    if (i < 0 || i >= rd.rank()) throw std::invalid_argument("unknown generator " + name);
    switch (name[0]) {
        case 'E':
        case 'F':
            if (!sd_.is_black(i)) throw std::invalid_argument(name + ": E/F generators of U^i are black");
            return name[0] == 'E' ? v_.E(i) : v_.F(i);
        case 'B':
            if (sd_.is_black(i)) throw std::invalid_argument(name + ": B generators are white");
            return B(i);
        default: throw std::invalid_argument("unknown generator " + name);
    }
}

std::vector<std::string> IModule::generator_names() const {
    std::vector<std::string> out;
    for (int j : sd_.black()) {
        out.push_back("E" + label(j));
        out.push_back("F" + label(j));
    }
    for (int k : sd_.white()) out.push_back("B" + label(k));
    const Eigen::MatrixXi& y = sd_.y_fixed_basis();
    for (int c = 0; c < y.cols(); ++c) out.push_back("K[" + format_coweight(y.col(c), sd_.datum()) + "]");
    return out;
}

// ------------------------------------------------------------ i-divided powers

namespace {

// The recursion applied to start = 1_zeta (an operator) or 1_zeta v (a vector).
template <class T>
std::vector<T> idivided_recursion(const IModule& m, int k, const IWeight& zeta, T start, int n_max) {
    const SatakeDatum& sd = m.satake();
    const int d = sd.datum().d(k);
    const KCase c = sd.case_of(k);
    const SparseOp& b = m.B(k);
    auto tidy = [](T& x) {
        if constexpr (std::is_same_v<T, SparseOp>) prune(x);
    };
    std::vector<T> out;
    out.push_back(std::move(start));
    if (c != KCase::I) {
        for (int n = 1; n <= n_max; ++n) {
            T next = qint(n, d).inverse() * T(b * out.back());
            tidy(next);
            out.push_back(std::move(next));
        }
        return out;
    }
    const int par = sd.parity(k, zeta);
    const RatScalar& kappa = m.params().kappa[static_cast<std::size_t>(k)];
    const RatScalar bq = RatScalar::q_pow(d) * m.params().sigma[static_cast<std::size_t>(k)];
    for (int n = 1; n <= n_max; ++n) {
        T next;
        if (n == 1 && par == 0) {
            next = T(b * out[0]) - kappa * out[0];
        } else if (par == n % 2) {
            next = qint(n, d).inverse() * T(b * out.back());
        } else {
            const T& prev = out[static_cast<std::size_t>(n - 2)];
            const T bp = b * prev;
            const RatScalar qn1 = qint(n - 1, d);
            next = T(b * bp) - (qsum(d * (n - 1)) * kappa) * bp + (kappa * kappa - qn1 * qn1 * bq) * prev;
            next = (qint(n, d) * qn1).inverse() * next;
        }
        tidy(next);
        out.push_back(std::move(next));
    }
    return out;
}

}  // namespace

std::vector<SparseOp> idivided_powers(const IModule& m, int k, const IWeight& zeta, int n_max) {
    return idivided_recursion<SparseOp>(m, k, zeta, m.projector(zeta), n_max);
}

std::vector<VectorR> idivided_power_vectors(const IModule& m, int k, const IWeight& zeta, const VectorR& v,
                                            int n_max) {
    return idivided_recursion<VectorR>(m, k, zeta, VectorR(m.projector(zeta) * v), n_max);
}

SparseOp idivided_power(const IModule& m, int k, const IWeight& zeta, int n) {
    return idivided_powers(m, k, zeta, n).back();
}

SpectrumReport minimal_polynomial_check(const SatakeDatum& sd, const IParams& p, int k, int n, bool swap_branch) {
    if (sd.case_of(k) != KCase::I) throw std::invalid_argument("minimal_polynomial_check: node is not case I");
    const RootDatum& rd = sd.datum();
    auto w = rd.fundamental_weight(k);
    if (!w) throw std::invalid_argument("minimal_polynomial_check: fundamental weight not in X");
    const Weight lambda = n * *w;
    IModule m(build_irrep(rd, lambda), sd, p);
    const WeightModule& v = m.module();
    const int d = rd.d(k);

    // the F_k-string through the highest weight vector spans V_n
    MatrixR s(v.dim(), n + 1);
    VectorR cur = highest_vector(v, lambda);
    for (int j = 0; j <= n; ++j) {
        s.col(j) = cur;
        cur = v.F(k) * cur;
    }
    if (!is_zero(cur)) throw std::logic_error("minimal_polynomial_check: string longer than expected");
    MatrixR bs = m.B(k) * s;
    auto x = solve_matrix<RatScalar>(s, bs);
    if (!x) throw std::logic_error("minimal_polynomial_check: V_n is not stable under B_k");

    const RatScalar& kappa = p.kappa[static_cast<std::size_t>(k)];
    const RatScalar b = RatScalar::q_pow(d) * p.sigma[static_cast<std::size_t>(k)];
    auto [r1, r2] = kappa_branches(kappa, b, d);
    const KappaSeq<QuadExt> seq(QuadExt(kappa), QuadExt(b), swap_branch ? r2 : r1, d);

    SpectrumReport rep;
    rep.k = k;
    rep.n = n;
    std::vector<QuadExt> ev;
    for (int j = 0; j <= n; ++j) {
        ev.push_back(seq(n - 2 * j));
        rep.expected.push_back(ev.back().to_string());
    }
    rep.distinct = true;
    for (std::size_t a = 0; a < ev.size(); ++a)
        for (std::size_t c = a + 1; c < ev.size(); ++c)
            if (ev[a] == ev[c]) rep.distinct = false;
    const MatrixQ bq = lift(*x);
    const MatrixQ id = MatrixQ::Identity(n + 1, n + 1);
    MatrixQ prod = id;
    for (const auto& e : ev) prod = MatrixQ(prod * (bq - e * id));
    rep.annihilated = is_zero(prod);
    rep.simple = true;
    for (const auto& e : ev)
        if (nullity<QuadExt>(MatrixQ(bq - e * id)) != 1) rep.simple = false;
    return rep;
}

MinPolyIdentity minimal_polynomial_identity(const IModule& m, int k, const IWeight& zeta, int n) {
    const SatakeDatum& sd = m.satake();
    if (sd.case_of(k) != KCase::I) throw std::invalid_argument("minimal_polynomial_identity: node is not case I");
    if (sd.parity(k, zeta) != n % 2) throw std::invalid_argument("minimal_polynomial_identity: parity mismatch");
    const int d = sd.datum().d(k);
    const auto uk = static_cast<std::size_t>(k);
    const Poly pn = minimal_polynomial(m.params().kappa[uk], RatScalar::q_pow(d) * m.params().sigma[uk], n, d);
    const SparseOp proj = m.projector(zeta);
    SparseOp acc(m.dim(), m.dim()), power = proj;
    for (std::size_t i = 0; i < pn.size(); ++i) {
        if (i) power = SparseOp(m.B(k) * power);
        acc += pn[i] * power;
    }
    const SparseOp frb = idivided_power(m, k, zeta, n + 1);
    MinPolyIdentity out;
    out.n = n;
    out.over_n_factorial = ops_equal(frb, SparseOp(qfact(n, d).inverse() * acc));
    out.over_n_plus_1_factorial = ops_equal(frb, SparseOp(qfact(n + 1, d).inverse() * acc));
    return out;
}

// ------------------------------------------------------------ spectrum

std::vector<ComponentSpectrum> spectrum(const IModule& m, int k) {
    const SatakeDatum& sd = m.satake();
    const RootDatum& rd = sd.datum();
    const int d = rd.d(k);
    const KCase c = sd.case_of(k);
    const WeightModule& v = m.module();
    const bool preserves = sd.project_root(k) == sd.project(rd.zero_weight());
    const MatrixR b = MatrixR(m.B(k));

    std::vector<std::pair<std::string, std::vector<int>>> comps;
    if (preserves) {
        for (const auto& z : m.iweights()) {
            std::vector<int> idx;
            for (int blk : m.blocks_of(z))
                for (int i = 0; i < v.block_dim(blk); ++i) idx.push_back(v.offset(blk) + i);
            comps.emplace_back(sd.iweight_to_string(z), idx);
        }
    } else {
        std::vector<int> idx(static_cast<std::size_t>(v.dim()));
        for (int i = 0; i < v.dim(); ++i) idx[static_cast<std::size_t>(i)] = i;
        comps.emplace_back("all", idx);
    }

    const auto uk = static_cast<std::size_t>(k);
    const RatScalar kappa = m.params().kappa[uk];
    const RatScalar bq = RatScalar::q_pow(d) * m.params().sigma[uk];

    std::vector<ComponentSpectrum> out;
    for (const auto& [name, idx] : comps) {
        const auto dim = static_cast<Eigen::Index>(idx.size());
        MatrixR sub(dim, dim);
        for (Eigen::Index r = 0; r < dim; ++r)
            for (Eigen::Index s = 0; s < dim; ++s) sub(r, s) = b(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(s)]);
        ComponentSpectrum cs;
        cs.component = name;
        cs.dim = static_cast<int>(dim);
        Poly mu = matrix_minimal_polynomial(sub);

        // peel off known factors: linear factors at rational candidates and
        // the paired quadratics of the kappa sequence
        std::vector<QuadExt> roots;
        std::vector<RatScalar> candidates{RatScalar(0)};
        for (int j = -2 * static_cast<int>(dim); j <= 2 * static_cast<int>(dim); ++j) {
            candidates.push_back(RatScalar::q_pow(j));
            candidates.push_back(-RatScalar::q_pow(j));
        }
        if (c == KCase::I) {
            auto [r1, r2] = kappa_branches(kappa, bq, d);
            if (r1.is_rational()) {
                for (int j = -static_cast<int>(dim); j <= static_cast<int>(dim); ++j)
                    candidates.push_back(kappa_sequence<QuadExt>(kappa, bq, r1, j, d).a());
            }
        }
        for (int j = 1; j <= static_cast<int>(dim); ++j) candidates.push_back(qint(j, d));
        for (int j = 1; j <= static_cast<int>(dim); ++j) candidates.push_back(-qint(j, d));
        for (const auto& cand : candidates) {
            while (mu.size() > 1 && eval(mu, cand).is_zero()) {
                roots.emplace_back(cand);
                mu = poly_divmod(mu, {-cand, RatScalar(1)}).first;
            }
        }
        if (c == KCase::I) {
            for (int j = 1; j <= static_cast<int>(dim) && mu.size() > 2; ++j) {
                const RatScalar qj = qint(j, d);
                const Poly quad{kappa * kappa - qj * qj * bq, -qsum(d * j) * kappa, RatScalar(1)};
                auto [quo, rem] = poly_divmod(mu, quad);
                if (!rem.empty()) continue;
                mu = quo;
                // roots of x^2 - (q_k^j + q_k^-j) kappa x + kappa^2 - [j]_k^2 b
                const RatScalar disc = qsum(d * j) * qsum(d * j) * kappa * kappa -
                                       RatScalar(4) * (kappa * kappa - qj * qj * bq);
                const RatScalar half = RatScalar(1) / RatScalar(2);
                const QuadExt t = sqrt_exact(disc) ? QuadExt(*sqrt_exact(disc)) : QuadExt::root_of(disc);
                roots.push_back(QuadExt(half * qsum(d * j) * kappa) + QuadExt(half) * t);
                roots.push_back(QuadExt(half * qsum(d * j) * kappa) - QuadExt(half) * t);
            }
        }
        if (mu.size() == 2) {
            roots.emplace_back(-mu[0] / mu[1]);
            mu = {RatScalar(1)};
        } else if (mu.size() == 3) {
            const RatScalar disc = mu[1] * mu[1] - RatScalar(4) * mu[0];
            const RatScalar half = RatScalar(1) / RatScalar(2);
            if (auto r = sqrt_exact(disc)) {
                roots.emplace_back(half * (-mu[1] + *r));
                roots.emplace_back(half * (-mu[1] - *r));
            } else {
                const QuadExt t = QuadExt::root_of(disc);
                roots.push_back(QuadExt(-half * mu[1]) + QuadExt(half) * t);
                roots.push_back(QuadExt(-half * mu[1]) - QuadExt(half) * t);
            }
            mu = {RatScalar(1)};
        }
        if (mu.size() > 1) {
            cs.eigenvalues.push_back("unresolved: minimal polynomial factor of degree " + std::to_string(mu.size() - 1));
            out.push_back(std::move(cs));
            continue;
        }
        // distinct roots of the minimal polynomial means diagonalizable
        std::vector<QuadExt> distinct;
        for (const auto& r : roots)
            if (std::find(distinct.begin(), distinct.end(), r) == distinct.end()) distinct.push_back(r);
        cs.diagonalizable = distinct.size() == roots.size();
        const MatrixQ subq = lift(sub);
        std::vector<std::string> evs;
        for (const auto& r : distinct) {
            const Eigen::Index mult = nullity<QuadExt>(MatrixQ(subq - r * MatrixQ::Identity(dim, dim)));
            for (Eigen::Index i = 0; i < mult; ++i) evs.push_back(r.to_string());
        }
        std::sort(evs.begin(), evs.end());
        cs.eigenvalues = std::move(evs);
        out.push_back(std::move(cs));
    }
    return out;
}

std::vector<RatScalar> rational_eigenvalues(const MatrixR& m, const std::vector<RatScalar>& extra) {
    const auto dim = static_cast<int>(m.rows());
    Poly mu = matrix_minimal_polynomial(m);
    std::vector<RatScalar> candidates{RatScalar(0)};
    for (int j = 1; j <= 2 * dim; ++j) {
        for (int s : {1, -1}) {
            candidates.push_back(RatScalar(s) * RatScalar::q_pow(j));
            candidates.push_back(RatScalar(s) * RatScalar::q_pow(-j));
            candidates.push_back(RatScalar(s) * qint(j));
        }
    }
    candidates.insert(candidates.end(), extra.begin(), extra.end());
    std::vector<RatScalar> out;
    for (const auto& c : candidates) {
        if (mu.size() <= 1) break;
        if (!eval(mu, c).is_zero()) continue;
        out.push_back(c);
        while (mu.size() > 1 && eval(mu, c).is_zero()) mu = poly_divmod(mu, {-c, RatScalar(1)}).first;
    }
    if (mu.size() == 2) out.push_back(-mu[0] / mu[1]);
    if (mu.size() == 3) {
        const RatScalar b = mu[1] / mu[2], c = mu[0] / mu[2];
        if (auto r = sqrt_exact(b * b - RatScalar(4) * c)) {
            const RatScalar half = RatScalar(1) / RatScalar(2);
            out.push_back(half * (-b + *r));
            out.push_back(half * (-b - *r));
        }
    }
    return out;
}

// ------------------------------------------------------------ structure checks

namespace {

// Nonzero (target block, source block) pairs of an operator.
std::set<std::pair<int, int>> block_support(const WeightModule& v, const SparseOp& op) {
    std::set<std::pair<int, int>> out;
    for (int c = 0; c < op.outerSize(); ++c)
        for (SparseOp::InnerIterator it(op, c); it; ++it)
            if (!it.value().is_zero())
                out.emplace(v.block_of(static_cast<int>(it.row())), v.block_of(static_cast<int>(it.col())));
    return out;
}

void check_shift(const IModule& m, const SparseOp& op, const Weight& shift, const std::string& what,
                 CheckReport& rep) {
    const WeightModule& v = m.module();
    for (const auto& [t, s] : block_support(v, op))
        if (v.weight(t) - v.weight(s) != shift) {
            rep.failures.push_back(what + " maps weight " + v.datum().weight_to_string(v.weight(s)) + " to " +
                                   v.datum().weight_to_string(v.weight(t)));
            return;
        }
}

}  // namespace

CheckReport case_structure_check(const IModule& m, int k) {
    const SatakeDatum& sd = m.satake();
    const RootDatum& rd = sd.datum();
    const KCase c = sd.case_of(k);
    const WeightModule& v = m.module();
    CheckReport rep;
    const std::string kl = label(k);
    const Weight ak = rd.alpha(k);
    if (c == KCase::I) {
        rep.notes.push_back("node " + kl + " is case I: no Y/Z statements");
        return rep;
    }
    check_shift(m, m.Y(k), -sd.theta(ak), "Y" + kl, rep);
    if (c == KCase::II) {
        const SparseOp& z = m.Z(k);
        if (!ops_equal(SparseOp(z * v.F(k)), SparseOp(v.F(k) * z))) rep.failures.push_back("[Z" + kl + ", F" + kl + "] != 0");
        if (!ops_equal(SparseOp(z * m.Y(k)), SparseOp(m.Y(k) * z))) rep.failures.push_back("[Z" + kl + ", Y" + kl + "] != 0");
        const Weight shift = rd.act_X(sd.w_black(), ak) - ak;
        check_shift(m, z, shift, "Z" + kl, rep);
        if (is_zero(z)) rep.notes.push_back("Z" + kl + " acts as zero on this module");
    } else {
        if (!is_zero(m.Z(k))) rep.failures.push_back("F" + kl + " Y" + kl + " - q_k^-2 Y" + kl + " F" + kl + " != 0");
    }
    return rep;
}

CheckReport b_shift_check(const IModule& m, int k) {
    const SatakeDatum& sd = m.satake();
    const WeightModule& v = m.module();
    CheckReport rep;
    for (const auto& [t, s] : block_support(v, m.B(k))) {
        const IWeight want = sd.project(v.weight(s) - sd.datum().alpha(k));
        if (m.iweight_of_block(t) != want) {
            rep.failures.push_back("B" + label(k) + " leaves the i-weight component of " +
                                   sd.datum().weight_to_string(v.weight(s)));
            break;
        }
    }
    return rep;
}

Span<RatScalar> levi_plus_span(const IModule& m, const VectorR& v) {
    const WeightModule& mod = m.module();
    Span<RatScalar> span(mod.dim());
    std::vector<VectorR> todo{v};
    while (!todo.empty()) {
        VectorR x = std::move(todo.back());
        todo.pop_back();
        if (is_zero(x) || !span.insert(x)) continue;
        for (int j : m.satake().black()) todo.push_back(mod.E(j) * x);
    }
    return span;
}

FrBResult frB_highest_check(const IModule& m, int k, const VectorR& v) {
    const SatakeDatum& sd = m.satake();
    const RootDatum& rd = sd.datum();
    const WeightModule& mod = m.module();
    const int d = rd.d(k);
    const KCase c = sd.case_of(k);
    FrBResult res;
    auto wt = mod.weight_of(v);
    if (!wt) {
        res.status = FrBStatus::precondition;
        res.detail = "not a weight vector";
        return res;
    }
    const int n = rd.pair(rd.h(k), *wt);
    if (n < 0) {
        res.status = FrBStatus::precondition;
        res.detail = "<h_k, wt v> < 0";
        return res;
    }
    const Span<RatScalar> lplus = levi_plus_span(m, v);
    for (const auto& u : lplus.basis()) {
        if (!is_zero(VectorR(mod.E(k) * u)) || (c == KCase::III && !is_zero(VectorR(mod.E(sd.tau(k)) * u)))) {
            res.status = FrBStatus::precondition;
            res.detail = c == KCase::III ? "E_k L+ v or E_tau(k) L+ v is nonzero" : "E_k L+ v is nonzero";
            return res;
        }
    }
    const IWeight zeta = sd.project(*wt);
    const VectorR lhs = idivided_power(m, k, zeta, n + 1) * v;
    VectorR rhs = v;
    for (int j = 0; j <= n; ++j) rhs = mod.F(k) * rhs;
    rhs *= qfact(n + 1, d).inverse();
    if (c != KCase::II) {
        res.status = lhs == rhs ? FrBStatus::holds : FrBStatus::fails;
        res.detail = "n = " + std::to_string(n);
        return res;
    }
    // case II: leading term at weight wt - (n+1) alpha_k, remainder in the Z span
    const Weight lead_wt = *wt - (n + 1) * rd.alpha(k);
    VectorR lead = mod.zero_vector();
    if (auto blk = mod.find(lead_wt)) lead = mod.global(mod.local(lhs, *blk), *blk);
    if (lead != rhs) {
        res.status = FrBStatus::fails;
        res.detail = "leading F_k^(n+1) term differs, n = " + std::to_string(n);
        return res;
    }
    Span<RatScalar> zspan(mod.dim());
    VectorR zv = v;
    for (int z = 1; 2 * z <= n + 1; ++z) {
        zv = m.Z(k) * zv;
        VectorR x = zv;
        const int f = n + 1 - 2 * z;
        for (int j = 0; j < f; ++j) x = mod.F(k) * x;
        zspan.insert(qfact(f, d).inverse() * x);
    }
    const bool in = zspan.contains(lhs - rhs);
    res.status = in ? FrBStatus::holds : FrBStatus::fails;
    res.detail = "n = " + std::to_string(n) + (in ? "" : ", remainder outside span{F^(f) Z^z v}") +
                 (is_zero(VectorR(lhs - rhs)) ? "" : ", nonzero Z terms");
    return res;
}

}  // namespace iqg
