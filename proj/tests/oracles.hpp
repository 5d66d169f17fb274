#pragma once

// Independent reference computations used by the tests.

#include <map>
#include <set>
#include <vector>

#include "iqg/modules.hpp"

namespace oracle {

using iqg::LatticeLess;
using iqg::RootDatum;
using iqg::Weight;

/// Positive roots in simple-root coordinates, by closing the simple roots
/// under reflections.
inline std::vector<Eigen::VectorXi> positive_roots(const RootDatum& rd) {
    const int n = rd.rank();
    std::set<Eigen::VectorXi, LatticeLess> all;
    std::vector<Eigen::VectorXi> todo;
    for (int i = 0; i < n; ++i) todo.push_back(Eigen::VectorXi::Unit(n, i));
    while (!todo.empty()) {
        Eigen::VectorXi r = todo.back();
        todo.pop_back();
        if (!all.insert(r).second) continue;
        for (int i = 0; i < n; ++i) {
            // s_i(beta) = beta - <h_i, beta> alpha_i with <h_i, beta> = sum_j a_ij beta_j
            int c = 0;
            for (int j = 0; j < n; ++j) c += rd.a(i, j) * r(j);
            Eigen::VectorXi s = r;
            s(i) -= c;
            todo.push_back(s);
        }
    }
    std::vector<Eigen::VectorXi> pos;
    for (const auto& r : all)
        if ((r.array() >= 0).all()) pos.push_back(r);
    return pos;
}

/// Weight multiplicities of V(lambda) by Freudenthal's formula. Weights are
/// returned in X coordinates; requires X to contain the fundamental weights.
inline std::map<Weight, int, LatticeLess> freudenthal(const RootDatum& rd, const Weight& lambda) {
    const int n = rd.rank();
    auto pos = positive_roots(rd);
    Eigen::VectorXi lab = rd.labels(lambda);
    // (x, beta) for x given by labels and beta in root coordinates.
    auto ip = [&](const Eigen::VectorXi& labels, const Eigen::VectorXi& beta) {
        long s = 0;
        for (int j = 0; j < n; ++j) s += static_cast<long>(beta(j)) * rd.d(j) * labels(j);
        return s;
    };
    Eigen::VectorXi rho2 = Eigen::VectorXi::Constant(n, 2);
    // multiplicities keyed by root coordinates of lambda - mu
    std::map<Eigen::VectorXi, long, LatticeLess> mult;
    mult[Eigen::VectorXi::Zero(n)] = 1;
    std::vector<Eigen::VectorXi> level{Eigen::VectorXi::Zero(n)};
    while (!level.empty()) {
        std::set<Eigen::VectorXi, LatticeLess> next;
        for (const auto& c : level)
            for (int i = 0; i < n; ++i) next.insert(c + Eigen::VectorXi::Unit(n, i));
        std::vector<Eigen::VectorXi> found;
        for (const auto& c : next) {
            // mu = lambda - c; labels(mu) = lab - A c
            Eigen::VectorXi mulab = lab - rd.cartan() * c;
            long num = 0;
            for (const auto& a : pos)
                for (int k = 1;; ++k) {
                    Eigen::VectorXi ck = c - k * a;
                    if ((ck.array() < 0).any()) break;
                    auto it = mult.find(ck);
                    if (it == mult.end()) continue;
                    Eigen::VectorXi lk = mulab + k * (rd.cartan() * a);
                    num += 2 * it->second * ip(lk, a);
                }
            // (lambda+rho)^2 - (mu+rho)^2 = (lambda + mu + 2 rho, c)
            long den = ip(lab + mulab + rho2, c);
            if (num == 0) continue;
            if (den <= 0 || num % den != 0) throw std::logic_error("freudenthal: inconsistent");
            mult[c] = num / den;
            found.push_back(c);
        }
        level = std::move(found);
    }
    std::map<Weight, int, LatticeLess> out;
    for (const auto& [c, m] : mult) {
        Weight mu = lambda;
        for (int i = 0; i < n; ++i) mu -= c(i) * rd.alpha(i);
        out[mu] = static_cast<int>(m);
    }
    return out;
}

/// Lusztig's operator T''_{i,1} on an integrable module:
/// z of weight mu with m = <h_i, mu> maps to
/// sum_{-a+b-c=m} (-1)^b q_i^{b-ac} E_i^(a) F_i^(b) E_i^(c) z.
inline iqg::VectorR module_braid(const iqg::WeightModule& v, int i, const iqg::VectorR& z) {
    using iqg::RatScalar;
    const RootDatum& rd = v.datum();
    iqg::VectorR out = v.zero_vector();
    for (const auto& [k, loc] : v.components(z)) {
        const iqg::VectorR zk = v.global(loc, k);
        const int m = rd.pair(rd.h(i), v.weight(k));
        const int di = rd.d(i);
        // powers bounded by the module dimension (nilpotency)
        const int cap = v.dim() + 1;
        std::vector<iqg::VectorR> ec{zk};
        for (int c = 1; c <= cap; ++c) {
            ec.push_back(v.E(i) * ec.back());
            if (iqg::is_zero(ec.back())) break;
        }
        for (int c = 0; c < static_cast<int>(ec.size()); ++c) {
            if (iqg::is_zero(ec[static_cast<std::size_t>(c)])) break;
            iqg::VectorR fb = ec[static_cast<std::size_t>(c)] * iqg::qfact(c, di).inverse();
            for (int b = 0; b <= cap; ++b) {
                if (b > 0) fb = (v.F(i) * fb) * iqg::qint(b, di).inverse();
                if (iqg::is_zero(fb)) break;
                const int a = b - c - m;
                if (a < 0) continue;
                iqg::VectorR ea = fb;
                for (int r = 0; r < a && !iqg::is_zero(ea); ++r) ea = v.E(i) * ea;
                if (iqg::is_zero(ea)) continue;
                ea *= iqg::qfact(a, di).inverse();
                RatScalar s = RatScalar::q_pow(di * (b - a * c));
                if (b % 2) s = -s;
                out += s * ea;
            }
        }
    }
    return out;
}

}  // namespace oracle
