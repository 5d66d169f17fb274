#include <doctest.h>

#include "iqg/integrable.hpp"

using namespace iqg;

namespace {

SatakeDatum cat(const std::string& name) { return *catalogue_datum(name); }

LiModule li(const std::string& name, const std::string& lam, const std::string& mu) {
    SatakeDatum sd = cat(name);
    const RootDatum& rd = sd.datum();
    return build_Li(sd, IParams::defaults(sd), rd.parse_weight(lam), rd.parse_weight(mu));
}

// Parameters with rho(U^i) = U^i. A2 flip: rho(B_1) is a multiple of
// K_{h_2 - h_1} B_2 exactly when sigma_1 sigma_2 = q. AII: sigma_2 = +-q
// (found by scanning +-q^j, |j| <= 4, for a stable form complement).
IParams rho_stable(const SatakeDatum& sd) {
    if (sd.name() == "a2-flip") return IParams::from_json(sd, {{"sigma", {{"1", "1"}, {"2", "q"}}}});
    if (sd.name() == "a3-aii") return IParams::from_json(sd, {{"sigma", {{"2", "q"}}}});
    return IParams::defaults(sd);
}

int irrep_dim(const RootDatum& rd, const Weight& w) { return build_irrep(rd, w).dim(); }

struct Entry {
    const char* datum;
    std::vector<const char*> weights;
};

const std::vector<Entry> kTheoremEntries = {
    {"split-a1", {"0", "w1", "2*w1"}},
    {"a2-flip", {"0", "w1", "w2"}},
    {"a3-aii", {"0", "w2"}},
};

}  // namespace

TEST_CASE("build_Li") {
    // no black nodes: v^i is the top vector, so L = V(lambda + mu)
    for (const char* name : {"split-a1", "a2-flip", "c2-ci"}) {
        SatakeDatum sd = cat(name);
        const RootDatum& rd = sd.datum();
        for (const auto& lam : rd.dominant_weights_up_to(1))
            for (const auto& mu : rd.dominant_weights_up_to(1)) {
                LiModule l = build_Li(sd, IParams::defaults(sd), lam, mu);
                CHECK(l.dim() == irrep_dim(rd, lam + mu));
                CHECK(l.nu() == lam + mu);
            }
    }
    LiModule s = li("split-a1", "w1", "w1");
    CHECK(s.dim() == 3);
    CHECK(s.ambient.dim() == 4);

    // lambda = 0: L = V(mu)
    for (const char* name : {"a3-aii", "b2-bi"}) {
        SatakeDatum sd = cat(name);
        const RootDatum& rd = sd.datum();
        for (const auto& mu : rd.dominant_weights_up_to(2)) {
            LiModule l = build_Li(sd, IParams::defaults(sd), rd.zero_weight(), mu);
            CHECK(l.dim() == irrep_dim(rd, mu));
        }
    }

    // AII, lambda = w1: v^i has weight s1 s3 w1 + mu = w1 - a1 + mu
    LiModule a = li("a3-aii", "w1", "w1");
    const RootDatum& rd = a.satake().datum();
    CHECK(a.nu() == rd.parse_weight("2*w1 - a1"));
    CHECK(a.module.module().weight_of(a.cyclic) == a.nu());
    // closed under the generators: restriction reproduces the relations of U
    CHECK(relation_failures(a.module.module()).empty());
    CHECK_THROWS_AS(build_Li(a.satake(), a.module.params(), rd.parse_weight("-w1"), rd.zero_weight()),
                    std::invalid_argument);
}

TEST_CASE("annihilators of v^i") {
    for (const auto& e : satake_catalogue()) {
        SatakeDatum sd = SatakeDatum::from_json(e.spec);
        const RootDatum& rd = sd.datum();
        for (const auto& lam : rd.dominant_weights_up_to(1))
            for (const auto& mu : rd.dominant_weights_up_to(1)) {
                LiModule l = build_Li(sd, IParams::defaults(sd), lam, mu);
                INFO(e.name, " ", rd.weight_to_string(lam), " ", rd.weight_to_string(mu));
                CheckReport r = check_Li_annihilators(l);
                CHECK(r.ok());
            }
    }
    // split: F^(3) v^i = 0 on L(w, w), and R+ is empty
    LiModule s = li("split-a1", "w1", "w1");
    CheckReport r = check_Li_annihilators(s);
    CHECK(r.ok());
    const WeightModule& v = s.module.module();
    CHECK(is_zero(VectorR(v.F(0) * VectorR(v.F(0) * VectorR(v.F(0) * s.cyclic)))));
    CHECK_FALSE(is_zero(VectorR(v.F(0) * VectorR(v.F(0) * s.cyclic))));
}

TEST_CASE("presentation relations") {
    for (const auto& e : kTheoremEntries) {
        SatakeDatum sd = cat(e.datum);
        const RootDatum& rd = sd.datum();
        for (const char* a : e.weights)
            for (const char* b : e.weights) {
                LiModule l = build_Li(sd, IParams::defaults(sd), rd.parse_weight(a), rd.parse_weight(b));
                INFO(std::string(e.datum), " ", std::string(a), " ", std::string(b));
                CheckReport r = check_theorem_relations(l, depth_bound(rd, l.lambda, l.mu));
                CHECK(r.ok());
                CHECK(ui_cyclic_dim(l) == l.dim());
            }
    }
    // B2 with one black node and C2 split with a nonzero kappa
    SatakeDatum bi = cat("b2-bi");
    LiModule lb = build_Li(bi, IParams::defaults(bi), bi.datum().parse_weight("w1"), bi.datum().parse_weight("w2"));
    CHECK(check_theorem_relations(lb, depth_bound(bi.datum(), lb.lambda, lb.mu)).ok());
    SatakeDatum ci = cat("c2-ci");
    IParams pk = IParams::from_json(ci, {{"kappa", {{"1", "q"}}}});
    LiModule lc = build_Li(ci, pk, ci.datum().parse_weight("w1"), ci.datum().parse_weight("w1"));
    CHECK(check_theorem_relations(lc, depth_bound(ci.datum(), lc.lambda, lc.mu)).ok());
    CHECK(ui_cyclic_dim(lc) == lc.dim());

    // joined black nodes are out of scope
    SatakeDatum aiii = SatakeDatum::from_json({{"datum", "A4"}, {"black", {2, 3}}, {"tau", "flip"}});
    REQUIRE(aiii.valid());
    LiModule z = build_Li(aiii, IParams::defaults(aiii), aiii.datum().zero_weight(), aiii.datum().zero_weight());
    CHECK_THROWS_AS(check_theorem_relations(z, 4), std::invalid_argument);
}

TEST_CASE("integrability certificates") {
    SatakeDatum split = cat("split-a1");
    const RootDatum& a1 = split.datum();
    IModule m(build_irrep(a1, a1.parse_weight("w1")), split, IParams::defaults(split));
    CertificateResult r = integrability_certificate(m, m.module().basis_vector(0), 4);
    REQUIRE(r.status == CertStatus::certified);
    CHECK(r.certificate->c.at(0) == 1);

    // one-dimensional module on which B acts by kappa
    IParams pk = IParams::defaults(split);
    pk.kappa[0] = RatScalar(2);
    IModule triv(trivial_module(a1), split, pk);
    CHECK(ops_equal(triv.B(0), SparseOp(RatScalar(2) * identity_op(1))));
    CertificateResult t = integrability_certificate(triv, triv.module().basis_vector(0), 3);
    REQUIRE(t.status == CertStatus::certified);
    CHECK(t.certificate->c.at(0) == 0);

    // bound too small: inconclusive, not a failure
    IModule v3(build_irrep(a1, a1.parse_weight("3*w1")), split, IParams::defaults(split));
    CertificateResult small = integrability_certificate(v3, v3.module().basis_vector(0), 1);
    CHECK(small.status == CertStatus::inconclusive);
    CHECK_FALSE(small.witness.empty());
    // a mixed-weight vector is rejected
    IModule a2(build_irrep(cat("a2-flip").datum(), cat("a2-flip").datum().parse_weight("w1")), cat("a2-flip"),
               IParams::defaults(cat("a2-flip")));
    VectorR mixed = a2.module().basis_vector(0) + a2.module().basis_vector(1);
    if (!a2.iweight_of(mixed)) CHECK_THROWS_AS(integrability_certificate(a2, mixed, 3), std::invalid_argument);

    // restrictions of tensor products: every weight basis vector is certified
    for (const auto& e : satake_catalogue()) {
        SatakeDatum sd = SatakeDatum::from_json(e.spec);
        const RootDatum& rd = sd.datum();
        const auto ws = rd.dominant_weights_up_to(1);
        for (const auto& lam : ws)
            for (const auto& mu : ws) {
                IModule t2(tensor(build_irrep(rd, lam), build_irrep(rd, mu)), sd, IParams::defaults(sd));
                const int bound = depth_bound(rd, lam, mu);
                for (int i = 0; i < t2.dim(); ++i) {
                    CertificateResult c = integrability_certificate(t2, t2.module().basis_vector(i), bound);
                    INFO(e.name, " ", rd.weight_to_string(lam), " ", rd.weight_to_string(mu), " basis ", i);
                    CHECK(c.status == CertStatus::certified);
                }
            }
    }
}

TEST_CASE("form and decomposition") {
    LiModule s = li("split-a1", "w1", "w1");
    CHECK(check_Li_form(s).ok());
    UiDecomposition d = decompose_ui(s);
    CHECK(d.failures.empty());
    CHECK(check_decomposition(s.module, li_form(s), d).ok());
    REQUIRE(d.summands.size() == 3);
    std::vector<RatScalar> evs;
    for (const auto& sm : d.summands) {
        CHECK(sm.basis.cols() == 1);
        CHECK(sm.resolved);
        REQUIRE(sm.b_scalars.count(0));
        evs.push_back(RatScalar::parse(sm.b_scalars.at(0)));
    }
    const RatScalar two = RatScalar::q_pow(1) + RatScalar::q_pow(-1);
    for (const auto& x : {two, RatScalar(0), -two}) CHECK(std::count(evs.begin(), evs.end(), x) == 1);
    HighestWeightMultisets hw = levi_and_u_highest_weights(s);
    CHECK(hw.match());
    CHECK(hw.u.size() == 1);
    CHECK(hw.u.begin()->first == s.satake().datum().parse_weight("2*w1"));

    // L(2w, w) = V(3): B has eigenvalues +-1, +-[3] with one-dimensional eigenspaces
    LiModule s3 = li("split-a1", "2*w1", "w1");
    UiDecomposition d3 = decompose_ui(s3);
    CHECK(d3.failures.empty());
    REQUIRE(d3.summands.size() == 4);
    std::vector<RatScalar> ev3;
    for (const auto& sm : d3.summands) {
        CHECK(sm.resolved);
        REQUIRE(sm.b_scalars.count(0));
        ev3.push_back(RatScalar::parse(sm.b_scalars.at(0)));
    }
    const RatScalar three = RatScalar::q_pow(2) + RatScalar(1) + RatScalar::q_pow(-2);
    for (const auto& x : {RatScalar(1), RatScalar(-1), three, -three}) CHECK(std::count(ev3.begin(), ev3.end(), x) == 1);

    // the trivial module is a single summand
    LiModule z = li("a2-flip", "0", "0");
    UiDecomposition dz = decompose_ui(z);
    CHECK(dz.summands.size() == 1);

    for (const auto& e : kTheoremEntries) {
        SatakeDatum sd = cat(e.datum);
        const RootDatum& rd = sd.datum();
        for (const char* a : e.weights)
            for (const char* b : e.weights) {
                LiModule l = build_Li(sd, rho_stable(sd), rd.parse_weight(a), rd.parse_weight(b));
                INFO(std::string(e.datum), " ", std::string(a), " ", std::string(b));
                CHECK(check_Li_form(l).ok());
                CHECK(levi_and_u_highest_weights(l).match());
                UiDecomposition dl = decompose_ui(l);
                for (const auto& f : dl.failures) MESSAGE(f);
                CHECK(dl.failures.empty());
                CHECK(check_decomposition(l.module, li_form(l), dl).ok());
            }
    }
    // with sigma_1 sigma_2 != q the form complement need not be stable
    SatakeDatum flip = cat("a2-flip");
    LiModule lf = build_Li(flip, IParams::defaults(flip), flip.datum().parse_weight("w1"), flip.datum().zero_weight());
    CHECK(check_Li_form(lf).ok());
    UiDecomposition df = decompose_ui(lf);
    CHECK_FALSE(df.failures.empty());

    LiModule aii = build_Li(cat("a3-aii"), rho_stable(cat("a3-aii")), cat("a3-aii").datum().parse_weight("w1"),
                            cat("a3-aii").datum().parse_weight("w1"));
    CHECK(check_Li_form(aii).ok());
    UiDecomposition da = decompose_ui(aii);
    CHECK(da.failures.empty());
    CHECK(check_decomposition(aii.module, li_form(aii), da).ok());
    CHECK(levi_and_u_highest_weights(aii).match());
}
