#include "iqg/suite.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace iqg {

// ------------------------------------------------------------ registry

const std::vector<Statement>& statement_registry() {
    static const std::vector<Statement> reg = {
        {"rel-U", "Defining relations of U",
         "The quantum Serre, Cartan and commutator relations hold in U.",
         "Every defining relation as a matrix identity on V(lambda)."},
        {"gsat-axioms", "Generalized Satake diagrams",
         "(I, I_black, tau) is a generalized Satake diagram; <h_i, theta(alpha_i)> != -1 for white i.",
         "All axioms on the datum, the lattices and theta."},
        {"lem-case-II-bound", "Case II bound",
         "In case II, <h_k, w_black(alpha_k) - alpha_k> <= -2.",
         "case_of on every white node and the pairing in case II."},
        {"lem-parity", "Parity of an i-weight",
         "For tau(k) = k = w_black(k) the parity of <h_k, lambda> depends only on the class of lambda in X^i.",
         "Parity over every weight of V(lambda) in each i-weight class."},
        {"prop-kappa-spectrum", "Spectrum of B_k on V_n",
         "B_k acts on V_n semisimply with eigenvalues kappa^(n), kappa^(n-2), ..., kappa^(-n).",
         "Annihilation by the product of (B_k - kappa^(n-2j)), distinctness and one-dimensional eigenspaces, both branches, n <= n_max."},
        {"eq-minpoly-identity", "i-divided powers through the minimal polynomial",
         "B_{k,zeta}^(n+1) = P_n(B_k) 1_zeta / [n]_k! when p_k(zeta) = p(n).",
         "Both sides as operators on V((n+2) w_k); the detail also reports the identity with 1/[n+1]_k!."},
        {"prop-frB-I", "B^(n+1) v = F^(n+1) v (case I)",
         "For v of weight lambda with n = <h_k, lambda> >= 0 and E_k L+ v = 0: B_{k,lambda}^(n+1) v = F_k^(n+1) v.",
         "Every highest weight vector of V(lambda) (x) V(mu), every case I node."},
        {"prop-frB-II", "B^(n+1) v against F^(n+1) v (case II)",
         "Under the same hypotheses, B_k^(n+1) v = F_k^(n+1) v + sum of F_k^(f) Z_k^z v terms, z >= 1.",
         "Leading component and the remainder span on highest weight vectors, every case II node."},
        {"prop-frB-III", "B^(n+1) v = F^(n+1) v (case III)",
         "For v with E_k L+ v = E_tau(k) L+ v = 0: B_k^(n+1) v = F_k^(n+1) v.",
         "Every highest weight vector of V(lambda) (x) V(mu), every case III node."},
        {"prop-frB-int", "i-divided powers on integrable modules",
         "On an integrable U-module every weight vector v has N with B_{k,wt v}^(n+1) v = 0 for all n >= N.",
         "Every weight basis vector of V(lambda) (x) V(mu), vanishing from some N up to the depth bound."},
        {"lem-case-II-structure", "Z_k in case II",
         "Z_k commutes with F_k and Y_k and lies in L+ of weight w_black(alpha_k) - alpha_k.",
         "Commutators and weight shifts as matrices on V(lambda) (x) V(mu)."},
        {"lem-case-III-structure", "Case III",
         "F_k Y_k = q_k^-2 Y_k F_k.",
         "As matrices on V(lambda) (x) V(mu), with the weight shift of Y_k."},
        {"def-iweight-action", "U^i acts on weight modules",
         "B_k maps V_zeta into V_{zeta - alpha_k bar}.",
         "Block support of B_k on V(lambda) (x) V(mu)."},
        {"prop-Vi-Li", "Relations of v^i in L^i(lambda, mu)",
         "E_j^(<h_j, -w_black lambda>+1), F_j^(<h_j, mu>+1), F_k^(<h_k, w_black lambda + mu>+1) and R+ kill v_{w_black lambda} (x) v_mu.",
         "Matrix application on the generated submodule."},
        {"thm-presentation", "Presentation of V^i(lambda, mu)",
         "V^i(lambda, mu) is the quotient of M^i(lambda, mu) by the E', F' and B' relations.",
         "The relations vanish on v^i in L^i(lambda, mu), with b in products of black divided powers."},
        {"prop-Ui-cyclic", "L^i(lambda, mu) is cyclic over U^i",
         "U v^i = U^i v^i.",
         "Span of U^i-words on v^i against dim L^i(lambda, mu)."},
        {"prop-local-nilp", "Local nilpotency gives integrability",
         "A weight U^i-module generated by v with E_j, F_j and B_{k,zeta} divided powers eventually killing v is integrable.",
         "An integrability certificate for v^i in L^i(lambda, mu) within the depth bound."},
        {"prop-int-U-is-int-Ui", "Integrable U-modules are integrable over U^i",
         "An integrable U-module is integrable as a U^i-module.",
         "A certificate for every weight basis vector of V(lambda) (x) V(mu)."},
        {"sec-contravariant-form", "Contravariant form on L^i",
         "(x u, v) = (u, rho(x) v) for x in U^i with a nondegenerate form normalized at v^i.",
         "Nondegeneracy per weight space and the B_k identity on the whole basis."},
        {"sec-semisimple", "Semisimplicity",
         "If rho preserves U^i, the form complement of a U^i-submodule is a submodule, so L^i is semisimple.",
         "decompose_ui: sizes, orthogonality, closure, nondegeneracy; unresolved summands are inconclusive."},
        {"lem-U-str-Levi", "U-structure from the Levi structure",
         "L v^i = sum V_L(nu_s) and V^i(lambda, mu) = sum V(nu_s) with the same nu_s.",
         "Multiset of Levi highest weights in L v^i against U highest weights of L^i."},
    };
    return reg;
}

const Statement* find_statement(const std::string& id) {
    for (const auto& s : statement_registry())
        if (s.id == id) return &s;
    return nullptr;
}

// ------------------------------------------------------------ loading

namespace {

SatakeDatum datum_from_json(const nlohmann::json& j) {
    if (j.is_string()) return load_datum_arg(j.get<std::string>());
    if (!j.is_object()) throw std::invalid_argument("datum must be a name or an object");
    if (j.contains("datum") || j.contains("black")) return SatakeDatum::from_json(j);
    RootDatum rd = RootDatum::from_json(j);
    std::vector<int> tau(static_cast<std::size_t>(rd.rank()));
    for (int i = 0; i < rd.rank(); ++i) tau[static_cast<std::size_t>(i)] = i;
    std::string name = rd.name();
    return SatakeDatum(std::move(rd), {}, std::move(tau), std::nullopt, std::nullopt, name);
}

}  // namespace

SatakeDatum load_datum_arg(const std::string& arg) {
    if (auto sd = catalogue_datum(arg)) return *sd;
    if (std::filesystem::is_regular_file(arg)) {
        std::ifstream in(arg);
        return datum_from_json(nlohmann::json::parse(in));
    }
    if (!arg.empty() && arg.front() == '{') return datum_from_json(nlohmann::json::parse(arg));
    return SatakeDatum::from_json({{"datum", arg}, {"black", nlohmann::json::array()}, {"tau", "id"}, {"name", arg}});
}

SuiteSpec parse_suite(const nlohmann::json& j) {
    auto fail = [](const std::string& path, const std::string& what) {
        throw std::invalid_argument("suite " + path + ": " + what);
    };
    if (!j.is_object()) fail("/", "expected an object");
    SuiteSpec s;
    if (!j.contains("name") || !j["name"].is_string()) fail("/name", "missing or not a string");
    s.name = j["name"].get<std::string>();
    if (!j.contains("entries") || !j["entries"].is_array()) fail("/entries", "missing or not an array");
    const int default_n = j.value("n_max", 4);
    for (std::size_t i = 0; i < j["entries"].size(); ++i) {
        const auto& e = j["entries"][i];
        const std::string path = "/entries/" + std::to_string(i);
        if (!e.is_object()) fail(path, "expected an object");
        SuiteEntry out;
        if (!e.contains("datum")) fail(path + "/datum", "missing");
        out.datum = e["datum"];
        out.params = e.value("params", nlohmann::json());
        out.lambda = e.value("lambda", std::string("0"));
        out.mu = e.value("mu", std::string("0"));
        out.n_max = e.value("n_max", default_n);
        if (e.contains("depth")) out.depth = e["depth"].get<int>();
        if (!e.contains("checks") || !e["checks"].is_array() || e["checks"].empty())
            fail(path + "/checks", "missing or empty");
        for (std::size_t c = 0; c < e["checks"].size(); ++c) {
            const auto& id = e["checks"][c];
            if (!id.is_string() || !find_statement(id.get<std::string>()))
                fail(path + "/checks/" + std::to_string(c), "unknown statement id " + id.dump());
            out.checks.push_back(id.get<std::string>());
        }
        if (e.contains("expect"))
            for (const auto& [k, v] : e["expect"].items()) out.expect[k] = v.get<std::string>();
        try {
            SatakeDatum sd = datum_from_json(out.datum);
            sd.datum().parse_weight(out.lambda);
            sd.datum().parse_weight(out.mu);
            if (!out.params.is_null()) IParams::from_json(sd, out.params);
        } catch (const std::exception& ex) {
            fail(path, ex.what());
        }
        s.entries.push_back(std::move(out));
    }
    return s;
}

SuiteSpec load_suite(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open suite " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& ex) {
        throw std::invalid_argument(path + ": " + ex.what());
    }
    try {
        return parse_suite(j);
    } catch (const std::invalid_argument& ex) {
        throw std::invalid_argument(path + ": " + ex.what());
    }
}

std::vector<std::string> suite_files(const std::string& dir) {
    std::vector<std::string> out;
    for (const auto& f : std::filesystem::directory_iterator(dir))
        if (f.is_regular_file() && f.path().extension() == ".json") out.push_back(f.path().string());
    std::sort(out.begin(), out.end());
    return out;
}

// ------------------------------------------------------------ checks

std::string to_string(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        case Status::inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

std::string label(int i) { return std::to_string(i + 1); }

std::string join(const std::vector<std::string>& xs) {
    std::string out;
    for (const auto& x : xs) out += (out.empty() ? "" : "; ") + x;
    return out;
}

struct Context {
    SatakeDatum sd;
    IParams p;
    Weight lambda, mu;
    int depth;
    int n_max;

    explicit Context(const SuiteEntry& e)
        : sd(datum_from_json(e.datum)),
          p(e.params.is_null() ? IParams::defaults(sd) : IParams::from_json(sd, e.params)),
          lambda(sd.datum().parse_weight(e.lambda)),
          mu(sd.datum().parse_weight(e.mu)),
          depth(e.depth ? *e.depth : depth_bound(sd.datum(), lambda, mu)),
          n_max(e.n_max) {}

    const RootDatum& rd() const { return sd.datum(); }
    IModule tensor_module() const {
        return IModule(tensor(build_irrep(rd(), lambda), build_irrep(rd(), mu)), sd, p);
    }
    std::vector<int> nodes(KCase c) const {
        std::vector<int> out;
        for (int k : sd.white())
            if (sd.case_of(k) == c) out.push_back(k);
        return out;
    }
};

CheckResult from_report(const std::string& id, const CheckReport& r) {
    return {id, r.ok() ? Status::pass : Status::fail, r.ok() ? join(r.notes) : join(r.failures)};
}

CheckResult check_frB_case(const std::string& id, const Context& c, KCase kc) {
    const auto ks = c.nodes(kc);
    if (ks.empty()) return {id, Status::fail, "no white node of case " + to_string(kc)};
    IModule m = c.tensor_module();
    const WeightModule& v = m.module();
    int checked = 0;
    for (const auto& [blk, basis] : highest_weight_vectors(v))
        for (Eigen::Index col = 0; col < basis.cols(); ++col) {
            const VectorR x = v.global(basis.col(col), blk);
            for (int k : ks) {
                FrBResult r = frB_highest_check(m, k, x);
                ++checked;
                if (r.status != FrBStatus::holds)
                    return {id, Status::fail,
                            "k=" + label(k) + " at " + c.rd().weight_to_string(v.weight(blk)) + ": " + r.detail};
            }
        }
    return {id, Status::pass, std::to_string(checked) + " highest weight vectors"};
}

CheckResult check_frB_int(const std::string& id, const Context& c) {
    IModule m = c.tensor_module();
    const SatakeDatum& sd = c.sd;
    int worst = 0;
    for (int i = 0; i < m.dim(); ++i) {
        const VectorR v = m.module().basis_vector(i);
        const IWeight z = *m.iweight_of(v);
        for (int k : sd.white()) {
            const auto seq = idivided_power_vectors(m, k, z, v, c.depth + 1);
            if (!is_zero(seq.back()))
                return {id, Status::inconclusive,
                        "basis " + std::to_string(i) + ", k=" + label(k) + ": nonzero at n+1 = " +
                            std::to_string(c.depth + 1)};
            int n = c.depth;
            while (n >= 0 && is_zero(seq[static_cast<std::size_t>(n)])) --n;
            worst = std::max(worst, n);
        }
    }
    return {id, Status::pass, "vanishing for n >= " + std::to_string(worst)};
}

CheckResult check_spectrum(const std::string& id, const Context& c) {
    const auto ks = c.nodes(KCase::I);
    if (ks.empty()) return {id, Status::fail, "no white node of case I"};
    for (int k : ks) {
        if (!c.rd().fundamental_weight(k)) return {id, Status::fail, "no fundamental weight w_" + label(k)};
        for (int n = 0; n <= c.n_max; ++n)
            for (bool swap : {false, true}) {
                SpectrumReport r = minimal_polynomial_check(c.sd, c.p, k, n, swap);
                if (!r.ok())
                    return {id, Status::fail,
                            "k=" + label(k) + ", n=" + std::to_string(n) + (swap ? " (swapped branch)" : "") +
                                ": distinct=" + std::to_string(r.distinct) + " annihilated=" +
                                std::to_string(r.annihilated) + " simple=" + std::to_string(r.simple)};
            }
    }
    return {id, Status::pass, "n <= " + std::to_string(c.n_max) + ", both branches"};
}

CheckResult check_minpoly(const std::string& id, const Context& c) {
    const auto ks = c.nodes(KCase::I);
    if (ks.empty()) return {id, Status::fail, "no white node of case I"};
    std::vector<std::string> bad, corrected;
    for (int k : ks) {
        auto wk = c.rd().fundamental_weight(k);
        if (!wk) return {id, Status::fail, "no fundamental weight w_" + label(k)};
        for (int n = 0; n <= c.n_max; ++n) {
            const Weight top = (n + 2) * *wk;
            IModule m(build_irrep(c.rd(), top), c.sd, c.p);
            MinPolyIdentity r = minimal_polynomial_identity(m, k, c.sd.project(top), n);
            if (!r.over_n_factorial) bad.push_back("n=" + std::to_string(n));
            if (r.over_n_plus_1_factorial) corrected.push_back(std::to_string(n));
        }
    }
    std::string detail = "1/[n+1]! form holds for n in {" + [&] {
        std::string s;
        for (const auto& x : corrected) s += (s.empty() ? "" : ",") + x;
        return s;
    }() + "}";
    if (!bad.empty()) return {id, Status::fail, "1/[n]! form fails at " + join(bad) + "; " + detail};
    return {id, Status::pass, detail};
}

CheckResult check_certificates(const std::string& id, const IModule& m, const std::vector<VectorR>& vs, int bound) {
    int certified = 0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        CertificateResult r = integrability_certificate(m, vs[i], bound);
        if (r.status == CertStatus::failed)
            return {id, Status::fail, "vector " + std::to_string(i) + ": " + r.witness};
        if (r.status == CertStatus::inconclusive)
            return {id, Status::inconclusive, "vector " + std::to_string(i) + ": " + r.witness};
        ++certified;
    }
    return {id, Status::pass, std::to_string(certified) + " vectors certified, bound " + std::to_string(bound)};
}

CheckResult dispatch(const std::string& id, const Context& c) {
    const SatakeDatum& sd = c.sd;
    if (id == "rel-U") {
        auto bad = relation_failures(build_irrep(c.rd(), c.lambda));
        return {id, bad.empty() ? Status::pass : Status::fail, join(bad)};
    }
    if (id == "gsat-axioms") {
        auto bad = sd.validate();
        return {id, bad.empty() ? Status::pass : Status::fail, join(bad)};
    }
    if (id == "lem-case-II-bound") {
        std::vector<std::string> notes;
        for (int k : sd.white())
            if (sd.case_of(k) == KCase::II) notes.push_back("k=" + label(k) + ": " + std::to_string(sd.lemma_value(k)));
        return {id, Status::pass, notes.empty() ? "no case II node" : join(notes)};
    }
    if (id == "lem-parity") {
        const auto ks = c.nodes(KCase::I);
        WeightModule v = build_irrep(c.rd(), c.lambda);
        for (int k : ks) {
            std::map<IWeight, int> seen;
            for (const auto& w : v.weights()) {
                const int par = ((c.rd().pair(c.rd().h(k), w) % 2) + 2) % 2;
                auto [it, fresh] = seen.emplace(sd.project(w), par);
                if (!fresh && it->second != par)
                    return {id, Status::fail, "k=" + label(k) + " parity differs within " + sd.iweight_to_string(it->first)};
                if (sd.parity(k, sd.project(w)) != par) return {id, Status::fail, "parity() disagrees"};
            }
        }
        return {id, Status::pass, std::to_string(ks.size()) + " case I nodes"};
    }
    if (id == "prop-kappa-spectrum") return check_spectrum(id, c);
    if (id == "eq-minpoly-identity") return check_minpoly(id, c);
    if (id == "prop-frB-I") return check_frB_case(id, c, KCase::I);
    if (id == "prop-frB-II") return check_frB_case(id, c, KCase::II);
    if (id == "prop-frB-III") return check_frB_case(id, c, KCase::III);
    if (id == "prop-frB-int") return check_frB_int(id, c);
    if (id == "lem-case-II-structure" || id == "lem-case-III-structure") {
        const auto ks = c.nodes(id == "lem-case-II-structure" ? KCase::II : KCase::III);
        if (ks.empty()) return {id, Status::fail, "no white node of that case"};
        IModule m = c.tensor_module();
        CheckReport all;
        for (int k : ks) {
            CheckReport r = case_structure_check(m, k);
            all.failures.insert(all.failures.end(), r.failures.begin(), r.failures.end());
        }
        return from_report(id, all);
    }
    if (id == "def-iweight-action") {
        IModule m = c.tensor_module();
        CheckReport all;
        for (int k : sd.white()) {
            CheckReport r = b_shift_check(m, k);
            all.failures.insert(all.failures.end(), r.failures.begin(), r.failures.end());
        }
        return from_report(id, all);
    }
    if (id == "prop-int-U-is-int-Ui") {
        IModule m = c.tensor_module();
        std::vector<VectorR> vs;
        for (int i = 0; i < m.dim(); ++i) vs.push_back(m.module().basis_vector(i));
        return check_certificates(id, m, vs, c.depth);
    }

    LiModule l = build_Li(sd, c.p, c.lambda, c.mu);
    if (id == "prop-Vi-Li") return from_report(id, check_Li_annihilators(l));
    if (id == "thm-presentation") return from_report(id, check_theorem_relations(l, c.depth));
    if (id == "prop-Ui-cyclic") {
        const int d = ui_cyclic_dim(l);
        return {id, d == l.dim() ? Status::pass : Status::fail,
                "closure " + std::to_string(d) + ", dim L " + std::to_string(l.dim())};
    }
    if (id == "prop-local-nilp") return check_certificates(id, l.module, {l.cyclic}, c.depth);
    if (id == "sec-contravariant-form") return from_report(id, check_Li_form(l));
    if (id == "sec-semisimple") {
        UiDecomposition d = decompose_ui(l);
        CheckReport r = check_decomposition(l.module, li_form(l), d);
        r.failures.insert(r.failures.begin(), d.failures.begin(), d.failures.end());
        if (!r.ok()) return from_report(id, r);
        std::string dims;
        bool unresolved = false;
        for (const auto& s : d.summands) {
            dims += (dims.empty() ? "" : "+") + std::to_string(s.basis.cols());
            unresolved = unresolved || !s.resolved;
        }
        return {id, unresolved ? Status::inconclusive : Status::pass, "summands " + dims};
    }
    if (id == "lem-U-str-Levi") {
        HighestWeightMultisets hw = levi_and_u_highest_weights(l);
        std::string u;
        for (const auto& [w, n] : hw.u) u += (u.empty() ? "" : " + ") + std::to_string(n) + "*V(" + c.rd().weight_to_string(w) + ")";
        return {id, hw.match() ? Status::pass : Status::fail, "U-side " + u};
    }
    throw std::invalid_argument("unknown statement id " + id);
}

std::string datum_label(const nlohmann::json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

}  // namespace

CheckResult run_check(const std::string& id, const SuiteEntry& e) {
    CheckResult r;
    try {
        const Context c(e);
        r = dispatch(id, c);
    } catch (const std::exception& ex) {
        r = {id, Status::fail, std::string("error: ") + ex.what()};
    }
    auto it = e.expect.find(id);
    if (it != e.expect.end() && it->second == "fail") {
        // a negative check: the statement is expected not to hold here
        r.status = r.status == Status::fail ? Status::pass : Status::fail;
        r.detail = "expected failure: " + r.detail;
    }
    return r;
}

EntryReport run_entry(const SuiteEntry& e) {
    EntryReport r{datum_label(e.datum), e.lambda, e.mu, {}};
    for (const auto& id : e.checks) r.checks.push_back(run_check(id, e));
    return r;
}

RunReport run_suite(const SuiteSpec& s, int jobs) {
    RunReport out;
    out.suite = s.name;
    out.entries.resize(s.entries.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < s.entries.size(); i = next++) out.entries[i] = run_entry(s.entries[i]);
    };
    const auto n = static_cast<std::size_t>(std::max(1, jobs));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < std::min(n, s.entries.size()); ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return out;
}

int RunReport::count(Status s) const {
    int n = 0;
    for (const auto& e : entries)
        for (const auto& c : e.checks) n += c.status == s;
    return n;
}

nlohmann::json RunReport::to_json() const {
    nlohmann::json j;
    j["suite"] = suite;
    j["entries"] = nlohmann::json::array();
    for (const auto& e : entries) {
        nlohmann::json je{{"datum", e.datum}, {"lambda", e.lambda}, {"mu", e.mu}, {"checks", nlohmann::json::array()}};
        for (const auto& c : e.checks)
            je["checks"].push_back({{"id", c.id}, {"status", to_string(c.status)}, {"detail", c.detail}});
        j["entries"].push_back(std::move(je));
    }
    j["summary"] = {{"pass", count(Status::pass)},
                    {"fail", count(Status::fail)},
                    {"inconclusive", count(Status::inconclusive)}};
    return j;
}

std::vector<std::string> coverage_lint(const std::vector<SuiteSpec>& suites) {
    std::set<std::string> used;
    for (const auto& s : suites)
        for (const auto& e : s.entries) used.insert(e.checks.begin(), e.checks.end());
    std::vector<std::string> out;
    for (const auto& st : statement_registry())
        if (!used.count(st.id)) out.push_back("not covered: " + st.id);
    for (const auto& id : used)
        if (!find_statement(id)) out.push_back("not registered: " + id);
    return out;
}

}  // namespace iqg
