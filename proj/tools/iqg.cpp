// iqg: command-line front end.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "iqg/suite.hpp"

using namespace iqg;
using nlohmann::json;

namespace {

json read_json_arg(const std::string& arg) {
    if (std::filesystem::is_regular_file(arg)) {
        std::ifstream in(arg);
        return json::parse(in);
    }
    return json::parse(arg);
}

IParams load_params(const SatakeDatum& sd, const std::string& arg) {
    if (arg.empty()) return IParams::defaults(sd);
    IParams p = IParams::from_json(sd, read_json_arg(arg));
    auto bad = validate_params(sd, p);
    if (!bad.empty()) throw std::invalid_argument("parameters: " + bad.front());
    return p;
}

int generator_index(const SatakeDatum& sd, const std::string& gen) {
    if (gen.size() < 2 || gen[0] != 'B') throw std::invalid_argument("generator must be B<k>, got '" + gen + "'");
    const int k = std::stoi(gen.substr(1)) - 1;
    if (k < 0 || k >= sd.datum().rank() || sd.is_black(k))
        throw std::invalid_argument(gen + " is not a white node of " + sd.name());
    return k;
}

// weight \t dim, one line per weight space
std::string weight_table(const WeightModule& v) {
    std::ostringstream out;
    out << "weight\tdim\n";
    for (int b = 0; b < v.weight_count(); ++b) out << v.datum().weight_to_string(v.weight(b)) << '\t' << v.block_dim(b) << '\n';
    return out.str();
}

std::string golden_name(const SatakeDatum& sd, const std::string& hw) {
    std::string s = sd.name() + "_";
    for (char c : hw)
        if (std::isalnum(static_cast<unsigned char>(c))) s += c;
        else if (c == '-') s += 'm';
        else if (c != ' ') s += '_';
    return s + ".tsv";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

json certificate_json(const CertificateResult& r) {
    json j{{"status", to_string(r.status)}};
    if (r.certificate) {
        auto m = [](const std::map<int, int>& x) {
            json o = json::object();
            for (const auto& [i, n] : x) o[std::to_string(i + 1)] = n;
            return o;
        };
        j["a"] = m(r.certificate->a);
        j["b"] = m(r.certificate->b);
        j["c"] = m(r.certificate->c);
    }
    if (!r.witness.empty()) j["witness"] = r.witness;
    return j;
}

json report_json(const CheckReport& r) { return {{"ok", r.ok()}, {"failures", r.failures}}; }

json weights_json(const RootDatum& rd, const std::map<Weight, int, LatticeLess>& m) {
    json o = json::object();
    for (const auto& [w, n] : m) o[rd.weight_to_string(w)] = n;
    return o;
}

void print_catalogue(bool as_json) {
    json out = json::array();
    for (const auto& e : satake_catalogue()) {
        SatakeDatum sd = SatakeDatum::from_json(e.spec);
        json cases = json::object();
        for (int k : sd.white()) cases[std::to_string(k + 1)] = to_string(sd.case_of(k));
        out.push_back({{"name", e.name}, {"description", e.description}, {"cases", cases}});
    }
    if (as_json) {
        std::cout << out.dump(2) << '\n';
        return;
    }
    std::size_t w = 4;
    for (const auto& e : out) w = std::max(w, e["name"].get<std::string>().size());
    std::cout << std::left << std::setw(static_cast<int>(w) + 2) << "name" << std::setw(24) << "cases" << "description\n";
    for (const auto& e : out) {
        std::string cases;
        for (const auto& [k, c] : e["cases"].items()) cases += (cases.empty() ? "" : " ") + k + ":" + c.get<std::string>();
        std::cout << std::setw(static_cast<int>(w) + 2) << e["name"].get<std::string>() << std::setw(24) << cases
                  << e["description"].get<std::string>() << '\n';
    }
}

void print_run(const RunReport& r) {
    std::size_t w = 8;
    for (const auto& e : r.entries)
        for (const auto& c : e.checks) w = std::max(w, c.id.size());
    for (const auto& e : r.entries) {
        std::cout << r.suite << ": " << e.datum << " lambda=" << e.lambda << " mu=" << e.mu << '\n';
        for (const auto& c : e.checks)
            std::cout << "  " << std::left << std::setw(static_cast<int>(w) + 2) << c.id << std::setw(14)
                      << to_string(c.status) << c.detail << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact computations with quantum groups and quantum symmetric pairs"};
    app.require_subcommand(1);

    std::string datum_arg, params_arg, hw = "0", lm = "0", mu = "0", gen, golden, out_path = "iqg-report.json",
                report_path = "iqg-report.json", statement;
    bool as_json = false, decompose = false, check_theorem = false, lint = false;
    std::optional<int> depth;
    int jobs = 1;
    std::vector<std::string> suite_args;

    auto* cat = app.add_subcommand("catalogue", "List the built-in Satake data with the case of each white node");
    cat->add_flag("--json", as_json, "JSON output");

    auto* validate = app.add_subcommand("validate", "Check the generalized Satake axioms of a datum");
    validate->add_option("--datum", datum_arg, "File, catalogue name or Cartan type")->required();

    auto* module = app.add_subcommand("module", "Weight modules");
    module->require_subcommand(1);
    auto* build = module->add_subcommand("build", "Weight multiplicities of V(hw) as TSV");
    build->add_option("--datum", datum_arg, "File, catalogue name or Cartan type")->required();
    build->add_option("--hw", hw, "Highest weight, e.g. w1+w2");
    build->add_option("--golden", golden, "Compare against <dir>/<datum>_<hw>.tsv");
    build->add_flag("--json", as_json, "JSON output");

    auto* spec = app.add_subcommand("spectrum", "Eigenvalues of B_k on V(hw) per i-weight component (JSON)");
    spec->add_option("--datum", datum_arg, "File, catalogue name or Cartan type")->required();
    spec->add_option("--params", params_arg, "Parameter file or JSON text");
    spec->add_option("--module", hw, "Highest weight");
    spec->add_option("--gen", gen, "Generator B<k>")->required();

    auto* li = app.add_subcommand("li", "The module L^i(lambda, mu) (JSON report)");
    li->add_option("--datum", datum_arg, "File, catalogue name or Cartan type")->required();
    li->add_option("--params", params_arg, "Parameter file or JSON text");
    li->add_option("--lm", lm, "lambda");
    li->add_option("--mu", mu, "mu");
    li->add_option("--depth", depth, "Depth bound for the relation and certificate searches");
    li->add_flag("--decompose", decompose, "Split into U^i-submodules");
    li->add_flag("--check-theorem", check_theorem, "Check the presentation relations on v^i");

    auto* suite = app.add_subcommand("suite", "Run verification suites");
    suite->add_option("paths", suite_args, "Suite files or directories")->required();
    suite->add_option("--jobs", jobs, "Entries run concurrently")->check(CLI::PositiveNumber);
    suite->add_option("--out", out_path, "Where the JSON report is written");
    suite->add_flag("--json", as_json, "Print the JSON report instead of the table");
    suite->add_flag("--lint", lint, "Only check that every registered statement is covered");

    auto* explain = app.add_subcommand("explain", "Describe a registered statement and its last-run status");
    explain->add_option("id", statement, "Statement id")->required();
    explain->add_option("--report", report_path, "Report written by 'iqg suite'");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cat) {
            print_catalogue(as_json);
            return 0;
        }
        if (*validate) {
            SatakeDatum sd = load_datum_arg(datum_arg);
            auto bad = sd.validate();
            for (const auto& b : bad) std::cout << b << '\n';
            if (bad.empty()) std::cout << sd.name() << ": valid\n";
            return bad.empty() ? 0 : 1;
        }
        if (*build) {
            SatakeDatum sd = load_datum_arg(datum_arg);
            WeightModule v = build_irrep(sd.datum(), sd.datum().parse_weight(hw));
            const std::string table = weight_table(v);
            if (!golden.empty()) {
                const std::string path = (std::filesystem::path(golden) / golden_name(sd, hw)).string();
                if (read_file(path) != table) {
                    std::cerr << "mismatch against " << path << '\n' << table;
                    return 1;
                }
                std::cout << "matches " << path << '\n';
                return 0;
            }
            if (as_json) {
                json j{{"datum", sd.name()}, {"hw", hw}, {"dim", v.dim()}, {"weights", json::array()}};
                for (int b = 0; b < v.weight_count(); ++b)
                    j["weights"].push_back({{"weight", sd.datum().weight_to_string(v.weight(b))}, {"dim", v.block_dim(b)}});
                std::cout << j.dump(2) << '\n';
            } else {
                std::cout << table;
            }
            return 0;
        }
        if (*spec) {
            SatakeDatum sd = load_datum_arg(datum_arg);
            IParams p = load_params(sd, params_arg);
            const int k = generator_index(sd, gen);
            IModule m(build_irrep(sd.datum(), sd.datum().parse_weight(hw)), sd, p);
            json j{{"datum", sd.name()}, {"module", hw}, {"generator", gen}, {"params", p.to_json(sd)}, {"components", json::array()}};
            for (const auto& c : spectrum(m, k))
                j["components"].push_back({{"iweight", c.component},
                                           {"dim", c.dim},
                                           {"eigenvalues", c.eigenvalues},
                                           {"diagonalizable", c.diagonalizable}});
            std::cout << j.dump(2) << '\n';
            return 0;
        }
        if (*li) {
            SatakeDatum sd = load_datum_arg(datum_arg);
            IParams p = load_params(sd, params_arg);
            const RootDatum& rd = sd.datum();
            LiModule l = build_Li(sd, p, rd.parse_weight(lm), rd.parse_weight(mu));
            const int bound = depth ? *depth : depth_bound(rd, l.lambda, l.mu);
            json j{{"datum", sd.name()},
                   {"lambda", rd.weight_to_string(l.lambda)},
                   {"mu", rd.weight_to_string(l.mu)},
                   {"params", p.to_json(sd)},
                   {"depth", bound},
                   {"dim_ambient", l.ambient.dim()},
                   {"dim", l.dim()},
                   {"nu", rd.weight_to_string(l.nu())},
                   {"ui_cyclic_dim", ui_cyclic_dim(l)},
                   {"annihilators", report_json(check_Li_annihilators(l))},
                   {"certificate", certificate_json(integrability_certificate(l.module, l.cyclic, bound))},
                   {"form", report_json(check_Li_form(l))},
                   {"u_decomposition", weights_json(rd, u_decomposition(l.module.module()))}};
            bool ok = j["annihilators"]["ok"].get<bool>() && j["form"]["ok"].get<bool>() &&
                      j["ui_cyclic_dim"].get<int>() == l.dim();
            if (check_theorem) {
                j["theorem"] = report_json(check_theorem_relations(l, bound));
                ok = ok && j["theorem"]["ok"].get<bool>();
            }
            if (decompose) {
                UiDecomposition d = decompose_ui(l);
                CheckReport r = check_decomposition(l.module, li_form(l), d);
                json sums = json::array();
                for (const auto& s : d.summands) {
                    json b = json::object();
                    for (const auto& [k, x] : s.b_scalars) b[std::to_string(k + 1)] = x;
                    sums.push_back({{"dim", s.basis.cols()}, {"end_dim", s.end_dim}, {"resolved", s.resolved}, {"b_scalars", b}});
                }
                HighestWeightMultisets hw2 = levi_and_u_highest_weights(l);
                j["decomposition"] = {{"summands", sums},
                                      {"failures", d.failures},
                                      {"checks", report_json(r)},
                                      {"levi_highest_weights", weights_json(rd, hw2.levi)},
                                      {"levi_matches_u", hw2.match()}};
                ok = ok && d.failures.empty() && r.ok();
            }
            j["ok"] = ok;
            std::cout << j.dump(2) << '\n';
            return ok ? 0 : 1;
        }
        if (*suite) {
            std::vector<std::string> files;
            for (const auto& a : suite_args) {
                if (std::filesystem::is_directory(a)) {
                    auto fs = suite_files(a);
                    files.insert(files.end(), fs.begin(), fs.end());
                } else {
                    files.push_back(a);
                }
            }
            std::vector<SuiteSpec> specs;
            for (const auto& f : files) specs.push_back(load_suite(f));
            if (lint) {
                auto bad = coverage_lint(specs);
                for (const auto& b : bad) std::cout << b << '\n';
                if (bad.empty()) std::cout << statement_registry().size() << " statements covered\n";
                return bad.empty() ? 0 : 1;
            }
            const auto t0 = std::chrono::steady_clock::now();
            json out = json::array();
            bool hard = false;
            for (const auto& s : specs) {
                RunReport r = run_suite(s, jobs);
                hard = hard || r.hard_failure();
                out.push_back(r.to_json());
                if (!as_json) print_run(r);
            }
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (as_json) std::cout << out.dump(2) << '\n';
            if (!out_path.empty()) std::ofstream(out_path) << out.dump(2) << '\n';
            // wall time stays out of the report so that reports compare byte for byte
            std::cerr << "wall time " << std::fixed << std::setprecision(2) << secs << " s\n";
            return hard ? 1 : 0;
        }
        if (*explain) {
            const Statement* s = find_statement(statement);
            if (!s) {
                std::cerr << "unknown statement id '" << statement << "'\n";
                return 2;
            }
            std::cout << s->id << ": " << s->title << "\n  claim: " << s->claim << "\n  check: " << s->check << '\n';
            if (!std::filesystem::is_regular_file(report_path)) {
                std::cout << "  last run: no report at " << report_path << '\n';
                return 0;
            }
            const json rep = json::parse(read_file(report_path));
            int runs = 0;
            for (const auto& suite_rep : rep)
                for (const auto& e : suite_rep["entries"])
                    for (const auto& c : e["checks"])
                        if (c["id"] == s->id) {
                            ++runs;
                            std::cout << "  last run: " << c["status"].get<std::string>() << "  "
                                      << suite_rep["suite"].get<std::string>() << " " << e["datum"].get<std::string>()
                                      << " lambda=" << e["lambda"].get<std::string>()
                                      << " mu=" << e["mu"].get<std::string>();
                            if (!c["detail"].get<std::string>().empty()) std::cout << "  (" << c["detail"].get<std::string>() << ")";
                            std::cout << '\n';
                        }
            if (runs == 0) std::cout << "  last run: not in " << report_path << '\n';
            return 0;
        }
    } catch (const std::exception& ex) {
        std::cerr << "iqg: " << ex.what() << '\n';
        return 2;
    }
    return 0;
}
