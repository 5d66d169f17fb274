#include <doctest.h>

#include <set>

#include "iqg/suite.hpp"

using namespace iqg;
using nlohmann::json;

namespace {

std::vector<SuiteSpec> shipped() {
    std::vector<SuiteSpec> out;
    for (const auto& f : suite_files(IQG_SUITE_DIR)) out.push_back(load_suite(f));
    return out;
}

std::string parse_error(const json& j) {
    try {
        parse_suite(j);
    } catch (const std::invalid_argument& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("statement registry") {
    std::set<std::string> ids;
    for (const auto& s : statement_registry()) {
        CHECK(ids.insert(s.id).second);
        CHECK_FALSE(s.title.empty());
        CHECK_FALSE(s.claim.empty());
        CHECK_FALSE(s.check.empty());
        CHECK(find_statement(s.id) == &s);
    }
    CHECK(find_statement("thm-nonexistent") == nullptr);
}

TEST_CASE("datum arguments") {
    CHECK(load_datum_arg("a3-aii").name() == "a3-aii");
    SatakeDatum b2 = load_datum_arg("B2");
    CHECK(b2.datum().rank() == 2);
    CHECK(b2.white().size() == 2);
    SatakeDatum inl = load_datum_arg(R"({"datum": "A3", "black": [1, 3], "tau": "id"})");
    CHECK(inl.case_of(1) == KCase::II);
}

TEST_CASE("suite parsing reports the location") {
    CHECK(parse_error(json::array()).find("expected an object") != std::string::npos);
    CHECK(parse_error({{"entries", json::array()}}).find("/name") != std::string::npos);
    json bad_id = {{"name", "x"}, {"entries", {{{"datum", "split-a1"}, {"checks", {"rel-U", "prop-bogus"}}}}}};
    CHECK(parse_error(bad_id).find("/entries/0/checks/1") != std::string::npos);
    json bad_w = {{"name", "x"}, {"entries", {{{"datum", "split-a1"}, {"lambda", "w7"}, {"checks", {"rel-U"}}}}}};
    CHECK(parse_error(bad_w).find("/entries/0") != std::string::npos);
    json bad_datum = {{"name", "x"}, {"entries", {{{"datum", "no-such-datum"}, {"checks", {"rel-U"}}}}}};
    CHECK_FALSE(parse_error(bad_datum).empty());
    json ok = {{"name", "x"}, {"entries", {{{"datum", "split-a1"}, {"checks", {"rel-U"}}}}}};
    CHECK(parse_error(ok).empty());
}

TEST_CASE("shipped suites cover the registry") {
    auto suites = shipped();
    CHECK(suites.size() >= 3);
    CHECK(coverage_lint(suites).empty());
    suites.pop_back();
    CHECK_FALSE(coverage_lint(suites).empty());
}

TEST_CASE("negative checks") {
    SuiteEntry e;
    e.datum = json{{"datum", "A2"}, {"black", {1}}, {"tau", "id"}};
    e.checks = {"gsat-axioms"};
    CheckResult plain = run_check("gsat-axioms", e);
    CHECK(plain.status == Status::fail);
    CHECK(plain.detail.find("gSat4") != std::string::npos);
    e.expect["gsat-axioms"] = "fail";
    CHECK(run_check("gsat-axioms", e).status == Status::pass);

    SuiteEntry good;
    good.datum = "split-a1";
    good.expect["gsat-axioms"] = "fail";
    CHECK(run_check("gsat-axioms", good).status == Status::fail);
}

TEST_CASE("reports are deterministic and keep entry order") {
    json j = {{"name", "mini"},
              {"entries",
               {{{"datum", "split-a1"}, {"lambda", "w1"}, {"mu", "w1"}, {"checks", {"prop-Ui-cyclic", "sec-semisimple"}}},
                {{"datum", "a2-flip"}, {"lambda", "w1"}, {"checks", {"rel-U", "def-iweight-action"}}},
                {{"datum", "b2-bi"}, {"lambda", "w1"}, {"mu", "w2"}, {"checks", {"prop-frB-II"}}},
                {{"datum", "c2-ci"}, {"checks", {"gsat-axioms"}}}}}};
    SuiteSpec s = parse_suite(j);
    const std::string one = run_suite(s, 1).to_json().dump();
    const std::string four = run_suite(s, 4).to_json().dump();
    CHECK(one == four);
    CHECK(run_suite(s, 3).to_json().dump() == one);
    RunReport r = run_suite(s, 4);
    REQUIRE(r.entries.size() == 4);
    CHECK(r.entries[1].datum == "a2-flip");
    CHECK(r.count(Status::pass) == 6);
    CHECK_FALSE(r.hard_failure());
}

TEST_CASE("check outcomes on small entries") {
    SuiteEntry split;
    split.datum = "split-a1";
    split.n_max = 3;
    CHECK(run_check("prop-kappa-spectrum", split).status == Status::pass);
    // the literal 1/[n]! normalization fails from n = 1 on; the detail names
    // the normalization that holds
    CheckResult mp = run_check("eq-minpoly-identity", split);
    CHECK(mp.status == Status::fail);
    CHECK(mp.detail.find("1/[n+1]! form holds for n in {0,1,2,3}") != std::string::npos);

    SuiteEntry flip;
    flip.datum = "a2-flip";
    flip.lambda = "w1";
    CHECK(run_check("prop-frB-I", flip).status == Status::fail);  // no case I node
    CHECK(run_check("prop-frB-III", flip).status == Status::pass);
    // rho does not preserve U^i for the default parameters
    CHECK(run_check("sec-semisimple", flip).status == Status::fail);
    flip.params = {{"sigma", {{"1", "1"}, {"2", "q"}}}};
    CHECK(run_check("sec-semisimple", flip).status == Status::pass);
}
