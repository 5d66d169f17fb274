#pragma once

// Verification suites: a registry of checkable statements, JSON suite files
// listing (datum, parameters, lambda, mu, checks), and a deterministic runner.

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iqg/integrable.hpp"

namespace iqg {

struct Statement {
    std::string id;
    std::string title;
    std::string claim;  // what is asserted
    std::string check;  // what the runner computes
};

const std::vector<Statement>& statement_registry();
const Statement* find_statement(const std::string& id);

/// A catalogue name, a file with a Satake datum or root datum, a JSON text, or
/// a Cartan type such as "B2" (split, no black nodes).
SatakeDatum load_datum_arg(const std::string& arg);

struct SuiteEntry {
    nlohmann::json datum;   // as written in the suite
    nlohmann::json params;  // object or null
    std::string lambda = "0", mu = "0";
    std::vector<std::string> checks;
    std::optional<int> depth;
    int n_max = 4;  // for the rank-one checks
    std::map<std::string, std::string> expect;  // check id -> "fail" for negative checks
};

struct SuiteSpec {
    std::string name;
    std::vector<SuiteEntry> entries;
};

/// Throws std::invalid_argument with the JSON path of the first problem.
SuiteSpec parse_suite(const nlohmann::json& j);
SuiteSpec load_suite(const std::string& path);

enum class Status { pass, fail, inconclusive };
std::string to_string(Status s);

struct CheckResult {
    std::string id;
    Status status = Status::fail;
    std::string detail;
};

struct EntryReport {
    std::string datum, lambda, mu;
    std::vector<CheckResult> checks;
};

struct RunReport {
    std::string suite;
    std::vector<EntryReport> entries;
    int count(Status s) const;
    bool hard_failure() const { return count(Status::fail) > 0; }
    nlohmann::json to_json() const;
};

CheckResult run_check(const std::string& id, const SuiteEntry& e);
EntryReport run_entry(const SuiteEntry& e);
/// Entries run on up to jobs threads; the report keeps entry order.
RunReport run_suite(const SuiteSpec& s, int jobs = 1);

/// Suite files (*.json) in a directory, sorted by name.
std::vector<std::string> suite_files(const std::string& dir);

/// Registry ids that no suite references, then suite check ids that are not
/// in the registry.
std::vector<std::string> coverage_lint(const std::vector<SuiteSpec>& suites);

}  // namespace iqg
