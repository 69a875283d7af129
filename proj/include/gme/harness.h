#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace gme {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchema = 1;

/// How a check's value is judged against its tolerance.
enum class Compare {
    Below,  // value < tolerance
    Above,  // value > tolerance
    Exact,  // value == tolerance (mismatch counts, exact identities)
};

struct CheckRecord {
    std::string name;
    double value = 0;
    double tolerance = 0;
    Compare compare = Compare::Below;
    bool pass = false;
};

CheckRecord check_below(std::string name, double value, double tolerance);
CheckRecord check_above(std::string name, double value, double threshold);
/// value is the number of mismatches; passes when it is zero.
CheckRecord check_exact(std::string name, std::size_t mismatches);

struct SuiteResult {
    std::string name;
    std::vector<CheckRecord> checks;
    /// Set when the suite threw; the suite then fails.
    std::optional<std::string> error;
    bool pass() const;
};

struct Report {
    /// "scenario" or "verify".
    std::string kind;
    /// Scenario id, or the requested suite name ("all" for the whole registry).
    std::string id;
    std::uint64_t seed = 0;
    /// Scenario parameters or verify options as given to the run.
    nlohmann::json params = nlohmann::json::object();
    /// Scenarios produce one suite named after the scenario; verify reports are ordered by suite name.
    std::vector<SuiteResult> suites;
    double wall_time = 0;
    bool pass() const;
};

/// Scenario reports flatten their single suite into "checks". wall_time is omitted when
/// include_wall_time is false, which makes equal runs byte-identical.
nlohmann::json report_to_json(const Report& report, bool include_wall_time = true);
/// One line per check plus a PASS/FAIL summary.
std::string report_to_text(const Report& report);

struct ScenarioOptions {
    std::optional<std::uint64_t> seed;
    /// Party count where the scenario has one (odd-q-vanishing, compatibility-sweep,
    /// theorem4-sweep is fixed at 3, kernel-oracle-sweep).
    std::optional<std::size_t> q;
    std::optional<std::size_t> samples;
};

const std::vector<std::string>& scenario_ids();
/// Throws DomainError for unknown ids or parameters outside the scenario's range.
Report run_scenario(const std::string& id, const ScenarioOptions& options = {});

struct VerifyOptions {
    /// Largest party count for suites that sweep q.
    std::size_t q_max = 4;
    std::uint64_t seed = 1;
    /// Run suites on worker threads; the report is identical either way.
    bool parallel = true;
};

struct SuiteInfo {
    std::string name;
    /// Library module whose invariant the suite checks.
    std::string module;
    std::string property;
};

/// The registry, sorted by name.
const std::vector<SuiteInfo>& verify_suites();
/// Runs the named suites ("all" or an empty list means every suite). DomainError for unknown names.
Report run_verify(const std::vector<std::string>& names, const VerifyOptions& options);

}  // namespace gme
