#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sgsp {

/// One probe request inside a scenario: kind plus flat key=value params.
struct ProbeSpec {
    std::string kind;
    std::map<std::string, std::string> params;
};

/// Parsed scenario file: [scenario] and [engine] sections plus ordered
/// [probe <kind>] sections. The dump() form reparses to the same config.
struct ScenarioConfig {
    std::string name = "scenario";
    std::map<std::string, std::string> scenario_kv;
    std::map<std::string, std::string> engine_kv;
    std::vector<ProbeSpec> probes;

    static ScenarioConfig parse(const std::string& text);
    static ScenarioConfig load(const std::filesystem::path& path);
    std::string dump() const;
};

struct RunOverrides {
    std::optional<std::string> out_dir;
    std::optional<unsigned long long> seed;
    std::optional<double> tolerance;
    bool quiet = false;
};

/// Exit codes: 0 all declared expectations met, 1 an expectation failed,
/// 2 configuration error. Numerical refusals are recorded in the report and
/// only fail the run when a probe expected success.
int run_scenario(const ScenarioConfig& config, const RunOverrides& overrides = {});
int run_scenario(const std::filesystem::path& config_path, const RunOverrides& overrides = {});

/// Output root resolution: override, then scenario key, then SGSP_OUT_ROOT,
/// then "out".
std::filesystem::path resolve_output_dir(const ScenarioConfig& config,
                                         const RunOverrides& overrides);

}  // namespace sgsp
