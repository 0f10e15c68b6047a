#pragma once

// Run configuration: a flat, sectioned key-value document in SI units.
//
//   [early]     va s
//   [circuit]   vcc r c r_b r_i v_r
//   [stimulus]  offset amplitude f phase
//   [sim]       nt cycles discard scheme initial
//   [sweep]     va_min va_max s_min s_max n_va n_s r_values
//   [scan]      ib_max ib_points xi
//   [output]    out
//
// Keys may also appear before any section header (names are unique), and one
// line may hold several comma-separated `key=value` pairs. '#' and ';' start
// comments. Unknown keys are errors.

#include "ampsim/model.hpp"
#include "ampsim/sweep.hpp"
#include "ampsim/transient.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ampsim {

struct ScanOptions {
    std::vector<double> r_values{30.0, 60.0, 150.0};
    double ib_max = 15e-6;
    std::size_t ib_points = 150;
    double xi = 1.1;

    bool operator==(const ScanOptions&) const = default;
};

struct RunConfig {
    EarlyParams early;
    CircuitConfig circuit;
    Stimulus stimulus;
    SimConfig sim;
    SweepGrid grid = SweepGrid::open_rectangle(-200.0, 10.0, 10, 10);
    ScanOptions scan;
    std::filesystem::path output_path = ".";

    /// Every component invariant; throws ConfigError naming the first violation.
    void validate() const;

    bool operator==(const RunConfig&) const = default;
};

/// Parses and validates. Errors carry `line N:` prefixes where a line is known.
RunConfig parse_config(std::string_view text);

/// Parses without the final validate(); used when overrides follow.
RunConfig parse_config_unvalidated(std::string_view text);

/// Sets one key from its textual value; throws ConfigError for unknown keys or
/// malformed values.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Canonical sectioned document; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& cfg);

/// All recognised keys in document order.
std::vector<std::string> config_keys();

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Reads AMPSIM_<KEY> (upper-cased key) for every recognised key.
EnvLookup process_environment();

inline constexpr std::string_view kEnvPrefix = "AMPSIM_";

/// Layers defaults < config document < environment < explicit overrides, then validates.
RunConfig resolve_run_config(std::optional<std::string_view> document, const EnvLookup& env,
                             const std::vector<std::pair<std::string, std::string>>& overrides);

}  // namespace ampsim
