#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "influence/analysis.hpp"
#include "influence/sim.hpp"

namespace influence {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Load a scenario from a JSON file. Schema (sections: graph, gnn, gains,
/// dynamics, trajectory, initial, weights, integrator, logging) is
/// documented in the checked-in replication config. Throws ConfigError on
/// any parse or schema problem, including an unknown schema_version.
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& json_text);

/// Canonical serialization of a scenario; the config hash recorded in
/// metrics.txt is FNV-1a over this string.
std::string scenario_to_json(const ScenarioConfig& cfg);
std::uint64_t config_hash(const ScenarioConfig& cfg);

/// Columns: t, x0_1..n, xd_1..n, e_norm, then per node y_1..n, u_norm,
/// eta_norm, theta_norm, phi_tilde_norm. Full-precision, byte-stable for
/// identical runs.
void write_trajectory_csv(std::ostream& out, const RunResult& result,
                          int state_dim, int node_count);

void write_metrics(std::ostream& out, const ScenarioConfig& cfg,
                   const Metrics& metrics, const GainReport& gains);

}  // namespace influence
