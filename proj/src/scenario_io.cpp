#include "influence/scenario_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace influence {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

Activation parse_activation(const std::string& name) {
  if (name == "swish") return Activation::Swish;
  if (name == "tanh") return Activation::Tanh;
  if (name == "identity") return Activation::Identity;
  throw ConfigError("config: unknown activation '" + name + "'");
}

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::Swish:
      return "swish";
    case Activation::Tanh:
      return "tanh";
    case Activation::Identity:
      return "identity";
  }
  return "?";
}

Eigen::VectorXd parse_vector(const json& arr) {
  Eigen::VectorXd v(arr.size());
  for (size_t i = 0; i < arr.size(); ++i) v(i) = arr[i].get<double>();
  return v;
}

// Full-precision double formatting shared by CSV and the canonical dump.
std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  try {
    if (doc.at("schema_version").get<int>() != kSchemaVersion) {
      throw ConfigError("config: unsupported schema_version");
    }
    ScenarioConfig cfg;
    const auto& graph = doc.at("graph");
    cfg.node_count = graph.at("nodes").get<int>();
    if (graph.value("complete", false)) {
      for (int i = 1; i <= cfg.node_count; ++i) {
        for (int j = i + 1; j <= cfg.node_count; ++j) {
          cfg.edges.emplace_back(i, j);
        }
      }
    } else {
      for (const auto& e : graph.at("edges")) {
        cfg.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
      }
    }

    const auto& gnn = doc.at("gnn");
    cfg.gnn.depth = gnn.at("depth").get<int>();
    cfg.gnn.hidden_dims = gnn.at("hidden_dims").get<std::vector<int>>();
    cfg.gnn.hidden_activation =
        parse_activation(gnn.value("hidden_activation", "swish"));
    cfg.gnn.output_activation =
        parse_activation(gnn.value("output_activation", "tanh"));

    const auto& gains = doc.at("gains");
    cfg.gains.k1 = gains.at("k1").get<double>();
    cfg.gains.k2 = gains.at("k2").get<double>();
    cfg.gains.k3 = gains.at("k3").get<double>();
    cfg.gains.gamma = gains.value("gamma", 2.0);
    cfg.gains.theta_bar = gains.value("theta_bar", 10.0);
    cfg.gains.eps1 = gains.value("eps1", 0.1);
    cfg.gains.lambda4 = gains.value("lambda4", 0.01);
    cfg.gains.eps_proj = gains.value("eps_proj", 0.1);

    cfg.dynamics_name = doc.at("dynamics").at("name").get<std::string>();
    cfg.trajectory_name = doc.at("trajectory").at("name").get<std::string>();

    const auto& initial = doc.at("initial");
    cfg.target_start = parse_vector(initial.at("target"));
    cfg.state_dim = static_cast<int>(cfg.target_start.size());
    for (const auto& y : initial.at("influencers")) {
      cfg.influencer_start.push_back(parse_vector(y));
    }
    cfg.gnn.input_dim = cfg.state_dim * (cfg.node_count + 1);
    cfg.gnn.output_dim = cfg.state_dim;

    const auto& weights = doc.at("weights");
    cfg.weight_init_low = weights.value("init_low", 0.0);
    cfg.weight_init_high = weights.value("init_high", 0.3);
    cfg.seed = weights.value("seed", std::uint64_t{0});
    const std::string generator = weights.value("generator", "mt19937_64");
    if (generator != "mt19937_64") {
      throw ConfigError("config: unsupported generator '" + generator + "'");
    }

    const auto& integrator = doc.at("integrator");
    cfg.dt = integrator.at("dt").get<double>();
    cfg.horizon = integrator.at("horizon").get<double>();
    cfg.log_decimation = doc.at("logging").value("decimation", 20);

    cfg.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: schema error: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
  json edges = json::array();
  for (const auto& [a, b] : cfg.edges) edges.push_back({a, b});
  json influencers = json::array();
  for (const auto& y : cfg.influencer_start) {
    influencers.push_back(std::vector<double>(y.data(), y.data() + y.size()));
  }
  json doc = {
      {"schema_version", kSchemaVersion},
      {"graph", {{"nodes", cfg.node_count}, {"edges", edges}}},
      {"gnn",
       {{"depth", cfg.gnn.depth},
        {"hidden_dims", cfg.gnn.hidden_dims},
        {"hidden_activation", activation_name(cfg.gnn.hidden_activation)},
        {"output_activation", activation_name(cfg.gnn.output_activation)}}},
      {"gains",
       {{"k1", cfg.gains.k1},
        {"k2", cfg.gains.k2},
        {"k3", cfg.gains.k3},
        {"gamma", cfg.gains.gamma},
        {"theta_bar", cfg.gains.theta_bar},
        {"eps1", cfg.gains.eps1},
        {"lambda4", cfg.gains.lambda4},
        {"eps_proj", cfg.gains.eps_proj}}},
      {"dynamics", {{"name", cfg.dynamics_name}}},
      {"trajectory", {{"name", cfg.trajectory_name}}},
      {"initial",
       {{"target", std::vector<double>(cfg.target_start.data(),
                                       cfg.target_start.data() +
                                           cfg.target_start.size())},
        {"influencers", influencers}}},
      {"weights",
       {{"init_low", cfg.weight_init_low},
        {"init_high", cfg.weight_init_high},
        {"seed", cfg.seed},
        {"generator", "mt19937_64"}}},
      {"integrator", {{"dt", cfg.dt}, {"horizon", cfg.horizon}}},
      {"logging", {{"decimation", cfg.log_decimation}}},
  };
  return doc.dump(2);
}

std::uint64_t config_hash(const ScenarioConfig& cfg) {
  // FNV-1a, 64-bit
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : scenario_to_json(cfg)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void write_trajectory_csv(std::ostream& out, const RunResult& result,
                          int state_dim, int node_count) {
  out << "t";
  for (int d = 1; d <= state_dim; ++d) out << ",x0_" << d;
  for (int d = 1; d <= state_dim; ++d) out << ",xd_" << d;
  out << ",e_norm";
  for (int i = 1; i <= node_count; ++i) {
    for (int d = 1; d <= state_dim; ++d) {
      out << ",y" << i << "_" << d;
    }
    out << ",u" << i << "_norm,eta" << i << "_norm,theta" << i
        << "_norm,phi_tilde" << i << "_norm";
  }
  out << "\n";
  for (const auto& row : result.rows) {
    out << fmt(row.t);
    for (int d = 0; d < state_dim; ++d) out << "," << fmt(row.x0(d));
    for (int d = 0; d < state_dim; ++d) out << "," << fmt(row.xd(d));
    out << "," << fmt(row.e_norm);
    for (int i = 0; i < node_count; ++i) {
      for (int d = 0; d < state_dim; ++d) out << "," << fmt(row.y[i](d));
      out << "," << fmt(row.u_norm[i]) << "," << fmt(row.eta_norm[i]) << ","
          << fmt(row.theta_norm[i]) << "," << fmt(row.phi_tilde_norm[i]);
    }
    out << "\n";
  }
}

void write_metrics(std::ostream& out, const ScenarioConfig& cfg,
                   const Metrics& metrics, const GainReport& gains) {
  char hash[24];
  std::snprintf(hash, sizeof(hash), "%016" PRIx64, config_hash(cfg));
  out << "config_hash = " << hash << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "dt = " << fmt(cfg.dt) << "\n";
  out << "horizon = " << fmt(cfg.horizon) << "\n";
  out << "wall_seconds = " << fmt(metrics.wall_seconds) << "\n";
  out << "metrics_defined = " << (metrics.defined ? "true" : "false") << "\n";
  if (metrics.defined) {
    out << "e_rms = " << fmt(metrics.e_rms) << "\n";
    out << "u_rms_mean = " << fmt(metrics.u_rms_mean) << "\n";
    out << "phi_tilde_rms_mean = " << fmt(metrics.phi_tilde_rms_mean) << "\n";
    out << "max_theta_norm = " << fmt(metrics.max_theta_norm) << "\n";
    out << "projection_clamp_events = " << metrics.clamp_events << "\n";
    out << "repulsion_guard_hits = " << metrics.repulsion_guard_hits << "\n";
  }
  out << "gain_conditions = " << (gains.all_pass ? "PASS" : "FAIL") << "\n";
  out << "lambda3 = " << fmt(gains.lambda3) << "\n";
}

}  // namespace influence
