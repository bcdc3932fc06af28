// influencesim: closed-loop multi-agent indirect-influence simulator.
//
// Subcommands:
//   run           integrate a scenario from a config file
//   replicate     run the built-in benchmark scenario
//   check-gains   evaluate the sufficient gain conditions
//   validate-gnn  compare analytic network Jacobians against finite
//                 differences on random instances

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "influence/analysis.hpp"
#include "influence/scenario_io.hpp"
#include "influence/sim.hpp"
#include "influence/svg.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitIo = 4;

struct RunOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  bool plot = true;
};

influence::AnalysisParams analysis_params(const influence::ScenarioConfig& cfg,
                                          const influence::Simulator& sim) {
  auto params = influence::AnalysisParams::from_gains(
      cfg.gains, cfg.node_count, sim.dynamics().g_bound, sim.dynamics().h_bound,
      sim.trajectory().position_bound, sim.trajectory().velocity_bound,
      /*eps_bar=*/1.0);
  params.Gamma = cfg.gains.gamma * Eigen::MatrixXd::Identity(2, 2);
  return params;
}

int do_run(influence::ScenarioConfig cfg, const RunOptions& opt) {
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.dt) cfg.dt = *opt.dt;

  try {
    influence::Simulator sim(cfg);
    influence::RunResult result = sim.run();
    const influence::GainReport gains =
        influence::check_gain_conditions(analysis_params(cfg, sim));

    std::filesystem::path dir(opt.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);

    auto open = [&](const char* name) {
      std::ofstream out(dir / name);
      if (!out) {
        throw std::ios_base::failure(std::string("cannot write ") +
                                     (dir / name).string());
      }
      return out;
    };

    {
      auto out = open("trajectory.csv");
      influence::write_trajectory_csv(out, result, cfg.state_dim,
                                      cfg.node_count);
    }
    {
      auto out = open("metrics.txt");
      influence::write_metrics(out, cfg, result.metrics, gains);
    }
    if (opt.plot) {
      {
        auto out = open("trajectory.svg");
        influence::write_trajectory_svg(out, result, cfg.node_count);
      }
      {
        auto out = open("tracking_error.svg");
        influence::write_tracking_error_svg(out, result);
      }
    }

    if (!result.metrics.defined) {
      std::cout << "empty run (horizon shorter than one step); metrics "
                   "undefined\n";
    } else {
      std::cout << "e_rms = " << result.metrics.e_rms
                << " m\nu_rms_mean = " << result.metrics.u_rms_mean
                << " m/s\nphi_tilde_rms_mean = "
                << result.metrics.phi_tilde_rms_mean << " m/s\n";
    }
    std::cout << "artifacts written to " << dir.string() << "\n";
    return 0;
  } catch (const influence::DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

int do_check_gains(const influence::ScenarioConfig& cfg) {
  influence::Simulator sim(cfg);
  const influence::GainReport report =
      influence::check_gain_conditions(analysis_params(cfg, sim));
  std::cout << report.format();
  auto [l1, l2] = influence::rayleigh_bounds(
      cfg.gains.gamma * Eigen::MatrixXd::Identity(2, 2));
  const influence::UltimateBound ub = influence::ultimate_bound(
      analysis_params(cfg, sim), l1, l2, report.lambda3);
  std::cout << "upsilon = " << ub.upsilon
            << ", ultimate-bound radius = " << ub.radius
            << (ub.vacuous ? " (vacuous: lambda4 >= lambda3)" : "") << "\n";
  return 0;  // diagnostic, not an error
}

int do_validate_gnn(const influence::ScenarioConfig& cfg, int trials) {
  std::mt19937_64 rng(12345);
  auto uniform = [&rng](double lo, double hi) {
    return lo + (hi - lo) * std::ldexp(static_cast<double>(rng() >> 11), -53);
  };

  double max_rel_err = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    influence::Graph g(cfg.node_count, cfg.edges);
    std::vector<influence::NodeWeights> weights;
    std::vector<Eigen::VectorXd> inputs;
    for (int i = 0; i < cfg.node_count; ++i) {
      Eigen::VectorXd flat(cfg.gnn.param_count());
      for (int m = 0; m < flat.size(); ++m) flat(m) = uniform(-0.5, 0.5);
      weights.push_back(influence::unvec_weights(flat, cfg.gnn));
      Eigen::VectorXd in(cfg.gnn.input_dim);
      for (int m = 0; m < in.size(); ++m) in(m) = uniform(-2.0, 2.0);
      inputs.push_back(in);
    }
    const int i = 1 + static_cast<int>(rng() % cfg.node_count);
    for (int j : g.k_hop_augmented(i, cfg.gnn.depth - 1)) {
      const Eigen::MatrixXd analytic =
          influence::jacobian(g, cfg.gnn, weights, inputs, i, j);
      const Eigen::MatrixXd fd = influence::finite_diff_jacobian(
          g, cfg.gnn, weights, inputs, i, j, 1e-6);
      const double scale = std::max(1.0, fd.norm());
      max_rel_err = std::max(max_rel_err, (analytic - fd).norm() / scale);
    }
  }
  std::cout << "trials = " << trials
            << ", max relative Jacobian error = " << max_rel_err << "\n";
  if (max_rel_err > 1e-4) {
    std::cout << "FAIL (threshold 1e-4)\n";
    return 1;
  }
  std::cout << "PASS\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collaborative indirect-influence control simulator"};
  app.require_subcommand(1);

  RunOptions opt;
  int trials = 100;

  auto* run_cmd = app.add_subcommand("run", "Integrate a scenario config");
  run_cmd->add_option("config", opt.config_path, "Scenario JSON file")
      ->required();

  auto* replicate_cmd =
      app.add_subcommand("replicate", "Run the built-in benchmark scenario");

  for (auto* cmd : {run_cmd, replicate_cmd}) {
    cmd->add_option("-o,--out-dir", opt.out_dir, "Output directory");
    cmd->add_option("--seed", opt.seed, "Override the weight-init seed");
    cmd->add_option("--dt", opt.dt, "Override the integrator step (s)");
    cmd->add_flag("--plot,!--no-plot", opt.plot, "Emit SVG plots");
  }

  auto* gains_cmd =
      app.add_subcommand("check-gains", "Evaluate the sufficient gain "
                                        "conditions for a scenario");
  gains_cmd->add_option("config", opt.config_path, "Scenario JSON file");

  auto* validate_cmd = app.add_subcommand(
      "validate-gnn", "Analytic-vs-finite-difference Jacobian check");
  validate_cmd->add_option("config", opt.config_path, "Scenario JSON file");
  validate_cmd->add_option("--trials", trials, "Random trials (>= 1)")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    influence::ScenarioConfig cfg;
    if (opt.config_path.empty()) {
      cfg = influence::benchmark_scenario();
    } else {
      cfg = influence::load_scenario(opt.config_path);
    }

    if (run_cmd->parsed()) return do_run(cfg, opt);
    if (replicate_cmd->parsed()) {
      return do_run(influence::benchmark_scenario(), opt);
    }
    if (gains_cmd->parsed()) return do_check_gains(cfg);
    if (validate_cmd->parsed()) return do_validate_gnn(cfg, trials);
  } catch (const influence::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
