#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "influence/controller.hpp"
#include "influence/dynamics.hpp"
#include "influence/gnn.hpp"
#include "influence/graph.hpp"

namespace influence {

struct ScenarioConfig {
  int node_count = 4;
  std::vector<std::pair<int, int>> edges;
  int state_dim = 3;  // per-body dimension n
  GnnConfig gnn;
  Gains gains;
  std::string dynamics_name = "paper";
  std::string trajectory_name = "paper";
  Eigen::VectorXd target_start;
  std::vector<Eigen::VectorXd> influencer_start;
  double weight_init_low = 0.0;
  double weight_init_high = 0.3;
  std::uint64_t seed = 0;
  double dt = 0.005;
  double horizon = 360.0;
  int log_decimation = 20;

  void validate() const;
};

/// The benchmark scenario: four fully connected influencers in R^3, a
/// depth-2 network with two 8-unit hidden layers (swish hidden, tanh
/// output), uniform weight init on [0, 0.3].
ScenarioConfig benchmark_scenario();

struct SimState {
  double t = 0.0;
  Eigen::VectorXd x0;
  std::vector<Eigen::VectorXd> y;
  std::vector<Eigen::VectorXd> theta;

  bool all_finite() const;
};

struct LogRow {
  double t = 0.0;
  Eigen::VectorXd x0;
  Eigen::VectorXd xd;
  double e_norm = 0.0;
  std::vector<Eigen::VectorXd> y;
  std::vector<double> u_norm;
  std::vector<double> eta_norm;
  std::vector<double> theta_norm;
  std::vector<double> phi_tilde_norm;
};

struct Metrics {
  bool defined = false;  // false for empty runs
  double e_rms = 0.0;
  double u_rms_mean = 0.0;        // mean over nodes of per-node RMS ||u_i||
  double phi_tilde_rms_mean = 0.0;
  double max_theta_norm = 0.0;
  long clamp_events = 0;
  long repulsion_guard_hits = 0;
  double wall_seconds = 0.0;
};

struct RunResult {
  std::vector<LogRow> rows;
  Metrics metrics;
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(double t, const std::string& what)
      : std::runtime_error(what), time(t) {}
  double time;
};

/// Closed-loop simulator: target, influencers, and per-node weight
/// estimates integrated together with classical RK4. Deterministic for a
/// fixed config and seed (fixed reduction order, single-threaded, pinned
/// random generator).
class Simulator {
 public:
  explicit Simulator(const ScenarioConfig& config);

  /// Same closed loop with substituted plant functions and desired
  /// trajectory; `dynamics_name`/`trajectory_name` are ignored.
  Simulator(const ScenarioConfig& config, DynamicsFns fns,
            DesiredTrajectory trajectory);

  const ScenarioConfig& config() const { return config_; }
  const Graph& graph() const { return graph_; }
  const DynamicsFns& dynamics() const { return fns_; }
  const DesiredTrajectory& trajectory() const { return trajectory_; }

  /// Initial state with weights drawn U(low, high) entry by entry from a
  /// 64-bit Mersenne twister: nodes ascending, layers ascending,
  /// column-major within each matrix.
  SimState initial_state() const;
  SimState initial_state(std::uint64_t seed) const;

  struct Evaluation {
    Eigen::VectorXd xd, xd_dot, e;
    std::vector<Eigen::VectorXd> eta;
    std::vector<Eigen::VectorXd> phi;
    std::vector<Eigen::VectorXd> u;
    std::vector<Eigen::VectorXd> phi_tilde;  // phi - true lumped dynamics
    SimState derivative;
  };

  /// One evaluation of the coupled flow at `state`.
  Evaluation evaluate(const SimState& state) const;

  SimState derivative(const SimState& state) const;

  /// Classical RK4 step plus the post-step radial weight clamp.
  /// `clamp_counter`, when given, accumulates post-step clamp events.
  void step_rk4(SimState& state, double dt, long* clamp_counter = nullptr) const;

  RunResult run() const;
  RunResult run(std::uint64_t seed) const;

 private:
  ScenarioConfig config_;
  Graph graph_;
  DynamicsFns fns_;
  DesiredTrajectory trajectory_;
  std::shared_ptr<long> guard_hits_;
};

}  // namespace influence
