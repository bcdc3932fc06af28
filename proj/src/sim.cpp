#include "influence/sim.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "influence/adaptation.hpp"
#include "influence/analysis.hpp"
#include "influence/rk4.hpp"

namespace influence {

void ScenarioConfig::validate() const {
  gains.validate();
  gnn.validate();
  if (state_dim < 1) {
    throw std::invalid_argument("scenario: state_dim must be positive");
  }
  if (gnn.input_dim != state_dim * (node_count + 1)) {
    throw std::invalid_argument(
        "scenario: gnn input_dim must be state_dim*(node_count+1)");
  }
  if (gnn.output_dim != state_dim) {
    throw std::invalid_argument("scenario: gnn output_dim must be state_dim");
  }
  if (dt <= 0.0) throw std::invalid_argument("scenario: dt must be positive");
  if (horizon < 0.0) {
    throw std::invalid_argument("scenario: horizon must be nonnegative");
  }
  if (log_decimation < 1) {
    throw std::invalid_argument("scenario: log_decimation must be >= 1");
  }
  if (weight_init_high < weight_init_low) {
    throw std::invalid_argument("scenario: weight init range inverted");
  }
  if (target_start.size() != state_dim) {
    throw std::invalid_argument("scenario: target_start dimension mismatch");
  }
  if (static_cast<int>(influencer_start.size()) != node_count) {
    throw std::invalid_argument("scenario: need one start per influencer");
  }
  for (const auto& y : influencer_start) {
    if (y.size() != state_dim) {
      throw std::invalid_argument(
          "scenario: influencer start dimension mismatch");
    }
  }
  Graph g(node_count, edges);
  if (!g.is_connected()) {
    throw std::invalid_argument("scenario: communication graph must be connected");
  }
}

ScenarioConfig benchmark_scenario() {
  ScenarioConfig cfg;
  cfg.node_count = 4;
  for (int i = 1; i <= 4; ++i) {
    for (int j = i + 1; j <= 4; ++j) cfg.edges.emplace_back(i, j);
  }
  cfg.state_dim = 3;
  cfg.gnn.depth = 2;
  cfg.gnn.input_dim = 15;
  cfg.gnn.hidden_dims = {8, 8};
  cfg.gnn.output_dim = 3;
  cfg.gnn.hidden_activation = Activation::Swish;
  cfg.gnn.output_activation = Activation::Tanh;
  cfg.gains = Gains{};  // k1=3.5, k2=12, k3=0.001, gamma=2, theta_bar=10
  cfg.target_start = Eigen::Vector3d(6.0, -4.0, 2.0);
  cfg.influencer_start = {
      Eigen::Vector3d(-6.0, -1.0, 8.0), Eigen::Vector3d(6.0, 4.0, -2.0),
      Eigen::Vector3d(4.0, -6.0, 1.0), Eigen::Vector3d(-4.0, 6.0, -2.0)};
  return cfg;
}

bool SimState::all_finite() const {
  if (!x0.allFinite()) return false;
  for (const auto& v : y) {
    if (!v.allFinite()) return false;
  }
  for (const auto& v : theta) {
    if (!v.allFinite()) return false;
  }
  return true;
}

Simulator::Simulator(const ScenarioConfig& config)
    : config_(config),
      graph_(config.node_count, config.edges),
      guard_hits_(std::make_shared<long>(0)) {
  config_.validate();
  if (config_.dynamics_name == "paper") {
    fns_ = benchmark_dynamics(guard_hits_);
  } else {
    throw std::invalid_argument("scenario: unknown dynamics '" +
                                config_.dynamics_name + "'");
  }
  if (config_.trajectory_name == "paper") {
    trajectory_ = benchmark_trajectory();
  } else {
    throw std::invalid_argument("scenario: unknown trajectory '" +
                                config_.trajectory_name + "'");
  }
}

Simulator::Simulator(const ScenarioConfig& config, DynamicsFns fns,
                     DesiredTrajectory trajectory)
    : config_(config),
      graph_(config.node_count, config.edges),
      fns_(std::move(fns)),
      trajectory_(std::move(trajectory)),
      guard_hits_(std::make_shared<long>(0)) {
  config_.validate();
}

SimState Simulator::initial_state() const { return initial_state(config_.seed); }

SimState Simulator::initial_state(std::uint64_t seed) const {
  SimState state;
  state.t = 0.0;
  state.x0 = config_.target_start;
  state.y = config_.influencer_start;

  // Pinned generator and uniform mapping so draws match across platforms;
  // std::uniform_real_distribution is implementation-defined.
  std::mt19937_64 rng(seed);
  auto uniform = [&rng, this]() {
    const double u = std::ldexp(static_cast<double>(rng() >> 11), -53);
    return config_.weight_init_low +
           (config_.weight_init_high - config_.weight_init_low) * u;
  };
  const int p = config_.gnn.param_count();
  for (int i = 0; i < config_.node_count; ++i) {
    Eigen::VectorXd flat(p);
    for (int m = 0; m < p; ++m) flat(m) = uniform();
    state.theta.push_back(std::move(flat));
  }
  return state;
}

Simulator::Evaluation Simulator::evaluate(const SimState& state) const {
  const int N = config_.node_count;
  const Gains& gains = config_.gains;

  // Intermediate integrator stages may overshoot the inflated projection
  // ball; evaluate the flow from just inside it.
  std::vector<Eigen::VectorXd> thetas = state.theta;
  for (auto& th : thetas) {
    clamp_to_search_space(th, gains.theta_bar, gains.eps_proj);
  }

  Evaluation ev;
  ev.xd = trajectory_.position(state.t);
  ev.xd_dot = trajectory_.velocity(state.t);
  ev.e = tracking_error(state.x0, ev.xd);
  const Eigen::VectorXd yd =
      desired_influencer_position(ev.e, ev.xd, gains.k1);
  ev.eta.reserve(N);
  for (int i = 1; i <= N; ++i) {
    ev.eta.push_back(backstepping_error(yd, state.y[i - 1]));
  }

  std::vector<Eigen::VectorXd> inputs;
  std::vector<NodeWeights> weights;
  inputs.reserve(N);
  weights.reserve(N);
  for (int i = 1; i <= N; ++i) {
    inputs.push_back(node_input(graph_, i, state.x0, state.y));
    weights.push_back(unvec_weights(thetas[i - 1], config_.gnn));
  }
  const ForwardPass fwd = forward(graph_, config_.gnn, weights, inputs);
  ev.phi = fwd.outputs;

  ev.derivative.t = 1.0;  // dt/dt, unused but keeps the stack uniform
  ev.derivative.y.resize(N);
  ev.derivative.theta.resize(N);
  ev.u.reserve(N);
  ev.phi_tilde.reserve(N);
  for (int i = 1; i <= N; ++i) {
    const auto jacobians =
        node_jacobians(graph_, config_.gnn, weights, inputs, i, fwd);
    const Eigen::VectorXd u_i = control_input(
        i, ev.eta[i - 1], ev.phi[i - 1], jacobians, thetas,
        graph_.k_hop(i, config_.gnn.depth - 1), ev.xd_dot, gains);
    ev.derivative.y[i - 1] = influencer_derivative(fns_, graph_, i, state.y, u_i);
    ev.derivative.theta[i - 1] = update_law(
        i, ev.eta[i - 1], jacobians, thetas, graph_.neighbors(i),
        gains.gamma, gains.k3, gains.theta_bar, gains.eps_proj);
    ev.phi_tilde.push_back(
        ev.phi[i - 1] - true_lumped_dynamics(fns_, graph_, gains.k1, i,
                                             state.x0, state.y, ev.e, ev.eta));
    ev.u.push_back(u_i);
  }
  ev.derivative.x0 = target_derivative(fns_, state.x0, state.y);

  if (!ev.derivative.all_finite()) {
    throw DivergenceError(state.t, "simulation diverged at t = " +
                                       std::to_string(state.t) +
                                       ": non-finite derivative");
  }
  return ev;
}

SimState Simulator::derivative(const SimState& state) const {
  return evaluate(state).derivative;
}

namespace {

SimState add_scaled(const SimState& base, const SimState& dir, double scale) {
  SimState out;
  out.t = base.t + scale * dir.t;
  out.x0 = base.x0 + scale * dir.x0;
  out.y.reserve(base.y.size());
  out.theta.reserve(base.theta.size());
  for (size_t i = 0; i < base.y.size(); ++i) {
    out.y.push_back(base.y[i] + scale * dir.y[i]);
  }
  for (size_t i = 0; i < base.theta.size(); ++i) {
    out.theta.push_back(base.theta[i] + scale * dir.theta[i]);
  }
  return out;
}

}  // namespace

void Simulator::step_rk4(SimState& state, double dt, long* clamp_counter) const {
  state = rk4_step(
      state, dt, [this](const SimState& s) { return derivative(s); },
      [](const SimState& base, const SimState& dir, double scale) {
        return add_scaled(base, dir, scale);
      });
  for (auto& th : state.theta) {
    if (clamp_to_search_space(th, config_.gains.theta_bar,
                              config_.gains.eps_proj) &&
        clamp_counter) {
      ++*clamp_counter;
    }
  }

  if (!state.all_finite()) {
    throw DivergenceError(state.t, "simulation diverged at t = " +
                                       std::to_string(state.t) +
                                       ": non-finite state");
  }
}

RunResult Simulator::run() const { return run(config_.seed); }

RunResult Simulator::run(std::uint64_t seed) const {
  const auto wall_start = std::chrono::steady_clock::now();
  *guard_hits_ = 0;

  RunResult result;
  const long steps = std::lround(config_.horizon / config_.dt);
  if (steps == 0) {
    result.metrics.defined = false;
    return result;
  }

  SimState state = initial_state(seed);
  long clamps = 0;
  const int N = config_.node_count;

  auto log_state = [&](const SimState& s, long step_index) {
    const Evaluation ev = evaluate(s);
    LogRow row;
    row.t = step_index * config_.dt;
    row.x0 = s.x0;
    row.xd = ev.xd;
    row.e_norm = ev.e.norm();
    row.y = s.y;
    for (int i = 0; i < N; ++i) {
      row.u_norm.push_back(ev.u[i].norm());
      row.eta_norm.push_back(ev.eta[i].norm());
      row.theta_norm.push_back(s.theta[i].norm());
      row.phi_tilde_norm.push_back(ev.phi_tilde[i].norm());
    }
    result.rows.push_back(std::move(row));
  };

  for (long step = 0; step < steps; ++step) {
    if (step % config_.log_decimation == 0) log_state(state, step);
    for (const auto& th : state.theta) {
      result.metrics.max_theta_norm =
          std::max(result.metrics.max_theta_norm, th.norm());
    }
    step_rk4(state, config_.dt, &clamps);
    state.t = (step + 1) * config_.dt;  // keep timestamps drift-free
  }
  for (const auto& th : state.theta) {
    result.metrics.max_theta_norm =
        std::max(result.metrics.max_theta_norm, th.norm());
  }
  if (steps % config_.log_decimation == 0) log_state(state, steps);

  // RMS = sqrt(mean over logged samples of squared norms)
  double e_sq = 0.0;
  std::vector<double> u_sq(N, 0.0), phi_sq(N, 0.0);
  for (const auto& row : result.rows) {
    e_sq += row.e_norm * row.e_norm;
    for (int i = 0; i < N; ++i) {
      u_sq[i] += row.u_norm[i] * row.u_norm[i];
      phi_sq[i] += row.phi_tilde_norm[i] * row.phi_tilde_norm[i];
    }
  }
  const double samples = static_cast<double>(result.rows.size());
  result.metrics.defined = samples > 0;
  if (result.metrics.defined) {
    result.metrics.e_rms = std::sqrt(e_sq / samples);
    double u_mean = 0.0, phi_mean = 0.0;
    for (int i = 0; i < N; ++i) {
      u_mean += std::sqrt(u_sq[i] / samples);
      phi_mean += std::sqrt(phi_sq[i] / samples);
    }
    result.metrics.u_rms_mean = u_mean / N;
    result.metrics.phi_tilde_rms_mean = phi_mean / N;
  }
  result.metrics.clamp_events = clamps;
  result.metrics.repulsion_guard_hits = *guard_hits_;
  result.metrics.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    wall_start)
          .count();
  return result;
}

}  // namespace influence
