#include "influence/controller.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace influence {

void Gains::validate() const {
  if (k1 <= 0.0 || k2 <= 0.0 || k3 <= 0.0) {
    throw std::invalid_argument("gains: k1, k2, k3 must be positive");
  }
  if (gamma <= 0.0) throw std::invalid_argument("gains: gamma must be positive");
  if (theta_bar <= 0.0) {
    throw std::invalid_argument("gains: theta_bar must be positive");
  }
  if (eps_proj <= 0.0) {
    throw std::invalid_argument("gains: eps_proj must be positive");
  }
}

Eigen::VectorXd control_input(
    int i, const Eigen::VectorXd& eta_i, const Eigen::VectorXd& phi_i,
    const std::vector<std::pair<int, Eigen::MatrixXd>>& jacobians,
    const std::vector<Eigen::VectorXd>& thetas,
    const std::vector<int>& correction_nodes, const Eigen::VectorXd& xd_dot,
    const Gains& gains) {
  Eigen::VectorXd u =
      gains.k2 * eta_i + phi_i + (1.0 - gains.k1) * xd_dot;
  for (int j : correction_nodes) {
    if (j == i) continue;
    const Eigen::MatrixXd* jac = nullptr;
    for (const auto& [node, block] : jacobians) {
      if (node == j) {
        jac = &block;
        break;
      }
    }
    if (jac == nullptr) {
      throw std::invalid_argument("controller: missing Jacobian for node " +
                                  std::to_string(j));
    }
    if (j < 1 || j > static_cast<int>(thetas.size()) ||
        i > static_cast<int>(thetas.size())) {
      throw std::invalid_argument("controller: missing weights for node " +
                                  std::to_string(j));
    }
    u += *jac * (thetas[i - 1] - thetas[j - 1]);
  }
  return u;
}

DesiredTrajectory benchmark_trajectory() {
  DesiredTrajectory traj;
  traj.position = [](double t) {
    Eigen::VectorXd x(3);
    x << 10.0 * std::sin(0.01 * t),
        10.0 * std::sin(0.025 * t) * std::cos(0.025 * t),
        5.0 * std::sin(0.075 * t);
    return x;
  };
  // second component is 5*sin(0.05 t), differentiated in that form
  traj.velocity = [](double t) {
    Eigen::VectorXd v(3);
    v << 0.1 * std::cos(0.01 * t), 0.25 * std::cos(0.05 * t),
        0.375 * std::cos(0.075 * t);
    return v;
  };
  traj.position_bound = std::sqrt(10.0 * 10.0 + 5.0 * 5.0 + 5.0 * 5.0);
  traj.velocity_bound =
      std::sqrt(0.1 * 0.1 + 0.25 * 0.25 + 0.375 * 0.375);
  return traj;
}

}  // namespace influence
