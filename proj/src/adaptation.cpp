#include "influence/adaptation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace influence {

Eigen::VectorXd raw_update(
    int i, const Eigen::VectorXd& eta_i,
    const std::vector<std::pair<int, Eigen::MatrixXd>>& jacobians,
    const std::vector<Eigen::VectorXd>& thetas,
    const std::vector<int>& neighbors, double gamma, double k3) {
  if (jacobians.empty()) {
    throw std::invalid_argument("adaptation: no Jacobians supplied");
  }
  const int p = static_cast<int>(jacobians.front().second.cols());
  Eigen::VectorXd drive = Eigen::VectorXd::Zero(p);
  for (const auto& [node, block] : jacobians) {
    if (block.cols() != p || block.rows() != eta_i.size()) {
      throw std::invalid_argument("adaptation: Jacobian shape mismatch");
    }
    drive += block.transpose() * eta_i;
  }
  Eigen::VectorXd consensus = thetas[i - 1];  // leakage term
  for (int j : neighbors) {
    consensus += thetas[i - 1] - thetas[j - 1];
  }
  return gamma * (drive - k3 * consensus);
}

namespace {

// p(theta) in [0,1] spans the boundary layer between the ball of radius
// theta_bar and the inflated ball.
double boundary_coordinate(const Eigen::VectorXd& theta, double theta_bar,
                           double eps_proj) {
  return (theta.squaredNorm() - theta_bar * theta_bar) /
         (eps_proj * theta_bar * theta_bar);
}

void check_inside(double pval) {
  if (pval > 1.0 + 1e-9) {
    throw std::runtime_error(
        "adaptation: estimate outside the inflated search space (p = " +
        std::to_string(pval) + "); integrator misconfigured");
  }
}

}  // namespace

Eigen::VectorXd project(const Eigen::VectorXd& theta,
                        const Eigen::VectorXd& nu, double theta_bar,
                        double eps_proj) {
  const double pval = boundary_coordinate(theta, theta_bar, eps_proj);
  check_inside(pval);
  if (pval <= 0.0) return nu;
  const Eigen::VectorXd grad =
      (2.0 / (eps_proj * theta_bar * theta_bar)) * theta;
  const double outward = grad.dot(nu);
  if (outward <= 0.0) return nu;
  // scalar Gamma cancels from the correction
  return nu - std::min(1.0, pval) * grad * (outward / grad.squaredNorm());
}

Eigen::VectorXd project(const Eigen::VectorXd& theta,
                        const Eigen::VectorXd& nu, const Eigen::MatrixXd& Gamma,
                        double theta_bar, double eps_proj) {
  const double pval = boundary_coordinate(theta, theta_bar, eps_proj);
  check_inside(pval);
  if (pval <= 0.0) return nu;
  const Eigen::VectorXd grad =
      (2.0 / (eps_proj * theta_bar * theta_bar)) * theta;
  const double outward = grad.dot(nu);
  if (outward <= 0.0) return nu;
  const Eigen::VectorXd scaled = Gamma * grad;
  return nu - std::min(1.0, pval) * scaled * (outward / grad.dot(scaled));
}

Eigen::VectorXd update_law(
    int i, const Eigen::VectorXd& eta_i,
    const std::vector<std::pair<int, Eigen::MatrixXd>>& jacobians,
    const std::vector<Eigen::VectorXd>& thetas,
    const std::vector<int>& neighbors, double gamma, double k3,
    double theta_bar, double eps_proj) {
  return project(thetas[i - 1],
                 raw_update(i, eta_i, jacobians, thetas, neighbors, gamma, k3),
                 theta_bar, eps_proj);
}

bool clamp_to_search_space(Eigen::VectorXd& theta, double theta_bar,
                           double eps_proj) {
  const double radius = theta_bar * std::sqrt(1.0 + eps_proj);
  const double norm = theta.norm();
  if (norm <= radius) return false;
  theta *= radius / norm;
  return true;
}

}  // namespace influence
