#pragma once

#include <Eigen/Dense>

#include <functional>
#include <utility>
#include <vector>

namespace influence {

struct Gains {
  double k1 = 3.5;
  double k2 = 12.0;
  double k3 = 0.001;
  double gamma = 2.0;       // adaptation gain, Gamma = gamma * I
  double theta_bar = 10.0;  // weight search-space radius
  double eps1 = 0.1;        // analysis slack
  double lambda4 = 0.01;    // desired convergence rate (diagnostics only)
  double eps_proj = 0.1;    // projection boundary-layer width

  void validate() const;
};

struct DesiredTrajectory {
  std::function<Eigen::VectorXd(double t)> position;
  std::function<Eigen::VectorXd(double t)> velocity;
  double position_bound = 0.0;
  double velocity_bound = 0.0;
};

inline Eigen::VectorXd tracking_error(const Eigen::VectorXd& x0,
                                      const Eigen::VectorXd& xd) {
  return x0 - xd;
}

/// Virtual control: the common desired position for every influencer.
inline Eigen::VectorXd desired_influencer_position(const Eigen::VectorXd& e,
                                                   const Eigen::VectorXd& xd,
                                                   double k1) {
  return k1 * e + xd;
}

inline Eigen::VectorXd backstepping_error(const Eigen::VectorXd& yd,
                                          const Eigen::VectorXd& y) {
  return yd - y;
}

/// Backstepping control at node i. `jacobians` are (node, d phi_i/d theta_j)
/// pairs covering at least the non-augmented (depth-1)-hop neighborhood of i;
/// the j == i entry contributes nothing and may be present or absent.
/// Throws if a required neighbor's Jacobian or weight vector is missing.
Eigen::VectorXd control_input(
    int i, const Eigen::VectorXd& eta_i, const Eigen::VectorXd& phi_i,
    const std::vector<std::pair<int, Eigen::MatrixXd>>& jacobians,
    const std::vector<Eigen::VectorXd>& thetas,
    const std::vector<int>& correction_nodes, const Eigen::VectorXd& xd_dot,
    const Gains& gains);

/// The benchmark figure-eight-like desired path and its analytic velocity.
DesiredTrajectory benchmark_trajectory();

}  // namespace influence
