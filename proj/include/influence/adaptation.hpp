#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace influence {

/// Unprojected weight derivative at node i:
/// gamma * [ (sum of Jacobian transposes over the augmented (depth-1)-hop
/// neighborhood) * eta_i - k3 * (Laplacian disagreement over direct
/// neighbors + leakage) ].
Eigen::VectorXd raw_update(
    int i, const Eigen::VectorXd& eta_i,
    const std::vector<std::pair<int, Eigen::MatrixXd>>& jacobians,
    const std::vector<Eigen::VectorXd>& thetas,
    const std::vector<int>& neighbors, double gamma, double k3);

/// Smooth radial projection keeping the estimate inside the inflated ball
/// of radius theta_bar*sqrt(1+eps_proj). Transparent in the interior and
/// wherever the candidate derivative points inward; otherwise removes the
/// scaled radial component. Throws if theta is already outside the
/// inflated ball.
Eigen::VectorXd project(const Eigen::VectorXd& theta,
                        const Eigen::VectorXd& nu, double theta_bar,
                        double eps_proj);

/// Gamma-weighted variant for non-scalar gain matrices.
Eigen::VectorXd project(const Eigen::VectorXd& theta,
                        const Eigen::VectorXd& nu, const Eigen::MatrixXd& Gamma,
                        double theta_bar, double eps_proj);

/// proj(raw_update(...)).
Eigen::VectorXd update_law(
    int i, const Eigen::VectorXd& eta_i,
    const std::vector<std::pair<int, Eigen::MatrixXd>>& jacobians,
    const std::vector<Eigen::VectorXd>& thetas,
    const std::vector<int>& neighbors, double gamma, double k3,
    double theta_bar, double eps_proj);

/// Radial clamp to the inflated ball; returns true if it fired. Used as a
/// post-step guard against discrete integrator overshoot.
bool clamp_to_search_space(Eigen::VectorXd& theta, double theta_bar,
                           double eps_proj);

}  // namespace influence
