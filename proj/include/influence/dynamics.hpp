#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <vector>

#include "influence/graph.hpp"

namespace influence {

/// Ground-truth plant functions, unknown to the controller. `f` receives
/// the graph and node index rather than a pre-masked state block so
/// alternative interaction models can be registered with the same shape.
struct DynamicsFns {
  std::function<double(const Eigen::VectorXd& x0, const Eigen::VectorXd& y)> g;
  std::function<Eigen::VectorXd(const Graph&, int i,
                                const std::vector<Eigen::VectorXd>& ys)> f;
  std::function<Eigen::VectorXd(const Eigen::VectorXd& x0)> h;
  double g_bound = 0.0;
  double h_bound = 0.0;
};

/// Network input at node i: [x0; Q_i] where block m of Q_i is y_m when m
/// is in the augmented neighborhood of i and zero otherwise. Length
/// n*(N+1).
Eigen::VectorXd node_input(const Graph& g, int i, const Eigen::VectorXd& x0,
                           const std::vector<Eigen::VectorXd>& ys);

/// Target drift plus summed influencer interaction.
Eigen::VectorXd target_derivative(const DynamicsFns& fns,
                                  const Eigen::VectorXd& x0,
                                  const std::vector<Eigen::VectorXd>& ys);

Eigen::VectorXd influencer_derivative(const DynamicsFns& fns, const Graph& g,
                                      int i,
                                      const std::vector<Eigen::VectorXd>& ys,
                                      const Eigen::VectorXd& u_i);

/// The lumped unknown dynamics the network approximates at node i:
/// k1*h(x0) - f(Q_i) + sum over the augmented neighborhood of
/// k1*g(x0,y_j)*(eta_j + (1-k1)*e).
Eigen::VectorXd true_lumped_dynamics(const DynamicsFns& fns, const Graph& g,
                                     double k1, int i,
                                     const Eigen::VectorXd& x0,
                                     const std::vector<Eigen::VectorXd>& ys,
                                     const Eigen::VectorXd& e,
                                     const std::vector<Eigen::VectorXd>& etas);

/// The benchmark plant: Gaussian-decay target coupling, inverse-square
/// pairwise repulsion between influencers, and a sinusoidal drift.
/// `guard_hits`, when supplied, counts evaluations where the repulsion
/// denominator hit its singularity guard.
DynamicsFns benchmark_dynamics(std::shared_ptr<long> guard_hits = nullptr);

/// Denominator floor for the repulsion term (m^3).
inline constexpr double kRepulsionGuard = 1e-6;

}  // namespace influence
