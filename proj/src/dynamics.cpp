#include "influence/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace influence {

Eigen::VectorXd node_input(const Graph& g, int i, const Eigen::VectorXd& x0,
                           const std::vector<Eigen::VectorXd>& ys) {
  const int n = static_cast<int>(x0.size());
  const int N = g.node_count();
  Eigen::VectorXd r = Eigen::VectorXd::Zero(n * (N + 1));
  r.head(n) = x0;
  for (int m : g.augmented_neighbors(i)) {
    r.segment(n * m, n) = ys[m - 1];
  }
  return r;
}

Eigen::VectorXd target_derivative(const DynamicsFns& fns,
                                  const Eigen::VectorXd& x0,
                                  const std::vector<Eigen::VectorXd>& ys) {
  Eigen::VectorXd dx = fns.h(x0);
  for (const auto& y : ys) {
    dx += fns.g(x0, y) * (x0 - y);
  }
  return dx;
}

Eigen::VectorXd influencer_derivative(const DynamicsFns& fns, const Graph& g,
                                      int i,
                                      const std::vector<Eigen::VectorXd>& ys,
                                      const Eigen::VectorXd& u_i) {
  return fns.f(g, i, ys) + u_i;
}

Eigen::VectorXd true_lumped_dynamics(const DynamicsFns& fns, const Graph& g,
                                     double k1, int i,
                                     const Eigen::VectorXd& x0,
                                     const std::vector<Eigen::VectorXd>& ys,
                                     const Eigen::VectorXd& e,
                                     const std::vector<Eigen::VectorXd>& etas) {
  Eigen::VectorXd value = k1 * fns.h(x0) - fns.f(g, i, ys);
  for (int j : g.augmented_neighbors(i)) {
    value += k1 * fns.g(x0, ys[j - 1]) * (etas[j - 1] + (1.0 - k1) * e);
  }
  return value;
}

DynamicsFns benchmark_dynamics(std::shared_ptr<long> guard_hits) {
  DynamicsFns fns;
  fns.g = [](const Eigen::VectorXd& x0, const Eigen::VectorXd& y) {
    return 0.1 * std::exp(-(x0 - y).squaredNorm() / 1.0e6);
  };
  fns.f = [guard_hits](const Graph& g, int i,
                       const std::vector<Eigen::VectorXd>& ys) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(ys[i - 1].size());
    for (int j : g.neighbors(i)) {
      Eigen::VectorXd diff = ys[i - 1] - ys[j - 1];
      double cubed = std::pow(diff.norm(), 3);
      if (cubed < kRepulsionGuard) {
        cubed = kRepulsionGuard;
        if (guard_hits) ++*guard_hits;
      }
      out += diff / cubed;
    }
    return Eigen::VectorXd(50.0 * out);
  };
  fns.h = [](const Eigen::VectorXd& x0) {
    if (x0.size() != 3) {
      throw std::invalid_argument("dynamics: drift expects a 3-vector");
    }
    Eigen::VectorXd out(3);
    out << -0.057 * std::cos(x0(0)), 0.03 * std::sin(x0(1)),
        -0.008 * std::cos(x0(2));
    return out;
  };
  fns.g_bound = 0.1;
  fns.h_bound = 0.058;  // largest drift coefficient, rounded up
  return fns;
}

}  // namespace influence
