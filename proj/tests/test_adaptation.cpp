#include "influence/adaptation.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "influence/graph.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace {

constexpr double kThetaBar = 10.0;
constexpr double kEpsProj = 0.1;
const double kInflated = kThetaBar * std::sqrt(1.0 + kEpsProj);

std::vector<std::pair<int, Eigen::MatrixXd>> random_jacobians(
    std::mt19937_64& rng, const std::vector<int>& nodes, int n, int p) {
  std::vector<std::pair<int, Eigen::MatrixXd>> out;
  for (int j : nodes) {
    Eigen::MatrixXd J(n, p);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < p; ++c) J(r, c) = testutil::uniform(rng, -1.0, 1.0);
    }
    out.emplace_back(j, J);
  }
  return out;
}

}  // namespace

TEST_CASE("raw update trivial reductions") {
  std::mt19937_64 rng(51);
  const int p = 5;
  const auto jacobians = random_jacobians(rng, {1, 2}, 3, p);

  SUBCASE("all zero gives zero") {
    std::vector<Eigen::VectorXd> thetas(2, Eigen::VectorXd::Zero(p));
    const Eigen::VectorXd out = influence::raw_update(
        1, Eigen::Vector3d::Zero(), jacobians, thetas, {2}, 2.0, 0.001);
    CHECK(out.isZero(0.0));
  }
  SUBCASE("consensus leaves only the leakage term") {
    const Eigen::VectorXd v = testutil::random_vector(rng, p, -2.0, 2.0);
    std::vector<Eigen::VectorXd> thetas(2, v);
    const Eigen::VectorXd out = influence::raw_update(
        1, Eigen::Vector3d::Zero(), jacobians, thetas, {2}, 2.0, 0.001);
    CHECK((out + 0.001 * 2.0 * v).norm() < 1e-15);
  }
  SUBCASE("empty Jacobian list throws") {
    std::vector<Eigen::VectorXd> thetas(2, Eigen::VectorXd::Zero(p));
    CHECK_THROWS(influence::raw_update(1, Eigen::Vector3d::Zero(), {}, thetas,
                                       {2}, 2.0, 0.001));
  }
}

TEST_CASE("raw update matches the straight-line oracle") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 25; ++trial) {
    const int p = 4 + static_cast<int>(rng() % 5);
    const int n = 3;
    const double gamma = testutil::uniform(rng, 0.5, 5.0);
    const double k3 = testutil::uniform(rng, 0.0, 0.5);
    const Eigen::VectorXd eta = testutil::random_vector(rng, n, -3.0, 3.0);
    std::vector<Eigen::VectorXd> thetas;
    for (int i = 0; i < 4; ++i) {
      thetas.push_back(testutil::random_vector(rng, p, -3.0, 3.0));
    }
    const auto jacobians = random_jacobians(rng, {1, 2, 4}, n, p);
    const std::vector<int> neighbors{2, 3};

    const Eigen::VectorXd got = influence::raw_update(
        1, eta, jacobians, thetas, neighbors, gamma, k3);
    std::vector<std::pair<int, Eigen::MatrixXd>> shifted;
    for (const auto& [j, J] : jacobians) shifted.emplace_back(j - 1, J);
    const Eigen::VectorXd expected =
        oracles::raw_update(gamma, k3, 0, eta, shifted, thetas, {1, 2});
    CHECK((got - expected).norm() <= 1e-12 * std::max(1.0, expected.norm()));
  }
}

TEST_CASE("projection is transparent in the interior") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 1000; ++trial) {
    const int p = 3 + static_cast<int>(rng() % 6);
    Eigen::VectorXd theta = testutil::random_vector(rng, p, -1.0, 1.0);
    theta *= testutil::uniform(rng, 0.0, 0.999) * kThetaBar / theta.norm();
    const Eigen::VectorXd nu = testutil::random_vector(rng, p, -50.0, 50.0);
    CHECK(testutil::same(influence::project(theta, nu, kThetaBar, kEpsProj), nu));
  }
}

TEST_CASE("projection is transparent for inward derivatives in the layer") {
  std::mt19937_64 rng(57);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = 4;
    Eigen::VectorXd theta = testutil::random_vector(rng, p, -1.0, 1.0);
    theta *= testutil::uniform(rng, 1.001, 1.04) * kThetaBar / theta.norm();
    Eigen::VectorXd nu = testutil::random_vector(rng, p, -10.0, 10.0);
    if (theta.dot(nu) > 0.0) nu = -nu;  // point inward
    CHECK(testutil::same(influence::project(theta, nu, kThetaBar, kEpsProj), nu));
  }
}

TEST_CASE("projection removes the outward radial component at the boundary") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = 5;
    Eigen::VectorXd theta = testutil::random_vector(rng, p, -1.0, 1.0);
    theta *= kInflated / theta.norm();  // on the inflated boundary, p = 1
    Eigen::VectorXd nu = testutil::random_vector(rng, p, -10.0, 10.0);
    if (theta.dot(nu) < 0.0) nu = -nu;  // point outward
    const Eigen::VectorXd out =
        influence::project(theta, nu, kThetaBar, kEpsProj);
    CHECK(theta.dot(out) <= 1e-10);  // nonpositive radial component
  }
}

TEST_CASE("projection damping inequality") {
  // Standard property used by the certificate: for any comparison vector
  // theta_star inside the nominal ball,
  //   (theta_star - theta)^T Gamma^-1 (proj(nu) - nu) >= 0.
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 2000; ++trial) {
    const int p = 4 + static_cast<int>(rng() % 4);
    Eigen::VectorXd theta = testutil::random_vector(rng, p, -1.0, 1.0);
    theta *= testutil::uniform(rng, 0.0, 1.048) * kThetaBar / theta.norm();
    Eigen::VectorXd theta_star = testutil::random_vector(rng, p, -1.0, 1.0);
    theta_star *=
        testutil::uniform(rng, 0.0, 1.0) * kThetaBar / theta_star.norm();
    const Eigen::VectorXd nu = testutil::random_vector(rng, p, -20.0, 20.0);
    const double gamma = testutil::uniform(rng, 0.25, 4.0);

    const Eigen::VectorXd proj =
        influence::project(theta, gamma * nu, kThetaBar, kEpsProj);
    const double inner =
        (theta_star - theta).dot((proj - gamma * nu) / gamma);
    CHECK(inner >= -1e-12);
  }
}

TEST_CASE("matrix-Gamma projection agrees with the scalar overload") {
  std::mt19937_64 rng(63);
  const int p = 6;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd theta = testutil::random_vector(rng, p, -1.0, 1.0);
    theta *= testutil::uniform(rng, 0.9, 1.04) * kThetaBar / theta.norm();
    const Eigen::VectorXd nu = testutil::random_vector(rng, p, -10.0, 10.0);
    const double gamma = testutil::uniform(rng, 0.5, 3.0);
    const Eigen::MatrixXd Gamma =
        gamma * Eigen::MatrixXd::Identity(p, p);
    const Eigen::VectorXd a = influence::project(theta, nu, kThetaBar,
                                                 kEpsProj);
    const Eigen::VectorXd b =
        influence::project(theta, nu, Gamma, kThetaBar, kEpsProj);
    CHECK((a - b).norm() <= 1e-12 * std::max(1.0, a.norm()));
  }
}

TEST_CASE("project rejects estimates outside the inflated ball") {
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(4);
  theta(0) = kInflated * 1.01;
  CHECK_THROWS(influence::project(theta, Eigen::VectorXd::Ones(4), kThetaBar,
                                  kEpsProj));
}

TEST_CASE("update law composes projection with the raw update") {
  std::mt19937_64 rng(65);
  const int p = 5;
  const auto jacobians = random_jacobians(rng, {1, 2}, 3, p);
  std::vector<Eigen::VectorXd> thetas;
  thetas.push_back(testutil::random_vector(rng, p, -0.5, 0.5));  // interior
  thetas.push_back(testutil::random_vector(rng, p, -0.5, 0.5));
  const Eigen::VectorXd eta = testutil::random_vector(rng, 3, -2.0, 2.0);

  // interior case reduces to raw_update exactly
  const Eigen::VectorXd raw = influence::raw_update(
      1, eta, jacobians, thetas, {2}, 2.0, 0.001);
  const Eigen::VectorXd updated = influence::update_law(
      1, eta, jacobians, thetas, {2}, 2.0, 0.001, kThetaBar, kEpsProj);
  CHECK(testutil::same(updated, raw));

  // zero input gives zero output
  std::vector<Eigen::VectorXd> zeros(2, Eigen::VectorXd::Zero(p));
  CHECK(influence::update_law(1, Eigen::Vector3d::Zero(), jacobians, zeros,
                              {2}, 2.0, 0.001, kThetaBar, kEpsProj)
            .isZero(0.0));
}

TEST_CASE("clamp to the search space") {
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(3);
  theta(0) = 2.0 * kInflated;
  CHECK(influence::clamp_to_search_space(theta, kThetaBar, kEpsProj));
  CHECK(theta.norm() == doctest::Approx(kInflated).epsilon(1e-14));
  Eigen::VectorXd inside = Eigen::VectorXd::Ones(3);
  const Eigen::VectorXd copy = inside;
  CHECK_FALSE(influence::clamp_to_search_space(inside, kThetaBar, kEpsProj));
  CHECK(testutil::same(inside, copy));
}

TEST_CASE("consensus disagreement is non-increasing with zero drive") {
  // eta == 0, k3 > 0, Gamma = gamma I: the Laplacian-plus-leakage flow
  // contracts the disagreement sum on a small path graph.
  std::mt19937_64 rng(67);
  const influence::Graph g = influence::Graph::path(3);
  const int p = 4;
  std::vector<Eigen::VectorXd> thetas;
  for (int i = 0; i < 3; ++i) {
    thetas.push_back(testutil::random_vector(rng, p, -5.0, 5.0));
  }
  const Eigen::VectorXd zero_eta = Eigen::VectorXd::Zero(2);
  const std::vector<std::pair<int, Eigen::MatrixXd>> zero_jac{
      {1, Eigen::MatrixXd::Zero(2, p)}};

  auto disagreement = [&](const std::vector<Eigen::VectorXd>& th) {
    double sum = 0.0;
    for (int i = 1; i <= 3; ++i) {
      for (int j : g.neighbors(i)) {
        sum += (th[i - 1] - th[j - 1]).squaredNorm();
      }
    }
    return sum;
  };

  double prev = disagreement(thetas);
  const double dt = 0.01;
  for (int step = 0; step < 500; ++step) {
    std::vector<Eigen::VectorXd> next = thetas;
    for (int i = 1; i <= 3; ++i) {
      next[i - 1] += dt * influence::update_law(i, zero_eta, zero_jac, thetas,
                                                g.neighbors(i), 1.5, 0.2,
                                                kThetaBar, kEpsProj);
    }
    thetas = std::move(next);
    const double cur = disagreement(thetas);
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}
