#include "influence/gnn.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "test_util.hpp"

using influence::Activation;
using influence::Graph;
using influence::GnnConfig;
using influence::NodeWeights;

namespace {

GnnConfig benchmark_shape() {
  GnnConfig cfg;
  cfg.depth = 2;
  cfg.input_dim = 15;
  cfg.hidden_dims = {8, 8};
  cfg.output_dim = 3;
  cfg.hidden_activation = Activation::Swish;
  cfg.output_activation = Activation::Tanh;
  return cfg;
}

double max_rel_err(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

}  // namespace

TEST_CASE("parameter count of the benchmark shape") {
  const GnnConfig cfg = benchmark_shape();
  CHECK(cfg.param_count() == 8 * 16 + 8 * 9 + 3 * 9);
  CHECK(cfg.param_count() == 227);
  CHECK(cfg.layer_rows(0) == 16);
  CHECK(cfg.layer_cols(2) == 3);
}

TEST_CASE("config validation") {
  GnnConfig cfg = benchmark_shape();
  cfg.depth = 0;
  CHECK_THROWS(cfg.validate());
  cfg = benchmark_shape();
  cfg.hidden_dims = {8};
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("vec/unvec round trip is bit-exact") {
  std::mt19937_64 rng(3);
  const GnnConfig cfg = benchmark_shape();
  const Eigen::VectorXd flat =
      testutil::random_vector(rng, cfg.param_count(), -1.0, 1.0);
  const NodeWeights w = influence::unvec_weights(flat, cfg);
  CHECK(testutil::same(influence::vec_weights(w), flat));
}

TEST_CASE("vec ordering is column-major, layers ascending") {
  GnnConfig cfg;
  cfg.depth = 1;
  cfg.input_dim = 1;
  cfg.hidden_dims = {1};
  cfg.output_dim = 1;
  NodeWeights w = NodeWeights::zeros(cfg);
  w.layers[0] << 2.0, 3.0;  // 2x1: [[a],[b]] -> [a, b]
  w.layers[1] << 5.0, 7.0;
  const Eigen::VectorXd flat = influence::vec_weights(w);
  CHECK(flat(0) == 2.0);
  CHECK(flat(1) == 3.0);
  CHECK(flat(2) == 5.0);
  CHECK(flat(3) == 7.0);
}

TEST_CASE("unvec rejects wrong length") {
  CHECK_THROWS(influence::unvec_weights(Eigen::VectorXd::Zero(5),
                                        benchmark_shape()));
}

TEST_CASE("zero weights give zero output") {
  const Graph g(1, {});
  GnnConfig cfg;
  cfg.depth = 1;
  cfg.input_dim = 2;
  cfg.hidden_dims = {3};
  cfg.output_dim = 2;
  cfg.output_activation = Activation::Identity;
  std::vector<NodeWeights> weights{NodeWeights::zeros(cfg)};
  std::vector<Eigen::VectorXd> inputs{Eigen::Vector2d(1.5, -0.5)};
  const auto fwd = influence::forward(g, cfg, weights, inputs);
  CHECK(fwd.outputs[0].isZero(0.0));
}

TEST_CASE("identical weights and inputs give identical outputs on K4") {
  std::mt19937_64 rng(5);
  const Graph g = Graph::complete(4);
  const GnnConfig cfg = benchmark_shape();
  const Eigen::VectorXd flat =
      testutil::random_vector(rng, cfg.param_count(), -0.3, 0.3);
  const Eigen::VectorXd in = testutil::random_vector(rng, 15, -2.0, 2.0);
  std::vector<NodeWeights> weights(4, influence::unvec_weights(flat, cfg));
  std::vector<Eigen::VectorXd> inputs(4, in);
  const auto fwd = influence::forward(g, cfg, weights, inputs);
  for (int i = 1; i < 4; ++i) {
    CHECK(testutil::same(fwd.outputs[i], fwd.outputs[0]));
  }
}

TEST_CASE("hidden embeddings carry a bias entry of exactly 1") {
  std::mt19937_64 rng(6);
  const Graph g = testutil::random_connected_graph(rng, 4);
  const GnnConfig cfg = testutil::random_gnn_config(rng, 2, 5, 2);
  const auto weights = testutil::random_weights(rng, cfg, 4, -0.4, 0.4);
  const auto inputs = testutil::random_inputs(rng, cfg, 4, -1.0, 1.0);
  const auto fwd = influence::forward(g, cfg, weights, inputs);
  for (int level = 0; level < cfg.depth; ++level) {
    for (int i = 0; i < 4; ++i) {
      const Eigen::VectorXd& emb = fwd.embeddings[level][i];
      CHECK(emb(emb.size() - 1) == 1.0);
      CHECK(emb.size() == cfg.hidden_dims[level] + 1);
    }
  }
}

TEST_CASE("zero hidden weights reduce to the output layer closed form") {
  // With all-zero hidden weights and identity output activation, the output
  // is W_out^T [act(0), ..., act(0), 1]^T regardless of the inputs.
  std::mt19937_64 rng(8);
  const Graph g = Graph::complete(3);
  GnnConfig cfg;
  cfg.depth = 2;
  cfg.input_dim = 4;
  cfg.hidden_dims = {3, 3};
  cfg.output_dim = 2;
  cfg.hidden_activation = Activation::Swish;
  cfg.output_activation = Activation::Identity;

  std::vector<NodeWeights> weights;
  for (int i = 0; i < 3; ++i) {
    NodeWeights w = NodeWeights::zeros(cfg);
    w.layers[2] = Eigen::MatrixXd::Random(4, 2);
    weights.push_back(w);
  }
  const auto inputs = testutil::random_inputs(rng, cfg, 3, -5.0, 5.0);
  const auto fwd = influence::forward(g, cfg, weights, inputs);

  Eigen::VectorXd emb(4);
  const double act0 = influence::activate(Activation::Swish, 0.0);
  emb << act0, act0, act0, 1.0;
  for (int i = 0; i < 3; ++i) {
    CHECK((fwd.outputs[i] - weights[i].layers[2].transpose() * emb).norm() ==
          doctest::Approx(0.0).epsilon(1e-15));
  }
}

TEST_CASE("dimension mismatches throw") {
  const Graph g = Graph::complete(2);
  const GnnConfig cfg = benchmark_shape();
  auto weights = std::vector<NodeWeights>{NodeWeights::zeros(cfg),
                                          NodeWeights::zeros(cfg)};
  std::vector<Eigen::VectorXd> inputs(2, Eigen::VectorXd::Zero(15));
  SUBCASE("missing node weights") {
    weights.pop_back();
    CHECK_THROWS(influence::forward(g, cfg, weights, inputs));
  }
  SUBCASE("wrong input length") {
    inputs[1] = Eigen::VectorXd::Zero(14);
    CHECK_THROWS(influence::forward(g, cfg, weights, inputs));
  }
}

TEST_CASE("single-layer Jacobian has the affine Kronecker structure") {
  // k=1, identity output: phi = W_out^T sigma-embedded input; the
  // derivative w.r.t. the output-layer weights is out_row r, entry
  // (row a of W, col b) = emb(a) * [b == r].
  const Graph g(1, {});
  GnnConfig cfg;
  cfg.depth = 1;
  cfg.input_dim = 2;
  cfg.hidden_dims = {2};
  cfg.output_dim = 2;
  cfg.hidden_activation = Activation::Tanh;
  cfg.output_activation = Activation::Identity;
  std::mt19937_64 rng(9);
  const auto weights = testutil::random_weights(rng, cfg, 1, -0.8, 0.8);
  const auto inputs = testutil::random_inputs(rng, cfg, 1, -1.0, 1.0);

  const auto fwd = influence::forward(g, cfg, weights, inputs);
  const Eigen::VectorXd& emb = fwd.embeddings[0][0];  // length 3 with bias
  const Eigen::MatrixXd J =
      influence::jacobian(g, cfg, weights, inputs, 1, 1);

  const int offset = cfg.layer_rows(0) * cfg.layer_cols(0);
  const int rows = cfg.layer_rows(1);  // 3
  for (int r = 0; r < 2; ++r) {
    for (int b = 0; b < 2; ++b) {
      for (int a = 0; a < rows; ++a) {
        const double expected = (b == r) ? emb(a) : 0.0;
        CHECK(J(r, offset + b * rows + a) == doctest::Approx(expected));
      }
    }
  }
}

TEST_CASE("analytic Jacobian matches finite differences on random instances") {
  std::mt19937_64 rng(11);
  double worst = 0.0;
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const Graph g = testutil::random_connected_graph(rng, n);
    const int depth = 1 + static_cast<int>(rng() % 3);
    const GnnConfig cfg = testutil::random_gnn_config(rng, depth, 3, 2);
    const auto weights = testutil::random_weights(rng, cfg, n, -0.6, 0.6);
    const auto inputs = testutil::random_inputs(rng, cfg, n, -1.5, 1.5);
    const int i = 1 + static_cast<int>(rng() % n);
    for (int j : g.k_hop_augmented(i, depth - 1)) {
      const Eigen::MatrixXd analytic =
          influence::jacobian(g, cfg, weights, inputs, i, j);
      const Eigen::MatrixXd fd = influence::finite_diff_jacobian(
          g, cfg, weights, inputs, i, j, 1e-6);
      worst = std::max(worst, max_rel_err(analytic, fd));
    }
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("Jacobian is exactly zero outside the (depth-1)-hop neighborhood") {
  const Graph g = Graph::path(4);
  GnnConfig cfg;
  cfg.depth = 2;
  cfg.input_dim = 2;
  cfg.hidden_dims = {3, 3};
  cfg.output_dim = 2;
  std::mt19937_64 rng(13);
  const auto weights = testutil::random_weights(rng, cfg, 4, -0.5, 0.5);
  const auto inputs = testutil::random_inputs(rng, cfg, 4, -1.0, 1.0);
  // node 4 is at distance 3 from node 1, beyond depth-1 = 1 hop
  CHECK(influence::jacobian(g, cfg, weights, inputs, 1, 4).isZero(0.0));
  CHECK(influence::jacobian(g, cfg, weights, inputs, 1, 3).isZero(0.0));
  CHECK_FALSE(influence::jacobian(g, cfg, weights, inputs, 1, 2).isZero(0.0));
  CHECK_THROWS(influence::jacobian(g, cfg, weights, inputs, 1, 4, false));
}

TEST_CASE("node_jacobians covers exactly the augmented (depth-1)-hop set") {
  std::mt19937_64 rng(15);
  const Graph g = Graph::path(5);
  const GnnConfig cfg = testutil::random_gnn_config(rng, 2, 3, 2);
  const auto weights = testutil::random_weights(rng, cfg, 5, -0.5, 0.5);
  const auto inputs = testutil::random_inputs(rng, cfg, 5, -1.0, 1.0);
  const auto fwd = influence::forward(g, cfg, weights, inputs);
  const auto jacs = influence::node_jacobians(g, cfg, weights, inputs, 3, fwd);
  std::vector<int> nodes;
  for (const auto& [j, block] : jacs) {
    nodes.push_back(j);
    CHECK(block.rows() == cfg.output_dim);
    CHECK(block.cols() == cfg.param_count());
  }
  CHECK(nodes == g.k_hop_augmented(3, 1));
}

TEST_CASE("directional-derivative consistency") {
  std::mt19937_64 rng(17);
  const Graph g = testutil::random_connected_graph(rng, 4);
  const GnnConfig cfg = testutil::random_gnn_config(rng, 2, 3, 2);
  auto weights = testutil::random_weights(rng, cfg, 4, -0.5, 0.5);
  const auto inputs = testutil::random_inputs(rng, cfg, 4, -1.0, 1.0);
  const int i = 2, j = *g.augmented_neighbors(2).begin();

  const Eigen::MatrixXd J = influence::jacobian(g, cfg, weights, inputs, i, j);
  Eigen::VectorXd v = testutil::random_vector(rng, cfg.param_count(), -1, 1);
  v /= v.norm();
  const Eigen::VectorXd base =
      influence::forward(g, cfg, weights, inputs).outputs[i - 1];

  const Eigen::VectorXd flat = influence::vec_weights(weights[j - 1]);
  double prev_err = 0.0;
  for (int s = 0; s < 2; ++s) {
    const double eps = (s == 0) ? 1e-3 : 1e-4;
    weights[j - 1] = influence::unvec_weights(flat + eps * v, cfg);
    const Eigen::VectorXd bumped =
        influence::forward(g, cfg, weights, inputs).outputs[i - 1];
    const double err = (bumped - base - eps * J * v).norm();
    CHECK(err < 10.0 * eps * eps);  // O(eps^2) remainder
    if (s == 1) CHECK(err < prev_err);
    prev_err = err;
  }
}

TEST_CASE("halving the finite-difference step shrinks the disagreement") {
  std::mt19937_64 rng(19);
  const Graph g = testutil::random_connected_graph(rng, 3);
  const GnnConfig cfg = testutil::random_gnn_config(rng, 2, 3, 2);
  const auto weights = testutil::random_weights(rng, cfg, 3, -0.5, 0.5);
  const auto inputs = testutil::random_inputs(rng, cfg, 3, -1.0, 1.0);
  const Eigen::MatrixXd analytic =
      influence::jacobian(g, cfg, weights, inputs, 1, 1);
  const double coarse =
      (influence::finite_diff_jacobian(g, cfg, weights, inputs, 1, 1, 1e-2) -
       analytic)
          .norm();
  const double fine =
      (influence::finite_diff_jacobian(g, cfg, weights, inputs, 1, 1, 1e-3) -
       analytic)
          .norm();
  // central differences are second order: a 10x smaller step should shrink
  // the error by ~100x; allow slack for rounding
  CHECK(fine < coarse / 20.0);
}

TEST_CASE("forward pass is bitwise equivariant under relabeling") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const Graph g = testutil::random_connected_graph(rng, n);
    const int depth = 1 + static_cast<int>(rng() % 2);
    const GnnConfig cfg = testutil::random_gnn_config(rng, depth, 3, 2);
    const auto weights = testutil::random_weights(rng, cfg, n, -0.7, 0.7);
    const auto inputs = testutil::random_inputs(rng, cfg, n, -2.0, 2.0);

    const std::vector<int> perm = testutil::random_permutation(rng, n);
    const Graph h = g.relabeled(perm);
    std::vector<NodeWeights> pweights(n);
    std::vector<Eigen::VectorXd> pinputs(n);
    for (int i = 0; i < n; ++i) {
      pweights[perm[i] - 1] = weights[i];
      pinputs[perm[i] - 1] = inputs[i];
    }

    const auto base = influence::forward(g, cfg, weights, inputs);
    const auto permuted = influence::forward(h, cfg, pweights, pinputs);
    for (int i = 0; i < n; ++i) {
      CHECK(testutil::same(permuted.outputs[perm[i] - 1], base.outputs[i]));
    }
  }
}
