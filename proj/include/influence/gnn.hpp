#pragma once

#include <Eigen/Dense>

#include <vector>

#include "influence/graph.hpp"

namespace influence {

enum class Activation { Identity, Tanh, Swish };

double activate(Activation a, double x);
double activate_derivative(Activation a, double x);

/// Layer shapes for a message-passing network with `depth` aggregating
/// hidden layers followed by one per-node output layer. Weight matrix j
/// has shape (d^(j-1)+1) x d^(j), the +1 row multiplying the bias entry
/// appended to every hidden embedding (and to the raw input).
struct GnnConfig {
  int depth = 1;                  // hidden (aggregating) layers
  int input_dim = 1;
  std::vector<int> hidden_dims;   // size == depth
  int output_dim = 1;
  Activation hidden_activation = Activation::Swish;
  Activation output_activation = Activation::Identity;

  int layer_count() const { return depth + 1; }  // weight matrices
  int layer_rows(int j) const;                   // d^(j-1)+1
  int layer_cols(int j) const;                   // d^(j)
  int param_count() const;                       // total weights per node
  void validate() const;
};

/// One node's weight matrices, W^(0)..W^(k).
struct NodeWeights {
  std::vector<Eigen::MatrixXd> layers;

  static NodeWeights zeros(const GnnConfig& cfg);
};

/// Flatten to the canonical ordering: each matrix column by column,
/// layers ascending.
Eigen::VectorXd vec_weights(const NodeWeights& w);
NodeWeights unvec_weights(const Eigen::VectorXd& flat, const GnnConfig& cfg);

/// Everything the forward pass computes, kept for Jacobian reuse and for
/// inspection. Hidden embeddings carry the appended bias entry (always
/// exactly 1); outputs do not.
struct ForwardPass {
  // embeddings[j][node-1], j = 0..depth-1, length hidden_dims[j]+1
  std::vector<std::vector<Eigen::VectorXd>> embeddings;
  // preactivations[j][node-1], length hidden_dims[j]
  std::vector<std::vector<Eigen::VectorXd>> preactivations;
  std::vector<Eigen::VectorXd> output_preactivations;  // per node
  std::vector<Eigen::VectorXd> outputs;                // per node, output_dim
};

/// Forward pass of the whole ensemble. Hidden layers aggregate by an
/// unweighted sum over the augmented neighborhood, accumulated in a
/// value-sorted canonical order (deterministic and exactly invariant
/// under node relabeling); the output layer is per-node only.
ForwardPass forward(const Graph& g, const GnnConfig& cfg,
                    const std::vector<NodeWeights>& weights,
                    const std::vector<Eigen::VectorXd>& inputs);

/// Analytic d output(i) / d theta(j), shape output_dim x param_count.
/// Identically zero when j is outside the augmented (depth-1)-hop
/// neighborhood of i; with zero_outside=false that case throws instead.
Eigen::MatrixXd jacobian(const Graph& g, const GnnConfig& cfg,
                         const std::vector<NodeWeights>& weights,
                         const std::vector<Eigen::VectorXd>& inputs, int i,
                         int j, bool zero_outside = true);

/// All Jacobians of node i's output at once, one backward sweep.
/// Returns (j, matrix) pairs for j in the augmented (depth-1)-hop
/// neighborhood of i, ascending in j.
std::vector<std::pair<int, Eigen::MatrixXd>> node_jacobians(
    const Graph& g, const GnnConfig& cfg,
    const std::vector<NodeWeights>& weights,
    const std::vector<Eigen::VectorXd>& inputs, int i, const ForwardPass& fwd);

/// Central-difference approximation of jacobian(); testing oracle.
Eigen::MatrixXd finite_diff_jacobian(const Graph& g, const GnnConfig& cfg,
                                     const std::vector<NodeWeights>& weights,
                                     const std::vector<Eigen::VectorXd>& inputs,
                                     int i, int j, double step);

}  // namespace influence
