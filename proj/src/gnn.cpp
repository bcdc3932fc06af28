#include "influence/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace influence {

double activate(Activation a, double x) {
  switch (a) {
    case Activation::Identity:
      return x;
    case Activation::Tanh:
      return std::tanh(x);
    case Activation::Swish:
      return x / (1.0 + std::exp(-x));
  }
  throw std::logic_error("unknown activation");
}

double activate_derivative(Activation a, double x) {
  switch (a) {
    case Activation::Identity:
      return 1.0;
    case Activation::Tanh: {
      double t = std::tanh(x);
      return 1.0 - t * t;
    }
    case Activation::Swish: {
      double s = 1.0 / (1.0 + std::exp(-x));
      return s + x * s * (1.0 - s);
    }
  }
  throw std::logic_error("unknown activation");
}

int GnnConfig::layer_rows(int j) const {
  if (j == 0) return input_dim + 1;
  return hidden_dims[j - 1] + 1;
}

int GnnConfig::layer_cols(int j) const {
  if (j == depth) return output_dim;
  return hidden_dims[j];
}

int GnnConfig::param_count() const {
  int p = 0;
  for (int j = 0; j <= depth; ++j) p += layer_rows(j) * layer_cols(j);
  return p;
}

void GnnConfig::validate() const {
  if (depth < 1) throw std::invalid_argument("gnn: depth must be >= 1");
  if (input_dim < 1 || output_dim < 1) {
    throw std::invalid_argument("gnn: input/output dims must be positive");
  }
  if (static_cast<int>(hidden_dims.size()) != depth) {
    throw std::invalid_argument("gnn: hidden_dims size must equal depth");
  }
  for (int d : hidden_dims) {
    if (d < 1) throw std::invalid_argument("gnn: hidden dims must be positive");
  }
}

NodeWeights NodeWeights::zeros(const GnnConfig& cfg) {
  NodeWeights w;
  for (int j = 0; j <= cfg.depth; ++j) {
    w.layers.push_back(
        Eigen::MatrixXd::Zero(cfg.layer_rows(j), cfg.layer_cols(j)));
  }
  return w;
}

Eigen::VectorXd vec_weights(const NodeWeights& w) {
  int total = 0;
  for (const auto& m : w.layers) total += static_cast<int>(m.size());
  Eigen::VectorXd flat(total);
  int at = 0;
  for (const auto& m : w.layers) {
    // column-major stacking
    flat.segment(at, m.size()) =
        Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
    at += static_cast<int>(m.size());
  }
  return flat;
}

NodeWeights unvec_weights(const Eigen::VectorXd& flat, const GnnConfig& cfg) {
  if (flat.size() != cfg.param_count()) {
    throw std::invalid_argument("gnn: flat weight length " +
                                std::to_string(flat.size()) + " != " +
                                std::to_string(cfg.param_count()));
  }
  NodeWeights w;
  int at = 0;
  for (int j = 0; j <= cfg.depth; ++j) {
    int r = cfg.layer_rows(j);
    int c = cfg.layer_cols(j);
    w.layers.push_back(
        Eigen::Map<const Eigen::MatrixXd>(flat.data() + at, r, c));
    at += r * c;
  }
  return w;
}

namespace {

void check_shapes(const Graph& g, const GnnConfig& cfg,
                  const std::vector<NodeWeights>& weights,
                  const std::vector<Eigen::VectorXd>& inputs) {
  const int n = g.node_count();
  if (static_cast<int>(weights.size()) != n) {
    throw std::invalid_argument("gnn: weights missing for some nodes");
  }
  if (static_cast<int>(inputs.size()) != n) {
    throw std::invalid_argument("gnn: inputs missing for some nodes");
  }
  for (int i = 0; i < n; ++i) {
    if (inputs[i].size() != cfg.input_dim) {
      throw std::invalid_argument("gnn: input dimension mismatch at node " +
                                  std::to_string(i + 1));
    }
    if (static_cast<int>(weights[i].layers.size()) != cfg.layer_count()) {
      throw std::invalid_argument("gnn: wrong layer count at node " +
                                  std::to_string(i + 1));
    }
    for (int j = 0; j <= cfg.depth; ++j) {
      const auto& W = weights[i].layers[j];
      if (W.rows() != cfg.layer_rows(j) || W.cols() != cfg.layer_cols(j)) {
        throw std::invalid_argument("gnn: weight shape mismatch at node " +
                                    std::to_string(i + 1) + " layer " +
                                    std::to_string(j));
      }
    }
  }
}

Eigen::VectorXd augmented(const Eigen::VectorXd& v) {
  Eigen::VectorXd out(v.size() + 1);
  out.head(v.size()) = v;
  out(v.size()) = 1.0;
  return out;
}

// Aggregated input feeding node m's layer `level`: sum over the augmented
// neighborhood. Addends are sorted by value before accumulating so the sum
// depends only on the multiset of contributions, not on node labels; this
// keeps forward passes deterministic and exactly equivariant under
// relabeling.
Eigen::VectorXd layer_input(const Graph& g, const GnnConfig& cfg,
                            const std::vector<Eigen::VectorXd>& inputs,
                            const ForwardPass& fwd, int m, int level) {
  std::vector<Eigen::VectorXd> addends;
  for (int l : g.augmented_neighbors(m)) {
    if (level == 0) {
      addends.push_back(augmented(inputs[l - 1]));
    } else {
      addends.push_back(fwd.embeddings[level - 1][l - 1]);
    }
  }
  std::sort(addends.begin(), addends.end(),
            [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
              return std::lexicographical_compare(a.data(), a.data() + a.size(),
                                                  b.data(), b.data() + b.size());
            });
  Eigen::VectorXd s = Eigen::VectorXd::Zero(cfg.layer_rows(level));
  for (const auto& a : addends) s += a;
  return s;
}

}  // namespace

ForwardPass forward(const Graph& g, const GnnConfig& cfg,
                    const std::vector<NodeWeights>& weights,
                    const std::vector<Eigen::VectorXd>& inputs) {
  cfg.validate();
  check_shapes(g, cfg, weights, inputs);
  const int n = g.node_count();

  ForwardPass fwd;
  fwd.embeddings.resize(cfg.depth);
  fwd.preactivations.resize(cfg.depth);
  for (int level = 0; level < cfg.depth; ++level) {
    fwd.embeddings[level].resize(n);
    fwd.preactivations[level].resize(n);
    for (int m = 1; m <= n; ++m) {
      Eigen::VectorXd s = layer_input(g, cfg, inputs, fwd, m, level);
      Eigen::VectorXd pre = weights[m - 1].layers[level].transpose() * s;
      Eigen::VectorXd emb(pre.size() + 1);
      for (int r = 0; r < pre.size(); ++r) {
        emb(r) = activate(cfg.hidden_activation, pre(r));
      }
      emb(pre.size()) = 1.0;
      fwd.preactivations[level][m - 1] = std::move(pre);
      fwd.embeddings[level][m - 1] = std::move(emb);
    }
  }

  fwd.output_preactivations.resize(n);
  fwd.outputs.resize(n);
  for (int m = 1; m <= n; ++m) {
    Eigen::VectorXd pre = weights[m - 1].layers[cfg.depth].transpose() *
                          fwd.embeddings[cfg.depth - 1][m - 1];
    Eigen::VectorXd out(pre.size());
    for (int r = 0; r < pre.size(); ++r) {
      out(r) = activate(cfg.output_activation, pre(r));
    }
    fwd.output_preactivations[m - 1] = std::move(pre);
    fwd.outputs[m - 1] = std::move(out);
  }
  return fwd;
}

std::vector<std::pair<int, Eigen::MatrixXd>> node_jacobians(
    const Graph& g, const GnnConfig& cfg,
    const std::vector<NodeWeights>& weights,
    const std::vector<Eigen::VectorXd>& inputs, int i,
    const ForwardPass& fwd) {
  const int k = cfg.depth;
  const int p = cfg.param_count();
  const int dout = cfg.output_dim;

  std::vector<int> layer_offset(k + 1);
  for (int j = 1; j <= k; ++j) {
    layer_offset[j] =
        layer_offset[j - 1] + cfg.layer_rows(j - 1) * cfg.layer_cols(j - 1);
  }

  std::map<int, Eigen::MatrixXd> blocks;  // node -> dout x p
  for (int j : g.k_hop_augmented(i, k - 1)) {
    blocks.emplace(j, Eigen::MatrixXd::Zero(dout, p));
  }

  Eigen::VectorXd out_deriv(dout);
  for (int r = 0; r < dout; ++r) {
    out_deriv(r) = activate_derivative(cfg.output_activation,
                                       fwd.output_preactivations[i - 1](r));
  }

  // Output-layer weights only touch node i's own parameters.
  {
    const Eigen::VectorXd& emb = fwd.embeddings[k - 1][i - 1];
    const int rows = cfg.layer_rows(k);
    Eigen::MatrixXd& block = blocks.at(i);
    for (int b = 0; b < dout; ++b) {
      block.block(b, layer_offset[k] + b * rows, 1, rows) =
          out_deriv(b) * emb.transpose();
    }
  }

  // Sensitivities d output(i) / d embedding(m, level), propagated backward
  // through the aggregation. Hidden embedding width is d_level + 1.
  std::map<int, Eigen::MatrixXd> sens;
  sens.emplace(i, out_deriv.asDiagonal() *
                      weights[i - 1].layers[k].transpose());

  for (int level = k - 1; level >= 0; --level) {
    const int d_level = cfg.layer_cols(level);
    std::map<int, Eigen::MatrixXd> next_sens;
    for (const auto& [m, S] : sens) {
      // Scale through the activation; the bias row of the embedding has no
      // dependence on the preactivation, so the last sensitivity column drops.
      Eigen::MatrixXd M = S.leftCols(d_level);
      for (int c = 0; c < d_level; ++c) {
        M.col(c) *= activate_derivative(cfg.hidden_activation,
                                        fwd.preactivations[level][m - 1](c));
      }

      auto it = blocks.find(m);
      if (it != blocks.end()) {
        Eigen::VectorXd s = layer_input(g, cfg, inputs, fwd, m, level);
        const int rows = cfg.layer_rows(level);
        for (int b = 0; b < d_level; ++b) {
          it->second.middleCols(layer_offset[level] + b * rows, rows) +=
              M.col(b) * s.transpose();
        }
      }

      if (level > 0) {
        Eigen::MatrixXd C = M * weights[m - 1].layers[level].transpose();
        for (int l : g.augmented_neighbors(m)) {
          auto [pos, inserted] = next_sens.try_emplace(l, C);
          if (!inserted) pos->second += C;
        }
      }
    }
    sens = std::move(next_sens);
  }

  std::vector<std::pair<int, Eigen::MatrixXd>> out;
  out.reserve(blocks.size());
  for (auto& [j, block] : blocks) out.emplace_back(j, std::move(block));
  return out;
}

Eigen::MatrixXd jacobian(const Graph& g, const GnnConfig& cfg,
                         const std::vector<NodeWeights>& weights,
                         const std::vector<Eigen::VectorXd>& inputs, int i,
                         int j, bool zero_outside) {
  ForwardPass fwd = forward(g, cfg, weights, inputs);
  for (auto& [node, block] : node_jacobians(g, cfg, weights, inputs, i, fwd)) {
    if (node == j) return block;
  }
  if (zero_outside) {
    return Eigen::MatrixXd::Zero(cfg.output_dim, cfg.param_count());
  }
  throw std::invalid_argument(
      "gnn: node " + std::to_string(j) +
      " is outside the augmented (depth-1)-hop neighborhood of " +
      std::to_string(i));
}

Eigen::MatrixXd finite_diff_jacobian(const Graph& g, const GnnConfig& cfg,
                                     const std::vector<NodeWeights>& weights,
                                     const std::vector<Eigen::VectorXd>& inputs,
                                     int i, int j, double step) {
  if (step <= 0.0) throw std::invalid_argument("gnn: step must be positive");
  const int p = cfg.param_count();
  Eigen::MatrixXd J(cfg.output_dim, p);
  std::vector<NodeWeights> perturbed = weights;
  Eigen::VectorXd flat = vec_weights(weights[j - 1]);
  for (int m = 0; m < p; ++m) {
    Eigen::VectorXd bumped = flat;
    bumped(m) = flat(m) + step;
    perturbed[j - 1] = unvec_weights(bumped, cfg);
    Eigen::VectorXd plus =
        forward(g, cfg, perturbed, inputs).outputs[i - 1];
    bumped(m) = flat(m) - step;
    perturbed[j - 1] = unvec_weights(bumped, cfg);
    Eigen::VectorXd minus =
        forward(g, cfg, perturbed, inputs).outputs[i - 1];
    J.col(m) = (plus - minus) / (2.0 * step);
  }
  return J;
}

}  // namespace influence
