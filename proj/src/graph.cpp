#include "influence/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>

namespace influence {

Graph::Graph(int node_count, const std::vector<std::pair<int, int>>& edges)
    : n_(node_count) {
  if (node_count <= 0) {
    throw std::invalid_argument("graph: node_count must be positive");
  }
  adjacency_ = Eigen::MatrixXd::Zero(n_, n_);
  std::set<std::pair<int, int>> unique_edges;
  for (const auto& [a, b] : edges) {
    if (a < 1 || a > n_ || b < 1 || b > n_) {
      throw std::out_of_range("graph: edge index out of range: (" +
                              std::to_string(a) + "," + std::to_string(b) +
                              ")");
    }
    if (a == b) {
      throw std::invalid_argument("graph: self-loop edge (" +
                                  std::to_string(a) + "," + std::to_string(b) +
                                  ") not allowed");
    }
    unique_edges.insert({std::min(a, b), std::max(a, b)});
  }
  for (const auto& [a, b] : unique_edges) {
    adjacency_(a - 1, b - 1) = 1.0;
    adjacency_(b - 1, a - 1) = 1.0;
  }

  neighbors_.resize(n_);
  augmented_neighbors_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (adjacency_(i, j) != 0.0) neighbors_[i].push_back(j + 1);
    }
    augmented_neighbors_[i] = neighbors_[i];
    augmented_neighbors_[i].push_back(i + 1);
    std::sort(augmented_neighbors_[i].begin(), augmented_neighbors_[i].end());
  }

  // BFS layers: khop_[k] stabilizes at k = N-1 at the latest.
  max_hops_ = std::max(1, n_ - 1);
  khop_.resize(max_hops_ + 1);
  khop_[0].assign(n_, {});
  for (int k = 1; k <= max_hops_; ++k) {
    khop_[k].resize(n_);
    for (int i = 0; i < n_; ++i) {
      std::set<int> reach(khop_[k - 1][i].begin(), khop_[k - 1][i].end());
      std::set<int> frontier = reach;
      frontier.insert(i + 1);
      for (int node : frontier) {
        for (int nb : neighbors_[node - 1]) {
          if (nb != i + 1) reach.insert(nb);
        }
      }
      khop_[k][i].assign(reach.begin(), reach.end());
    }
  }
}

void Graph::check_node(int i) const {
  if (i < 1 || i > n_) {
    throw std::out_of_range("graph: node index " + std::to_string(i) +
                            " outside [1," + std::to_string(n_) + "]");
  }
}

bool Graph::has_edge(int i, int j) const {
  check_node(i);
  check_node(j);
  return adjacency_(i - 1, j - 1) != 0.0;
}

const std::vector<int>& Graph::neighbors(int i) const {
  check_node(i);
  return neighbors_[i - 1];
}

const std::vector<int>& Graph::augmented_neighbors(int i) const {
  check_node(i);
  return augmented_neighbors_[i - 1];
}

const std::vector<int>& Graph::k_hop(int i, int k) const {
  check_node(i);
  if (k < 0) throw std::invalid_argument("graph: k must be nonnegative");
  return khop_[std::min(k, max_hops_)][i - 1];
}

std::vector<int> Graph::k_hop_augmented(int i, int k) const {
  std::vector<int> out = k_hop(i, k);
  out.insert(std::lower_bound(out.begin(), out.end(), i), i);
  return out;
}

bool Graph::is_connected() const {
  return static_cast<int>(k_hop(1, max_hops_).size()) == n_ - 1;
}

int Graph::degree(int i) const {
  check_node(i);
  return static_cast<int>(neighbors_[i - 1].size());
}

Eigen::MatrixXd Graph::self_loop_adjacency() const {
  return adjacency_ + Eigen::MatrixXd::Identity(n_, n_);
}

Eigen::MatrixXd Graph::degree_matrix() const {
  return adjacency_.rowwise().sum().asDiagonal();
}

Eigen::MatrixXd Graph::laplacian() const {
  return degree_matrix() - adjacency_;
}

Graph Graph::relabeled(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != n_) {
    throw std::invalid_argument("graph: permutation size mismatch");
  }
  std::vector<bool> seen(n_, false);
  for (int p : perm) {
    if (p < 1 || p > n_ || seen[p - 1]) {
      throw std::invalid_argument("graph: not a permutation of 1..N");
    }
    seen[p - 1] = true;
  }
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= n_; ++i) {
    for (int j : neighbors_[i - 1]) {
      if (j > i) edges.emplace_back(perm[i - 1], perm[j - 1]);
    }
  }
  return Graph(n_, edges);
}

Graph Graph::complete(int node_count) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= node_count; ++i) {
    for (int j = i + 1; j <= node_count; ++j) edges.emplace_back(i, j);
  }
  return Graph(node_count, edges);
}

Graph Graph::path(int node_count) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i < node_count; ++i) edges.emplace_back(i, i + 1);
  return Graph(node_count, edges);
}

}  // namespace influence
