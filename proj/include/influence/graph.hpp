#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace influence {

/// Static undirected graph over nodes 1..N. Immutable after construction;
/// k-hop neighborhoods are precomputed for every reachable depth.
class Graph {
 public:
  /// Edges are unordered pairs of 1-based node indices. Duplicates are
  /// merged; self-loop pairs and out-of-range indices throw.
  Graph(int node_count, const std::vector<std::pair<int, int>>& edges);

  int node_count() const { return n_; }

  bool has_edge(int i, int j) const;

  /// Neighbors of node i, ascending, excluding i.
  const std::vector<int>& neighbors(int i) const;

  /// Neighbors of node i plus i itself, ascending.
  const std::vector<int>& augmented_neighbors(int i) const;

  /// Nodes reachable from i within <= k edges, excluding i. k=0 is empty.
  /// k beyond the diameter saturates.
  const std::vector<int>& k_hop(int i, int k) const;

  /// k_hop with i included.
  std::vector<int> k_hop_augmented(int i, int k) const;

  bool is_connected() const;

  int degree(int i) const;

  const Eigen::MatrixXd& adjacency() const { return adjacency_; }
  Eigen::MatrixXd self_loop_adjacency() const;
  Eigen::MatrixXd degree_matrix() const;
  Eigen::MatrixXd laplacian() const;

  /// New graph with node i relabeled to perm[i-1] (perm is a 1-based
  /// permutation of 1..N).
  Graph relabeled(const std::vector<int>& perm) const;

  static Graph complete(int node_count);
  static Graph path(int node_count);

 private:
  void check_node(int i) const;

  int n_;
  Eigen::MatrixXd adjacency_;
  std::vector<std::vector<int>> neighbors_;            // per node, ascending
  std::vector<std::vector<int>> augmented_neighbors_;
  // khop_[k][node] for k = 0..max_hops_, each ascending and excluding the node
  std::vector<std::vector<std::vector<int>>> khop_;
  int max_hops_;
};

}  // namespace influence
