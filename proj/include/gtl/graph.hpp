#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gtl {

enum class Cmp { Le, Ge };

inline bool compare(Cmp cmp, double value, double threshold) {
  return cmp == Cmp::Le ? value <= threshold : value >= threshold;
}

struct NodeProposition {
  Cmp cmp = Cmp::Ge;
  double threshold = 0.0;
  bool holds(double x) const { return compare(cmp, x, threshold); }
  friend bool operator==(const NodeProposition&, const NodeProposition&) = default;
};

struct EdgeProposition {
  Cmp cmp = Cmp::Le;
  double threshold = 0.0;
  bool holds(double y) const { return compare(cmp, y, threshold); }
  friend bool operator==(const EdgeProposition&, const EdgeProposition&) = default;
};

struct Incidence {
  int edge;
  int other;
};

/// Static undirected simple graph with string ids. Nodes and edges are kept
/// in insertion order; the dense indices are internal only.
class LabeledGraph {
 public:
  LabeledGraph(std::vector<std::string> nodes, std::vector<std::string> edges,
               std::vector<std::pair<std::string, std::string>> endpoints);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const std::string& node_id(int v) const { return nodes_.at(static_cast<std::size_t>(v)); }
  const std::string& edge_id(int e) const { return edges_.at(static_cast<std::size_t>(e)); }
  const std::vector<std::string>& node_ids() const { return nodes_; }
  const std::vector<std::string>& edge_ids() const { return edges_; }

  /// Throws Error(Input) for an unknown id.
  int node_index(const std::string& id) const;
  int edge_index(const std::string& id) const;
  std::optional<int> find_node(const std::string& id) const;
  std::optional<int> find_edge(const std::string& id) const;

  std::pair<int, int> endpoints(int e) const { return ends_.at(static_cast<std::size_t>(e)); }
  std::span<const Incidence> incident(int v) const {
    return adjacency_.at(static_cast<std::size_t>(v));
  }

 private:
  std::vector<std::string> nodes_;
  std::vector<std::string> edges_;
  std::vector<std::pair<int, int>> ends_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::unordered_map<std::string, int> node_lookup_;
  std::unordered_map<std::string, int> edge_lookup_;
};

using GraphPtr = std::shared_ptr<const LabeledGraph>;

/// Node and edge labels over time indices 1..L on a fixed graph.
class Trajectory {
 public:
  /// node_labels[v] and edge_labels[e] hold L values each, indexed by the
  /// graph's dense order.
  Trajectory(GraphPtr graph, int length, const std::vector<std::vector<double>>& node_labels,
             const std::vector<std::vector<double>>& edge_labels);

  const LabeledGraph& graph() const { return *graph_; }
  const GraphPtr& graph_ptr() const { return graph_; }
  int length() const { return length_; }

  double x(int v, int k) const {
    return node_values_[static_cast<std::size_t>(v) * static_cast<std::size_t>(length_) +
                        static_cast<std::size_t>(k - 1)];
  }
  double y(int e, int k) const {
    return edge_values_[static_cast<std::size_t>(k - 1) * graph_->edge_count() +
                        static_cast<std::size_t>(e)];
  }
  /// All edge labels at time k, in dense edge order.
  std::span<const double> edges_at(int k) const {
    return {edge_values_.data() + static_cast<std::size_t>(k - 1) * graph_->edge_count(),
            graph_->edge_count()};
  }

  /// Classification label (+1 / -1) when the trajectory carries one.
  std::optional<int> label;

  void check_time(int k) const;

 private:
  GraphPtr graph_;
  int length_;
  std::vector<double> node_values_;
  std::vector<double> edge_values_;
};

/// A collection of trajectories sharing one graph and one length.
struct TrajectorySet {
  GraphPtr graph;
  std::vector<Trajectory> items;

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
  int length() const { return items.empty() ? 0 : items.front().length(); }
  void add(Trajectory t);
};

/// Sorted, duplicate-free set of dense node indices.
using NodeSet = std::vector<int>;

/// Nodes reachable from `sources` by successive hops, chain[0] applied first.
/// Each hop keeps nodes joined to the current set by an edge whose label in
/// `edge_values` satisfies that hop's proposition. Sources may re-enter.
NodeSet reach(const LabeledGraph& graph, std::span<const int> sources,
              std::span<const EdgeProposition> chain, std::span<const double> edge_values);

/// Neighbor operation on a trajectory at time index k.
NodeSet neighbor_op(const Trajectory& g, std::span<const int> sources, int k,
                    std::span<const EdgeProposition> chain);

/// Id-based convenience overload; ids of the result are sorted by dense index.
std::vector<std::string> neighbor_op(const Trajectory& g, const std::vector<std::string>& sources,
                                     int k, std::span<const EdgeProposition> chain);

}  // namespace gtl
