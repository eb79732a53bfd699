#include "gtl/graph.hpp"

#include <algorithm>
#include <cmath>

#include "gtl/error.hpp"

namespace gtl {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Input: return "input_error";
    case ErrorCode::Parse: return "parse_error";
    case ErrorCode::Range: return "range_error";
    case ErrorCode::Usage: return "usage_error";
    case ErrorCode::Scope: return "scope_error";
    case ErrorCode::Infeasible: return "infeasible";
  }
  return "unknown";
}

namespace {

std::string describe_parse_error(const std::string& message, int line, int column,
                                 const std::vector<std::string>& expected) {
  std::string out = "line " + std::to_string(line) + ", column " + std::to_string(column) +
                    ": " + message;
  if (!expected.empty()) {
    out += " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) out += i + 1 == expected.size() ? " or " : ", ";
      out += expected[i];
    }
    out += ")";
  }
  return out;
}

}  // namespace

ParseError::ParseError(const std::string& message, int line, int column,
                       std::vector<std::string> expected)
    : Error(ErrorCode::Parse, describe_parse_error(message, line, column, expected)),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

LabeledGraph::LabeledGraph(std::vector<std::string> nodes, std::vector<std::string> edges,
                           std::vector<std::pair<std::string, std::string>> endpoints)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  if (edges_.size() != endpoints.size())
    fail(ErrorCode::Input, "edge id list and endpoint list differ in length");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!node_lookup_.emplace(nodes_[i], static_cast<int>(i)).second)
      fail(ErrorCode::Input, "duplicate node id '" + nodes_[i] + "'");
  }
  adjacency_.resize(nodes_.size());
  std::vector<std::pair<int, int>> seen_pairs;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (!edge_lookup_.emplace(edges_[i], static_cast<int>(i)).second)
      fail(ErrorCode::Input, "duplicate edge id '" + edges_[i] + "'");
    auto a = find_node(endpoints[i].first);
    auto b = find_node(endpoints[i].second);
    if (!a || !b)
      fail(ErrorCode::Input, "edge '" + edges_[i] + "' references an unknown node");
    if (*a == *b) fail(ErrorCode::Input, "edge '" + edges_[i] + "' is a self-loop");
    auto key = std::minmax(*a, *b);
    seen_pairs.emplace_back(key.first, key.second);
    ends_.emplace_back(*a, *b);
    adjacency_[static_cast<std::size_t>(*a)].push_back({static_cast<int>(i), *b});
    adjacency_[static_cast<std::size_t>(*b)].push_back({static_cast<int>(i), *a});
  }
  std::sort(seen_pairs.begin(), seen_pairs.end());
  if (std::adjacent_find(seen_pairs.begin(), seen_pairs.end()) != seen_pairs.end())
    fail(ErrorCode::Input, "more than one edge joins the same node pair");
}

std::optional<int> LabeledGraph::find_node(const std::string& id) const {
  auto it = node_lookup_.find(id);
  if (it == node_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> LabeledGraph::find_edge(const std::string& id) const {
  auto it = edge_lookup_.find(id);
  if (it == edge_lookup_.end()) return std::nullopt;
  return it->second;
}

int LabeledGraph::node_index(const std::string& id) const {
  auto v = find_node(id);
  if (!v) fail(ErrorCode::Input, "unknown node id '" + id + "'");
  return *v;
}

int LabeledGraph::edge_index(const std::string& id) const {
  auto e = find_edge(id);
  if (!e) fail(ErrorCode::Input, "unknown edge id '" + id + "'");
  return *e;
}

Trajectory::Trajectory(GraphPtr graph, int length,
                       const std::vector<std::vector<double>>& node_labels,
                       const std::vector<std::vector<double>>& edge_labels)
    : graph_(std::move(graph)), length_(length) {
  if (!graph_) fail(ErrorCode::Input, "trajectory without a graph");
  if (length_ < 1) fail(ErrorCode::Input, "trajectory length must be at least 1");
  const auto L = static_cast<std::size_t>(length_);
  if (node_labels.size() != graph_->node_count())
    fail(ErrorCode::Input, "node labels must cover every node");
  if (edge_labels.size() != graph_->edge_count())
    fail(ErrorCode::Input, "edge labels must cover every edge");
  node_values_.reserve(graph_->node_count() * L);
  for (std::size_t v = 0; v < node_labels.size(); ++v) {
    if (node_labels[v].size() != L)
      fail(ErrorCode::Input, "node '" + graph_->node_id(static_cast<int>(v)) + "' has " +
                                 std::to_string(node_labels[v].size()) + " labels, expected " +
                                 std::to_string(L));
    for (double x : node_labels[v]) {
      if (!std::isfinite(x)) fail(ErrorCode::Input, "non-finite node label");
      node_values_.push_back(x);
    }
  }
  edge_values_.assign(graph_->edge_count() * L, 0.0);
  for (std::size_t e = 0; e < edge_labels.size(); ++e) {
    if (edge_labels[e].size() != L)
      fail(ErrorCode::Input, "edge '" + graph_->edge_id(static_cast<int>(e)) + "' has " +
                                 std::to_string(edge_labels[e].size()) + " labels, expected " +
                                 std::to_string(L));
    for (std::size_t k = 0; k < L; ++k) {
      if (!std::isfinite(edge_labels[e][k])) fail(ErrorCode::Input, "non-finite edge label");
      edge_values_[k * graph_->edge_count() + e] = edge_labels[e][k];
    }
  }
}

void Trajectory::check_time(int k) const {
  if (k < 1 || k > length_)
    fail(ErrorCode::Range, "time index " + std::to_string(k) + " outside [1, " +
                               std::to_string(length_) + "]");
}

void TrajectorySet::add(Trajectory t) {
  if (!graph) graph = t.graph_ptr();
  if (t.graph_ptr() != graph)
    fail(ErrorCode::Input, "all trajectories of a set must share one graph");
  if (!items.empty() && t.length() != items.front().length())
    fail(ErrorCode::Input, "all trajectories of a set must have the same length");
  items.push_back(std::move(t));
}

NodeSet reach(const LabeledGraph& graph, std::span<const int> sources,
              std::span<const EdgeProposition> chain, std::span<const double> edge_values) {
  const auto n = graph.node_count();
  std::vector<char> current(n, 0);
  for (int s : sources) {
    if (s < 0 || static_cast<std::size_t>(s) >= n)
      fail(ErrorCode::Input, "source node index out of range");
    current[static_cast<std::size_t>(s)] = 1;
  }
  std::vector<char> next(n, 0);
  for (const auto& rho : chain) {
    std::fill(next.begin(), next.end(), 0);
    for (std::size_t v = 0; v < n; ++v) {
      if (!current[v]) continue;
      for (const auto& inc : graph.incident(static_cast<int>(v))) {
        if (rho.holds(edge_values[static_cast<std::size_t>(inc.edge)]))
          next[static_cast<std::size_t>(inc.other)] = 1;
      }
    }
    current.swap(next);
  }
  NodeSet out;
  for (std::size_t v = 0; v < n; ++v)
    if (current[v]) out.push_back(static_cast<int>(v));
  return out;
}

NodeSet neighbor_op(const Trajectory& g, std::span<const int> sources, int k,
                    std::span<const EdgeProposition> chain) {
  g.check_time(k);
  if (chain.empty()) fail(ErrorCode::Usage, "neighbor chain must contain at least one hop");
  return reach(g.graph(), sources, chain, g.edges_at(k));
}

std::vector<std::string> neighbor_op(const Trajectory& g, const std::vector<std::string>& sources,
                                     int k, std::span<const EdgeProposition> chain) {
  std::vector<int> idx;
  idx.reserve(sources.size());
  for (const auto& s : sources) idx.push_back(g.graph().node_index(s));
  std::vector<std::string> out;
  for (int v : neighbor_op(g, idx, k, chain)) out.push_back(g.graph().node_id(v));
  return out;
}

}  // namespace gtl
