#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "gtl/formula.hpp"
#include "gtl/graph.hpp"
#include "gtl/prob.hpp"
#include "gtl/templates.hpp"

namespace gtl::io {

using json = nlohmann::ordered_json;

/// Throws Input errors for unreadable files or malformed JSON.
json read_json_file(const std::string& path);
json parse_json(const std::string& text);
std::string directory_of(const std::string& path);

/// {"nodes": [...], "edges": [{"id": ..., "ends": [a, b]}, ...]}
GraphPtr graph_from_json(const json& j);
json graph_to_json(const LabeledGraph& g);

/// A "graph" member may be an inline object or a path relative to
/// `base_dir`. When `graph` is given it is used for trajectories without a
/// graph member, and any graph member must describe the same graph.
/// Accepts one trajectory object, an array of them, or
/// {"graph": ..., "trajectories": [...]}.
TrajectorySet trajectories_from_json(const json& j, GraphPtr graph = nullptr,
                                     const std::string& base_dir = ".");
json trajectory_to_json(const Trajectory& t, bool with_graph = true);
json trajectories_to_json(const TrajectorySet& s);

PriorModel prior_from_json(const json& j, GraphPtr graph = nullptr, const std::string& base_dir = ".");
json prior_to_json(const PriorModel& p);

/// One template object, an array, or {"templates": [...]}.
std::vector<Template> templates_from_json(const json& j);
json template_to_json(const Template& t);
json templates_to_json(const std::vector<Template>& ts);

json valuation_to_json(const Valuation& theta);
Valuation valuation_from_json(const json& j);

}  // namespace gtl::io
