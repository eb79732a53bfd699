#include "gtl/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtl/error.hpp"

namespace gtl::io {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorCode::Input, what); }

const json& member(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) bad(where + ": missing \"" + key + "\"");
  return j.at(key);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) bad(where + ": expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) bad(where + ": non-finite number");
  return v;
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) bad(where + ": expected a string");
  return j.get<std::string>();
}

bool same_graph(const LabeledGraph& a, const LabeledGraph& b) {
  if (a.node_ids() != b.node_ids() || a.edge_ids() != b.edge_ids()) return false;
  for (std::size_t e = 0; e < a.edge_count(); ++e) {
    auto [p, q] = a.endpoints(static_cast<int>(e));
    auto [r, s] = b.endpoints(static_cast<int>(e));
    if (!((p == r && q == s) || (p == s && q == r))) return false;
  }
  return true;
}

/// Resolves a "graph" member against an already known graph.
GraphPtr resolve_graph(const json* spec, GraphPtr known, const std::string& base_dir) {
  if (!spec) {
    if (!known) bad("no graph given: add a \"graph\" member or pass a graph");
    return known;
  }
  GraphPtr g;
  if (spec->is_string()) {
    std::filesystem::path p(spec->get<std::string>());
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    g = graph_from_json(read_json_file(p.string()));
  } else {
    g = graph_from_json(*spec);
  }
  if (!known) return g;
  if (!same_graph(*g, *known)) bad("trajectories refer to different graphs");
  return known;
}

std::vector<double> series(const json& j, int length, const std::string& where) {
  if (j.is_number()) return std::vector<double>(static_cast<std::size_t>(length), number(j, where));
  if (!j.is_array()) bad(where + ": expected an array of " + std::to_string(length) + " numbers");
  if (static_cast<int>(j.size()) != length)
    bad(where + ": expected " + std::to_string(length) + " values, got " + std::to_string(j.size()));
  std::vector<double> out;
  for (const auto& x : j) out.push_back(number(x, where));
  return out;
}

Trajectory trajectory_from_json(const json& j, GraphPtr graph, const std::string& where) {
  const json& lj = member(j, "L", where);
  if (!lj.is_number_integer() || lj.get<long long>() < 1) bad(where + ": \"L\" must be a positive integer");
  int L = lj.get<int>();
  const auto& g = *graph;

  std::vector<std::vector<double>> nodes(g.node_count()), edges(g.edge_count());
  const json& nl = member(j, "node_labels", where);
  if (!nl.is_object()) bad(where + ": \"node_labels\" must be an object keyed by node id");
  for (auto it = nl.begin(); it != nl.end(); ++it) {
    auto v = g.find_node(it.key());
    if (!v) bad(where + ": unknown node '" + it.key() + "' in node_labels");
    nodes[static_cast<std::size_t>(*v)] = series(it.value(), L, where + ".node_labels." + it.key());
  }
  for (std::size_t v = 0; v < nodes.size(); ++v)
    if (nodes[v].empty()) bad(where + ": node '" + g.node_id(static_cast<int>(v)) + "' has no labels");

  if (g.edge_count() > 0) {
    const json& el = member(j, "edge_labels", where);
    if (!el.is_object()) bad(where + ": \"edge_labels\" must be an object keyed by edge id");
    for (auto it = el.begin(); it != el.end(); ++it) {
      auto e = g.find_edge(it.key());
      if (!e) bad(where + ": unknown edge '" + it.key() + "' in edge_labels");
      edges[static_cast<std::size_t>(*e)] = series(it.value(), L, where + ".edge_labels." + it.key());
    }
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (edges[e].empty()) bad(where + ": edge '" + g.edge_id(static_cast<int>(e)) + "' has no labels");
  }

  Trajectory t(graph, L, nodes, edges);
  if (j.contains("label") && !j.at("label").is_null()) {
    const json& lab = j.at("label");
    if (!lab.is_number_integer() || (lab.get<int>() != 1 && lab.get<int>() != -1))
      bad(where + ": \"label\" must be 1 or -1");
    t.label = lab.get<int>();
  }
  return t;
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    bad("'" + path + "' is not valid JSON: " + e.what());
  }
}

json parse_json(const std::string& s) {
  try {
    return json::parse(s);
  } catch (const json::parse_error& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
}

std::string directory_of(const std::string& path) {
  auto parent = std::filesystem::path(path).parent_path();
  return parent.empty() ? "." : parent.string();
}

GraphPtr graph_from_json(const json& j) {
  const json& nodes = member(j, "nodes", "graph");
  if (!nodes.is_array()) bad("graph: \"nodes\" must be an array");
  std::vector<std::string> ids;
  for (const auto& n : nodes) ids.push_back(text(n, "graph.nodes"));
  std::vector<std::string> eids;
  std::vector<std::pair<std::string, std::string>> ends;
  if (j.contains("edges")) {
    const json& edges = j.at("edges");
    if (!edges.is_array()) bad("graph: \"edges\" must be an array");
    for (const auto& e : edges) {
      eids.push_back(text(member(e, "id", "graph.edges"), "graph.edges.id"));
      const json& en = member(e, "ends", "graph.edges");
      if (!en.is_array() || en.size() != 2) bad("graph: edge '" + eids.back() + "' needs two ends");
      ends.emplace_back(text(en[0], "graph.edges.ends"), text(en[1], "graph.edges.ends"));
    }
  }
  return std::make_shared<const LabeledGraph>(std::move(ids), std::move(eids), std::move(ends));
}

json graph_to_json(const LabeledGraph& g) {
  json j;
  j["nodes"] = g.node_ids();
  json edges = json::array();
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    auto [a, b] = g.endpoints(static_cast<int>(e));
    edges.push_back({{"id", g.edge_id(static_cast<int>(e))}, {"ends", {g.node_id(a), g.node_id(b)}}});
  }
  j["edges"] = edges;
  return j;
}

TrajectorySet trajectories_from_json(const json& j, GraphPtr graph, const std::string& base_dir) {
  const json* items = &j;
  json single;
  if (j.is_object() && j.contains("trajectories")) {
    if (j.contains("graph")) graph = resolve_graph(&j.at("graph"), graph, base_dir);
    items = &j.at("trajectories");
    if (!items->is_array()) bad("\"trajectories\" must be an array");
  } else if (j.is_object()) {
    single = json::array({j});
    items = &single;
  } else if (!j.is_array()) {
    bad("trajectory input must be an object or an array");
  }

  TrajectorySet set;
  for (std::size_t i = 0; i < items->size(); ++i) {
    const json& t = (*items)[i];
    std::string where = "trajectory " + std::to_string(i);
    if (!t.is_object()) bad(where + ": expected an object");
    graph = resolve_graph(t.contains("graph") ? &t.at("graph") : nullptr, graph, base_dir);
    set.add(trajectory_from_json(t, graph, where));
  }
  if (!set.graph) set.graph = graph;
  return set;
}

json trajectory_to_json(const Trajectory& t, bool with_graph) {
  const auto& g = t.graph();
  json j;
  if (with_graph) j["graph"] = graph_to_json(g);
  j["L"] = t.length();
  json nodes = json::object();
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    json xs = json::array();
    for (int k = 1; k <= t.length(); ++k) xs.push_back(t.x(static_cast<int>(v), k));
    nodes[g.node_id(static_cast<int>(v))] = xs;
  }
  j["node_labels"] = nodes;
  json edges = json::object();
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    json ys = json::array();
    for (int k = 1; k <= t.length(); ++k) ys.push_back(t.y(static_cast<int>(e), k));
    edges[g.edge_id(static_cast<int>(e))] = ys;
  }
  j["edge_labels"] = edges;
  if (t.label) j["label"] = *t.label;
  return j;
}

json trajectories_to_json(const TrajectorySet& s) {
  json j;
  if (s.graph) j["graph"] = graph_to_json(*s.graph);
  json items = json::array();
  for (const auto& t : s.items) items.push_back(trajectory_to_json(t, false));
  j["trajectories"] = items;
  return j;
}

PriorModel prior_from_json(const json& j, GraphPtr graph, const std::string& base_dir) {
  if (!j.is_object()) bad("prior: expected an object");
  graph = resolve_graph(j.contains("graph") ? &j.at("graph") : nullptr, graph, base_dir);
  const json& lj = member(j, "L", "prior");
  if (!lj.is_number_integer() || lj.get<long long>() < 1) bad("prior: \"L\" must be a positive integer");
  int L = lj.get<int>();

  std::vector<Bin> bins;
  const json& bj = member(j, "bins", "prior");
  if (!bj.is_array() || bj.empty()) bad("prior: \"bins\" must be a nonempty array");
  for (const auto& b : bj) {
    if (!b.is_array() || b.size() != 2) bad("prior: each bin is a [lo, hi] pair");
    bins.push_back({number(b[0], "prior.bins"), number(b[1], "prior.bins")});
  }

  auto row = [&](const json& p, const std::string& where) {
    if (!p.is_array() || p.size() != bins.size())
      bad(where + ": expected " + std::to_string(bins.size()) + " bin probabilities");
    std::vector<double> out;
    for (const auto& x : p) out.push_back(number(x, where));
    return out;
  };
  auto per_time = [&](const json& p, const std::string& where) {
    std::vector<std::vector<double>> out;
    if (p.is_array() && !p.empty() && p[0].is_array()) {
      if (static_cast<int>(p.size()) != L) bad(where + ": expected " + std::to_string(L) + " time entries");
      for (const auto& r : p) out.push_back(row(r, where));
    } else {
      out.assign(static_cast<std::size_t>(L), row(p, where));
    }
    return out;
  };

  const auto& g = *graph;
  std::vector<std::vector<std::vector<double>>> pmf(g.node_count());
  if (j.contains("pmf")) {
    const json& pj = j.at("pmf");
    if (!pj.is_object()) bad("prior: \"pmf\" must be an object keyed by node id");
    for (auto it = pj.begin(); it != pj.end(); ++it) {
      auto v = g.find_node(it.key());
      if (!v) bad("prior: unknown node '" + it.key() + "' in pmf");
      pmf[static_cast<std::size_t>(*v)] = per_time(it.value(), "prior.pmf." + it.key());
    }
  }
  if (j.contains("default_pmf")) {
    auto def = per_time(j.at("default_pmf"), "prior.default_pmf");
    for (auto& p : pmf)
      if (p.empty()) p = def;
  }
  for (std::size_t v = 0; v < pmf.size(); ++v)
    if (pmf[v].empty()) bad("prior: node '" + g.node_id(static_cast<int>(v)) + "' has no pmf and no default_pmf");

  std::vector<double> edge_labels(g.edge_count(), 0.0);
  if (g.edge_count() > 0) {
    const json& ej = member(j, "edge_labels", "prior");
    if (!ej.is_object()) bad("prior: \"edge_labels\" must be an object keyed by edge id");
    std::vector<bool> seen(g.edge_count(), false);
    for (auto it = ej.begin(); it != ej.end(); ++it) {
      auto e = g.find_edge(it.key());
      if (!e) bad("prior: unknown edge '" + it.key() + "' in edge_labels");
      edge_labels[static_cast<std::size_t>(*e)] = number(it.value(), "prior.edge_labels");
      seen[static_cast<std::size_t>(*e)] = true;
    }
    for (std::size_t e = 0; e < seen.size(); ++e)
      if (!seen[e]) bad("prior: edge '" + g.edge_id(static_cast<int>(e)) + "' has no label");
  }
  return PriorModel(graph, L, std::move(bins), std::move(pmf), std::move(edge_labels));
}

json prior_to_json(const PriorModel& p) {
  const auto& g = p.graph();
  json j;
  j["graph"] = graph_to_json(g);
  j["L"] = p.length();
  json bins = json::array();
  for (const auto& b : p.bins()) bins.push_back({b.lo, b.hi});
  j["bins"] = bins;
  json edges = json::object();
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    edges[g.edge_id(static_cast<int>(e))] = p.edge_labels()[e];
  j["edge_labels"] = edges;
  json pmf = json::object();
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    json rows = json::array();
    for (int k = 1; k <= p.length(); ++k) rows.push_back(p.pmf(static_cast<int>(v), k));
    pmf[g.node_id(static_cast<int>(v))] = rows;
  }
  j["pmf"] = pmf;
  return j;
}

std::vector<Template> templates_from_json(const json& j) {
  std::vector<const json*> items;
  if (j.is_object() && j.contains("templates")) {
    if (!j.at("templates").is_array()) bad("\"templates\" must be an array");
    for (const auto& t : j.at("templates")) items.push_back(&t);
  } else if (j.is_array()) {
    for (const auto& t : j) items.push_back(&t);
  } else {
    items.push_back(&j);
  }

  std::vector<Template> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const json& tj = *items[i];
    std::string where = "template " + std::to_string(i);
    Template t;
    t.name = tj.contains("name") ? text(tj.at("name"), where + ".name") : "T" + std::to_string(i + 1);
    t.formula = parse_formula(text(member(tj, "formula", where), where + ".formula"));
    auto info = parameters(t.formula);
    const json empty = json::object();
    const json& params = tj.contains("params") ? tj.at("params") : empty;
    if (!params.is_object()) bad(where + ": \"params\" must be an object keyed by parameter name");
    for (auto it = params.begin(); it != params.end(); ++it) {
      const json& pj = it.value();
      ParamSpec p;
      p.name = it.key();
      p.min = number(member(pj, "min", where + "." + p.name), where + "." + p.name + ".min");
      p.max = number(member(pj, "max", where + "." + p.name), where + "." + p.name + ".max");
      auto pos = std::find_if(info.begin(), info.end(), [&](const ParamInfo& q) { return q.name == p.name; });
      p.integer = pos != info.end() && pos->integer;
      if (pj.contains("kind")) {
        std::string kind = text(pj.at("kind"), where + "." + p.name + ".kind");
        if (kind == "int" || kind == "integer") p.integer = true;
        else if (kind == "real" || kind == "continuous") p.integer = false;
        else bad(where + "." + p.name + ": kind must be \"int\" or \"real\"");
      }
      t.params.push_back(std::move(p));
    }
    // Box order follows the formula's parameter order.
    std::vector<ParamSpec> ordered;
    for (const auto& pi : info)
      for (const auto& p : t.params)
        if (p.name == pi.name) ordered.push_back(p);
    for (const auto& p : t.params)
      if (std::none_of(info.begin(), info.end(), [&](const ParamInfo& q) { return q.name == p.name; }))
        ordered.push_back(p);
    t.params = std::move(ordered);
    validate_template(t);
    out.push_back(std::move(t));
  }
  return out;
}

json template_to_json(const Template& t) {
  json j;
  j["name"] = t.name;
  j["formula"] = to_string(t.formula);
  json params = json::object();
  for (const auto& p : t.params)
    params[p.name] = {{"min", p.min}, {"max", p.max}, {"kind", p.integer ? "int" : "real"}};
  j["params"] = params;
  return j;
}

json templates_to_json(const std::vector<Template>& ts) {
  json j = json::array();
  for (const auto& t : ts) j.push_back(template_to_json(t));
  return j;
}

json valuation_to_json(const Valuation& theta) {
  json j = json::object();
  for (const auto& [k, v] : theta) j[k] = v;
  return j;
}

Valuation valuation_from_json(const json& j) {
  if (!j.is_object()) bad("valuation must be an object of parameter values");
  Valuation out;
  for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = number(it.value(), "valuation." + it.key());
  return out;
}

}  // namespace gtl::io
