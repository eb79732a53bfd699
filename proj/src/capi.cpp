#include "gtl/gtl.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "gtl/automata.hpp"
#include "gtl/classify.hpp"
#include "gtl/datagen.hpp"
#include "gtl/error.hpp"
#include "gtl/eval.hpp"
#include "gtl/identify.hpp"
#include "gtl/io.hpp"
#include "gtl/prob.hpp"
#include "gtl/templates.hpp"

struct gtl_graph {
  gtl::GraphPtr g;
};
struct gtl_trajset {
  gtl::TrajectorySet s;
};
struct gtl_prior {
  std::shared_ptr<const gtl::PriorModel> p;
};
struct gtl_formula {
  gtl::Formula f;
};

namespace {

using gtl::io::json;

thread_local std::string last_error;
thread_local std::string last_error_json = "{}";

gtl_status to_status(gtl::ErrorCode c) { return static_cast<gtl_status>(static_cast<int>(c)); }

void set_error(gtl_status code, const std::string& msg, json extra = json::object()) {
  last_error = msg;
  json j;
  j["code"] = gtl_status_name(code);
  j["message"] = msg;
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  last_error_json = j.dump();
}

template <class Fn>
gtl_status guard(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    last_error_json = "{}";
    return GTL_OK;
  } catch (const gtl::ParseError& e) {
    set_error(GTL_ERR_PARSE, e.what(),
              json{{"line", e.line()}, {"column", e.column()}, {"expected", e.expected()}});
    return GTL_ERR_PARSE;
  } catch (const gtl::Error& e) {
    set_error(to_status(e.code()), e.what());
    return to_status(e.code());
  } catch (const json::exception& e) {
    set_error(GTL_ERR_INPUT, std::string("invalid JSON value: ") + e.what());
    return GTL_ERR_INPUT;
  } catch (const std::bad_alloc&) {
    set_error(GTL_ERR_INTERNAL, "out of memory");
    return GTL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    set_error(GTL_ERR_INTERNAL, e.what());
    return GTL_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) gtl::fail(gtl::ErrorCode::Usage, std::string(what) + " must not be NULL");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json options(const char* text) {
  if (!text || !*text) return json::object();
  json j = gtl::io::parse_json(text);
  if (!j.is_object()) gtl::fail(gtl::ErrorCode::Input, "options must be a JSON object");
  return j;
}

template <class T>
T opt(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  const json& v = j.at(key);
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) gtl::fail(gtl::ErrorCode::Input, std::string("option ") + key + " must be a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) gtl::fail(gtl::ErrorCode::Input, std::string("option ") + key + " must be an integer");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) gtl::fail(gtl::ErrorCode::Input, std::string("option ") + key + " must be a number");
  } else {
    if (!v.is_string()) gtl::fail(gtl::ErrorCode::Input, std::string("option ") + key + " must be a string");
  }
  return v.get<T>();
}

json counters_json(const gtl::ProbCounters& c) {
  return {{"transition_evals", c.transition_evals},
          {"matrix_ops", c.matrix_ops},
          {"letter_dp_states", c.letter_dp_states},
          {"fallbacks", c.fallbacks}};
}

json ig_json(const gtl::PriorModel& prior, const gtl::InfoGainReport& r) {
  json nodes = json::array();
  for (std::size_t i = 0; i < r.nodes.size(); ++i)
    nodes.push_back({{"node", prior.graph().node_id(r.nodes[i])},
                     {"probability", r.probability[i]},
                     {"info_gain", r.info_gain[i]}});
  return {{"log_base", "e"},
          {"units", "nats per time step"},
          {"average", r.average},
          {"nodes", nodes},
          {"warnings", r.warnings},
          {"counters", counters_json(r.counters)}};
}

json point_json(const gtl::Point& p) {
  json j = json::array();
  for (double x : p) j.push_back(x);
  return j;
}

json identify_json(const gtl::PriorModel& prior, const gtl::TemplateResult& r) {
  json j;
  j["name"] = r.name;
  j["template"] = r.template_text;
  j["feasible"] = r.feasible;
  j["approximate"] = r.approximate;
  if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
  j["dims"] = r.dims;
  if (r.feasible) {
    j["formula"] = gtl::to_string(r.formula);
    j["theta"] = gtl::io::valuation_to_json(r.theta);
    j["omega"] = point_json(r.omega);
    j["coverage"] = r.coverage;
    j["average_ig"] = r.ig.average;
    j["ig"] = ig_json(prior, r.ig);
  }
  j["queries"] = r.queries;
  j["hausdorff"] = r.hausdorff;
  json front = json::array();
  for (const auto& m : r.front)
    front.push_back({{"omega", point_json(m.omega)},
                     {"theta", gtl::io::valuation_to_json(m.theta)},
                     {"coverage", m.coverage},
                     {"average_ig", m.average_ig}});
  j["front"] = front;
  json log = json::array();
  for (const auto& q : r.log)
    log.push_back({{"omega", point_json(q.omega)},
                   {"theta", gtl::io::valuation_to_json(q.theta)},
                   {"coverage", q.coverage},
                   {"satisfied", q.satisfied}});
  j["query_log"] = log;
  return j;
}

gtl::ProbOptions prob_options(const json& o) {
  gtl::ProbOptions p;
  p.state_cap = opt<std::size_t>(o, "state_cap", p.state_cap);
  return p;
}

gtl::GraphPtr graph_of(const gtl_graph* g) { return g ? g->g : nullptr; }

}  // namespace

extern "C" {

const char* gtl_version(void) { return GTL_VERSION_STRING; }

const char* gtl_status_name(gtl_status status) {
  switch (status) {
    case GTL_OK: return "ok";
    case GTL_ERR_INTERNAL: return "internal_error";
    default:
      if (status >= GTL_ERR_INPUT && status <= GTL_ERR_INFEASIBLE)
        return gtl::error_code_name(static_cast<gtl::ErrorCode>(status));
      return "unknown";
  }
}

const char* gtl_last_error(void) { return last_error.c_str(); }
const char* gtl_last_error_json(void) { return last_error_json.c_str(); }

void gtl_string_free(char* s) { std::free(s); }

gtl_status gtl_graph_from_json(const char* text, gtl_graph** out) {
  return guard([&] {
    require(text, "json");
    require(out, "out");
    *out = new gtl_graph{gtl::io::graph_from_json(gtl::io::parse_json(text))};
  });
}

gtl_status gtl_graph_load(const char* path, gtl_graph** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new gtl_graph{gtl::io::graph_from_json(gtl::io::read_json_file(path))};
  });
}

gtl_status gtl_graph_node_count(const gtl_graph* g, size_t* out) {
  return guard([&] {
    require(g, "graph");
    require(out, "out");
    *out = g->g->node_count();
  });
}

void gtl_graph_free(gtl_graph* g) { delete g; }

gtl_status gtl_trajset_from_json(const char* text, const char* base_dir, const gtl_graph* graph,
                                 gtl_trajset** out) {
  return guard([&] {
    require(text, "json");
    require(out, "out");
    *out = new gtl_trajset{gtl::io::trajectories_from_json(gtl::io::parse_json(text), graph_of(graph),
                                                           base_dir ? base_dir : ".")};
  });
}

gtl_status gtl_trajset_load(const char* path, const gtl_graph* graph, gtl_trajset** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new gtl_trajset{gtl::io::trajectories_from_json(gtl::io::read_json_file(path), graph_of(graph),
                                                           gtl::io::directory_of(path))};
  });
}

gtl_status gtl_trajset_size(const gtl_trajset* s, size_t* out) {
  return guard([&] {
    require(s, "trajectory set");
    require(out, "out");
    *out = s->s.size();
  });
}

gtl_status gtl_trajset_length(const gtl_trajset* s, int* out) {
  return guard([&] {
    require(s, "trajectory set");
    require(out, "out");
    *out = s->s.length();
  });
}

gtl_status gtl_trajset_to_json(const gtl_trajset* s, char** out) {
  return guard([&] {
    require(s, "trajectory set");
    require(out, "out");
    *out = dup(gtl::io::trajectories_to_json(s->s).dump(2));
  });
}

gtl_status gtl_trajset_concat(const gtl_trajset* a, const gtl_trajset* b, gtl_trajset** out) {
  return guard([&] {
    require(a, "first set");
    require(b, "second set");
    require(out, "out");
    gtl::TrajectorySet s = a->s;
    for (const auto& t : b->s.items) {
      if (s.graph && t.graph_ptr() != s.graph &&
          t.graph().node_ids() == s.graph->node_ids() && t.graph().edge_ids() == s.graph->edge_ids()) {
        std::vector<std::vector<double>> x(t.graph().node_count()), y(t.graph().edge_count());
        for (std::size_t v = 0; v < x.size(); ++v)
          for (int k = 1; k <= t.length(); ++k) x[v].push_back(t.x(static_cast<int>(v), k));
        for (std::size_t e = 0; e < y.size(); ++e)
          for (int k = 1; k <= t.length(); ++k) y[e].push_back(t.y(static_cast<int>(e), k));
        gtl::Trajectory copy(s.graph, t.length(), x, y);
        copy.label = t.label;
        s.add(std::move(copy));
      } else {
        s.add(t);
      }
    }
    if (!s.graph) s.graph = b->s.graph;
    *out = new gtl_trajset{std::move(s)};
  });
}

void gtl_trajset_free(gtl_trajset* s) { delete s; }

gtl_status gtl_prior_from_json(const char* text, const char* base_dir, const gtl_graph* graph, gtl_prior** out) {
  return guard([&] {
    require(text, "json");
    require(out, "out");
    *out = new gtl_prior{std::make_shared<const gtl::PriorModel>(
        gtl::io::prior_from_json(gtl::io::parse_json(text), graph_of(graph), base_dir ? base_dir : "."))};
  });
}

gtl_status gtl_prior_load(const char* path, const gtl_graph* graph, gtl_prior** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new gtl_prior{std::make_shared<const gtl::PriorModel>(gtl::io::prior_from_json(
        gtl::io::read_json_file(path), graph_of(graph), gtl::io::directory_of(path)))};
  });
}

gtl_status gtl_prior_to_json(const gtl_prior* p, char** out) {
  return guard([&] {
    require(p, "prior");
    require(out, "out");
    *out = dup(gtl::io::prior_to_json(*p->p).dump(2));
  });
}

void gtl_prior_free(gtl_prior* p) { delete p; }

gtl_status gtl_formula_parse(const char* text, gtl_formula** out) {
  return guard([&] {
    require(text, "text");
    require(out, "out");
    *out = new gtl_formula{gtl::parse_formula(text)};
  });
}

gtl_status gtl_formula_to_string(const gtl_formula* f, char** out) {
  return guard([&] {
    require(f, "formula");
    require(out, "out");
    *out = dup(gtl::to_string(f->f));
  });
}

gtl_status gtl_formula_instantiate(const gtl_formula* f, const char* valuation_json, gtl_formula** out) {
  return guard([&] {
    require(f, "formula");
    require(valuation_json, "valuation");
    require(out, "out");
    auto theta = gtl::io::valuation_from_json(gtl::io::parse_json(valuation_json));
    *out = new gtl_formula{gtl::instantiate(f->f, theta)};
  });
}

gtl_status gtl_formula_info(const gtl_formula* f, char** out) {
  return guard([&] {
    require(f, "formula");
    require(out, "out");
    json params = json::array();
    for (const auto& p : gtl::parameters(f->f))
      params.push_back({{"name", p.name},
                        {"integer", p.integer},
                        {"polarity", gtl::polarity_symbol(gtl::polarity(f->f, p.name))}});
    auto st = gtl::classify_subtype(f->f);
    json j;
    j["formula"] = gtl::to_string(f->f);
    j["parameters"] = params;
    j["size"] = gtl::formula_size(f->f);
    j["subtype"] = {{"type_I", st.typeI}, {"type_II", st.typeII}, {"cosafe", st.cosafe}, {"safe", st.safe}};
    *out = dup(j.dump(2));
  });
}

void gtl_formula_free(gtl_formula* f) { delete f; }

gtl_status gtl_sat(const gtl_trajset* s, size_t index, const gtl_formula* f, const char* node, int k, int* out) {
  return guard([&] {
    require(s, "trajectory set");
    require(f, "formula");
    require(node, "node");
    require(out, "out");
    if (index >= s->s.size()) gtl::fail(gtl::ErrorCode::Range, "trajectory index out of range");
    *out = gtl::sat(s->s.items[index], f->f, std::string(node), k) ? 1 : 0;
  });
}

gtl_status gtl_coverage(const gtl_trajset* s, const gtl_formula* f, int workers, double* out) {
  return guard([&] {
    require(s, "trajectory set");
    require(f, "formula");
    require(out, "out");
    *out = gtl::coverage(s->s, f->f, workers);
  });
}

gtl_status gtl_misclassification_rate(const gtl_trajset* s, const gtl_formula* f, int workers, double* out) {
  return guard([&] {
    require(s, "trajectory set");
    require(f, "formula");
    require(out, "out");
    *out = gtl::misclassification_rate(s->s, f->f, workers);
  });
}

gtl_status gtl_eval_report(const gtl_trajset* s, const gtl_formula* f, const char* options_json, char** out) {
  return guard([&] {
    require(s, "trajectory set");
    require(f, "formula");
    require(out, "out");
    json o = options(options_json);
    int workers = opt<int>(o, "workers", 1);
    int k = opt<int>(o, "k", 1);
    std::string node = opt<std::string>(o, "node", "");
    const auto& set = s->s;
    if (set.empty()) gtl::fail(gtl::ErrorCode::Usage, "evaluation needs a nonempty trajectory set");
    json j;
    j["formula"] = gtl::to_string(f->f);
    j["trajectories"] = set.size();
    j["coverage"] = gtl::coverage(set, f->f, workers);
    bool labeled = std::all_of(set.items.begin(), set.items.end(), [](const gtl::Trajectory& t) { return t.label.has_value(); });
    if (labeled) j["misclassification_rate"] = gtl::misclassification_rate(set, f->f, workers);
    json per = json::array();
    const auto& g = *set.graph;
    for (std::size_t i = 0; i < set.size(); ++i) {
      const auto& t = set.items[i];
      t.check_time(k);
      json row;
      row["index"] = i;
      if (t.label) row["label"] = *t.label;
      if (!node.empty()) {
        row["node"] = node;
        row["k"] = k;
        row["sat"] = gtl::sat(t, f->f, node, k);
      } else {
        gtl::SatTable tab = gtl::evaluate(t, f->f);
        json sat = json::array();
        for (std::size_t v = 0; v < g.node_count(); ++v)
          if (tab.value(static_cast<int>(v), k)) sat.push_back(g.node_id(static_cast<int>(v)));
        row["k"] = k;
        row["satisfied_nodes"] = sat;
        row["fraction"] = static_cast<double>(sat.size()) / static_cast<double>(g.node_count());
      }
      per.push_back(row);
    }
    j["per_trajectory"] = per;
    *out = dup(j.dump(2));
  });
}

gtl_status gtl_dfa_report(const gtl_formula* f, int horizon, char** out_json, char** out_dot) {
  return guard([&] {
    require(f, "formula");
    require(out_json, "out");
    auto a = gtl::to_dfa(f->f, horizon);
    json ap = json::array();
    for (const auto& p : a.ap) ap.push_back(gtl::to_string(p));
    json states = json::array();
    const auto& d = a.dfa;
    for (int q = 0; q < d.states; ++q) {
      json row = json::array();
      for (gtl::Letter l = 0; l < d.alphabet_size(); ++l) row.push_back(d.next(q, l));
      states.push_back({{"id", q},
                        {"accepting", static_cast<bool>(d.accepting[static_cast<std::size_t>(q)])},
                        {"obligation", d.state_labels[static_cast<std::size_t>(q)]},
                        {"next", row}});
    }
    json j;
    j["formula"] = gtl::to_string(f->f);
    j["horizon"] = horizon;
    j["decides"] = gtl::to_string(a.target);
    j["negated"] = a.negated;
    j["type_II"] = a.type_two;
    if (a.type_two) {
      json chain = json::array();
      for (const auto& e : a.outer_chain)
        chain.push_back(std::string("y ") + (e.cmp == gtl::Cmp::Le ? "<=" : ">=") + " " + gtl::format_number(e.threshold));
      j["outer"] = {{"count", a.outer_count}, {"chain", chain}};
    }
    j["predicates"] = ap;
    j["alphabet_size"] = d.alphabet_size();
    j["state_count"] = d.states;
    j["initial"] = d.initial;
    j["states"] = states;
    j["warnings"] = a.warnings;
    *out_json = dup(j.dump(2));
    if (out_dot) *out_dot = dup(gtl::to_dot(a));
  });
}

gtl_status gtl_ig_report(const gtl_prior* p, const gtl_formula* f, const char* options_json, char** out) {
  return guard([&] {
    require(p, "prior");
    require(f, "formula");
    require(out, "out");
    json o = options(options_json);
    std::vector<int> nodes;
    if (o.contains("nodes")) {
      if (!o.at("nodes").is_array()) gtl::fail(gtl::ErrorCode::Input, "option nodes must be an array of ids");
      for (const auto& n : o.at("nodes")) nodes.push_back(p->p->graph().node_index(n.get<std::string>()));
    }
    auto r = gtl::compute_ig(*p->p, f->f, nodes, prob_options(o), opt<int>(o, "workers", 1));
    json j;
    j["formula"] = gtl::to_string(f->f);
    j["horizon"] = p->p->length();
    json body = ig_json(*p->p, r);
    for (auto& [k, v] : body.items()) j[k] = v;
    *out = dup(j.dump(2));
  });
}

gtl_status gtl_probability(const gtl_prior* p, const gtl_formula* f, const char* node, double* out) {
  return guard([&] {
    require(p, "prior");
    require(f, "formula");
    require(node, "node");
    require(out, "out");
    *out = gtl::satisfaction_probability(*p->p, f->f, p->p->graph().node_index(node));
  });
}

gtl_status gtl_templates_builtin(const char* family, const gtl_trajset* data, const gtl_prior* prior,
                                 const char* options_json, char** out) {
  return guard([&] {
    require(family, "family");
    require(out, "out");
    std::string fam = family;
    gtl::TemplateFamily tf;
    if (fam == "I") tf = gtl::TemplateFamily::TypeI;
    else if (fam == "II") tf = gtl::TemplateFamily::TypeII;
    else if (fam == "all") tf = gtl::TemplateFamily::All;
    else gtl::fail(gtl::ErrorCode::Input, "template family must be I, II or all");
    json o = options(options_json);
    gtl::TemplateContext ctx;
    if (data) ctx = gtl::context_from(data->s);
    else if (prior) ctx = gtl::context_from(*prior->p);
    ctx.both_directions = opt<bool>(o, "both_directions", false);
    *out = dup(gtl::io::templates_to_json(gtl::builtin_templates(tf, ctx)).dump(2));
  });
}

gtl_status gtl_identify(const gtl_trajset* s, const gtl_prior* p, const char* templates_json,
                        const char* options_json, char** out) {
  return guard([&] {
    require(s, "trajectory set");
    require(p, "prior");
    require(templates_json, "templates");
    require(out, "out");
    json o = options(options_json);
    gtl::IdentifyOptions io;
    io.p_th = opt<double>(o, "p_th", io.p_th);
    io.eps = opt<double>(o, "eps", io.eps);
    io.budget = opt<int>(o, "budget", io.budget);
    io.workers = opt<int>(o, "workers", io.workers);
    io.prob = prob_options(o);
    auto templates = gtl::io::templates_from_json(gtl::io::parse_json(templates_json));
    auto results = gtl::identify(s->s, *p->p, templates, io);
    json items = json::array();
    for (const auto& r : results) items.push_back(identify_json(*p->p, r));
    json j;
    j["p_th"] = io.p_th;
    j["eps"] = io.eps;
    j["budget"] = io.budget;
    j["results"] = items;
    *out = dup(j.dump(2));
  });
}

gtl_status gtl_classify(const gtl_trajset* s, const char* templates_json, const char* options_json, char** out) {
  gtl_status st = guard([&] {
    require(s, "trajectory set");
    require(templates_json, "templates");
    require(out, "out");
    json o = options(options_json);
    gtl::ClassifyOptions co;
    co.m_th = opt<double>(o, "m_th", co.m_th);
    co.eta_th = opt<int>(o, "eta_th", co.eta_th);
    co.mhat_th = opt<double>(o, "mhat_th", co.mhat_th);
    co.joint_reoptimize = opt<bool>(o, "joint_reoptimize", co.joint_reoptimize);
    co.include_negations = opt<bool>(o, "include_negations", co.include_negations);
    co.pso.seed = opt<std::uint64_t>(o, "seed", co.pso.seed);
    co.pso.swarm = opt<int>(o, "swarm", co.pso.swarm);
    co.pso.iterations = opt<int>(o, "iterations", co.pso.iterations);
    co.pso.inertia = opt<double>(o, "inertia", co.pso.inertia);
    co.pso.cognitive = opt<double>(o, "cognitive", co.pso.cognitive);
    co.pso.social = opt<double>(o, "social", co.pso.social);
    co.pso.workers = opt<int>(o, "workers", co.pso.workers);
    co.pso.validate();
    auto templates = gtl::io::templates_from_json(gtl::io::parse_json(templates_json));
    auto r = gtl::infer_classifier(s->s, templates, co);
    json table = json::array();
    for (const auto& row : r.stage_one)
      table.push_back({{"name", row.name},
                       {"formula", row.formula},
                       {"theta", gtl::io::valuation_to_json(row.theta)},
                       {"mr", row.mr},
                       {"size", row.size},
                       {"kept", row.kept}});
    json j;
    j["success"] = r.success;
    if (r.formula) {
      j["formula"] = gtl::to_string(r.formula);
      j["theta"] = gtl::io::valuation_to_json(r.theta);
      j["train_mr"] = r.train_mr;
      j["size"] = r.size;
    }
    j["stage_one"] = table;
    j["log"] = r.log;
    *out = dup(j.dump(2));
    if (!r.success) gtl::fail(gtl::ErrorCode::Infeasible, "no formula met the misclassification threshold");
  });
  return st;
}

gtl_status gtl_gen_swarm(const char* options_json, gtl_trajset** out, char** stats_json) {
  return guard([&] {
    require(out, "out");
    json o = options(options_json);
    gtl::SwarmScenario sc;
    sc.rows = opt<int>(o, "rows", sc.rows);
    sc.cols = opt<int>(o, "cols", sc.cols);
    sc.horizon = opt<int>(o, "L", sc.horizon);
    sc.seed = opt<std::uint64_t>(o, "seed", sc.seed);
    sc.concentration = opt<double>(o, "concentration", sc.concentration);
    sc.smoothing = opt<double>(o, "smoothing", sc.smoothing);
    sc.max_proposals = opt<std::size_t>(o, "max_proposals", sc.max_proposals);
    sc.workers = opt<int>(o, "workers", sc.workers);
    long long n = opt<long long>(o, "n", 10);
    if (n < 0) gtl::fail(gtl::ErrorCode::Range, "n must be nonnegative");
    gtl::GenerationStats st;
    auto set = gtl::gen_swarm(sc, static_cast<std::size_t>(n), &st);
    *out = new gtl_trajset{std::move(set)};
    if (stats_json)
      *stats_json = dup(json{{"proposals", st.proposals},
                             {"accepted", st.accepted},
                             {"constraint", gtl::swarm_constraint_text()}}
                            .dump(2));
  });
}

gtl_status gtl_gen_planted(const gtl_formula* separator, const gtl_prior* p, const char* options_json,
                           gtl_trajset** out, char** stats_json) {
  return guard([&] {
    require(separator, "separator");
    require(p, "prior");
    require(out, "out");
    json o = options(options_json);
    gtl::PlantedOptions po;
    po.min_fraction = opt<double>(o, "min_fraction", po.min_fraction);
    po.walk_steps = opt<int>(o, "walk_steps", po.walk_steps);
    po.max_proposals = opt<std::size_t>(o, "max_proposals", po.max_proposals);
    long long npos = opt<long long>(o, "npos", 5), nneg = opt<long long>(o, "nneg", 5);
    if (npos < 0 || nneg < 0) gtl::fail(gtl::ErrorCode::Range, "class sizes must be nonnegative");
    gtl::GenerationStats st;
    auto set = gtl::gen_planted(separator->f, *p->p, static_cast<std::size_t>(npos), static_cast<std::size_t>(nneg),
                                opt<std::uint64_t>(o, "seed", 7), po, &st);
    *out = new gtl_trajset{std::move(set)};
    if (stats_json) *stats_json = dup(json{{"proposals", st.proposals}, {"accepted", st.accepted}}.dump(2));
  });
}

gtl_status gtl_gen_prior_sample(const gtl_prior* p, size_t n, uint64_t seed, gtl_trajset** out) {
  return guard([&] {
    require(p, "prior");
    require(out, "out");
    *out = new gtl_trajset{gtl::sample_prior(*p->p, n, seed)};
  });
}

}  // extern "C"
