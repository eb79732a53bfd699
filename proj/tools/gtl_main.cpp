#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "gtl/gtl.h"

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct Failure {
  gtl_status status;
};

void check(gtl_status st) {
  if (st != GTL_OK) throw Failure{st};
}

/// Owns a string returned by the library.
struct LibString {
  char* p = nullptr;
  ~LibString() { gtl_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
};
using Graph = Handle<gtl_graph, gtl_graph_free>;
using TrajSet = Handle<gtl_trajset, gtl_trajset_free>;
using Prior = Handle<gtl_prior, gtl_prior_free>;
using FormulaH = Handle<gtl_formula, gtl_formula_free>;

struct Global {
  std::string format = "json";
  int workers = 1;
  bool no_timings = false;
  std::string out;
  std::optional<std::uint64_t> seed;
};

std::uint64_t resolve_seed(const Global& g) {
  if (g.seed) return *g.seed;
  if (const char* env = std::getenv("GTL_SEED")) {
    try {
      std::size_t pos = 0;
      unsigned long long v = std::stoull(env, &pos);
      if (pos == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring GTL_SEED='" << env << "' (not an unsigned integer)\n";
  }
  return 7;
}

void render_text(std::ostream& os, const json& j, int indent) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.value().is_structured() && !it.value().empty()) {
        os << pad << it.key() << ":\n";
        render_text(os, it.value(), indent + 1);
      } else {
        os << pad << it.key() << ": " << (it.value().is_string() ? it.value().get<std::string>() : it.value().dump())
           << "\n";
      }
    }
  } else if (j.is_array()) {
    bool flat = std::all_of(j.begin(), j.end(), [](const json& x) { return x.is_primitive(); });
    if (flat) {
      os << pad << j.dump() << "\n";
      return;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
      os << pad << "- [" << i << "]\n";
      render_text(os, j[i], indent + 1);
    }
  } else {
    os << pad << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

void emit(const Global& g, const json& report) {
  std::ostringstream ss;
  if (g.format == "text") render_text(ss, report, 0);
  else ss << report.dump(2) << "\n";
  if (g.out.empty()) {
    std::cout << ss.str();
    return;
  }
  std::ofstream f(g.out);
  if (!f) {
    std::cerr << "error [input_error]: cannot write '" << g.out << "'\n";
    throw Failure{GTL_ERR_INPUT};
  }
  f << ss.str();
}

void write_data(const std::string& path, const std::string& data) {
  if (path.empty()) {
    std::cout << data << "\n";
    return;
  }
  std::ofstream f(path);
  if (!f) {
    std::cerr << "error [input_error]: cannot write '" << path << "'\n";
    throw Failure{GTL_ERR_INPUT};
  }
  f << data << "\n";
}

class Report {
 public:
  Report(Global g, std::string command) : g_(std::move(g)), start_(Clock::now()) {
    j_["tool"] = "gtl";
    j_["version"] = gtl_version();
    j_["command"] = std::move(command);
  }
  json& config() { return j_["config"]; }
  void mark(const std::string& phase) {
    auto now = Clock::now();
    phases_[phase] = std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
  }
  void finish(json result) {
    j_["result"] = std::move(result);
    if (!g_.no_timings) {
      json t = phases_;
      t["total_ms"] = std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
      j_["timings"] = t;
    } else {
      strip_counters(j_["result"]);
    }
    emit(g_, j_);
  }

 private:
  static void strip_counters(json& j) {
    if (j.is_object()) {
      j.erase("counters");
      for (auto& [k, v] : j.items()) strip_counters(v);
    } else if (j.is_array()) {
      for (auto& v : j) strip_counters(v);
    }
  }
  Global g_;
  json j_;
  json phases_ = json::object();
  Clock::time_point start_;
  Clock::time_point last_ = Clock::now();
};

void load_graph(const std::string& path, Graph& g) {
  if (!path.empty()) check(gtl_graph_load(path.c_str(), &g.p));
}

bool is_builtin(const std::string& spec) { return spec.rfind("builtin:", 0) == 0; }

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    std::cerr << "error [input_error]: cannot open '" << path << "'\n";
    throw Failure{GTL_ERR_INPUT};
  }
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string templates_text(const std::string& spec, const gtl_trajset* data, const gtl_prior* prior,
                           bool both_directions) {
  if (!is_builtin(spec)) return read_file(spec);
  LibString s;
  json o{{"both_directions", both_directions}};
  check(gtl_templates_builtin(spec.substr(8).c_str(), data, prior, o.dump().c_str(), &s.p));
  return s.str();
}

int exit_code(gtl_status st) {
  if (st == GTL_OK) return 0;
  if (st == GTL_ERR_INFEASIBLE) return 2;
  return 1;
}

void report_error(const Global& g, gtl_status st) {
  if (g.format == "json") {
    json e = json::parse(gtl_last_error_json(), nullptr, false);
    if (e.is_discarded() || e.empty()) e = {{"code", gtl_status_name(st)}, {"message", gtl_last_error()}};
    std::cerr << json{{"error", e}}.dump(2) << "\n";
  } else {
    std::cerr << "error [" << gtl_status_name(st) << "]: " << gtl_last_error() << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph temporal logic inference toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  std::uint64_t seed_value = 0;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--workers", g.workers, "Worker threads")->check(CLI::Range(1, 1024));
  app.add_flag("--no-timings", g.no_timings, "Omit timings and operation counters from reports");
  app.add_option("--out", g.out, "Output path (default: stdout)");
  auto* seed_opt = app.add_option("--seed", seed_value, "RNG seed (falls back to GTL_SEED, then 7)");
  app.add_flag_callback("--version", [] {
    std::cout << "gtl " << gtl_version() << "\n";
    std::exit(0);
  }, "Print the version");

  std::string trajectories, formula, graph_path, prior_path, node, templates_spec, nodes_csv, dot_path;
  int k = 1, horizon = 0, budget = 500, eta = 3, swarm = 40, iterations = 100;
  double pth = 0.98, eps = 0.05, mth = 0.02, mhat = 0.1;
  long long state_cap = 1000000;
  bool both_directions = false, frozen_growth = false, no_negations = false;

  auto* eval = app.add_subcommand("eval", "Evaluate a formula on trajectories");
  eval->add_option("--trajectories", trajectories, "Trajectory JSON")->required();
  eval->add_option("--formula", formula, "Formula text")->required();
  eval->add_option("--graph", graph_path, "Graph JSON for trajectories without one");
  eval->add_option("--node", node, "Report satisfaction at one node only");
  eval->add_option("--k", k, "Time index")->check(CLI::PositiveNumber);

  auto* dfa = app.add_subcommand("dfa", "Build the automaton of a formula");
  dfa->add_option("--formula", formula, "Formula text")->required();
  dfa->add_option("--L", horizon, "Horizon")->required()->check(CLI::PositiveNumber);
  dfa->add_option("--dot", dot_path, "Also write Graphviz DOT here");

  auto* ig = app.add_subcommand("ig", "Information gain of a formula under a prior");
  ig->add_option("--prior", prior_path, "Prior JSON")->required();
  ig->add_option("--formula", formula, "Formula text")->required();
  ig->add_option("--graph", graph_path, "Graph JSON");
  ig->add_option("--nodes", nodes_csv, "Comma-separated node ids (default: all)");
  ig->add_option("--state-cap", state_cap, "Joint letter DP state cap")->check(CLI::PositiveNumber);

  auto* identify = app.add_subcommand("identify", "Information-guided parameter identification");
  identify->add_option("--trajectories", trajectories, "Trajectory JSON")->required();
  identify->add_option("--prior", prior_path, "Prior JSON")->required();
  identify->add_option("--templates", templates_spec, "Template JSON or builtin:I|II|all")->required();
  identify->add_option("--graph", graph_path, "Graph JSON");
  identify->add_option("--pth", pth, "Coverage threshold")->check(CLI::Range(0.0, 1.0));
  identify->add_option("--eps", eps, "Hausdorff tolerance")->check(CLI::Range(0.0, 1.0));
  identify->add_option("--budget", budget, "Coverage query budget per template")->check(CLI::PositiveNumber);
  identify->add_option("--state-cap", state_cap, "Joint letter DP state cap")->check(CLI::PositiveNumber);
  identify->add_flag("--both-directions", both_directions, "Built-in templates in both comparison directions");

  auto* classify = app.add_subcommand("classify", "Infer a classifying formula from labeled trajectories");
  classify->add_option("--trajectories", trajectories, "Labeled trajectory JSON")->required();
  classify->add_option("--templates", templates_spec, "Template JSON or builtin:I|II|all")->required();
  classify->add_option("--graph", graph_path, "Graph JSON");
  classify->add_option("--mth", mth, "Misclassification threshold")->check(CLI::Range(0.0, 1.0));
  classify->add_option("--eta", eta, "Formula size threshold")->check(CLI::PositiveNumber);
  classify->add_option("--mhat", mhat, "Pruning threshold")->check(CLI::Range(0.0, 1.0));
  classify->add_option("--swarm", swarm, "PSO swarm size")->check(CLI::Range(2, 100000));
  classify->add_option("--iterations", iterations, "PSO iterations")->check(CLI::Range(1, 1000000));
  classify->add_flag("--frozen-growth", frozen_growth, "Keep stage-1 parameters when combining");
  classify->add_flag("--no-negations", no_negations, "Do not add negated templates to the pool");
  classify->add_flag("--both-directions", both_directions, "Built-in templates in both comparison directions");

  auto* gen = app.add_subcommand("gen", "Generate trajectories");
  gen->require_subcommand(1);
  long long n = 10, npos = 5, nneg = 5;
  int rows = 3, cols = 3;
  double concentration = 0.25, smoothing = 0.5;
  auto* gswarm = gen->add_subcommand("swarm", "Swarm density trajectories satisfying the density constraint");
  gswarm->add_option("--n", n, "Number of trajectories")->check(CLI::NonNegativeNumber);
  gswarm->add_option("--L", horizon, "Horizon")->check(CLI::PositiveNumber);
  gswarm->add_option("--rows", rows, "Grid rows")->check(CLI::PositiveNumber);
  gswarm->add_option("--cols", cols, "Grid columns")->check(CLI::PositiveNumber);
  gswarm->add_option("--concentration", concentration, "Dirichlet concentration");
  gswarm->add_option("--smoothing", smoothing, "Temporal smoothing weight");
  auto* gplanted = gen->add_subcommand("planted", "Labeled trajectories separated by a formula");
  gplanted->add_option("--formula", formula, "Separator formula")->required();
  gplanted->add_option("--prior", prior_path, "Prior JSON")->required();
  gplanted->add_option("--graph", graph_path, "Graph JSON");
  gplanted->add_option("--npos", npos, "Positive trajectories")->check(CLI::NonNegativeNumber);
  gplanted->add_option("--nneg", nneg, "Negative trajectories")->check(CLI::NonNegativeNumber);
  auto* gsample = gen->add_subcommand("prior-sample", "Draw trajectories from a prior");
  gsample->add_option("--prior", prior_path, "Prior JSON")->required();
  gsample->add_option("--graph", graph_path, "Graph JSON");
  gsample->add_option("--n", n, "Number of trajectories")->check(CLI::NonNegativeNumber);

  auto* templates = app.add_subcommand("templates", "Print the built-in template library");
  std::string family = "all";
  templates->add_option("--family", family, "I, II or all")->check(CLI::IsMember({"I", "II", "all"}));
  templates->add_option("--trajectories", trajectories, "Size boxes from these trajectories");
  templates->add_option("--prior", prior_path, "Size boxes from this prior");
  templates->add_option("--graph", graph_path, "Graph JSON");
  templates->add_flag("--both-directions", both_directions, "Add mirrored comparison directions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  if (seed_opt->count() > 0) g.seed = seed_value;
  const std::uint64_t seed = resolve_seed(g);

  try {
    if (*eval) {
      Report r(g, "eval");
      r.config() = {{"trajectories", trajectories}, {"formula", formula}, {"graph", graph_path},
                    {"k", k}, {"workers", g.workers}};
      if (!node.empty()) r.config()["node"] = node;
      Graph gr;
      TrajSet ts;
      FormulaH f;
      load_graph(graph_path, gr);
      check(gtl_trajset_load(trajectories.c_str(), gr.p, &ts.p));
      check(gtl_formula_parse(formula.c_str(), &f.p));
      r.mark("load_ms");
      json o{{"k", k}, {"workers", g.workers}};
      if (!node.empty()) o["node"] = node;
      LibString s;
      check(gtl_eval_report(ts.p, f.p, o.dump().c_str(), &s.p));
      r.mark("run_ms");
      r.finish(json::parse(s.str()));
    } else if (*dfa) {
      Report r(g, "dfa");
      r.config() = {{"formula", formula}, {"L", horizon}};
      FormulaH f;
      check(gtl_formula_parse(formula.c_str(), &f.p));
      LibString s, dot;
      check(gtl_dfa_report(f.p, horizon, &s.p, dot_path.empty() ? nullptr : &dot.p));
      r.mark("run_ms");
      if (!dot_path.empty()) write_data(dot_path, dot.str());
      r.finish(json::parse(s.str()));
    } else if (*ig) {
      Report r(g, "ig");
      r.config() = {{"prior", prior_path}, {"formula", formula}, {"graph", graph_path},
                    {"state_cap", state_cap}, {"workers", g.workers}};
      Graph gr;
      Prior p;
      FormulaH f;
      load_graph(graph_path, gr);
      check(gtl_prior_load(prior_path.c_str(), gr.p, &p.p));
      check(gtl_formula_parse(formula.c_str(), &f.p));
      r.mark("load_ms");
      json o{{"workers", g.workers}, {"state_cap", state_cap}};
      if (!nodes_csv.empty()) {
        json ids = json::array();
        std::stringstream ss(nodes_csv);
        for (std::string id; std::getline(ss, id, ',');)
          if (!id.empty()) ids.push_back(id);
        o["nodes"] = ids;
        r.config()["nodes"] = ids;
      }
      LibString s;
      check(gtl_ig_report(p.p, f.p, o.dump().c_str(), &s.p));
      r.mark("run_ms");
      r.finish(json::parse(s.str()));
    } else if (*identify) {
      Report r(g, "identify");
      r.config() = {{"trajectories", trajectories}, {"prior", prior_path}, {"templates", templates_spec},
                    {"graph", graph_path}, {"p_th", pth}, {"eps", eps}, {"budget", budget},
                    {"state_cap", state_cap}, {"seed", seed}, {"workers", g.workers},
                    {"both_directions", both_directions}};
      Graph gr;
      TrajSet ts;
      Prior p;
      load_graph(graph_path, gr);
      check(gtl_trajset_load(trajectories.c_str(), gr.p, &ts.p));
      check(gtl_prior_load(prior_path.c_str(), gr.p, &p.p));
      std::string tt = templates_text(templates_spec, ts.p, p.p, both_directions);
      r.mark("load_ms");
      json o{{"p_th", pth}, {"eps", eps}, {"budget", budget}, {"workers", g.workers}, {"state_cap", state_cap}};
      LibString s;
      check(gtl_identify(ts.p, p.p, tt.c_str(), o.dump().c_str(), &s.p));
      r.mark("run_ms");
      json result = json::parse(s.str());
      bool any = false;
      for (const auto& item : result["results"]) any = any || item["feasible"].get<bool>();
      r.finish(result);
      if (!any) {
        std::cerr << "no template meets the coverage threshold\n";
        return 2;
      }
    } else if (*classify) {
      Report r(g, "classify");
      r.config() = {{"trajectories", trajectories}, {"templates", templates_spec}, {"graph", graph_path},
                    {"m_th", mth}, {"eta_th", eta}, {"mhat_th", mhat}, {"seed", seed},
                    {"swarm", swarm}, {"iterations", iterations}, {"joint_reoptimize", !frozen_growth},
                    {"include_negations", !no_negations}, {"workers", g.workers}};
      Graph gr;
      TrajSet ts;
      load_graph(graph_path, gr);
      check(gtl_trajset_load(trajectories.c_str(), gr.p, &ts.p));
      std::string tt = templates_text(templates_spec, ts.p, nullptr, both_directions);
      r.mark("load_ms");
      json o{{"m_th", mth}, {"eta_th", eta}, {"mhat_th", mhat}, {"seed", seed}, {"swarm", swarm},
             {"iterations", iterations}, {"joint_reoptimize", !frozen_growth},
             {"include_negations", !no_negations}, {"workers", g.workers}};
      LibString s;
      gtl_status st = gtl_classify(ts.p, tt.c_str(), o.dump().c_str(), &s.p);
      r.mark("run_ms");
      if (st != GTL_OK && st != GTL_ERR_INFEASIBLE) throw Failure{st};
      r.finish(json::parse(s.str()));
      if (st == GTL_ERR_INFEASIBLE) {
        report_error(g, st);
        return 2;
      }
    } else if (*gen) {
      Global summary_to_stdout = g;
      summary_to_stdout.out.clear();
      Report r(summary_to_stdout, std::string("gen ") + (*gswarm ? "swarm" : *gplanted ? "planted" : "prior-sample"));
      json result;
      TrajSet ts;
      if (*gswarm) {
        json o{{"n", n}, {"L", horizon > 0 ? horizon : 12}, {"rows", rows}, {"cols", cols}, {"seed", seed},
               {"concentration", concentration}, {"smoothing", smoothing}, {"workers", g.workers}};
        r.config() = o;
        LibString stats;
        check(gtl_gen_swarm(o.dump().c_str(), &ts.p, &stats.p));
        result = json::parse(stats.str());
      } else if (*gplanted) {
        Graph gr;
        Prior p;
        FormulaH f;
        load_graph(graph_path, gr);
        check(gtl_prior_load(prior_path.c_str(), gr.p, &p.p));
        check(gtl_formula_parse(formula.c_str(), &f.p));
        json o{{"npos", npos}, {"nneg", nneg}, {"seed", seed}};
        r.config() = o;
        r.config()["formula"] = formula;
        r.config()["prior"] = prior_path;
        LibString stats;
        check(gtl_gen_planted(f.p, p.p, o.dump().c_str(), &ts.p, &stats.p));
        result = json::parse(stats.str());
      } else {
        Graph gr;
        Prior p;
        load_graph(graph_path, gr);
        check(gtl_prior_load(prior_path.c_str(), gr.p, &p.p));
        r.config() = {{"prior", prior_path}, {"n", n}, {"seed", seed}};
        check(gtl_gen_prior_sample(p.p, static_cast<std::size_t>(n), seed, &ts.p));
      }
      r.mark("run_ms");
      LibString s;
      check(gtl_trajset_to_json(ts.p, &s.p));
      if (g.out.empty()) {
        write_data("", s.str());
      } else {
        write_data(g.out, s.str());
        size_t count = 0;
        check(gtl_trajset_size(ts.p, &count));
        result["trajectories"] = count;
        result["written_to"] = g.out;
        r.finish(result);
      }
    } else if (*templates) {
      Graph gr;
      TrajSet ts;
      Prior p;
      load_graph(graph_path, gr);
      if (!trajectories.empty()) check(gtl_trajset_load(trajectories.c_str(), gr.p, &ts.p));
      if (!prior_path.empty()) check(gtl_prior_load(prior_path.c_str(), gr.p, &p.p));
      if (!ts.p && !p.p) {
        std::cerr << "error [usage_error]: templates needs --trajectories or --prior to size the boxes\n";
        return 1;
      }
      std::string tt = templates_text("builtin:" + family, ts.p, p.p, both_directions);
      write_data(g.out, tt);
    }
  } catch (const Failure& f) {
    report_error(g, f.status);
    return exit_code(f.status);
  } catch (const json::exception& e) {
    std::cerr << "error [internal_error]: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
