#ifndef GTL_GTL_H
#define GTL_GTL_H

#include <stddef.h>
#include <stdint.h>

#if defined(GTL_BUILDING_LIBRARY)
#define GTL_API __attribute__((visibility("default")))
#else
#define GTL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gtl_status {
  GTL_OK = 0,
  GTL_ERR_INPUT = 1,
  GTL_ERR_PARSE = 2,
  GTL_ERR_RANGE = 3,
  GTL_ERR_USAGE = 4,
  GTL_ERR_SCOPE = 5,
  GTL_ERR_INFEASIBLE = 6,
  GTL_ERR_INTERNAL = 7
} gtl_status;

typedef struct gtl_graph gtl_graph;
typedef struct gtl_trajset gtl_trajset;
typedef struct gtl_prior gtl_prior;
typedef struct gtl_formula gtl_formula;

GTL_API const char* gtl_version(void);
GTL_API const char* gtl_status_name(gtl_status status);

/* Message of the last failed call on this thread ("" after success). */
GTL_API const char* gtl_last_error(void);
/* Same error as a JSON object {"code", "message"[, "line", "column", "expected"]}. */
GTL_API const char* gtl_last_error_json(void);

/* Frees strings returned through char** out-parameters. */
GTL_API void gtl_string_free(char* s);

/* Graphs */
GTL_API gtl_status gtl_graph_from_json(const char* json, gtl_graph** out);
GTL_API gtl_status gtl_graph_load(const char* path, gtl_graph** out);
GTL_API gtl_status gtl_graph_node_count(const gtl_graph* g, size_t* out);
GTL_API void gtl_graph_free(gtl_graph* g);

/* Trajectory sets. `graph` may be NULL when the input names its graph. */
GTL_API gtl_status gtl_trajset_from_json(const char* json, const char* base_dir, const gtl_graph* graph,
                                         gtl_trajset** out);
GTL_API gtl_status gtl_trajset_load(const char* path, const gtl_graph* graph, gtl_trajset** out);
GTL_API gtl_status gtl_trajset_size(const gtl_trajset* s, size_t* out);
GTL_API gtl_status gtl_trajset_length(const gtl_trajset* s, int* out);
GTL_API gtl_status gtl_trajset_to_json(const gtl_trajset* s, char** out);
/* New set with the items of `a` followed by those of `b` (same graph). */
GTL_API gtl_status gtl_trajset_concat(const gtl_trajset* a, const gtl_trajset* b, gtl_trajset** out);
GTL_API void gtl_trajset_free(gtl_trajset* s);

/* Priors */
GTL_API gtl_status gtl_prior_from_json(const char* json, const char* base_dir, const gtl_graph* graph,
                                       gtl_prior** out);
GTL_API gtl_status gtl_prior_load(const char* path, const gtl_graph* graph, gtl_prior** out);
GTL_API gtl_status gtl_prior_to_json(const gtl_prior* p, char** out);
GTL_API void gtl_prior_free(gtl_prior* p);

/* Formulas */
GTL_API gtl_status gtl_formula_parse(const char* text, gtl_formula** out);
GTL_API gtl_status gtl_formula_to_string(const gtl_formula* f, char** out);
/* valuation_json: {"name": value, ...} */
GTL_API gtl_status gtl_formula_instantiate(const gtl_formula* f, const char* valuation_json, gtl_formula** out);
/* {"formula", "parameters": [{"name", "integer", "polarity"}], "size", "subtype": {...}} */
GTL_API gtl_status gtl_formula_info(const gtl_formula* f, char** out);
GTL_API void gtl_formula_free(gtl_formula* f);

/* Evaluation */
GTL_API gtl_status gtl_sat(const gtl_trajset* s, size_t index, const gtl_formula* f, const char* node, int k,
                           int* out);
GTL_API gtl_status gtl_coverage(const gtl_trajset* s, const gtl_formula* f, int workers, double* out);
GTL_API gtl_status gtl_misclassification_rate(const gtl_trajset* s, const gtl_formula* f, int workers,
                                              double* out);
/* Report with coverage, per-trajectory satisfied nodes and, when labeled, MR.
   options_json keys: "node" (string), "k" (int, default 1), "workers" (int). */
GTL_API gtl_status gtl_eval_report(const gtl_trajset* s, const gtl_formula* f, const char* options_json,
                                   char** out);

/* Automaton report {"states", "alphabet", "accepting", "transitions", ...}; dot may be NULL. */
GTL_API gtl_status gtl_dfa_report(const gtl_formula* f, int horizon, char** out_json, char** out_dot);

/* Information gain. options_json keys: "nodes" (array of ids), "workers", "state_cap". */
GTL_API gtl_status gtl_ig_report(const gtl_prior* p, const gtl_formula* f, const char* options_json, char** out);
GTL_API gtl_status gtl_probability(const gtl_prior* p, const gtl_formula* f, const char* node, double* out);

/* Templates. family: "I", "II" or "all". Boxes come from `data` when given,
   else from `prior`. options_json keys: "both_directions" (bool). */
GTL_API gtl_status gtl_templates_builtin(const char* family, const gtl_trajset* data, const gtl_prior* prior,
                                         const char* options_json, char** out);

/* Identification. templates_json as accepted by the template file format.
   options_json keys: "p_th", "eps", "budget", "workers", "state_cap". */
GTL_API gtl_status gtl_identify(const gtl_trajset* s, const gtl_prior* p, const char* templates_json,
                                const char* options_json, char** out);

/* Classification. options_json keys: "m_th", "eta_th", "mhat_th", "seed",
   "swarm", "iterations", "inertia", "cognitive", "social", "workers",
   "joint_reoptimize", "include_negations". Infeasible when unsuccessful;
   the report is still written. */
GTL_API gtl_status gtl_classify(const gtl_trajset* s, const char* templates_json, const char* options_json,
                                char** out);

/* Generators. options_json keys for swarm: "n", "L", "rows", "cols", "seed",
   "concentration", "smoothing", "max_proposals", "workers". */
GTL_API gtl_status gtl_gen_swarm(const char* options_json, gtl_trajset** out, char** stats_json);
/* options_json keys: "npos", "nneg", "seed", "min_fraction", "walk_steps", "max_proposals". */
GTL_API gtl_status gtl_gen_planted(const gtl_formula* separator, const gtl_prior* p, const char* options_json,
                                   gtl_trajset** out, char** stats_json);
GTL_API gtl_status gtl_gen_prior_sample(const gtl_prior* p, size_t n, uint64_t seed, gtl_trajset** out);

#ifdef __cplusplus
}
#endif

#endif
