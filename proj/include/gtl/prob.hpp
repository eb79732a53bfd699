#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gtl/automata.hpp"
#include "gtl/formula.hpp"
#include "gtl/graph.hpp"

namespace gtl {

struct Bin {
  double lo = 0.0;
  double hi = 0.0;
};

/// Independent per-(node, time) label distributions over a common list of
/// bins; labels are uniform within a bin. Edge labels are fixed.
class PriorModel {
 public:
  /// pmf[v][k-1] is the bin distribution of node v at time k.
  PriorModel(GraphPtr graph, int length, std::vector<Bin> bins,
             std::vector<std::vector<std::vector<double>>> pmf, std::vector<double> edge_labels);

  const LabeledGraph& graph() const { return *graph_; }
  const GraphPtr& graph_ptr() const { return graph_; }
  int length() const { return length_; }
  const std::vector<Bin>& bins() const { return bins_; }
  const std::vector<double>& pmf(int v, int k) const {
    return pmf_[static_cast<std::size_t>(v)][static_cast<std::size_t>(k - 1)];
  }
  const std::vector<double>& edge_labels() const { return edge_labels_; }

  /// Every bin carries positive mass at every (node, time).
  bool full_support() const;

 private:
  GraphPtr graph_;
  int length_;
  std::vector<Bin> bins_;
  std::vector<std::vector<std::vector<double>>> pmf_;
  std::vector<double> edge_labels_;
};

/// Fraction of the bin inside the proposition's satisfying set.
double bin_fraction(const Bin& bin, const NodeProposition& p);

double atom_probability(const PriorModel& prior, const NodeProposition& p, int v, int k);

/// Probability that at least n of the nodes reached from v (static edges)
/// satisfy p at time k.
double exists_probability(const PriorModel& prior, long long n,
                          const std::vector<EdgeProposition>& chain, const NodeProposition& p,
                          int v, int k);

/// Probability that at least n of independent events with the given
/// probabilities occur.
double poisson_binomial_tail(const std::vector<double>& probs, long long n);

struct ProbOptions {
  std::size_t state_cap = 1000000;  // joint letter DP states before falling back
};

struct ProbCounters {
  std::uint64_t transition_evals = 0;  // (state, letter) pairs folded into step matrices
  std::uint64_t matrix_ops = 0;        // multiply-adds of the backward recursion
  std::uint64_t letter_dp_states = 0;
  std::uint64_t fallbacks = 0;         // independence fallbacks taken
};

/// Joint distribution over letters (bitmasks over `ap`) at (v, k).
std::vector<double> letter_distribution(const PriorModel& prior,
                                        const std::vector<AtomicPredicate>& ap, int v, int k,
                                        const ProbOptions& opt = {}, ProbCounters* counters = nullptr,
                                        std::vector<std::string>* warnings = nullptr);

/// Probability of acceptance of `dfa` on a random word at node v, by backward
/// recursion over time indices L..1.
double acceptance_probability(const PriorModel& prior, const FormulaAutomaton& a, int v,
                              const ProbOptions& opt = {}, ProbCounters* counters = nullptr,
                              std::vector<std::string>* warnings = nullptr);

/// Reusable per-formula state for probability queries.
class SatisfactionModel {
 public:
  SatisfactionModel(const PriorModel& prior, const Formula& f, ProbOptions opt = {});

  double probability(int v);
  const ProbCounters& counters() const { return counters_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  /// Number of automaton states (0 for TRUE/FALSE shortcuts).
  int automaton_states() const { return automaton_ ? automaton_->dfa.states : 0; }

 private:
  double body_probability(int u);

  const PriorModel& prior_;
  Formula f_;
  ProbOptions opt_;
  std::optional<FormulaAutomaton> automaton_;
  std::optional<double> constant_;
  std::map<int, double> body_cache_;
  ProbCounters counters_;
  std::vector<std::string> warnings_;
};

double satisfaction_probability(const PriorModel& prior, const Formula& f, int v,
                                const ProbOptions& opt = {}, ProbCounters* counters = nullptr);

struct InfoGainReport {
  std::vector<int> nodes;
  std::vector<double> probability;
  std::vector<double> info_gain;  // nats per time step
  double average = 0.0;
  std::vector<std::string> warnings;
  ProbCounters counters;
};

/// Information gain -ln(P)/L per node (0 when P is 0), averaged over `nodes`
/// (all nodes when empty).
InfoGainReport compute_ig(const PriorModel& prior, const Formula& f,
                          const std::vector<int>& nodes = {}, const ProbOptions& opt = {},
                          int workers = 1);

/// Prior fitted from trajectories: per-(node, time) bin frequencies with
/// additive smoothing, edge labels taken from time 1 of the first trajectory.
PriorModel estimate_prior(const TrajectorySet& s, std::vector<Bin> bins, double smoothing = 1.0);

}  // namespace gtl
