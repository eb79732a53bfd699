#pragma once

#include <cstdint>
#include <string>

#include "gtl/formula.hpp"
#include "gtl/graph.hpp"
#include "gtl/prob.hpp"

namespace gtl {

/// n independent draws from the prior: a bin from the pmf, then a uniform
/// value inside it. Edge labels are the prior's static labels.
TrajectorySet sample_prior(const PriorModel& prior, std::size_t n, std::uint64_t seed);

struct SwarmScenario {
  int rows = 3;
  int cols = 3;
  int horizon = 12;
  std::uint64_t seed = 7;
  double concentration = 0.25;  // Dirichlet parameter of each proposal step
  double smoothing = 0.5;       // weight of the fresh Dirichlet draw per step
  std::size_t max_proposals = 1000000;
  int workers = 1;

  void validate() const;
};

/// Complete graph over a rows x cols grid of cells; edge labels are the
/// Euclidean distances between cell centers.
GraphPtr swarm_graph(int rows, int cols);

/// Density constraint every generated trajectory satisfies at every node.
const std::string& swarm_constraint_text();
Formula swarm_constraint();

struct GenerationStats {
  std::size_t proposals = 0;
  std::size_t accepted = 0;
};

/// Rejection sampling of density trajectories (per-step densities sum to 1)
/// satisfying the swarm constraint at every node. Throws an Infeasible error
/// when the acceptance rate stays below 0.1% or the proposal cap is hit.
TrajectorySet gen_swarm(const SwarmScenario& scenario, std::size_t n, GenerationStats* stats = nullptr);

struct PlantedOptions {
  double min_fraction = 0.95;        // nodes agreeing with the class label
  int walk_steps = 4000;             // resampling moves per proposal
  std::size_t max_proposals = 1000000;
};

/// Labeled set from the prior: label +1 trajectories satisfy the separator
/// at >= min_fraction of nodes, label -1 ones violate it there. Positives
/// come first. Throws an Infeasible error when a class cannot be produced.
TrajectorySet gen_planted(const Formula& separator, const PriorModel& prior, std::size_t n_pos,
                          std::size_t n_neg, std::uint64_t seed, const PlantedOptions& opt = {},
                          GenerationStats* stats = nullptr);

}  // namespace gtl
