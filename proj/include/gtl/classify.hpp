#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gtl/formula.hpp"
#include "gtl/graph.hpp"
#include "gtl/templates.hpp"

namespace gtl {

struct PsoConfig {
  int swarm = 40;
  int iterations = 100;
  double inertia = 0.7;
  double cognitive = 1.5;
  double social = 1.5;
  double velocity_clamp = 0.5;  // fraction of the box width per dimension
  std::uint64_t seed = 7;
  int workers = 1;

  /// Range error unless swarm >= 2 and iterations >= 1.
  void validate() const;
};

struct PsoResult {
  Valuation theta;
  double mr = 1.0;
  int evaluations = 0;
  int iterations_run = 0;
};

/// Global-best particle swarm over the template's box minimizing the nodal
/// misclassification rate. Integer parameters are rounded at every fitness
/// evaluation. `warm_start`, when given, seeds particle 0. Degenerate
/// configurations are honored: swarm 1 with 0 iterations returns the MR of
/// its initial sample.
PsoResult pso_minimize_mr(const Template& t, const TrajectorySet& d, const PsoConfig& cfg,
                          const std::optional<Valuation>& warm_start = std::nullopt);

struct ClassifyOptions {
  double m_th = 0.02;
  int eta_th = 3;
  double mhat_th = 0.1;
  PsoConfig pso;
  bool joint_reoptimize = true;  // false keeps stage-1 parameters fixed while growing
  bool include_negations = true;
};

struct StageOneRow {
  std::string name;
  std::string formula;  // instantiated
  Valuation theta;
  double mr = 1.0;
  int size = 0;
  bool kept = false;
};

struct ClassifierResult {
  bool success = false;
  Formula formula;
  Valuation theta;
  double train_mr = 1.0;
  int size = 0;
  std::vector<StageOneRow> stage_one;
  std::vector<std::string> log;
};

/// Prune-and-grow search over templates (and their negations) for a formula
/// with MR <= m_th and size <= eta_th. On failure the best formula found
/// within the size limit is returned with success == false.
ClassifierResult infer_classifier(const TrajectorySet& d, const std::vector<Template>& templates,
                                  const ClassifyOptions& opt = {});

}  // namespace gtl
