#pragma once

#include <string>
#include <vector>

#include "gtl/formula.hpp"
#include "gtl/graph.hpp"
#include "gtl/prob.hpp"
#include "gtl/templates.hpp"

namespace gtl {

using Point = std::vector<double>;

/// Maps a template's parameters to the unit cube so that larger coordinates
/// are always easier to satisfy. Frozen parameters (min == max) get no
/// coordinate.
class Normalizer {
 public:
  /// Throws Input errors when a free parameter has mixed or undefined
  /// polarity, or when a paired time bound's box allows lower >= upper.
  explicit Normalizer(const Template& t);

  std::size_t dimension() const { return dims_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  /// Grid step of each coordinate (0 for continuous parameters).
  const std::vector<double>& steps() const { return steps_; }
  Polarity polarity(std::size_t i) const { return polarity_[i]; }

  Point to_unit(const Valuation& theta) const;
  /// Integer parameters snap to the nearest admissible value.
  Valuation from_unit(const Point& omega) const;
  /// Rounds integer coordinates down onto their grid.
  Point floor_to_grid(Point omega) const;

 private:
  struct Dim {
    ParamSpec spec;
    Polarity polarity;
  };
  std::vector<Dim> dims_;
  std::vector<ParamSpec> frozen_;
  std::vector<std::string> names_;
  std::vector<double> steps_;
  std::vector<Polarity> polarity_;
};

Point map_pi(const Template& t, const Valuation& theta);
Valuation map_pi_inv(const Template& t, const Point& omega);

/// max over s in S of min over s' in S' of max_i (s_i - s'_i)^+.
/// Throws a Usage error when either set is empty.
double directed_hausdorff(const std::vector<Point>& s, const std::vector<Point>& s_prime);

/// Knee points of the down-closure of `unsat` (maximal points). `steps`
/// gives the grid step of integer coordinates (0 for continuous); an empty
/// vector means all continuous. Returns the staircase corners together with
/// the unsat points themselves (shifted one grid step up on integer
/// coordinates); {0} when `unsat` is empty.
std::vector<Point> knee_points(const std::vector<Point>& unsat, const std::vector<double>& steps = {});

/// Staircase corners only: minimal points of the unit cube outside the
/// down-closure of `unsat`.
std::vector<Point> staircase_corners(const std::vector<Point>& unsat, const std::vector<double>& steps = {});

struct IdentifyOptions {
  double p_th = 0.98;
  double eps = 0.05;
  int budget = 500;
  int workers = 1;
  ProbOptions prob;
};

struct QueryRecord {
  Point omega;
  Valuation theta;
  double coverage = 0.0;
  bool satisfied = false;
};

struct FrontMember {
  Point omega;
  Valuation theta;
  double coverage = 0.0;
  double average_ig = 0.0;
};

struct TemplateResult {
  std::string name;
  std::string template_text;
  bool feasible = false;
  bool approximate = false;  // budget ran out or no valid query remained
  std::string diagnostic;
  std::vector<std::string> dims;
  Formula formula;  // instantiated maximizer
  Valuation theta;
  Point omega;
  double coverage = 0.0;
  InfoGainReport ig;
  int queries = 0;
  double hausdorff = 0.0;  // certificate distance at return
  std::vector<FrontMember> front;
  std::vector<QueryRecord> log;
};

/// Runs the knee-point search for one template and maximizes information
/// gain over the resulting minimal satisfying front. A rejected or
/// infeasible template yields feasible == false with a diagnostic.
TemplateResult identify_template(const TrajectorySet& s, const PriorModel& prior, const Template& t,
                                 const IdentifyOptions& opt = {});

/// All templates, ranked by average information gain (feasible first).
std::vector<TemplateResult> identify(const TrajectorySet& s, const PriorModel& prior,
                                     const std::vector<Template>& templates,
                                     const IdentifyOptions& opt = {});

}  // namespace gtl
