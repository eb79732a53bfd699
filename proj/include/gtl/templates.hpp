#pragma once

#include <string>
#include <vector>

#include "gtl/formula.hpp"
#include "gtl/graph.hpp"

namespace gtl {

class PriorModel;

struct ParamSpec {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  bool integer = false;

  bool frozen() const { return min == max; }
};

/// A parametric formula with a box for each of its parameters.
struct Template {
  std::string name;
  Formula formula;
  std::vector<ParamSpec> params;

  const ParamSpec* find(const std::string& param) const;
};

/// Checks that the box covers exactly the formula's parameters, bounds are
/// ordered, and integer kinds match integer positions. Throws Input errors.
void validate_template(const Template& t);

/// Ranges used to size the default boxes of the built-in templates.
struct TemplateContext {
  int horizon = 1;
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 1.0;
  double y_max = 1.0;
  int max_neighbors = 1;
  bool both_directions = false;  // add the x<= / x>= mirror of every shape
};

TemplateContext context_from(const TrajectorySet& s);
TemplateContext context_from(const PriorModel& prior);

enum class TemplateFamily { TypeI, TypeII, All };

/// The six type-I and four type-II shapes with default directions
/// (single node proposition x >= c; implication shapes x >= a and x <= b).
std::vector<Template> builtin_templates(TemplateFamily family, const TemplateContext& ctx);

/// Number of template shapes in a family.
std::size_t builtin_shape_count(TemplateFamily family);

}  // namespace gtl
