#include "gtl/templates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "gtl/error.hpp"
#include "gtl/prob.hpp"

namespace gtl {

const ParamSpec* Template::find(const std::string& param) const {
  for (const auto& p : params)
    if (p.name == param) return &p;
  return nullptr;
}

void validate_template(const Template& t) {
  if (!t.formula) fail(ErrorCode::Input, "template '" + t.name + "' has no formula");
  auto info = parameters(t.formula);
  std::set<std::string> seen;
  for (const auto& p : t.params) {
    if (!seen.insert(p.name).second)
      fail(ErrorCode::Input, "template '" + t.name + "': duplicate box for parameter " + p.name);
    auto it = std::find_if(info.begin(), info.end(), [&](const ParamInfo& i) { return i.name == p.name; });
    if (it == info.end())
      fail(ErrorCode::Input, "template '" + t.name + "': box given for unknown parameter " + p.name);
    if (!std::isfinite(p.min) || !std::isfinite(p.max) || p.min > p.max)
      fail(ErrorCode::Input, "template '" + t.name + "': invalid box for parameter " + p.name);
    if (it->integer && !p.integer)
      fail(ErrorCode::Input, "template '" + t.name + "': parameter " + p.name + " must be integer");
    if (p.integer && (p.min != std::floor(p.min) || p.max != std::floor(p.max)))
      fail(ErrorCode::Input, "template '" + t.name + "': integer box for " + p.name + " has fractional bounds");
  }
  for (const auto& i : info)
    if (!seen.count(i.name))
      fail(ErrorCode::Input, "template '" + t.name + "': no box for parameter " + i.name);
}

TemplateContext context_from(const TrajectorySet& s) {
  if (s.empty()) fail(ErrorCode::Usage, "template context needs a nonempty trajectory set");
  TemplateContext ctx;
  ctx.horizon = s.length();
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  const auto& g = *s.graph;
  for (const auto& t : s.items) {
    for (std::size_t v = 0; v < g.node_count(); ++v)
      for (int k = 1; k <= t.length(); ++k) {
        xlo = std::min(xlo, t.x(static_cast<int>(v), k));
        xhi = std::max(xhi, t.x(static_cast<int>(v), k));
      }
    for (int k = 1; k <= t.length(); ++k)
      for (double y : t.edges_at(k)) {
        ylo = std::min(ylo, y);
        yhi = std::max(yhi, y);
      }
  }
  ctx.x_min = xlo;
  ctx.x_max = xhi;
  if (g.edge_count() > 0) {
    ctx.y_min = ylo;
    ctx.y_max = yhi;
  }
  std::size_t deg = 0;
  for (std::size_t v = 0; v < g.node_count(); ++v)
    deg = std::max(deg, g.incident(static_cast<int>(v)).size());
  ctx.max_neighbors = static_cast<int>(std::max<std::size_t>(deg, 1));
  return ctx;
}

TemplateContext context_from(const PriorModel& prior) {
  TemplateContext ctx;
  ctx.horizon = prior.length();
  ctx.x_min = prior.bins().front().lo;
  ctx.x_max = prior.bins().back().hi;
  if (!prior.edge_labels().empty()) {
    auto [lo, hi] = std::minmax_element(prior.edge_labels().begin(), prior.edge_labels().end());
    ctx.y_min = *lo;
    ctx.y_max = *hi;
  }
  std::size_t deg = 0;
  for (std::size_t v = 0; v < prior.graph().node_count(); ++v)
    deg = std::max(deg, prior.graph().incident(static_cast<int>(v)).size());
  ctx.max_neighbors = static_cast<int>(std::max<std::size_t>(deg, 1));
  return ctx;
}

namespace {

struct Shape {
  const char* name;
  const char* text;  // uses GE / LE placeholders for node comparisons
  bool paired;
};

const Shape kTypeI[] = {
    {"PI-1", "G[>=?i1][<=?i2] E ?N via (y <= ?d) : (x GE ?c)", true},
    {"PI-2", "F[>=?i1][<=?i2] E ?N via (y <= ?d) : (x GE ?c)", true},
    {"PI-3", "G[>=?i1][<=?i2] F[<=?i3] E ?N via (y <= ?d) : (x GE ?c)", true},
    {"PI-4", "F[>=?i1][<=?i2] G[<=?i3] E ?N via (y <= ?d) : (x GE ?c)", true},
    {"PI-5", "G ((x GE ?a) -> G[<=?i] E ?N via (y <= ?d) : (x LE ?b))", false},
    {"PI-6", "G ((x GE ?a) -> F[<=?i] E ?N via (y <= ?d) : (x LE ?b))", false},
};

const Shape kTypeII[] = {
    {"PII-1", "E ?N via (y <= ?d) : G[>=?i1][<=?i2] (x GE ?c)", true},
    {"PII-2", "E ?N via (y <= ?d) : F[>=?i1][<=?i2] (x GE ?c)", true},
    {"PII-3", "E ?N via (y <= ?d) : G[>=?i1][<=?i2] F[<=?i3] (x GE ?c)", true},
    {"PII-4", "E ?N via (y <= ?d) : F[>=?i1][<=?i2] G[<=?i3] (x GE ?c)", true},
};

std::string fill(std::string text, bool mirrored) {
  auto replace = [&](const std::string& from, const std::string& to) {
    for (std::size_t pos = 0; (pos = text.find(from, pos)) != std::string::npos; pos += to.size())
      text.replace(pos, from.size(), to);
  };
  replace("GE", mirrored ? "<#" : ">#");
  replace("LE", mirrored ? ">#" : "<#");
  replace("#", "=");
  return text;
}

ParamSpec box_for(const ParamInfo& p, const TemplateContext& ctx) {
  const int L = ctx.horizon;
  const int half = L / 2;
  ParamSpec s{p.name, 0.0, 0.0, p.integer};
  if (p.name == "i1") {
    s.min = 1;
    s.max = std::max(1, half);
  } else if (p.name == "i2") {
    s.min = half + 1;
    s.max = std::max(half + 1, L - 1);
  } else if (p.name == "i" || p.name == "i3") {
    s.min = 1;
    s.max = std::max(1, L - 1);
  } else if (p.name == "N") {
    s.min = 1;
    s.max = std::max(1, ctx.max_neighbors);
  } else if (p.name == "d") {
    s.integer = true;
    s.min = std::max(0.0, std::floor(ctx.y_min));
    s.max = std::max(s.min, std::ceil(ctx.y_max));
  } else {
    s.min = ctx.x_min;
    s.max = ctx.x_max;
  }
  return s;
}

}  // namespace

std::size_t builtin_shape_count(TemplateFamily family) {
  switch (family) {
    case TemplateFamily::TypeI: return std::size(kTypeI);
    case TemplateFamily::TypeII: return std::size(kTypeII);
    case TemplateFamily::All: return std::size(kTypeI) + std::size(kTypeII);
  }
  return 0;
}

std::vector<Template> builtin_templates(TemplateFamily family, const TemplateContext& ctx) {
  std::vector<const Shape*> shapes;
  if (family != TemplateFamily::TypeII)
    for (const auto& s : kTypeI) shapes.push_back(&s);
  if (family != TemplateFamily::TypeI)
    for (const auto& s : kTypeII) shapes.push_back(&s);

  std::vector<Template> out;
  for (const Shape* shape : shapes) {
    if (shape->paired && ctx.horizon < 2) continue;
    for (int mirrored = 0; mirrored <= (ctx.both_directions ? 1 : 0); ++mirrored) {
      Template t;
      t.name = std::string(shape->name) + (mirrored ? "/mirror" : "");
      t.formula = parse_formula(fill(shape->text, mirrored != 0));
      for (const auto& p : parameters(t.formula)) t.params.push_back(box_for(p, ctx));
      out.push_back(std::move(t));
    }
  }
  return out;
}

}  // namespace gtl
