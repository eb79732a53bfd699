#include "gtl/identify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "gtl/error.hpp"
#include "gtl/eval.hpp"

namespace gtl {

namespace {

bool leq(const Point& a, const Point& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

bool strictly_below(const Point& a, const Point& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] < b[i])) return false;
  return true;
}

std::vector<Point> minimal_points(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<Point> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < pts.size() && !dominated; ++j)
      dominated = j != i && leq(pts[j], pts[i]);
    if (!dominated) out.push_back(pts[i]);
  }
  return out;
}

std::vector<Point> maximal_points(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<Point> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < pts.size() && !dominated; ++j)
      dominated = j != i && leq(pts[i], pts[j]);
    if (!dominated) out.push_back(pts[i]);
  }
  return out;
}

long long grid_cells(double step) { return std::llround(1.0 / step); }

double grid_value(long long j, long long cells) {
  return static_cast<double>(j) / static_cast<double>(cells);
}

/// Unsat point with integer coordinates moved to the first grid value above.
Point effective(const Point& m, const std::vector<double>& steps) {
  Point out = m;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (i < steps.size() && steps[i] > 0) {
      long long cells = grid_cells(steps[i]);
      out[i] = grid_value(std::llround(m[i] * static_cast<double>(cells)) + 1, cells);
    }
  return out;
}

bool out_of_cube(double value, bool integer) { return integer ? value > 1.0 + 1e-12 : value >= 1.0; }

/// Incrementally maintained minimal corners of the complement of the unsat
/// down-closure.
class Staircase {
 public:
  Staircase(std::size_t dim, std::vector<double> steps) : steps_(std::move(steps)) {
    steps_.resize(dim, 0.0);
    corners_.push_back(Point(dim, 0.0));
  }

  void add(const Point& m) {
    const Point mt = effective(m, steps_);
    std::vector<Point> kept, fresh;
    for (const auto& u : corners_) {
      if (!strictly_below(u, mt)) {
        kept.push_back(u);
        continue;
      }
      for (std::size_t i = 0; i < u.size(); ++i) {
        if (out_of_cube(mt[i], steps_[i] > 0)) continue;
        Point w = u;
        w[i] = mt[i];
        fresh.push_back(std::move(w));
      }
    }
    std::sort(fresh.begin(), fresh.end());
    fresh.erase(std::unique(fresh.begin(), fresh.end()), fresh.end());
    for (std::size_t i = 0; i < fresh.size(); ++i) {
      bool dominated = false;
      for (const auto& k : kept)
        if (leq(k, fresh[i])) {
          dominated = true;
          break;
        }
      for (std::size_t j = 0; j < fresh.size() && !dominated; ++j)
        dominated = j != i && leq(fresh[j], fresh[i]);
      if (!dominated) kept.push_back(fresh[i]);
    }
    std::sort(kept.begin(), kept.end());
    corners_ = std::move(kept);
  }

  const std::vector<Point>& corners() const { return corners_; }

 private:
  std::vector<double> steps_;
  std::vector<Point> corners_;
};

/// min over front of the largest coordinate excess over k.
double radius(const Point& k, const std::vector<Point>& front) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : front) {
    double m = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) m = std::max(m, s[i] - k[i]);
    best = std::min(best, m);
  }
  return best;
}

void check_paired_bounds(const Formula& f, const Template& t) {
  if (!f) return;
  if (f->bound.paired()) {
    auto hi_of = [&](const IntVal& v) {
      if (!v.param) return static_cast<double>(v.value);
      return t.find(*v.param)->max;
    };
    auto lo_of = [&](const IntVal& v) {
      if (!v.param) return static_cast<double>(v.value);
      return t.find(*v.param)->min;
    };
    if (!(hi_of(*f->bound.lower) < lo_of(*f->bound.upper)))
      fail(ErrorCode::Input, "template '" + t.name +
                                 "': paired time bound box must keep the lower bound below the upper bound");
  }
  check_paired_bounds(f->a, t);
  check_paired_bounds(f->b, t);
}

}  // namespace

Normalizer::Normalizer(const Template& t) {
  validate_template(t);
  check_paired_bounds(t.formula, t);
  for (const auto& p : t.params) {
    if (p.frozen()) {
      frozen_.push_back(p);
      continue;
    }
    Polarity pol = gtl::polarity(t.formula, p.name);
    if (pol != Polarity::Positive && pol != Polarity::Negative)
      fail(ErrorCode::Input, "template '" + t.name + "': parameter " + p.name + " has polarity " +
                                 polarity_symbol(pol) + "; identification needs + or -");
    dims_.push_back({p, pol});
    names_.push_back(p.name);
    steps_.push_back(p.integer ? 1.0 / (p.max - p.min) : 0.0);
    polarity_.push_back(pol);
  }
}

Point Normalizer::to_unit(const Valuation& theta) const {
  Point out;
  for (const auto& d : dims_) {
    auto it = theta.find(d.spec.name);
    if (it == theta.end()) fail(ErrorCode::Input, "valuation misses parameter " + d.spec.name);
    double w = d.spec.max - d.spec.min;
    double u = d.polarity == Polarity::Positive ? (it->second - d.spec.min) / w
                                                : (d.spec.max - it->second) / w;
    out.push_back(std::clamp(u, 0.0, 1.0));
  }
  return out;
}

Valuation Normalizer::from_unit(const Point& omega) const {
  if (omega.size() != dims_.size()) fail(ErrorCode::Usage, "normalized point has wrong dimension");
  Valuation theta;
  for (const auto& p : frozen_) theta[p.name] = p.min;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    const auto& d = dims_[i];
    double w = d.spec.max - d.spec.min;
    double u = std::clamp(omega[i], 0.0, 1.0);
    double v = d.polarity == Polarity::Positive ? d.spec.min + u * w : d.spec.max - u * w;
    if (d.spec.integer) v = std::round(v);
    theta[d.spec.name] = std::clamp(v, d.spec.min, d.spec.max);
  }
  return theta;
}

Point Normalizer::floor_to_grid(Point omega) const {
  for (std::size_t i = 0; i < omega.size(); ++i) {
    omega[i] = std::clamp(omega[i], 0.0, 1.0);
    if (steps_[i] > 0) {
      long long cells = grid_cells(steps_[i]);
      long long j = static_cast<long long>(std::floor(omega[i] * static_cast<double>(cells) + 1e-9));
      omega[i] = grid_value(std::min(j, cells), cells);
    }
  }
  return omega;
}

Point map_pi(const Template& t, const Valuation& theta) { return Normalizer(t).to_unit(theta); }

Valuation map_pi_inv(const Template& t, const Point& omega) { return Normalizer(t).from_unit(omega); }

double directed_hausdorff(const std::vector<Point>& s, const std::vector<Point>& s_prime) {
  if (s.empty() || s_prime.empty()) fail(ErrorCode::Usage, "directed Hausdorff distance of an empty set");
  double worst = 0.0;
  for (const auto& a : s) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : s_prime) {
      if (a.size() != b.size()) fail(ErrorCode::Usage, "points of different dimension");
      double m = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, a[i] > b[i] ? a[i] - b[i] : 0.0);
      best = std::min(best, m);
    }
    worst = std::max(worst, best);
  }
  return worst;
}

std::vector<Point> staircase_corners(const std::vector<Point>& unsat, const std::vector<double>& steps) {
  if (unsat.empty()) return {Point(steps.size(), 0.0)};
  Staircase st(unsat.front().size(), steps);
  for (const auto& m : unsat) st.add(m);
  return st.corners();
}

std::vector<Point> knee_points(const std::vector<Point>& unsat, const std::vector<double>& steps) {
  if (unsat.empty()) return {Point(steps.size(), 0.0)};
  std::vector<Point> out = staircase_corners(unsat, steps);
  for (const auto& m : maximal_points(unsat)) out.push_back(effective(m, steps));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TemplateResult identify_template(const TrajectorySet& s, const PriorModel& prior, const Template& t,
                                 const IdentifyOptions& opt) {
  if (s.empty()) fail(ErrorCode::Usage, "identification needs a nonempty trajectory set");
  if (!(opt.p_th > 0.0 && opt.p_th <= 1.0)) fail(ErrorCode::Range, "p_th must lie in (0, 1]");
  if (!(opt.eps > 0.0 && opt.eps < 1.0)) fail(ErrorCode::Range, "eps must lie in (0, 1)");
  if (opt.budget < 1) fail(ErrorCode::Range, "query budget must be at least 1");
  if (s.graph.get() != prior.graph_ptr().get() &&
      s.graph->node_ids() != prior.graph().node_ids())
    fail(ErrorCode::Input, "trajectories and prior use different graphs");

  TemplateResult res;
  res.name = t.name;
  res.template_text = t.formula ? to_string(t.formula) : "";

  std::optional<Normalizer> norm;
  try {
    norm.emplace(t);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Input) throw;
    res.diagnostic = std::string("rejected: ") + e.what();
    return res;
  }
  res.dims = norm->names();
  const std::size_t z = norm->dimension();

  auto query = [&](const Point& omega) -> const QueryRecord& {
    QueryRecord rec;
    rec.omega = omega;
    rec.theta = norm->from_unit(omega);
    rec.coverage = coverage(s, instantiate(t.formula, rec.theta), opt.workers);
    rec.satisfied = rec.coverage >= opt.p_th;
    res.log.push_back(std::move(rec));
    ++res.queries;
    return res.log.back();
  };

  std::vector<Point> sat_points, unsat_points;
  const Point one(z, 1.0), zero(z, 0.0);
  if (!query(one).satisfied) {
    res.diagnostic = "infeasible: coverage " + format_number(res.log.back().coverage) +
                     " at the easiest corner is below p_th";
    return res;
  }
  sat_points.push_back(one);
  std::vector<Point> front{one};

  if (z > 0 && res.queries < opt.budget) {
    if (query(zero).satisfied) {
      sat_points.push_back(zero);
      front = {zero};
    } else {
      unsat_points.push_back(zero);
      Staircase stairs(z, norm->steps());
      stairs.add(zero);
      std::vector<Point> unsat_max{zero};
      for (;;) {
        std::vector<Point> knees = stairs.corners();
        for (const auto& m : unsat_max) knees.push_back(effective(m, norm->steps()));
        std::sort(knees.begin(), knees.end());
        knees.erase(std::unique(knees.begin(), knees.end()), knees.end());

        std::vector<std::pair<double, std::size_t>> order;
        double h = 0.0;
        for (std::size_t i = 0; i < knees.size(); ++i) {
          double r = radius(knees[i], front);
          h = std::max(h, r);
          order.emplace_back(r, i);
        }
        res.hausdorff = h;
        if (h <= opt.eps) break;
        if (res.queries >= opt.budget) {
          res.approximate = true;
          break;
        }
        std::stable_sort(order.begin(), order.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });

        std::optional<Point> next;
        for (const auto& [r, i] : order) {
          if (r <= opt.eps) break;
          Point q = knees[i];
          for (auto& c : q) c += r / 2.0;
          q = norm->floor_to_grid(std::move(q));
          bool valid = true;
          for (const auto& m : unsat_max)
            if (leq(q, m)) valid = false;
          for (const auto& sp : front)
            if (leq(sp, q)) valid = false;
          if (valid) {
            next = std::move(q);
            break;
          }
        }
        if (!next) {
          res.approximate = true;
          break;
        }
        if (query(*next).satisfied) {
          sat_points.push_back(*next);
          front = minimal_points(sat_points);
        } else {
          unsat_points.push_back(*next);
          stairs.add(*next);
          unsat_max = maximal_points(unsat_points);
        }
      }
    }
  } else if (z > 0) {
    res.approximate = true;
    res.hausdorff = 1.0;
  }

  // Information gain over the minimal satisfying front.
  bool have_best = false;
  for (const auto& omega : front) {
    FrontMember m;
    m.omega = omega;
    m.theta = norm->from_unit(omega);
    for (const auto& rec : res.log)
      if (rec.omega == omega) m.coverage = rec.coverage;
    Formula f = instantiate(t.formula, m.theta);
    InfoGainReport ig = compute_ig(prior, f, {}, opt.prob, opt.workers);
    m.average_ig = ig.average;
    bool better = !have_best || ig.average > res.ig.average ||
                  (ig.average == res.ig.average && omega < res.omega);
    if (better) {
      have_best = true;
      res.formula = f;
      res.theta = m.theta;
      res.omega = omega;
      res.coverage = m.coverage;
      res.ig = std::move(ig);
    }
    res.front.push_back(std::move(m));
  }
  res.feasible = true;
  return res;
}

std::vector<TemplateResult> identify(const TrajectorySet& s, const PriorModel& prior,
                                     const std::vector<Template>& templates, const IdentifyOptions& opt) {
  std::vector<TemplateResult> out;
  for (const auto& t : templates) out.push_back(identify_template(s, prior, t, opt));
  std::stable_sort(out.begin(), out.end(), [](const TemplateResult& a, const TemplateResult& b) {
    if (a.feasible != b.feasible) return a.feasible;
    return a.ig.average > b.ig.average;
  });
  return out;
}

}  // namespace gtl
