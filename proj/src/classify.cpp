#include "gtl/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "gtl/error.hpp"
#include "gtl/eval.hpp"
#include "gtl/parallel.hpp"

namespace gtl {

void PsoConfig::validate() const {
  if (swarm < 2) fail(ErrorCode::Range, "PSO swarm size must be at least 2");
  if (iterations < 1) fail(ErrorCode::Range, "PSO iterations must be at least 1");
  if (!(velocity_clamp > 0.0)) fail(ErrorCode::Range, "PSO velocity clamp must be positive");
}

namespace {

std::mt19937_64 particle_stream(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), 0x9e3779b9u};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Valuation to_valuation(const Template& t, const std::vector<double>& x) {
  Valuation theta;
  for (std::size_t i = 0; i < t.params.size(); ++i) {
    const auto& p = t.params[i];
    double v = std::clamp(x[i], p.min, p.max);
    if (p.integer) v = std::clamp(std::round(v), p.min, p.max);
    theta[p.name] = v;
  }
  return theta;
}

struct Particle {
  std::vector<double> x, v, best_x;
  double mr = 1.0, best_mr = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng;
};

}  // namespace

PsoResult pso_minimize_mr(const Template& t, const TrajectorySet& d, const PsoConfig& cfg,
                          const std::optional<Valuation>& warm_start) {
  if (d.empty()) fail(ErrorCode::Usage, "classification needs a nonempty labeled set");
  validate_template(t);
  const std::size_t dim = t.params.size();
  const std::size_t n = static_cast<std::size_t>(std::max(cfg.swarm, 1));

  std::vector<Particle> swarm(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& p = swarm[i];
    p.rng = particle_stream(cfg.seed, i);
    p.x.resize(dim);
    p.v.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      const auto& b = t.params[j];
      double w = b.max - b.min;
      p.x[j] = b.min + uniform01(p.rng) * w;
      p.v[j] = (2.0 * uniform01(p.rng) - 1.0) * cfg.velocity_clamp * w;
    }
    if (i == 0 && warm_start)
      for (std::size_t j = 0; j < dim; ++j) {
        auto it = warm_start->find(t.params[j].name);
        if (it != warm_start->end()) p.x[j] = std::clamp(it->second, t.params[j].min, t.params[j].max);
      }
  }

  PsoResult res;
  auto evaluate_all = [&] {
    parallel_for(n, cfg.workers, [&](std::size_t i) {
      auto& p = swarm[i];
      p.mr = misclassification_rate(d, instantiate(t.formula, to_valuation(t, p.x)), 1);
    });
    res.evaluations += static_cast<int>(n);
    for (auto& p : swarm)
      if (p.mr < p.best_mr) {
        p.best_mr = p.mr;
        p.best_x = p.x;
      }
  };
  auto global_best = [&] {
    std::size_t g = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (swarm[i].best_mr < swarm[g].best_mr) g = i;
    return g;
  };

  evaluate_all();
  std::size_t g = global_best();
  for (int it = 0; it < cfg.iterations && swarm[g].best_mr > 0.0; ++it) {
    const std::vector<double> gx = swarm[g].best_x;
    for (auto& p : swarm)
      for (std::size_t j = 0; j < dim; ++j) {
        const auto& b = t.params[j];
        double w = b.max - b.min;
        double vmax = cfg.velocity_clamp * w;
        double r1 = uniform01(p.rng), r2 = uniform01(p.rng);
        double v = cfg.inertia * p.v[j] + cfg.cognitive * r1 * (p.best_x[j] - p.x[j]) +
                   cfg.social * r2 * (gx[j] - p.x[j]);
        p.v[j] = std::clamp(v, -vmax, vmax);
        p.x[j] += p.v[j];
        if (p.x[j] < b.min || p.x[j] > b.max) {
          p.x[j] = std::clamp(p.x[j], b.min, b.max);
          p.v[j] = 0.0;
        }
      }
    evaluate_all();
    g = global_best();
    res.iterations_run = it + 1;
  }
  res.theta = to_valuation(t, swarm[g].best_x);
  res.mr = swarm[g].best_mr;
  return res;
}

namespace {

struct Candidate {
  Template tmpl;
  int size = 0;
  Valuation theta;
  double mr = 1.0;
};

std::string format_valuation(const Valuation& theta) {
  std::string s = "{";
  for (const auto& [k, v] : theta) s += (s.size() > 1 ? ", " : "") + k + "=" + format_number(v);
  return s + "}";
}

}  // namespace

ClassifierResult infer_classifier(const TrajectorySet& d, const std::vector<Template>& templates,
                                  const ClassifyOptions& opt) {
  if (!(opt.m_th >= 0.0 && opt.m_th < opt.mhat_th && opt.mhat_th < 1.0))
    fail(ErrorCode::Range, "thresholds must satisfy 0 <= m_th < mhat_th < 1");
  if (opt.eta_th < 1) fail(ErrorCode::Range, "size threshold must be at least 1");
  if (d.empty()) fail(ErrorCode::Usage, "classification needs a nonempty labeled set");
  if (templates.empty()) fail(ErrorCode::Usage, "classification needs at least one template");

  std::vector<Candidate> pool;
  for (const auto& t : templates) {
    validate_template(t);
    pool.push_back({t, formula_size(t.formula), {}, 1.0});
    if (opt.include_negations) {
      Template n{"!" + t.name, make_not(t.formula), t.params};
      pool.push_back({n, formula_size(n.formula), {}, 1.0});
    }
  }

  ClassifierResult res;
  std::optional<std::size_t> best_single;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    auto& c = pool[i];
    PsoConfig cfg = opt.pso;
    cfg.seed = mix(opt.pso.seed, i);
    PsoResult r = pso_minimize_mr(c.tmpl, d, cfg);
    c.theta = r.theta;
    c.mr = r.mr;
    Formula f = instantiate(c.tmpl.formula, c.theta);
    res.stage_one.push_back({c.tmpl.name, to_string(f), c.theta, c.mr, c.size, false});
    res.log.push_back("stage 1: " + c.tmpl.name + " MR=" + format_number(c.mr) + " at " +
                      format_valuation(c.theta));
    if (c.size <= opt.eta_th && (!best_single || c.mr < pool[*best_single].mr)) best_single = i;
  }

  Formula best_formula;
  Valuation best_theta;
  double best_mr = std::numeric_limits<double>::infinity();
  auto consider = [&](const Formula& f, const Valuation& theta, double mr) {
    if (mr < best_mr) {
      best_mr = mr;
      best_formula = f;
      best_theta = theta;
    }
  };
  auto finish = [&](bool success) {
    res.success = success;
    res.formula = best_formula;
    res.theta = best_theta;
    if (best_formula) {
      res.train_mr = misclassification_rate(d, best_formula, opt.pso.workers);
      res.size = formula_size(best_formula);
    }
    return res;
  };

  if (best_single) {
    const auto& c = pool[*best_single];
    consider(instantiate(c.tmpl.formula, c.theta), c.theta, c.mr);
    if (c.mr <= opt.m_th) {
      res.log.push_back("accepted " + c.tmpl.name + " at stage 1");
      return finish(true);
    }
  }

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < pool.size(); ++i)
    if (pool[i].mr < opt.mhat_th && pool[i].size <= opt.eta_th) {
      kept.push_back(i);
      res.stage_one[i].kept = true;
    }
  std::stable_sort(kept.begin(), kept.end(), [&](std::size_t a, std::size_t b) { return pool[a].mr < pool[b].mr; });
  res.log.push_back("pruned pool keeps " + std::to_string(kept.size()) + " of " + std::to_string(pool.size()));
  if (kept.empty()) return finish(false);

  std::uint64_t salt = pool.size();
  for (std::size_t k = 2; k <= kept.size(); ++k) {
    std::vector<int> sizes;
    for (auto i : kept) sizes.push_back(pool[i].size);
    std::sort(sizes.begin(), sizes.end());
    if (std::accumulate(sizes.begin(), sizes.begin() + static_cast<long>(k), 0) + static_cast<int>(k) - 1 >
        opt.eta_th)
      break;

    // All k-subsets of the kept pool, ranked by stage-1 MR sum.
    std::vector<std::vector<std::size_t>> combos;
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    for (;;) {
      std::vector<std::size_t> c;
      for (auto i : idx) c.push_back(kept[i]);
      combos.push_back(std::move(c));
      std::size_t pos = k;
      while (pos > 0 && idx[pos - 1] == kept.size() - k + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t j = pos; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    auto mr_sum = [&](const std::vector<std::size_t>& c) {
      double s = 0.0;
      for (auto i : c) s += pool[i].mr;
      return s;
    };
    std::stable_sort(combos.begin(), combos.end(),
                     [&](const auto& a, const auto& b) { return mr_sum(a) < mr_sum(b); });

    for (const auto& combo : combos) {
      int eta = static_cast<int>(k) - 1;
      for (auto i : combo) eta += pool[i].size;
      if (eta > opt.eta_th) continue;

      std::vector<Formula> parts;
      Template joint;
      Valuation warm;
      for (std::size_t j = 0; j < k; ++j) {
        const auto& c = pool[combo[j]];
        std::map<std::string, std::string> rename;
        for (const auto& p : c.tmpl.params) {
          std::string fresh = p.name + "_" + std::to_string(j + 1);
          rename[p.name] = fresh;
          ParamSpec q = p;
          q.name = fresh;
          joint.params.push_back(q);
          warm[fresh] = c.theta.at(p.name);
        }
        parts.push_back(rename_parameters(c.tmpl.formula, rename));
        joint.name += (j ? ", " : "") + c.tmpl.name;
      }

      for (std::size_t mask = 0; mask < (std::size_t{1} << (k - 1)); ++mask) {
        Formula f = parts[0];
        std::string ops;
        for (std::size_t j = 1; j < k; ++j) {
          bool use_or = (mask >> (j - 1)) & 1;
          f = use_or ? make_or(f, parts[j]) : make_and(f, parts[j]);
          ops += use_or ? "|" : "&";
        }
        joint.formula = f;
        Valuation theta = warm;
        double mr;
        if (opt.joint_reoptimize) {
          PsoConfig cfg = opt.pso;
          cfg.seed = mix(opt.pso.seed, salt++);
          PsoResult r = pso_minimize_mr(joint, d, cfg, warm);
          theta = r.theta;
          mr = r.mr;
        } else {
          mr = misclassification_rate(d, instantiate(f, theta), opt.pso.workers);
        }
        Formula inst = instantiate(f, theta);
        res.log.push_back("grow: [" + joint.name + "] ops " + ops + " MR=" + format_number(mr));
        consider(inst, theta, mr);
        if (mr <= opt.m_th) {
          res.log.push_back("accepted " + to_string(inst));
          return finish(true);
        }
      }
    }
  }
  return finish(false);
}

}  // namespace gtl
