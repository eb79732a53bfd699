#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gtl/eval.hpp"
#include "gtl/formula.hpp"
#include "gtl/graph.hpp"
#include "gtl/prob.hpp"

namespace gtl::support {

/// The six-node example graph with one time step: edges carry distances,
/// nodes carry a scalar label.
inline GraphPtr example_graph() {
  return std::make_shared<const LabeledGraph>(
      std::vector<std::string>{"v1", "v2", "v3", "v4", "v5", "v6"},
      std::vector<std::string>{"e1", "e2", "e3", "e4", "e5", "e6", "e7", "e8"},
      std::vector<std::pair<std::string, std::string>>{{"v1", "v2"}, {"v1", "v4"}, {"v4", "v5"}, {"v2", "v3"},
                                                       {"v2", "v5"}, {"v3", "v6"}, {"v5", "v6"}, {"v4", "v6"}});
}

inline Trajectory example_trajectory(GraphPtr g = example_graph()) {
  std::vector<std::vector<double>> x{{1}, {2}, {-1}, {3}, {1.5}, {0}};
  std::vector<std::vector<double>> y{{2}, {1}, {1}, {3}, {1}, {2}, {1.5}, {2.5}};
  return Trajectory(g, 1, x, y);
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(gen); }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(uniform_int(0, static_cast<int>(v.size()) - 1))];
  }
};

/// Random simple graph on n nodes, ids v1.. and e1..
inline GraphPtr random_graph(Rng& rng, int n, double edge_p) {
  std::vector<std::string> nodes, edges;
  std::vector<std::pair<std::string, std::string>> ends;
  for (int i = 1; i <= n; ++i) nodes.push_back("v" + std::to_string(i));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (rng.coin(edge_p)) {
        edges.push_back("e" + std::to_string(edges.size() + 1));
        ends.emplace_back(nodes[static_cast<std::size_t>(a)], nodes[static_cast<std::size_t>(b)]);
      }
  return std::make_shared<const LabeledGraph>(nodes, edges, ends);
}

/// Labels drawn from small grids so thresholds hit them exactly.
inline Trajectory random_trajectory(Rng& rng, GraphPtr g, int L) {
  std::vector<std::vector<double>> x(g->node_count()), y(g->edge_count());
  for (auto& row : x)
    for (int k = 0; k < L; ++k) row.push_back(rng.uniform_int(0, 3));
  for (auto& row : y)
    for (int k = 0; k < L; ++k) row.push_back(rng.uniform_int(1, 3));
  return Trajectory(g, L, x, y);
}

// ---------------------------------------------------------------------------
// Literal semantics oracle: direct recursion over the definitions, no tables.

inline bool naive_sat(const Trajectory& g, const Formula& f, int v, int k);

inline std::set<int> naive_reach(const Trajectory& g, int v, int k, const std::vector<EdgeAtom>& chain) {
  std::set<int> cur{v};
  const auto& gr = g.graph();
  for (const auto& hop : chain) {
    std::set<int> next;
    for (std::size_t e = 0; e < gr.edge_count(); ++e) {
      auto [a, b] = gr.endpoints(static_cast<int>(e));
      if (!compare(hop.cmp, g.y(static_cast<int>(e), k), hop.threshold.value)) continue;
      if (cur.count(a)) next.insert(b);
      if (cur.count(b)) next.insert(a);
    }
    cur = next;
  }
  return cur;
}

inline bool naive_temporal(const Trajectory& g, const FormulaNode& f, int v, int k) {
  const int L = g.length();
  auto range_check = [&](long long from, long long to, bool all, const Formula& body) {
    to = std::min<long long>(to, L);
    if (all) {
      for (long long j = from; j <= to; ++j)
        if (!naive_sat(g, body, v, static_cast<int>(j))) return false;
      return true;
    }
    for (long long j = from; j <= to; ++j)
      if (naive_sat(g, body, v, static_cast<int>(j))) return true;
    return false;
  };
  auto until_check = [&](long long from, long long to) {
    to = std::min<long long>(to, L);
    for (long long w = from; w <= to; ++w) {
      if (!naive_sat(g, f.b, v, static_cast<int>(w))) continue;
      bool ok = true;
      for (long long j = k; j <= w && ok; ++j) ok = naive_sat(g, f.a, v, static_cast<int>(j));
      if (ok) return true;
    }
    return false;
  };
  auto single = [&](std::optional<long long> lo, std::optional<long long> hi) {
    long long from = k + lo.value_or(0);
    long long to = hi ? k + *hi : L;
    switch (f.op) {
      case Op::Eventually: return range_check(from, to, false, f.a);
      case Op::Always: return range_check(from, to, true, f.a);
      default: return until_check(from, to);
    }
  };
  std::optional<long long> lo, hi;
  if (f.bound.lower) lo = f.bound.lower->value;
  if (f.bound.upper) hi = f.bound.upper->value;
  if (lo && hi) return single(lo, std::nullopt) && single(std::nullopt, hi);
  return single(lo, hi);
}

inline bool naive_sat(const Trajectory& g, const Formula& f, int v, int k) {
  switch (f->op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom: return compare(f->cmp, g.x(v, k), f->threshold.value);
    case Op::Not: return !naive_sat(g, f->a, v, k);
    case Op::And: return naive_sat(g, f->a, v, k) && naive_sat(g, f->b, v, k);
    case Op::Or: return naive_sat(g, f->a, v, k) || naive_sat(g, f->b, v, k);
    case Op::Implies: return !naive_sat(g, f->a, v, k) || naive_sat(g, f->b, v, k);
    case Op::Exists: {
      long long count = 0;
      for (int u : naive_reach(g, v, k, f->chain))
        if (naive_sat(g, f->a, u, k)) ++count;
      return count >= f->count.value;
    }
    default: return naive_temporal(g, *f, v, k);
  }
}

// ---------------------------------------------------------------------------
// Random formulas.

struct FormulaGen {
  Rng& rng;
  int max_bound = 3;
  std::vector<double> thresholds{0.5, 1, 1.5, 2, 2.5};
  std::vector<double> edge_thresholds{1, 2};

  TimeBound bound(bool allow_lower, bool allow_upper) {
    TimeBound b;
    int kind = rng.uniform_int(0, 3);
    if ((kind == 1 || kind == 3) && allow_lower) b.lower = IntVal::lit(rng.uniform_int(0, max_bound));
    if ((kind == 2 || kind == 3) && allow_upper) b.upper = IntVal::lit(rng.uniform_int(0, max_bound));
    return b;
  }

  Formula atom() {
    return make_atom(rng.coin() ? Cmp::Ge : Cmp::Le, NumVal::lit(rng.pick(thresholds)));
  }

  std::vector<EdgeAtom> chain() {
    std::vector<EdgeAtom> c;
    int hops = rng.coin(0.8) ? 1 : 2;
    for (int i = 0; i < hops; ++i)
      c.push_back({rng.coin(0.7) ? Cmp::Le : Cmp::Ge, NumVal::lit(rng.pick(edge_thresholds))});
    return c;
  }

  Formula exists_atom() {
    return make_exists(IntVal::lit(rng.uniform_int(1, 2)), chain(), atom());
  }

  Formula leaf(bool with_exists) {
    if (with_exists && rng.coin(0.4)) return exists_atom();
    return rng.coin(0.8) ? atom() : make_not(atom());
  }

  /// Any formula (for the semantics oracle).
  Formula any(int depth, bool with_exists = true) {
    if (depth == 0) {
      int r = rng.uniform_int(0, 19);
      if (r == 0) return make_true();
      if (r == 1) return make_false();
      return leaf(with_exists);
    }
    switch (rng.uniform_int(0, 8)) {
      case 0: return make_not(any(depth - 1, with_exists));
      case 1: return make_and(any(depth - 1, with_exists), any(depth - 1, with_exists));
      case 2: return make_or(any(depth - 1, with_exists), any(depth - 1, with_exists));
      case 3: return make_implies(any(depth - 1, with_exists), any(depth - 1, with_exists));
      case 4: return make_eventually(bound(true, true), any(depth - 1, with_exists));
      case 5: return make_always(bound(true, true), any(depth - 1, with_exists));
      case 6: return make_until(bound(true, true), any(depth - 1, with_exists), any(depth - 1, with_exists));
      case 7:
        if (with_exists)
          return make_exists(IntVal::lit(rng.uniform_int(1, 2)), chain(), any(depth - 1, with_exists));
        return leaf(false);
      default: return leaf(with_exists);
    }
  }

  /// Formula in the co-safe (cosafe = true) or safe fragment, negations on
  /// atoms only. Type-I when `with_exists`, exists-free otherwise. Until only
  /// occurs in positive positions.
  Formula fragment(int depth, bool cosafe, bool with_exists, bool allow_until = true) {
    auto sub = [&] { return fragment(depth - 1, cosafe, with_exists, allow_until); };
    auto upper_only = [&] {
      TimeBound b;
      b.upper = IntVal::lit(rng.uniform_int(0, max_bound));
      return b;
    };
    if (depth == 0) return leaf(with_exists);
    switch (rng.uniform_int(0, 6)) {
      case 0: return make_and(sub(), sub());
      case 1: return make_or(sub(), sub());
      case 2: return make_eventually(cosafe ? bound(true, true) : upper_only(), sub());
      case 3: return make_always(cosafe ? upper_only() : bound(true, true), sub());
      case 4:
        if (!allow_until) return leaf(with_exists);
        return make_until(cosafe ? bound(true, true) : upper_only(), sub(), sub());
      case 5:
        return make_implies(fragment(depth - 1, !cosafe, with_exists, false), sub());
      default: return leaf(with_exists);
    }
  }

  /// In-scope formula for the automaton: type-I or type-II, co-safe or safe,
  /// possibly negated at the top.
  Formula in_scope(int depth) {
    bool cosafe = rng.coin();
    if (rng.coin(0.3)) return make_exists(IntVal::lit(rng.uniform_int(1, 2)), chain(), fragment(depth, cosafe, false));
    Formula f = fragment(depth, cosafe, true);
    return rng.coin(0.2) ? make_not(fragment(depth, cosafe, true, false)) : f;
  }
};

// ---------------------------------------------------------------------------
// Brute-force probability oracle. Bins are split at every node threshold of
// the formula; within a cell satisfaction is constant, so enumerating one
// representative per cell and weighting by its mass is exact.

inline void collect_thresholds(const Formula& f, std::set<double>& out) {
  if (!f) return;
  if (f->op == Op::Atom) out.insert(f->threshold.value);
  collect_thresholds(f->a, out);
  collect_thresholds(f->b, out);
}

struct Cell {
  double value;
  double mass_fraction;  // fraction of the bin
  std::size_t bin;
};

inline std::vector<Cell> refine_bins(const std::vector<Bin>& bins, const std::set<double>& thresholds) {
  std::vector<Cell> cells;
  for (std::size_t b = 0; b < bins.size(); ++b) {
    const auto& bin = bins[b];
    if (bin.hi == bin.lo) {
      cells.push_back({bin.lo, 1.0, b});
      continue;
    }
    std::vector<double> cuts{bin.lo};
    for (double t : thresholds)
      if (t > bin.lo && t < bin.hi) cuts.push_back(t);
    cuts.push_back(bin.hi);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      cells.push_back({(cuts[i] + cuts[i + 1]) / 2, (cuts[i + 1] - cuts[i]) / (bin.hi - bin.lo), b});
  }
  return cells;
}

/// Calls visit(trajectory, mass) for every cell assignment.
inline void enumerate_cells(const PriorModel& prior, const std::set<double>& thresholds,
                            const std::function<void(const Trajectory&, double)>& visit) {
  const auto cells = refine_bins(prior.bins(), thresholds);
  const std::size_t nodes = prior.graph().node_count();
  const int L = prior.length();
  const std::size_t slots = nodes * static_cast<std::size_t>(L);
  std::vector<std::vector<double>> y;
  for (double e : prior.edge_labels()) y.emplace_back(static_cast<std::size_t>(L), e);
  std::vector<std::size_t> idx(slots, 0);
  for (;;) {
    double mass = 1.0;
    std::vector<std::vector<double>> x(nodes, std::vector<double>(static_cast<std::size_t>(L)));
    for (std::size_t s = 0; s < slots && mass > 0; ++s) {
      std::size_t v = s / static_cast<std::size_t>(L);
      int k = static_cast<int>(s % static_cast<std::size_t>(L)) + 1;
      const Cell& c = cells[idx[s]];
      mass *= prior.pmf(static_cast<int>(v), k)[c.bin] * c.mass_fraction;
      x[v][static_cast<std::size_t>(k - 1)] = c.value;
    }
    if (mass > 0) visit(Trajectory(prior.graph_ptr(), L, x, y), mass);
    std::size_t s = 0;
    while (s < slots && ++idx[s] == cells.size()) idx[s++] = 0;
    if (s == slots) break;
  }
}

inline double brute_probability(const PriorModel& prior, const Formula& f, int v) {
  std::set<double> th;
  collect_thresholds(f, th);
  double total = 0.0;
  enumerate_cells(prior, th, [&](const Trajectory& t, double mass) {
    if (naive_sat(t, f, v, 1)) total += mass;
  });
  return total;
}

inline double cell_count(const PriorModel& prior, const Formula& f) {
  std::set<double> th;
  collect_thresholds(f, th);
  return std::pow(static_cast<double>(refine_bins(prior.bins(), th).size()),
                  static_cast<double>(prior.graph().node_count() * static_cast<std::size_t>(prior.length())));
}

/// Prior with the given bins and a random full-support pmf at every slot.
inline PriorModel random_prior(Rng& rng, GraphPtr g, int L, std::vector<Bin> bins, double edge_lo = 1,
                               double edge_hi = 3) {
  std::vector<std::vector<std::vector<double>>> pmf(g->node_count());
  for (auto& node : pmf)
    for (int k = 0; k < L; ++k) {
      std::vector<double> p;
      double sum = 0;
      for (std::size_t b = 0; b < bins.size(); ++b) {
        p.push_back(rng.uniform(0.1, 1.0));
        sum += p.back();
      }
      for (auto& x : p) x /= sum;
      node.push_back(p);
    }
  std::vector<double> edges;
  for (std::size_t e = 0; e < g->edge_count(); ++e) edges.push_back(std::round(rng.uniform(edge_lo, edge_hi)));
  return PriorModel(g, L, std::move(bins), std::move(pmf), std::move(edges));
}

/// Prior over [0, 4] in 8 bins under which the two halves of
/// `conjunction_separator()` mostly fail together: labels start high and end
/// low, so a negative node tends to violate both conjuncts.
inline PriorModel conjunction_prior(GraphPtr g, int L = 4) {
  const std::vector<double> early{0.04, 0.04, 0.04, 0.04, 0.04, 0.12, 0.34, 0.34};
  const std::vector<double> late{0.2375, 0.2375, 0.2375, 0.2375, 0.0125, 0.0125, 0.0125, 0.0125};
  std::vector<Bin> bins;
  for (int i = 0; i < 8; ++i) bins.push_back({i * 0.5, (i + 1) * 0.5});
  std::vector<std::vector<double>> per_time;
  for (int k = 1; k <= L; ++k) per_time.push_back(k <= 2 ? early : late);
  std::vector<std::vector<std::vector<double>>> pmf(g->node_count(), per_time);
  return PriorModel(g, L, bins, pmf, std::vector<double>(g->edge_count(), 1.0));
}

inline const char* conjunction_separator() { return "G[<=1] (x <= 3) & F[>=2] (x >= 2)"; }

}  // namespace gtl::support
