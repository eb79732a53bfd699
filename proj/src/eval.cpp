#include "gtl/eval.hpp"

#include <algorithm>
#include <numeric>

#include "gtl/error.hpp"
#include "gtl/parallel.hpp"

namespace gtl {

namespace {

using Bits = std::vector<std::uint8_t>;

[[noreturn]] void parametric() {
  fail(ErrorCode::Usage, "cannot evaluate a formula with free parameters; instantiate it first");
}

double literal(const NumVal& v) {
  if (v.param) parametric();
  return v.value;
}

long long literal(const IntVal& v) {
  if (v.param) parametric();
  return v.value;
}

class Evaluator {
 public:
  explicit Evaluator(const Trajectory& g)
      : g_(g), n_(g.graph().node_count()), L_(g.length()) {}

  Bits run(const Formula& f) {
    switch (f->op) {
      case Op::True: return Bits(n_ * L_, 1);
      case Op::False: return Bits(n_ * L_, 0);
      case Op::Atom: return atom(*f);
      case Op::Exists: return exists(*f);
      case Op::Not: {
        Bits t = run(f->a);
        for (auto& b : t) b = !b;
        return t;
      }
      case Op::And:
      case Op::Or:
      case Op::Implies: {
        Bits a = run(f->a);
        Bits b = run(f->b);
        for (std::size_t i = 0; i < a.size(); ++i) {
          if (f->op == Op::And) a[i] = a[i] && b[i];
          else if (f->op == Op::Or) a[i] = a[i] || b[i];
          else a[i] = !a[i] || b[i];
        }
        return a;
      }
      case Op::Eventually:
      case Op::Always: return window(*f, run(f->a));
      case Op::Until: return until(*f, run(f->a), run(f->b));
    }
    return {};
  }

 private:
  std::size_t at(std::size_t v, long long k) const {
    return v * static_cast<std::size_t>(L_) + static_cast<std::size_t>(k - 1);
  }

  Bits atom(const FormulaNode& f) {
    double c = literal(f.threshold);
    Bits out(n_ * L_);
    for (std::size_t v = 0; v < n_; ++v)
      for (int k = 1; k <= L_; ++k) out[at(v, k)] = compare(f.cmp, g_.x(static_cast<int>(v), k), c);
    return out;
  }

  Bits exists(const FormulaNode& f) {
    long long need = literal(f.count);
    std::vector<EdgeProposition> chain;
    for (const auto& hop : f.chain) chain.push_back({hop.cmp, literal(hop.threshold)});
    Bits body = run(f.a);
    Bits out(n_ * L_, 0);
    const auto& graph = g_.graph();
    for (int k = 1; k <= L_; ++k) {
      auto edges = g_.edges_at(k);
      for (std::size_t v = 0; v < n_; ++v) {
        long long count = 0;
        if (chain.size() == 1) {
          // A single hop reaches each neighbor at most once (simple graph).
          for (const auto& inc : graph.incident(static_cast<int>(v)))
            if (chain[0].holds(edges[static_cast<std::size_t>(inc.edge)]) &&
                body[at(static_cast<std::size_t>(inc.other), k)])
              ++count;
        } else {
          int src = static_cast<int>(v);
          for (int u : reach(graph, std::span<const int>(&src, 1), chain, edges))
            if (body[at(static_cast<std::size_t>(u), k)]) ++count;
        }
        out[at(v, k)] = count >= need;
      }
    }
    return out;
  }

  Bits window(const FormulaNode& f, const Bits& child) {
    const bool always = f.op == Op::Always;
    std::optional<long long> lo, hi;
    if (f.bound.lower) lo = literal(*f.bound.lower);
    if (f.bound.upper) hi = literal(*f.bound.upper);
    Bits out(n_ * L_);
    std::vector<int> pre(static_cast<std::size_t>(L_) + 1);
    for (std::size_t v = 0; v < n_; ++v) {
      for (int k = 1; k <= L_; ++k) pre[k] = pre[k - 1] + child[at(v, k)];
      // Count of true entries in [l, r] against the interval length.
      auto any = [&](long long l, long long r) {
        r = std::min<long long>(r, L_);
        return l <= r && pre[r] - pre[l - 1] > 0;
      };
      auto all = [&](long long l, long long r) {
        r = std::min<long long>(r, L_);
        return l > r || pre[r] - pre[l - 1] == r - l + 1;
      };
      auto check = [&](long long l, long long r) { return always ? all(l, r) : any(l, r); };
      for (int k = 1; k <= L_; ++k) {
        bool val;
        if (!lo && !hi) {
          val = check(k, L_);
        } else {
          val = true;
          if (lo) val = val && check(k + std::min<long long>(*lo, L_), L_);
          if (hi) val = val && check(k, k + std::min<long long>(*hi, L_));
        }
        out[at(v, k)] = val;
      }
    }
    return out;
  }

  Bits until(const FormulaNode& f, const Bits& a, const Bits& b) {
    std::optional<long long> lo, hi;
    if (f.bound.lower) lo = literal(*f.bound.lower);
    if (f.bound.upper) hi = literal(*f.bound.upper);
    Bits out(n_ * L_);
    const long long none = L_ + 1;
    std::vector<long long> next_b(static_cast<std::size_t>(L_) + 2, none);
    std::vector<long long> next_not_a(static_cast<std::size_t>(L_) + 2, none);
    for (std::size_t v = 0; v < n_; ++v) {
      for (long long k = L_; k >= 1; --k) {
        next_b[k] = b[at(v, k)] ? k : next_b[k + 1];
        next_not_a[k] = a[at(v, k)] ? next_not_a[k + 1] : k;
      }
      for (long long k = 1; k <= L_; ++k) {
        // The earliest witness suffices: `a` must hold through it inclusive.
        auto holds_from = [&](long long start, long long last) {
          if (start > L_) return false;
          long long w = next_b[start];
          return w <= std::min<long long>(last, L_) && next_not_a[k] > w;
        };
        bool val;
        if (!lo && !hi) {
          val = holds_from(k, L_);
        } else {
          val = true;
          if (lo) val = val && holds_from(k + std::min<long long>(*lo, L_), L_);
          if (hi) val = val && holds_from(k, k + std::min<long long>(*hi, L_));
        }
        out[at(v, k)] = val;
      }
    }
    return out;
  }

  const Trajectory& g_;
  std::size_t n_;
  int L_;
};

}  // namespace

SatTable evaluate(const Trajectory& g, const Formula& f) {
  if (!f) fail(ErrorCode::Usage, "null formula");
  Bits bits = Evaluator(g).run(f);
  SatTable t(g.graph().node_count(), g.length());
  for (std::size_t v = 0; v < t.nodes(); ++v)
    for (int k = 1; k <= g.length(); ++k)
      t.set(static_cast<int>(v), k, bits[v * static_cast<std::size_t>(g.length()) + static_cast<std::size_t>(k - 1)]);
  return t;
}

bool sat(const Trajectory& g, const Formula& f, int v, int k) {
  g.check_time(k);
  if (v < 0 || static_cast<std::size_t>(v) >= g.graph().node_count())
    fail(ErrorCode::Input, "node index out of range");
  return evaluate(g, f).value(v, k);
}

bool sat(const Trajectory& g, const Formula& f, const std::string& node, int k) {
  return sat(g, f, g.graph().node_index(node), k);
}

int sat_signature(const Trajectory& g, const Formula& f, int v) { return sat(g, f, v, 1) ? 1 : -1; }

std::vector<bool> satisfied_nodes(const Trajectory& g, const Formula& f) {
  SatTable t = evaluate(g, f);
  std::vector<bool> out(t.nodes());
  for (std::size_t v = 0; v < t.nodes(); ++v) out[v] = t.value(static_cast<int>(v), 1);
  return out;
}

namespace {

template <class Count>
double average_over(const TrajectorySet& s, int workers, Count count) {
  if (s.empty()) fail(ErrorCode::Usage, "empty trajectory set");
  std::vector<std::size_t> per(s.size(), 0);
  parallel_for(s.size(), workers, [&](std::size_t i) { per[i] = count(s.items[i]); });
  std::size_t total = std::accumulate(per.begin(), per.end(), std::size_t{0});
  double denom = static_cast<double>(s.graph->node_count()) * static_cast<double>(s.size());
  if (denom == 0) fail(ErrorCode::Usage, "graph without nodes");
  return static_cast<double>(total) / denom;
}

}  // namespace

double coverage(const TrajectorySet& s, const Formula& f, int workers) {
  return average_over(s, workers, [&](const Trajectory& g) {
    auto nodes = satisfied_nodes(g, f);
    return static_cast<std::size_t>(std::count(nodes.begin(), nodes.end(), true));
  });
}

double misclassification_rate(const TrajectorySet& d, const Formula& f, int workers) {
  for (const auto& g : d.items)
    if (!g.label || (*g.label != 1 && *g.label != -1))
      fail(ErrorCode::Input, "every trajectory needs a class label of 1 or -1");
  return average_over(d, workers, [&](const Trajectory& g) {
    auto nodes = satisfied_nodes(g, f);
    bool positive = *g.label == 1;
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [&](bool s) { return s != positive; }));
  });
}

}  // namespace gtl
