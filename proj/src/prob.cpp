#include "gtl/prob.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gtl/error.hpp"
#include "gtl/parallel.hpp"

namespace gtl {

PriorModel::PriorModel(GraphPtr graph, int length, std::vector<Bin> bins,
                       std::vector<std::vector<std::vector<double>>> pmf,
                       std::vector<double> edge_labels)
    : graph_(std::move(graph)),
      length_(length),
      bins_(std::move(bins)),
      pmf_(std::move(pmf)),
      edge_labels_(std::move(edge_labels)) {
  if (!graph_) fail(ErrorCode::Input, "prior without a graph");
  if (length_ < 1) fail(ErrorCode::Input, "prior horizon must be at least 1");
  if (bins_.empty()) fail(ErrorCode::Input, "prior needs at least one bin");
  for (std::size_t i = 0; i < bins_.size(); ++i) {
    const Bin& b = bins_[i];
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.lo > b.hi)
      fail(ErrorCode::Input, "bin " + std::to_string(i) + " is not a finite interval");
    if (i > 0 && b.lo < bins_[i - 1].hi)
      fail(ErrorCode::Input, "bins must be sorted and disjoint");
  }
  if (pmf_.size() != graph_->node_count())
    fail(ErrorCode::Input, "prior pmf must cover every node");
  for (std::size_t v = 0; v < pmf_.size(); ++v) {
    if (pmf_[v].size() != static_cast<std::size_t>(length_))
      fail(ErrorCode::Input, "node '" + graph_->node_id(static_cast<int>(v)) +
                                 "' needs one pmf per time index");
    for (const auto& p : pmf_[v]) {
      if (p.size() != bins_.size()) fail(ErrorCode::Input, "pmf length differs from bin count");
      double sum = 0;
      for (double x : p) {
        if (!(x >= 0) || !std::isfinite(x)) fail(ErrorCode::Input, "pmf entries must be nonnegative");
        sum += x;
      }
      if (std::fabs(sum - 1.0) > 1e-9)
        fail(ErrorCode::Input, "pmf for node '" + graph_->node_id(static_cast<int>(v)) +
                                   "' sums to " + format_number(sum));
    }
  }
  if (edge_labels_.size() != graph_->edge_count())
    fail(ErrorCode::Input, "prior needs a label for every edge");
  for (double y : edge_labels_)
    if (!std::isfinite(y)) fail(ErrorCode::Input, "non-finite edge label in prior");
}

bool PriorModel::full_support() const {
  for (const auto& node : pmf_)
    for (const auto& p : node)
      for (double x : p)
        if (!(x > 0)) return false;
  return true;
}

double bin_fraction(const Bin& bin, const NodeProposition& p) {
  if (bin.hi == bin.lo) return p.holds(bin.lo) ? 1.0 : 0.0;
  double width = bin.hi - bin.lo;
  double inside = p.cmp == Cmp::Ge ? bin.hi - std::max(bin.lo, p.threshold)
                                   : std::min(bin.hi, p.threshold) - bin.lo;
  return std::clamp(inside / width, 0.0, 1.0);
}

double atom_probability(const PriorModel& prior, const NodeProposition& p, int v, int k) {
  const auto& pmf = prior.pmf(v, k);
  double total = 0;
  for (std::size_t b = 0; b < pmf.size(); ++b)
    if (pmf[b] > 0) total += pmf[b] * bin_fraction(prior.bins()[b], p);
  return std::clamp(total, 0.0, 1.0);
}

double poisson_binomial_tail(const std::vector<double>& probs, long long n) {
  if (n <= 0) return 1.0;
  if (static_cast<std::size_t>(n) > probs.size()) return 0.0;
  const std::size_t cap = static_cast<std::size_t>(n);
  // dist[c] = P(count == c) for c < cap, dist[cap] = P(count >= cap)
  std::vector<double> dist(cap + 1, 0.0);
  dist[0] = 1.0;
  for (double p : probs) {
    for (std::size_t c = cap + 1; c-- > 0;) {
      double stay = dist[c] * (c == cap ? 1.0 : 1.0 - p);
      double arrive = c > 0 ? dist[c - 1] * p : 0.0;
      dist[c] = stay + arrive;
    }
  }
  return std::clamp(dist[cap], 0.0, 1.0);
}

namespace {

NodeSet reach_static(const PriorModel& prior, int v, const std::vector<EdgeProposition>& chain) {
  return reach(prior.graph(), std::span<const int>(&v, 1), chain, prior.edge_labels());
}

// Joint truth distribution of several propositions on one node's label.
std::map<std::uint32_t, double> cell_distribution(const PriorModel& prior,
                                                  const std::vector<NodeProposition>& props, int u,
                                                  int k) {
  std::map<std::uint32_t, double> out;
  const auto& pmf = prior.pmf(u, k);
  auto mask_at = [&](double x) {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < props.size(); ++i)
      if (props[i].holds(x)) m |= std::uint32_t{1} << i;
    return m;
  };
  for (std::size_t b = 0; b < pmf.size(); ++b) {
    if (!(pmf[b] > 0)) continue;
    const Bin& bin = prior.bins()[b];
    if (bin.hi == bin.lo) {
      out[mask_at(bin.lo)] += pmf[b];
      continue;
    }
    std::vector<double> cuts{bin.lo, bin.hi};
    for (const auto& p : props)
      if (p.threshold > bin.lo && p.threshold < bin.hi) cuts.push_back(p.threshold);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    const double width = bin.hi - bin.lo;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      double mid = 0.5 * (cuts[s] + cuts[s + 1]);
      out[mask_at(mid)] += pmf[b] * (cuts[s + 1] - cuts[s]) / width;
    }
  }
  return out;
}

}  // namespace

double exists_probability(const PriorModel& prior, long long n,
                          const std::vector<EdgeProposition>& chain, const NodeProposition& p,
                          int v, int k) {
  if (n <= 0) return 1.0;
  std::vector<double> probs;
  for (int u : reach_static(prior, v, chain)) probs.push_back(atom_probability(prior, p, u, k));
  return poisson_binomial_tail(probs, n);
}

std::vector<double> letter_distribution(const PriorModel& prior,
                                        const std::vector<AtomicPredicate>& ap, int v, int k,
                                        const ProbOptions& opt, ProbCounters* counters,
                                        std::vector<std::string>* warnings) {
  if (k < 1 || k > prior.length()) fail(ErrorCode::Range, "time index outside the prior horizon");
  if (v < 0 || static_cast<std::size_t>(v) >= prior.graph().node_count())
    fail(ErrorCode::Input, "node index out of range");
  if (ap.size() > 16) fail(ErrorCode::Scope, "too many atomic predicates");
  const std::size_t m = ap.size();
  std::vector<double> out(std::size_t{1} << m, 0.0);

  // Per predicate: the nodes it inspects and its counter radix.
  std::vector<NodeSet> touched(m);
  std::vector<std::size_t> radix(m), stride(m);
  std::size_t total = 1;
  bool overflow = false;
  for (std::size_t i = 0; i < m; ++i) {
    if (ap[i].counting) {
      touched[i] = reach_static(prior, v, ap[i].chain);
      long long cap = std::min<long long>(std::max<long long>(ap[i].count, 0),
                                          static_cast<long long>(touched[i].size()));
      radix[i] = static_cast<std::size_t>(cap) + 1;
    } else {
      touched[i] = {v};
      radix[i] = 2;
    }
    stride[i] = total;
    if (total > opt.state_cap / radix[i] + 1) overflow = true;
    total *= radix[i];
  }
  if (overflow || total > opt.state_cap) {
    if (counters) ++counters->fallbacks;
    if (warnings)
      warnings->push_back("joint letter distribution exceeds the state cap; assuming independent predicates");
    std::vector<double> marginal(m);
    for (std::size_t i = 0; i < m; ++i) {
      marginal[i] = ap[i].counting ? exists_probability(prior, ap[i].count, ap[i].chain, ap[i].prop, v, k)
                                   : atom_probability(prior, ap[i].prop, v, k);
    }
    for (std::size_t letter = 0; letter < out.size(); ++letter) {
      double p = 1.0;
      for (std::size_t i = 0; i < m; ++i) p *= ((letter >> i) & 1U) ? marginal[i] : 1.0 - marginal[i];
      out[letter] = p;
    }
    return out;
  }
  if (counters) counters->letter_dp_states += total;

  std::set<int> involved;
  for (const auto& t : touched) involved.insert(t.begin(), t.end());

  std::vector<double> dp(total, 0.0), next(total, 0.0);
  dp[0] = 1.0;
  for (int u : involved) {
    std::vector<NodeProposition> props;
    std::vector<std::size_t> owner;
    for (std::size_t i = 0; i < m; ++i) {
      if (std::binary_search(touched[i].begin(), touched[i].end(), u)) {
        props.push_back(ap[i].prop);
        owner.push_back(i);
      }
    }
    auto cells = cell_distribution(prior, props, u, k);
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t s = 0; s < total; ++s) {
      if (dp[s] == 0.0) continue;
      for (const auto& [mask, p] : cells) {
        if (p == 0.0) continue;
        std::size_t t = s;
        for (std::size_t r = 0; r < owner.size(); ++r) {
          if (!((mask >> r) & 1U)) continue;
          std::size_t i = owner[r];
          std::size_t c = (s / stride[i]) % radix[i];
          if (c + 1 < radix[i]) t += stride[i];
        }
        next[t] += dp[s] * p;
      }
    }
    dp.swap(next);
  }
  for (std::size_t s = 0; s < total; ++s) {
    if (dp[s] == 0.0) continue;
    std::size_t letter = 0;
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t c = (s / stride[i]) % radix[i];
      bool holds = ap[i].counting ? static_cast<long long>(c) >= ap[i].count : c == 1;
      if (holds) letter |= std::size_t{1} << i;
    }
    out[letter] += dp[s];
  }
  return out;
}

double acceptance_probability(const PriorModel& prior, const FormulaAutomaton& a, int v,
                              const ProbOptions& opt, ProbCounters* counters,
                              std::vector<std::string>* warnings) {
  const Dfa& d = a.dfa;
  const std::size_t K = static_cast<std::size_t>(d.states);
  const std::size_t sigma = d.alphabet_size();
  std::vector<double> p(K), np(K);
  for (std::size_t q = 0; q < K; ++q) p[q] = d.accepting[q] ? 1.0 : 0.0;
  std::vector<double> c(K * K);
  for (int l = prior.length(); l >= 1; --l) {
    auto dist = letter_distribution(prior, a.ap, v, l, opt, counters, warnings);
    std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t q = 0; q < K; ++q)
      for (std::size_t s = 0; s < sigma; ++s)
        c[q * K + static_cast<std::size_t>(d.delta[q * sigma + s])] += dist[s];
    for (std::size_t q = 0; q < K; ++q) {
      double acc = 0;
      for (std::size_t j = 0; j < K; ++j) acc += c[q * K + j] * p[j];
      np[q] = acc;
    }
    p.swap(np);
    if (counters) {
      counters->transition_evals += K * sigma;
      counters->matrix_ops += K * K;
    }
  }
  return std::clamp(p[static_cast<std::size_t>(d.initial)], 0.0, 1.0);
}

SatisfactionModel::SatisfactionModel(const PriorModel& prior, const Formula& f, ProbOptions opt)
    : prior_(prior), f_(f), opt_(opt) {
  if (!f_) fail(ErrorCode::Usage, "null formula");
  if (f_->op == Op::True) {
    constant_ = 1.0;
  } else if (f_->op == Op::False) {
    constant_ = 0.0;
  } else {
    automaton_ = to_dfa(f_, prior_.length());
    warnings_ = automaton_->warnings;
  }
}

double SatisfactionModel::body_probability(int u) {
  auto it = body_cache_.find(u);
  if (it != body_cache_.end()) return it->second;
  double p = acceptance_probability(prior_, *automaton_, u, opt_, &counters_, &warnings_);
  if (automaton_->negated) p = 1.0 - p;
  p = std::clamp(p, 0.0, 1.0);
  body_cache_.emplace(u, p);
  return p;
}

double SatisfactionModel::probability(int v) {
  if (v < 0 || static_cast<std::size_t>(v) >= prior_.graph().node_count())
    fail(ErrorCode::Input, "node index out of range");
  if (constant_) return *constant_;
  if (!automaton_->type_two) return body_probability(v);
  std::vector<double> beta;
  for (int u : reach_static(prior_, v, automaton_->outer_chain)) beta.push_back(body_probability(u));
  return poisson_binomial_tail(beta, automaton_->outer_count);
}

double satisfaction_probability(const PriorModel& prior, const Formula& f, int v,
                                const ProbOptions& opt, ProbCounters* counters) {
  SatisfactionModel model(prior, f, opt);
  double p = model.probability(v);
  if (counters) {
    counters->transition_evals += model.counters().transition_evals;
    counters->matrix_ops += model.counters().matrix_ops;
    counters->letter_dp_states += model.counters().letter_dp_states;
    counters->fallbacks += model.counters().fallbacks;
  }
  return p;
}

InfoGainReport compute_ig(const PriorModel& prior, const Formula& f, const std::vector<int>& nodes,
                          const ProbOptions& opt, int workers) {
  InfoGainReport r;
  if (nodes.empty()) {
    for (std::size_t v = 0; v < prior.graph().node_count(); ++v) r.nodes.push_back(static_cast<int>(v));
  } else {
    r.nodes = nodes;
  }
  r.probability.assign(r.nodes.size(), 0.0);
  if (workers <= 1) {
    SatisfactionModel model(prior, f, opt);
    for (std::size_t i = 0; i < r.nodes.size(); ++i) r.probability[i] = model.probability(r.nodes[i]);
    r.counters = model.counters();
    r.warnings = model.warnings();
  } else {
    std::vector<ProbCounters> per(r.nodes.size());
    std::vector<std::vector<std::string>> warn(r.nodes.size());
    parallel_for(r.nodes.size(), workers, [&](std::size_t i) {
      SatisfactionModel model(prior, f, opt);
      r.probability[i] = model.probability(r.nodes[i]);
      per[i] = model.counters();
      warn[i] = model.warnings();
    });
    for (std::size_t i = 0; i < per.size(); ++i) {
      r.counters.transition_evals += per[i].transition_evals;
      r.counters.matrix_ops += per[i].matrix_ops;
      r.counters.letter_dp_states += per[i].letter_dp_states;
      r.counters.fallbacks += per[i].fallbacks;
      r.warnings.insert(r.warnings.end(), warn[i].begin(), warn[i].end());
    }
  }
  std::sort(r.warnings.begin(), r.warnings.end());
  r.warnings.erase(std::unique(r.warnings.begin(), r.warnings.end()), r.warnings.end());
  const double L = prior.length();
  double sum = 0;
  for (double p : r.probability) {
    double ig = (p > 0.0 && p < 1.0) ? -std::log(p) / L : 0.0;
    r.info_gain.push_back(ig);
    sum += ig;
  }
  r.average = r.info_gain.empty() ? 0.0 : sum / static_cast<double>(r.info_gain.size());
  return r;
}

PriorModel estimate_prior(const TrajectorySet& s, std::vector<Bin> bins, double smoothing) {
  if (s.empty()) fail(ErrorCode::Usage, "cannot estimate a prior from an empty set");
  if (bins.empty()) fail(ErrorCode::Input, "need at least one bin");
  if (smoothing < 0) fail(ErrorCode::Input, "smoothing must be nonnegative");
  const auto& graph = *s.graph;
  const int L = s.length();
  auto bin_of = [&](double x) {
    for (std::size_t b = 0; b < bins.size(); ++b)
      if (x >= bins[b].lo && x <= bins[b].hi) return b;
    if (x < bins.front().lo) return std::size_t{0};
    if (x > bins.back().hi) return bins.size() - 1;
    std::size_t best = 0;
    double gap = INFINITY;
    for (std::size_t b = 0; b < bins.size(); ++b) {
      double d = std::min(std::fabs(x - bins[b].lo), std::fabs(x - bins[b].hi));
      if (d < gap) {
        gap = d;
        best = b;
      }
    }
    return best;
  };
  std::vector<std::vector<std::vector<double>>> pmf(graph.node_count());
  const double denom = static_cast<double>(s.size()) + smoothing * static_cast<double>(bins.size());
  if (!(denom > 0)) fail(ErrorCode::Input, "degenerate smoothing");
  for (std::size_t v = 0; v < graph.node_count(); ++v) {
    for (int k = 1; k <= L; ++k) {
      std::vector<double> counts(bins.size(), smoothing);
      for (const auto& g : s.items) counts[bin_of(g.x(static_cast<int>(v), k))] += 1.0;
      for (double& c : counts) c /= denom;
      pmf[v].push_back(std::move(counts));
    }
  }
  auto first = s.items.front().edges_at(1);
  return PriorModel(s.graph, L, std::move(bins), std::move(pmf),
                    std::vector<double>(first.begin(), first.end()));
}

}  // namespace gtl
