#include "gtl/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gtl/error.hpp"
#include "gtl/eval.hpp"
#include "gtl/parallel.hpp"

namespace gtl {

namespace {

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double draw_label(const PriorModel& prior, int v, int k, std::mt19937_64& rng) {
  const auto& pmf = prior.pmf(v, k);
  const auto& bins = prior.bins();
  double u = uniform01(rng), acc = 0.0;
  std::size_t b = 0;
  for (; b + 1 < pmf.size(); ++b) {
    acc += pmf[b];
    if (u < acc && pmf[b] > 0.0) break;
  }
  while (pmf[b] <= 0.0 && b > 0) --b;
  return bins[b].lo + uniform01(rng) * (bins[b].hi - bins[b].lo);
}

std::vector<std::vector<double>> static_edges(const PriorModel& prior) {
  std::vector<std::vector<double>> out;
  for (double y : prior.edge_labels()) out.emplace_back(static_cast<std::size_t>(prior.length()), y);
  return out;
}

constexpr double kFloorRate = 0.001;
constexpr std::size_t kFloorAfter = 1000000;

}  // namespace

TrajectorySet sample_prior(const PriorModel& prior, std::size_t n, std::uint64_t seed) {
  TrajectorySet out;
  out.graph = prior.graph_ptr();
  const auto edges = static_edges(prior);
  const int L = prior.length();
  for (std::size_t i = 0; i < n; ++i) {
    auto rng = stream(seed, i);
    std::vector<std::vector<double>> nodes(prior.graph().node_count());
    for (std::size_t v = 0; v < nodes.size(); ++v)
      for (int k = 1; k <= L; ++k) nodes[v].push_back(draw_label(prior, static_cast<int>(v), k, rng));
    out.add(Trajectory(prior.graph_ptr(), L, nodes, edges));
  }
  return out;
}

void SwarmScenario::validate() const {
  if (rows < 1 || cols < 1 || rows * cols < 2) fail(ErrorCode::Range, "swarm grid needs at least two cells");
  if (horizon < 1) fail(ErrorCode::Range, "swarm horizon must be positive");
  if (!(concentration > 0.0)) fail(ErrorCode::Range, "Dirichlet concentration must be positive");
  if (!(smoothing > 0.0 && smoothing <= 1.0)) fail(ErrorCode::Range, "smoothing must lie in (0, 1]");
  if (max_proposals < 1) fail(ErrorCode::Range, "proposal cap must be positive");
}

GraphPtr swarm_graph(int rows, int cols) {
  std::vector<std::string> nodes;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) nodes.push_back("c" + std::to_string(r + 1) + std::to_string(c + 1));
  std::vector<std::string> edges;
  std::vector<std::pair<std::string, std::string>> ends;
  for (std::size_t a = 0; a < nodes.size(); ++a)
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      edges.push_back(nodes[a] + "-" + nodes[b]);
      ends.emplace_back(nodes[a], nodes[b]);
    }
  return std::make_shared<const LabeledGraph>(nodes, edges, ends);
}

const std::string& swarm_constraint_text() {
  static const std::string text =
      "G ((x >= 0.125) -> G[<=2] E 1 via (y <= 1) : (x <= " + format_number(1.0 / 9.0) + "))";
  return text;
}

Formula swarm_constraint() { return parse_formula(swarm_constraint_text()); }

TrajectorySet gen_swarm(const SwarmScenario& sc, std::size_t n, GenerationStats* stats) {
  sc.validate();
  GraphPtr graph = swarm_graph(sc.rows, sc.cols);
  const std::size_t cells = graph->node_count();
  const int L = sc.horizon;
  std::vector<std::vector<double>> edges;
  for (std::size_t e = 0; e < graph->edge_count(); ++e) {
    auto [a, b] = graph->endpoints(static_cast<int>(e));
    double dr = a / sc.cols - b / sc.cols, dc = a % sc.cols - b % sc.cols;
    edges.emplace_back(static_cast<std::size_t>(L), std::sqrt(dr * dr + dc * dc));
  }
  const Formula constraint = swarm_constraint();

  auto propose = [&](std::size_t index) -> std::optional<Trajectory> {
    auto rng = stream(sc.seed, index);
    std::gamma_distribution<double> gamma(sc.concentration, 1.0);
    auto dirichlet = [&] {
      std::vector<double> p(cells);
      double sum = 0.0;
      for (auto& x : p) sum += (x = gamma(rng));
      if (sum <= 0.0) {
        std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(cells));
        return p;
      }
      for (auto& x : p) x /= sum;
      return p;
    };
    std::vector<std::vector<double>> nodes(cells, std::vector<double>(static_cast<std::size_t>(L)));
    std::vector<double> cur = dirichlet();
    for (int k = 0; k < L; ++k) {
      if (k > 0) {
        auto fresh = dirichlet();
        for (std::size_t v = 0; v < cells; ++v) cur[v] = (1.0 - sc.smoothing) * cur[v] + sc.smoothing * fresh[v];
      }
      for (std::size_t v = 0; v < cells; ++v) nodes[v][static_cast<std::size_t>(k)] = cur[v];
    }
    Trajectory t(graph, L, nodes, edges);
    auto ok = satisfied_nodes(t, constraint);
    if (std::all_of(ok.begin(), ok.end(), [](bool b) { return b; })) return t;
    return std::nullopt;
  };

  TrajectorySet out;
  out.graph = graph;
  std::size_t proposals = 0;
  const std::size_t batch = 256;
  while (out.size() < n) {
    if (proposals >= sc.max_proposals)
      fail(ErrorCode::Infeasible, "swarm generator hit the proposal cap after " + std::to_string(proposals) +
                                      " proposals with " + std::to_string(out.size()) + " accepted");
    if (proposals >= kFloorAfter && static_cast<double>(out.size()) < kFloorRate * static_cast<double>(proposals))
      fail(ErrorCode::Infeasible, "swarm acceptance rate below 0.1% after " + std::to_string(proposals) +
                                      " proposals");
    std::size_t count = std::min(batch, sc.max_proposals - proposals);
    std::vector<std::optional<Trajectory>> results(count);
    parallel_for(count, sc.workers, [&](std::size_t i) { results[i] = propose(proposals + i); });
    for (std::size_t i = 0; i < count && out.size() < n; ++i) {
      ++proposals;
      if (results[i]) out.add(std::move(*results[i]));
    }
  }
  if (stats) *stats = {proposals, out.size()};
  return out;
}

TrajectorySet gen_planted(const Formula& separator, const PriorModel& prior, std::size_t n_pos,
                          std::size_t n_neg, std::uint64_t seed, const PlantedOptions& opt,
                          GenerationStats* stats) {
  if (!separator) fail(ErrorCode::Usage, "planted generation needs a separator");
  if (is_parametric(separator)) fail(ErrorCode::Usage, "planted separator must be parameter-free");
  if (!(opt.min_fraction > 0.0 && opt.min_fraction <= 1.0))
    fail(ErrorCode::Range, "min_fraction must lie in (0, 1]");
  if (separator->op == Op::True && n_neg > 0)
    fail(ErrorCode::Infeasible, "separator TRUE holds everywhere: no negative trajectories exist");
  if (separator->op == Op::False && n_pos > 0)
    fail(ErrorCode::Infeasible, "separator FALSE holds nowhere: no positive trajectories exist");

  const auto& g = prior.graph();
  const std::size_t nodes_n = g.node_count();
  const int L = prior.length();
  const auto edges = static_edges(prior);
  const std::size_t need = static_cast<std::size_t>(std::ceil(opt.min_fraction * static_cast<double>(nodes_n) - 1e-9));

  TrajectorySet out;
  out.graph = prior.graph_ptr();
  std::size_t proposals = 0;

  // Nodes whose satisfaction matches the label.
  auto agreeing = [&](const std::vector<std::vector<double>>& x, int label) {
    Trajectory t(prior.graph_ptr(), L, x, edges);
    auto ok = satisfied_nodes(t, separator);
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < ok.size(); ++v)
      if (ok[v] == (label > 0)) out.push_back(v);
    return out;
  };

  for (int label : {1, -1}) {
    const std::size_t wanted = label > 0 ? n_pos : n_neg;
    for (std::size_t i = 0; i < wanted; ++i) {
      for (std::uint64_t attempt = 0;; ++attempt) {
        if (proposals >= opt.max_proposals ||
            (proposals >= kFloorAfter && static_cast<double>(out.size()) < kFloorRate * static_cast<double>(proposals)))
          fail(ErrorCode::Infeasible, std::string("cannot generate ") + (label > 0 ? "positive" : "negative") +
                                          " trajectories for the separator after " + std::to_string(proposals) +
                                          " proposals");
        ++proposals;
        auto rng = stream(seed, (static_cast<std::uint64_t>(label > 0 ? 0 : 1) << 40) + i, attempt);
        std::vector<std::vector<double>> x(nodes_n);
        for (std::size_t v = 0; v < nodes_n; ++v)
          for (int k = 1; k <= L; ++k) x[v].push_back(draw_label(prior, static_cast<int>(v), k, rng));
        auto agree = agreeing(x, label);
        // Coordinate-wise resampling that never lowers the agreeing node
        // count; most moves go to a node that still disagrees.
        for (int step = 0; step < opt.walk_steps && agree.size() < nodes_n; ++step) {
          std::size_t v = static_cast<std::size_t>(rng() % nodes_n);
          if (rng() % 4 != 0) {
            std::vector<std::size_t> off;
            for (std::size_t u = 0, i = 0; u < nodes_n; ++u) {
              if (i < agree.size() && agree[i] == u) ++i;
              else off.push_back(u);
            }
            v = off[static_cast<std::size_t>(rng() % off.size())];
          }
          int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(L));
          double old = x[v][static_cast<std::size_t>(k - 1)];
          x[v][static_cast<std::size_t>(k - 1)] = draw_label(prior, static_cast<int>(v), k, rng);
          auto next = agreeing(x, label);
          if (next.size() >= agree.size()) agree = std::move(next);
          else x[v][static_cast<std::size_t>(k - 1)] = old;
        }
        if (agree.size() >= need) {
          Trajectory t(prior.graph_ptr(), L, x, edges);
          t.label = label;
          out.add(std::move(t));
          break;
        }
      }
    }
  }
  if (stats) *stats = {proposals, out.size()};
  return out;
}

}  // namespace gtl
