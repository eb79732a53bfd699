#include "gtl/automata.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

#include "gtl/error.hpp"

namespace gtl {

std::string to_string(const AtomicPredicate& p) {
  std::string atom = std::string("x ") + (p.prop.cmp == Cmp::Le ? "<= " : ">= ") +
                     format_number(p.prop.threshold);
  if (!p.counting) return atom;
  std::string out = "E " + std::to_string(p.count);
  for (const auto& hop : p.chain)
    out += std::string(" via (y ") + (hop.cmp == Cmp::Le ? "<= " : ">= ") +
           format_number(hop.threshold) + ")";
  return out + " : " + atom;
}

bool run_word(const Dfa& dfa, const Word& word) {
  int q = dfa.initial;
  for (Letter a : word) {
    if (a >= dfa.alphabet_size()) fail(ErrorCode::Range, "letter outside the automaton alphabet");
    q = dfa.next(q, a);
  }
  return dfa.accepting[static_cast<std::size_t>(q)];
}

namespace {

[[noreturn]] void parametric() {
  fail(ErrorCode::Usage, "automata need a parameter-free formula; instantiate it first");
}

NodeProposition node_prop(const FormulaNode& atom) {
  if (atom.threshold.param) parametric();
  return {atom.cmp, atom.threshold.value};
}

AtomicPredicate counting_pred(const FormulaNode& ex) {
  AtomicPredicate p;
  p.counting = true;
  if (ex.count.param) parametric();
  p.count = ex.count.value;
  for (const auto& hop : ex.chain) {
    if (hop.threshold.param) parametric();
    p.chain.push_back({hop.cmp, hop.threshold.value});
  }
  p.prop = node_prop(*ex.a);
  return p;
}

void gather(const Formula& f, std::vector<AtomicPredicate>& out) {
  auto add = [&](AtomicPredicate p) {
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(std::move(p));
  };
  switch (f->op) {
    case Op::True:
    case Op::False: return;
    case Op::Atom: add(AtomicPredicate{false, 1, {}, node_prop(*f)}); return;
    case Op::Exists:
      if (f->a->op != Op::Atom)
        fail(ErrorCode::Scope, "neighbor quantifier over a non-atomic body is not a predicate");
      add(counting_pred(*f));
      return;
    case Op::Not:
    case Op::Eventually:
    case Op::Always: gather(f->a, out); return;
    default:
      gather(f->a, out);
      gather(f->b, out);
      return;
  }
}

// ---------------------------------------------------------------------------
// Residual obligations in negation normal form, hash-consed.

enum class R {
  True, False, Lit, And, Or,
  Ev, EvLe, EvGe, Al, AlLe, AlGe,
  Until, UntilLe, UntilGe, Rel, RelLe, RelGe
};

struct RNode {
  explicit RNode(R k) : kind(k) {}

  R kind;
  long long bound = 0;
  int ap = -1;
  bool positive = true;
  int a = -1;
  int b = -1;
  std::vector<int> kids;

  auto key() const { return std::tie(kind, bound, ap, positive, a, b, kids); }
  bool operator<(const RNode& o) const { return key() < o.key(); }
};

class Store {
 public:
  Store() {
    t_ = intern(RNode{R::True});
    f_ = intern(RNode{R::False});
  }

  int t() const { return t_; }
  int f() const { return f_; }
  const RNode& at(int id) const { return nodes_[static_cast<std::size_t>(id)]; }

  int lit(int ap, bool positive) {
    RNode n{R::Lit};
    n.ap = ap;
    n.positive = positive;
    return intern(std::move(n));
  }

  int temporal(R kind, long long bound, int a, int b = -1) {
    switch (kind) {
      case R::EvGe: if (bound == 0) kind = R::Ev; break;
      case R::AlGe: if (bound == 0) kind = R::Al; break;
      case R::UntilGe: if (bound == 0) kind = R::Until; break;
      case R::RelGe: if (bound == 0) kind = R::Rel; break;
      default: break;
    }
    if (kind == R::Ev || kind == R::Al || kind == R::Until || kind == R::Rel) bound = 0;
    RNode n{kind};
    n.bound = bound;
    n.a = a;
    n.b = b;
    return intern(std::move(n));
  }

  int conj(std::vector<int> kids) { return junction(R::And, std::move(kids)); }
  int disj(std::vector<int> kids) { return junction(R::Or, std::move(kids)); }
  int conj2(int a, int b) { return conj({a, b}); }
  int disj2(int a, int b) { return disj({a, b}); }

  bool final_value(int id) const {
    const RNode& n = at(id);
    switch (n.kind) {
      case R::True: return true;
      case R::False:
      case R::Lit: return false;
      case R::And:
        return std::all_of(n.kids.begin(), n.kids.end(), [&](int k) { return final_value(k); });
      case R::Or:
        return std::any_of(n.kids.begin(), n.kids.end(), [&](int k) { return final_value(k); });
      case R::Ev:
      case R::EvLe:
      case R::EvGe:
      case R::Until:
      case R::UntilLe:
      case R::UntilGe: return false;
      default: return true;
    }
  }

  std::string describe(int id, const std::vector<AtomicPredicate>& ap) const {
    const RNode& n = at(id);
    auto bnd = [&](const char* rel) { return std::string("[") + rel + std::to_string(n.bound) + "]"; };
    switch (n.kind) {
      case R::True: return "TRUE";
      case R::False: return "FALSE";
      case R::Lit: return (n.positive ? "" : "!") + std::string("p") + std::to_string(n.ap);
      case R::And:
      case R::Or: {
        std::string out = "(";
        for (std::size_t i = 0; i < n.kids.size(); ++i) {
          if (i) out += n.kind == R::And ? " & " : " | ";
          out += describe(n.kids[i], ap);
        }
        return out + ")";
      }
      case R::Ev: return "F " + describe(n.a, ap);
      case R::EvLe: return "F" + bnd("<=") + " " + describe(n.a, ap);
      case R::EvGe: return "F" + bnd(">=") + " " + describe(n.a, ap);
      case R::Al: return "G " + describe(n.a, ap);
      case R::AlLe: return "G" + bnd("<=") + " " + describe(n.a, ap);
      case R::AlGe: return "G" + bnd(">=") + " " + describe(n.a, ap);
      case R::Until: return "(" + describe(n.a, ap) + " U " + describe(n.b, ap) + ")";
      case R::UntilLe: return "(" + describe(n.a, ap) + " U" + bnd("<=") + " " + describe(n.b, ap) + ")";
      case R::UntilGe: return "(" + describe(n.a, ap) + " U" + bnd(">=") + " " + describe(n.b, ap) + ")";
      case R::Rel: return "(" + describe(n.a, ap) + " R " + describe(n.b, ap) + ")";
      case R::RelLe: return "(" + describe(n.a, ap) + " R" + bnd("<=") + " " + describe(n.b, ap) + ")";
      case R::RelGe: return "(" + describe(n.a, ap) + " R" + bnd(">=") + " " + describe(n.b, ap) + ")";
    }
    return "?";
  }

  // Identifies residuals that are equal as Boolean functions of their
  // temporal leaves: the relevant leaves followed by the truth table.
  // Residuals with too many leaves are keyed by identity.
  std::vector<std::uint64_t> canonical_key(int id) const {
    std::vector<int> leaves;
    collect_leaves(id, leaves);
    std::sort(leaves.begin(), leaves.end());
    leaves.erase(std::unique(leaves.begin(), leaves.end()), leaves.end());
    if (leaves.size() > kMaxLeaves) return {~std::uint64_t{0}, static_cast<std::uint64_t>(id)};
    auto table = truth_table(id, leaves);
    std::vector<int> relevant;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      const std::size_t bit = std::size_t{1} << i;
      for (std::size_t m = 0; m < table.size(); ++m)
        if (!(m & bit) && table[m] != table[m | bit]) {
          relevant.push_back(leaves[i]);
          break;
        }
    }
    if (relevant.size() != leaves.size()) table = truth_table(id, relevant);
    std::vector<std::uint64_t> key{relevant.size()};
    for (int v : relevant) key.push_back(static_cast<std::uint64_t>(v));
    std::uint64_t word = 0;
    for (std::size_t m = 0; m < table.size(); ++m) {
      if (table[m]) word |= std::uint64_t{1} << (m % 64);
      if (m % 64 == 63 || m + 1 == table.size()) {
        key.push_back(word);
        word = 0;
      }
    }
    return key;
  }

  // Obligation for the next position after reading `letter` here.
  int progress(int id, Letter letter) {
    std::uint64_t key = (static_cast<std::uint64_t>(id) << 32) | letter;
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    int out = progress_uncached(id, letter);
    memo_.emplace(key, out);
    return out;
  }

 private:
  static constexpr std::size_t kMaxLeaves = 16;

  void collect_leaves(int id, std::vector<int>& out) const {
    const RNode& n = at(id);
    if (n.kind == R::True || n.kind == R::False) return;
    if (n.kind == R::And || n.kind == R::Or) {
      for (int k : n.kids) collect_leaves(k, out);
      return;
    }
    out.push_back(id);
  }

  bool eval_with(int id, const std::vector<int>& leaves, std::size_t mask) const {
    const RNode& n = at(id);
    switch (n.kind) {
      case R::True: return true;
      case R::False: return false;
      case R::And:
        return std::all_of(n.kids.begin(), n.kids.end(), [&](int k) { return eval_with(k, leaves, mask); });
      case R::Or:
        return std::any_of(n.kids.begin(), n.kids.end(), [&](int k) { return eval_with(k, leaves, mask); });
      default: {
        auto it = std::lower_bound(leaves.begin(), leaves.end(), id);
        if (it == leaves.end() || *it != id) return false;
        return (mask >> (it - leaves.begin())) & 1U;
      }
    }
  }

  std::vector<bool> truth_table(int id, const std::vector<int>& leaves) const {
    std::vector<bool> table(std::size_t{1} << leaves.size());
    for (std::size_t m = 0; m < table.size(); ++m) table[m] = eval_with(id, leaves, m);
    return table;
  }

  int progress_uncached(int id, Letter letter) {
    const RNode n = at(id);
    switch (n.kind) {
      case R::True:
      case R::False: return id;
      case R::Lit: return (((letter >> n.ap) & 1U) != 0) == n.positive ? t_ : f_;
      case R::And:
      case R::Or: {
        std::vector<int> kids;
        kids.reserve(n.kids.size());
        for (int k : n.kids) kids.push_back(progress(k, letter));
        return n.kind == R::And ? conj(std::move(kids)) : disj(std::move(kids));
      }
      case R::Ev: return disj2(progress(n.a, letter), id);
      case R::EvLe:
        if (n.bound == 0) return progress(n.a, letter);
        return disj2(progress(n.a, letter), temporal(R::EvLe, n.bound - 1, n.a));
      case R::EvGe:
        return temporal(R::EvGe, n.bound - 1, n.a);
      case R::Al: return conj2(progress(n.a, letter), id);
      case R::AlLe:
        if (n.bound == 0) return progress(n.a, letter);
        return conj2(progress(n.a, letter), temporal(R::AlLe, n.bound - 1, n.a));
      case R::AlGe:
        return temporal(R::AlGe, n.bound - 1, n.a);
      case R::Until:
        return conj2(progress(n.a, letter), disj2(progress(n.b, letter), id));
      case R::UntilLe:
        if (n.bound == 0) return conj2(progress(n.a, letter), progress(n.b, letter));
        return conj2(progress(n.a, letter),
                     disj2(progress(n.b, letter), temporal(R::UntilLe, n.bound - 1, n.a, n.b)));
      case R::UntilGe:
        return conj2(progress(n.a, letter), temporal(R::UntilGe, n.bound - 1, n.a, n.b));
      case R::Rel:
        return disj2(progress(n.a, letter), conj2(progress(n.b, letter), id));
      case R::RelLe:
        if (n.bound == 0) return disj2(progress(n.a, letter), progress(n.b, letter));
        return disj2(progress(n.a, letter),
                     conj2(progress(n.b, letter), temporal(R::RelLe, n.bound - 1, n.a, n.b)));
      case R::RelGe:
        return disj2(progress(n.a, letter), temporal(R::RelGe, n.bound - 1, n.a, n.b));
    }
    return id;
  }

  int junction(R kind, std::vector<int> kids) {
    const int absorbing = kind == R::And ? f_ : t_;
    const int neutral = kind == R::And ? t_ : f_;
    std::vector<int> flat;
    for (int k : kids) {
      if (k == absorbing) return absorbing;
      if (k == neutral) continue;
      const RNode& n = at(k);
      if (n.kind == kind)
        flat.insert(flat.end(), n.kids.begin(), n.kids.end());
      else
        flat.push_back(k);
    }
    std::sort(flat.begin(), flat.end());
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    // Complementary literals.
    for (std::size_t i = 0; i < flat.size(); ++i) {
      const RNode& x = at(flat[i]);
      if (x.kind != R::Lit) continue;
      for (std::size_t j = i + 1; j < flat.size(); ++j) {
        const RNode& y = at(flat[j]);
        if (y.kind == R::Lit && y.ap == x.ap && y.positive != x.positive) return absorbing;
      }
    }
    if (flat.empty()) return neutral;
    if (flat.size() == 1) return flat.front();
    RNode n{kind};
    n.kids = std::move(flat);
    return intern(std::move(n));
  }

  int intern(RNode n) {
    auto it = index_.find(n);
    if (it != index_.end()) return it->second;
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(n);
    index_.emplace(std::move(n), id);
    return id;
  }

  std::vector<RNode> nodes_;
  std::map<RNode, int> index_;
  std::unordered_map<std::uint64_t, int> memo_;
  int t_ = 0;
  int f_ = 0;
};

class Translator {
 public:
  Translator(Store& store, const std::vector<AtomicPredicate>& ap, int horizon,
             std::vector<std::string>& warnings)
      : s_(store), ap_(ap), horizon_(horizon), warnings_(warnings) {}

  int run(const Formula& f, bool neg) {
    switch (f->op) {
      case Op::True: return neg ? s_.f() : s_.t();
      case Op::False: return neg ? s_.t() : s_.f();
      case Op::Atom: return s_.lit(index_of(AtomicPredicate{false, 1, {}, node_prop(*f)}), !neg);
      case Op::Exists: return s_.lit(index_of(counting_pred(*f)), !neg);
      case Op::Not: return run(f->a, !neg);
      case Op::And:
        return neg ? s_.disj2(run(f->a, true), run(f->b, true))
                   : s_.conj2(run(f->a, false), run(f->b, false));
      case Op::Or:
        return neg ? s_.conj2(run(f->a, true), run(f->b, true))
                   : s_.disj2(run(f->a, false), run(f->b, false));
      case Op::Implies:
        return neg ? s_.conj2(run(f->a, false), run(f->b, true))
                   : s_.disj2(run(f->a, true), run(f->b, false));
      case Op::Eventually:
      case Op::Always: {
        bool eventually = (f->op == Op::Eventually) != neg;
        int body = run(f->a, neg);
        R plain = eventually ? R::Ev : R::Al;
        R le = eventually ? R::EvLe : R::AlLe;
        R ge = eventually ? R::EvGe : R::AlGe;
        return bounded(f->bound, neg, plain, le, ge, body, -1);
      }
      case Op::Until: {
        int a = run(f->a, neg);
        int b = run(f->b, neg);
        if (neg) return bounded(f->bound, true, R::Rel, R::RelLe, R::RelGe, a, b);
        return bounded(f->bound, false, R::Until, R::UntilLe, R::UntilGe, a, b);
      }
    }
    return s_.f();
  }

 private:
  long long clip(const IntVal& v) {
    if (v.param) parametric();
    if (v.value > horizon_) {
      warnings_.push_back("time bound " + std::to_string(v.value) + " exceeds horizon " +
                          std::to_string(horizon_) + "; clipped");
      return horizon_;
    }
    return v.value;
  }

  // A paired bound is the conjunction of its two halves; under negation the
  // dual halves are joined by a disjunction.
  int bounded(const TimeBound& bound, bool neg, R plain, R le, R ge, int a, int b) {
    if (bound.unbounded()) return s_.temporal(plain, 0, a, b);
    std::vector<int> parts;
    if (bound.lower) parts.push_back(s_.temporal(ge, clip(*bound.lower), a, b));
    if (bound.upper) parts.push_back(s_.temporal(le, clip(*bound.upper), a, b));
    return neg ? s_.disj(parts) : s_.conj(parts);
  }

  int index_of(const AtomicPredicate& p) {
    auto it = std::find(ap_.begin(), ap_.end(), p);
    if (it == ap_.end()) fail(ErrorCode::Scope, "predicate missing from alphabet");
    return static_cast<int>(it - ap_.begin());
  }

  Store& s_;
  const std::vector<AtomicPredicate>& ap_;
  long long horizon_;
  std::vector<std::string>& warnings_;
};

constexpr std::size_t kMaxStates = 200000;
constexpr int kMaxPredicates = 16;

Dfa build(Store& store, int initial, int ap_count, const std::vector<AtomicPredicate>& ap) {
  const std::size_t sigma = std::size_t{1} << ap_count;
  std::vector<int> residual{initial};
  std::unordered_map<int, int> state_of{{initial, 0}};
  std::map<std::vector<std::uint64_t>, int> class_of{{store.canonical_key(initial), 0}};
  std::vector<int> delta;
  for (std::size_t q = 0; q < residual.size(); ++q) {
    for (Letter a = 0; a < sigma; ++a) {
      int r = store.progress(residual[q], a);
      auto known = state_of.find(r);
      if (known == state_of.end()) {
        auto [it, fresh] = class_of.emplace(store.canonical_key(r), static_cast<int>(residual.size()));
        if (fresh) {
          residual.push_back(r);
          if (residual.size() > kMaxStates)
            fail(ErrorCode::Scope, "automaton exceeds " + std::to_string(kMaxStates) + " states");
        }
        known = state_of.emplace(r, it->second).first;
      }
      delta.push_back(known->second);
    }
  }
  const std::size_t n = residual.size();

  // Moore partition refinement.
  std::vector<int> block(n);
  for (std::size_t q = 0; q < n; ++q) block[q] = store.final_value(residual[q]) ? 1 : 0;
  std::size_t count = 0;
  for (;;) {
    std::map<std::vector<int>, int> sig_index;
    std::vector<int> next(n);
    for (std::size_t q = 0; q < n; ++q) {
      std::vector<int> sig;
      sig.reserve(sigma + 1);
      sig.push_back(block[q]);
      for (std::size_t a = 0; a < sigma; ++a) sig.push_back(block[static_cast<std::size_t>(delta[q * sigma + a])]);
      auto [it, fresh] = sig_index.emplace(std::move(sig), static_cast<int>(sig_index.size()));
      next[q] = it->second;
    }
    std::size_t new_count = sig_index.size();
    block.swap(next);
    if (new_count == count) break;
    count = new_count;
  }

  // Renumber blocks in breadth-first order from the initial state.
  std::vector<int> rep(count, -1);
  for (std::size_t q = 0; q < n; ++q)
    if (rep[static_cast<std::size_t>(block[q])] < 0) rep[static_cast<std::size_t>(block[q])] = static_cast<int>(q);
  std::vector<int> order(count, -1);
  std::deque<int> queue{block[0]};
  order[static_cast<std::size_t>(block[0])] = 0;
  int assigned = 1;
  std::vector<int> blocks_in_order{block[0]};
  while (!queue.empty()) {
    int b = queue.front();
    queue.pop_front();
    std::size_t q = static_cast<std::size_t>(rep[static_cast<std::size_t>(b)]);
    for (std::size_t a = 0; a < sigma; ++a) {
      int nb = block[static_cast<std::size_t>(delta[q * sigma + a])];
      if (order[static_cast<std::size_t>(nb)] < 0) {
        order[static_cast<std::size_t>(nb)] = assigned++;
        blocks_in_order.push_back(nb);
        queue.push_back(nb);
      }
    }
  }

  Dfa dfa;
  dfa.states = assigned;
  dfa.initial = 0;
  dfa.ap_count = ap_count;
  dfa.delta.resize(static_cast<std::size_t>(assigned) * sigma);
  dfa.accepting.resize(static_cast<std::size_t>(assigned));
  for (int b : blocks_in_order) {
    std::size_t q = static_cast<std::size_t>(rep[static_cast<std::size_t>(b)]);
    std::size_t s = static_cast<std::size_t>(order[static_cast<std::size_t>(b)]);
    dfa.accepting[s] = store.final_value(residual[q]);
    dfa.state_labels.push_back(store.describe(residual[q], ap));
    for (std::size_t a = 0; a < sigma; ++a)
      dfa.delta[s * sigma + a] = order[static_cast<std::size_t>(block[static_cast<std::size_t>(delta[q * sigma + a])])];
  }
  return dfa;
}

}  // namespace

std::vector<AtomicPredicate> atomic_predicates(const Formula& f) {
  std::vector<AtomicPredicate> out;
  gather(f, out);
  return out;
}

FormulaAutomaton to_dfa(const Formula& f, int horizon) {
  if (!f) fail(ErrorCode::Usage, "null formula");
  if (horizon < 1) fail(ErrorCode::Range, "horizon must be at least 1");
  if (is_parametric(f)) parametric();
  Subtype st = classify_subtype(f);
  FormulaAutomaton out;
  if (st.typeI) {
    out.target = f;
  } else if (st.typeII) {
    out.type_two = true;
    out.target = f->a;
    out.outer_count = f->count.value;
    for (const auto& hop : f->chain) out.outer_chain.push_back({hop.cmp, hop.threshold.value});
  } else {
    fail(ErrorCode::Scope, "formula is neither type-I nor type-II: " + to_string(f));
  }
  if (is_cosafe(out.target)) {
    out.negated = false;
  } else if (is_safe(out.target)) {
    out.negated = true;
  } else {
    fail(ErrorCode::Scope, "formula is neither syntactically co-safe nor safe: " + to_string(f));
  }
  out.ap = atomic_predicates(out.target);
  if (static_cast<int>(out.ap.size()) > kMaxPredicates)
    fail(ErrorCode::Scope, "too many atomic predicates (" + std::to_string(out.ap.size()) + ")");
  Store store;
  int init = Translator(store, out.ap, horizon, out.warnings).run(out.target, out.negated);
  std::sort(out.warnings.begin(), out.warnings.end());
  out.warnings.erase(std::unique(out.warnings.begin(), out.warnings.end()), out.warnings.end());
  out.dfa = build(store, init, static_cast<int>(out.ap.size()), out.ap);
  return out;
}

Word label_word(const Trajectory& g, int v, const std::vector<AtomicPredicate>& ap) {
  if (v < 0 || static_cast<std::size_t>(v) >= g.graph().node_count())
    fail(ErrorCode::Input, "node index out of range");
  Word w(static_cast<std::size_t>(g.length()), 0);
  for (int k = 1; k <= g.length(); ++k) {
    Letter letter = 0;
    for (std::size_t i = 0; i < ap.size(); ++i) {
      const auto& p = ap[i];
      bool holds;
      if (!p.counting) {
        holds = p.prop.holds(g.x(v, k));
      } else {
        long long count = 0;
        for (int u : reach(g.graph(), std::span<const int>(&v, 1), p.chain, g.edges_at(k)))
          if (p.prop.holds(g.x(u, k))) ++count;
        holds = count >= p.count;
      }
      if (holds) letter |= Letter{1} << i;
    }
    w[static_cast<std::size_t>(k - 1)] = letter;
  }
  return w;
}

bool automaton_holds(const FormulaAutomaton& a, const Trajectory& g, int v) {
  auto decide = [&](int node) { return run_word(a.dfa, label_word(g, node, a.ap)) != a.negated; };
  if (!a.type_two) return decide(v);
  long long count = 0;
  for (int u : reach(g.graph(), std::span<const int>(&v, 1), a.outer_chain, g.edges_at(1)))
    if (decide(u)) ++count;
  return count >= a.outer_count;
}

std::string to_dot(const FormulaAutomaton& a) {
  const Dfa& d = a.dfa;
  std::ostringstream out;
  out << "digraph dfa {\n  rankdir=LR;\n";
  out << "  // formula: " << to_string(a.target) << (a.negated ? " (negated)" : "") << "\n";
  for (std::size_t i = 0; i < a.ap.size(); ++i)
    out << "  // p" << i << ": " << to_string(a.ap[i]) << "\n";
  out << "  start [shape=point];\n  start -> q" << d.initial << ";\n";
  for (int q = 0; q < d.states; ++q) {
    out << "  q" << q << " [shape=" << (d.accepting[static_cast<std::size_t>(q)] ? "doublecircle" : "circle")
        << ", tooltip=\"";
    for (char c : d.state_labels[static_cast<std::size_t>(q)]) out << (c == '"' ? '\'' : c);
    out << "\"];\n";
  }
  for (int q = 0; q < d.states; ++q) {
    std::map<int, std::vector<Letter>> by_target;
    for (Letter l = 0; l < d.alphabet_size(); ++l) by_target[d.next(q, l)].push_back(l);
    for (const auto& [target, letters] : by_target) {
      out << "  q" << q << " -> q" << target << " [label=\"";
      if (letters.size() == d.alphabet_size()) {
        out << "*";
      } else {
        for (std::size_t i = 0; i < letters.size(); ++i) {
          if (i) out << ",";
          out << "{";
          bool first = true;
          for (int b = 0; b < d.ap_count; ++b) {
            if ((letters[i] >> b) & 1U) {
              out << (first ? "" : " ") << "p" << b;
              first = false;
            }
          }
          out << "}";
        }
      }
      out << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace gtl
