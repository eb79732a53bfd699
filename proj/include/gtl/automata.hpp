#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gtl/formula.hpp"
#include "gtl/graph.hpp"

namespace gtl {

/// An atomic predicate: a bare node proposition at the anchor node, or a
/// neighbor-count predicate over a node proposition.
struct AtomicPredicate {
  bool counting = false;  // true: at least `count` chain-neighbors satisfy `prop`
  long long count = 1;
  std::vector<EdgeProposition> chain;
  NodeProposition prop;

  friend bool operator==(const AtomicPredicate&, const AtomicPredicate&) = default;
};

std::string to_string(const AtomicPredicate& p);

using Letter = std::uint32_t;  // bitmask over the predicate list
using Word = std::vector<Letter>;

struct Dfa {
  int states = 0;
  int initial = 0;
  int ap_count = 0;
  std::vector<int> delta;  // delta[q * alphabet_size() + letter]
  std::vector<bool> accepting;
  std::vector<std::string> state_labels;  // residual obligation per state

  std::size_t alphabet_size() const { return std::size_t{1} << ap_count; }
  int next(int q, Letter a) const {
    return delta[static_cast<std::size_t>(q) * alphabet_size() + a];
  }
};

bool run_word(const Dfa& dfa, const Word& word);

/// Automaton for a formula relative to an anchor node.
///
/// For a type-I formula the letters range over its predicates (neighbor-count
/// predicates and bare atoms). For a type-II formula the automaton recognizes
/// the quantified body over bare atoms and `outer_count`/`outer_chain` hold the
/// outer neighbor quantifier. When `negated` is set the automaton was built for
/// the negation (safe fragment) and acceptance means violation.
struct FormulaAutomaton {
  Dfa dfa;
  std::vector<AtomicPredicate> ap;
  bool negated = false;
  bool type_two = false;
  long long outer_count = 0;
  std::vector<EdgeProposition> outer_chain;
  Formula target;  // the formula the automaton decides (body for type-II)
  std::vector<std::string> warnings;
};

/// Predicates of a type-I formula (or of an exists-free body) in order of
/// first appearance.
std::vector<AtomicPredicate> atomic_predicates(const Formula& f);

/// Builds the minimized automaton. Throws Scope for formulas outside
/// type-I/type-II or outside both the co-safe and safe fragments.
FormulaAutomaton to_dfa(const Formula& f, int horizon);

/// Letters of the trajectory at node v over the predicate list.
Word label_word(const Trajectory& g, int v, const std::vector<AtomicPredicate>& ap);

/// Whether the formula holds at (v, 1) according to the automaton.
bool automaton_holds(const FormulaAutomaton& a, const Trajectory& g, int v);

std::string to_dot(const FormulaAutomaton& a);

}  // namespace gtl
