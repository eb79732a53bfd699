#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gtl/graph.hpp"

namespace gtl {

/// A literal or a named parameter in an integer position.
struct IntVal {
  std::optional<std::string> param;
  long long value = 0;

  static IntVal lit(long long v) { return {std::nullopt, v}; }
  static IntVal var(std::string name) { return {std::move(name), 0}; }
  bool is_param() const { return param.has_value(); }
  friend bool operator==(const IntVal&, const IntVal&) = default;
};

/// A literal or a named parameter in a real-valued position.
struct NumVal {
  std::optional<std::string> param;
  double value = 0.0;

  static NumVal lit(double v) { return {std::nullopt, v}; }
  static NumVal var(std::string name) { return {std::move(name), 0.0}; }
  bool is_param() const { return param.has_value(); }
  friend bool operator==(const NumVal&, const NumVal&) = default;
};

/// Either side may be absent. Both present means the conjunction of a
/// lower-bounded and an upper-bounded operator, not a window.
struct TimeBound {
  std::optional<IntVal> lower;  // ">= i"
  std::optional<IntVal> upper;  // "<= i"

  bool unbounded() const { return !lower && !upper; }
  bool paired() const { return lower && upper; }
  friend bool operator==(const TimeBound&, const TimeBound&) = default;
};

struct EdgeAtom {
  Cmp cmp = Cmp::Le;
  NumVal threshold;
  friend bool operator==(const EdgeAtom&, const EdgeAtom&) = default;
};

enum class Op { True, False, Atom, Exists, Not, And, Or, Implies, Until, Eventually, Always };

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
  Op op = Op::True;
  // Atom
  Cmp cmp = Cmp::Ge;
  NumVal threshold;
  // Exists; chain[0] is the first hop applied
  IntVal count;
  std::vector<EdgeAtom> chain;
  // Eventually / Always / Until
  TimeBound bound;
  // Children: Not/Exists/Eventually/Always use `a`; binary nodes use `a` and `b`.
  Formula a;
  Formula b;
};

// Builders
Formula make_true();
Formula make_false();
Formula make_atom(Cmp cmp, NumVal threshold);
Formula make_exists(IntVal count, std::vector<EdgeAtom> chain, Formula body);
Formula make_not(Formula f);
Formula make_and(Formula a, Formula b);
Formula make_or(Formula a, Formula b);
Formula make_implies(Formula a, Formula b);
Formula make_until(TimeBound bound, Formula a, Formula b);
Formula make_eventually(TimeBound bound, Formula f);
Formula make_always(TimeBound bound, Formula f);

bool structurally_equal(const Formula& a, const Formula& b);

/// Parses the textual grammar; throws ParseError.
Formula parse_formula(const std::string& text);

/// Canonical text: binary connectives are fully parenthesized, so
/// parse_formula(to_string(f)) is structurally equal to f.
std::string to_string(const Formula& f);

/// Shortest text that reads back as the same double.
std::string format_number(double v);

struct ParamInfo {
  std::string name;
  bool integer = false;
};

/// Free parameters in order of first appearance (pre-order, left to right).
std::vector<ParamInfo> parameters(const Formula& f);
bool is_parametric(const Formula& f);

using Valuation = std::map<std::string, double>;

/// Replaces every parameter. Throws Input errors for a missing parameter or
/// a non-integral value in an integer position, Range errors for N < 1 or a
/// negative time bound.
Formula instantiate(const Formula& f, const Valuation& theta);

/// Renames parameters via `rename`; names absent from the map are kept.
Formula rename_parameters(const Formula& f, const std::map<std::string, std::string>& rename);

enum class Polarity { Undefined, Positive, Negative, Mixed };

const char* polarity_symbol(Polarity p);
Polarity negate(Polarity p);
Polarity combine(Polarity a, Polarity b);
Polarity polarity(const Formula& f, const std::string& param);

/// Number of And/Or connectives; an implication counts once and a paired
/// time bound counts zero.
int formula_size(const Formula& f);

struct Subtype {
  bool typeI = false;
  bool typeII = false;
  bool cosafe = false;
  bool safe = false;
  friend bool operator==(const Subtype&, const Subtype&) = default;
};

Subtype classify_subtype(const Formula& f);
bool is_cosafe(const Formula& f);
bool is_safe(const Formula& f);

}  // namespace gtl
