#include "gtl/formula.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include "gtl/error.hpp"

namespace gtl {

namespace {

Formula node(FormulaNode n) { return std::make_shared<const FormulaNode>(std::move(n)); }

void require(const Formula& f, const char* what) {
  if (!f) fail(ErrorCode::Usage, std::string("null operand for ") + what);
}

}  // namespace

Formula make_true() {
  static const Formula t = [] {
    FormulaNode n;
    n.op = Op::True;
    return node(std::move(n));
  }();
  return t;
}

Formula make_false() {
  static const Formula f = [] {
    FormulaNode n;
    n.op = Op::False;
    return node(std::move(n));
  }();
  return f;
}

Formula make_atom(Cmp cmp, NumVal threshold) {
  FormulaNode n;
  n.op = Op::Atom;
  n.cmp = cmp;
  n.threshold = std::move(threshold);
  return node(std::move(n));
}

Formula make_exists(IntVal count, std::vector<EdgeAtom> chain, Formula body) {
  require(body, "E");
  if (chain.empty()) fail(ErrorCode::Usage, "neighbor quantifier needs at least one hop");
  FormulaNode n;
  n.op = Op::Exists;
  n.count = std::move(count);
  n.chain = std::move(chain);
  n.a = std::move(body);
  return node(std::move(n));
}

Formula make_not(Formula f) {
  require(f, "!");
  FormulaNode n;
  n.op = Op::Not;
  n.a = std::move(f);
  return node(std::move(n));
}

namespace {

Formula binary(Op op, Formula a, Formula b) {
  require(a, "binary connective");
  require(b, "binary connective");
  FormulaNode n;
  n.op = op;
  n.a = std::move(a);
  n.b = std::move(b);
  return node(std::move(n));
}

}  // namespace

Formula make_and(Formula a, Formula b) { return binary(Op::And, std::move(a), std::move(b)); }
Formula make_or(Formula a, Formula b) { return binary(Op::Or, std::move(a), std::move(b)); }
Formula make_implies(Formula a, Formula b) {
  return binary(Op::Implies, std::move(a), std::move(b));
}

Formula make_until(TimeBound bound, Formula a, Formula b) {
  require(a, "U");
  require(b, "U");
  FormulaNode n;
  n.op = Op::Until;
  n.bound = std::move(bound);
  n.a = std::move(a);
  n.b = std::move(b);
  return node(std::move(n));
}

Formula make_eventually(TimeBound bound, Formula f) {
  require(f, "F");
  FormulaNode n;
  n.op = Op::Eventually;
  n.bound = std::move(bound);
  n.a = std::move(f);
  return node(std::move(n));
}

Formula make_always(TimeBound bound, Formula f) {
  require(f, "G");
  FormulaNode n;
  n.op = Op::Always;
  n.bound = std::move(bound);
  n.a = std::move(f);
  return node(std::move(n));
}

bool structurally_equal(const Formula& a, const Formula& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op) return false;
  switch (a->op) {
    case Op::True:
    case Op::False: return true;
    case Op::Atom: return a->cmp == b->cmp && a->threshold == b->threshold;
    case Op::Exists:
      return a->count == b->count && a->chain == b->chain && structurally_equal(a->a, b->a);
    case Op::Not: return structurally_equal(a->a, b->a);
    case Op::Eventually:
    case Op::Always: return a->bound == b->bound && structurally_equal(a->a, b->a);
    case Op::Until:
      if (!(a->bound == b->bound)) return false;
      [[fallthrough]];
    case Op::And:
    case Op::Or:
    case Op::Implies: return structurally_equal(a->a, b->a) && structurally_equal(a->b, b->b);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Printing

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string print_int(const IntVal& v) {
  return v.param ? "?" + *v.param : std::to_string(v.value);
}

std::string print_num(const NumVal& v) {
  return v.param ? "?" + *v.param : format_number(v.value);
}

const char* cmp_text(Cmp c) { return c == Cmp::Le ? "<=" : ">="; }

std::string print_bound(const TimeBound& b) {
  std::string out;
  if (b.lower) out += "[>=" + print_int(*b.lower) + "]";
  if (b.upper) out += "[<=" + print_int(*b.upper) + "]";
  return out;
}

void print(const Formula& f, std::string& out) {
  switch (f->op) {
    case Op::True: out += "TRUE"; return;
    case Op::False: out += "FALSE"; return;
    case Op::Atom:
      out += "x ";
      out += cmp_text(f->cmp);
      out += " ";
      out += print_num(f->threshold);
      return;
    case Op::Exists:
      out += "E " + print_int(f->count);
      for (const auto& hop : f->chain) {
        out += " via (y ";
        out += cmp_text(hop.cmp);
        out += " " + print_num(hop.threshold) + ")";
      }
      out += " : ";
      print(f->a, out);
      return;
    case Op::Not:
      out += "!";
      print(f->a, out);
      return;
    case Op::Eventually:
    case Op::Always:
      out += f->op == Op::Always ? "G" : "F";
      out += print_bound(f->bound);
      out += " ";
      print(f->a, out);
      return;
    case Op::Until:
      out += "(";
      print(f->a, out);
      out += " U" + print_bound(f->bound) + " ";
      print(f->b, out);
      out += ")";
      return;
    case Op::And:
    case Op::Or:
    case Op::Implies:
      out += "(";
      print(f->a, out);
      out += f->op == Op::And ? " & " : f->op == Op::Or ? " | " : " -> ";
      print(f->b, out);
      out += ")";
      return;
  }
}

}  // namespace

std::string to_string(const Formula& f) {
  if (!f) return "<null>";
  std::string out;
  print(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parameters

namespace {

void collect(const Formula& f, std::vector<ParamInfo>& out, std::set<std::string>& seen) {
  auto add = [&](const std::optional<std::string>& name, bool integer) {
    if (name && seen.insert(*name).second) out.push_back({*name, integer});
  };
  auto add_bound = [&](const TimeBound& b) {
    if (b.lower) add(b.lower->param, true);
    if (b.upper) add(b.upper->param, true);
  };
  switch (f->op) {
    case Op::True:
    case Op::False: return;
    case Op::Atom: add(f->threshold.param, false); return;
    case Op::Exists:
      add(f->count.param, true);
      for (const auto& hop : f->chain) add(hop.threshold.param, false);
      collect(f->a, out, seen);
      return;
    case Op::Not: collect(f->a, out, seen); return;
    case Op::Eventually:
    case Op::Always:
      add_bound(f->bound);
      collect(f->a, out, seen);
      return;
    case Op::Until:
      add_bound(f->bound);
      [[fallthrough]];
    case Op::And:
    case Op::Or:
    case Op::Implies:
      collect(f->a, out, seen);
      collect(f->b, out, seen);
      return;
  }
}

long long integral_value(const std::string& name, double v) {
  double r = std::round(v);
  if (!std::isfinite(v) || std::fabs(v - r) > 1e-9)
    fail(ErrorCode::Input,
         "parameter '" + name + "' needs an integer value, got " + format_number(v));
  return static_cast<long long>(r);
}

struct Substituter {
  const Valuation* theta = nullptr;
  const std::map<std::string, std::string>* rename = nullptr;

  double lookup(const std::string& name) const {
    auto it = theta->find(name);
    if (it == theta->end()) fail(ErrorCode::Input, "no value for parameter '" + name + "'");
    if (!std::isfinite(it->second))
      fail(ErrorCode::Input, "non-finite value for parameter '" + name + "'");
    return it->second;
  }

  IntVal apply(const IntVal& v) const {
    if (!v.param) return v;
    if (rename) {
      auto it = rename->find(*v.param);
      return it == rename->end() ? v : IntVal::var(it->second);
    }
    return IntVal::lit(integral_value(*v.param, lookup(*v.param)));
  }

  NumVal apply(const NumVal& v) const {
    if (!v.param) return v;
    if (rename) {
      auto it = rename->find(*v.param);
      return it == rename->end() ? v : NumVal::var(it->second);
    }
    return NumVal::lit(lookup(*v.param));
  }

  TimeBound apply(const TimeBound& b) const {
    TimeBound out;
    if (b.lower) out.lower = apply(*b.lower);
    if (b.upper) out.upper = apply(*b.upper);
    if (!rename) {
      if ((out.lower && out.lower->value < 0) || (out.upper && out.upper->value < 0))
        fail(ErrorCode::Range, "time bounds must be nonnegative");
    }
    return out;
  }

  Formula run(const Formula& f) const {
    switch (f->op) {
      case Op::True:
      case Op::False: return f;
      case Op::Atom: return make_atom(f->cmp, apply(f->threshold));
      case Op::Exists: {
        IntVal n = apply(f->count);
        if (!rename && n.value < 1) fail(ErrorCode::Range, "neighbor count must be at least 1");
        std::vector<EdgeAtom> chain;
        for (const auto& hop : f->chain) chain.push_back({hop.cmp, apply(hop.threshold)});
        return make_exists(n, std::move(chain), run(f->a));
      }
      case Op::Not: return make_not(run(f->a));
      case Op::Eventually: return make_eventually(apply(f->bound), run(f->a));
      case Op::Always: return make_always(apply(f->bound), run(f->a));
      case Op::Until: return make_until(apply(f->bound), run(f->a), run(f->b));
      case Op::And: return make_and(run(f->a), run(f->b));
      case Op::Or: return make_or(run(f->a), run(f->b));
      case Op::Implies: return make_implies(run(f->a), run(f->b));
    }
    return f;
  }
};

}  // namespace

std::vector<ParamInfo> parameters(const Formula& f) {
  std::vector<ParamInfo> out;
  std::set<std::string> seen;
  collect(f, out, seen);
  return out;
}

bool is_parametric(const Formula& f) { return !parameters(f).empty(); }

Formula instantiate(const Formula& f, const Valuation& theta) {
  Substituter s;
  s.theta = &theta;
  return s.run(f);
}

Formula rename_parameters(const Formula& f, const std::map<std::string, std::string>& rename) {
  Substituter s;
  s.rename = &rename;
  return s.run(f);
}

// ---------------------------------------------------------------------------
// Polarity

const char* polarity_symbol(Polarity p) {
  switch (p) {
    case Polarity::Undefined: return "U";
    case Polarity::Positive: return "+";
    case Polarity::Negative: return "-";
    case Polarity::Mixed: return "M";
  }
  return "?";
}

Polarity negate(Polarity p) {
  if (p == Polarity::Positive) return Polarity::Negative;
  if (p == Polarity::Negative) return Polarity::Positive;
  return p;
}

Polarity combine(Polarity a, Polarity b) {
  if (a == Polarity::Undefined) return b;
  if (b == Polarity::Undefined) return a;
  if (a == b) return a;
  return Polarity::Mixed;
}

namespace {

bool names(const std::optional<std::string>& slot, const std::string& p) {
  return slot && *slot == p;
}

// Contribution of a time bound on an eventually-style operator: an upper bound
// parameter makes it easier as it grows, a lower bound parameter harder.
Polarity eventually_bound(const TimeBound& b, const std::string& p) {
  Polarity out = Polarity::Undefined;
  if (b.lower && names(b.lower->param, p)) out = combine(out, Polarity::Negative);
  if (b.upper && names(b.upper->param, p)) out = combine(out, Polarity::Positive);
  return out;
}

}  // namespace

Polarity polarity(const Formula& f, const std::string& p) {
  switch (f->op) {
    case Op::True:
    case Op::False: return Polarity::Undefined;
    case Op::Atom:
      if (!names(f->threshold.param, p)) return Polarity::Undefined;
      return f->cmp == Cmp::Le ? Polarity::Positive : Polarity::Negative;
    case Op::Exists: {
      Polarity out = Polarity::Undefined;
      if (names(f->count.param, p)) out = combine(out, Polarity::Negative);
      for (const auto& hop : f->chain)
        if (names(hop.threshold.param, p))
          out = combine(out, hop.cmp == Cmp::Le ? Polarity::Positive : Polarity::Negative);
      return combine(out, polarity(f->a, p));
    }
    case Op::Not: return negate(polarity(f->a, p));
    case Op::And:
    case Op::Or: return combine(polarity(f->a, p), polarity(f->b, p));
    case Op::Implies: return combine(negate(polarity(f->a, p)), polarity(f->b, p));
    case Op::Eventually: return combine(eventually_bound(f->bound, p), polarity(f->a, p));
    case Op::Always:
      // G_b f = !F_b !f
      return negate(combine(eventually_bound(f->bound, p), negate(polarity(f->a, p))));
    case Op::Until: {
      Polarity out = combine(polarity(f->a, p), polarity(f->b, p));
      bool bound_param = (f->bound.lower && names(f->bound.lower->param, p)) ||
                         (f->bound.upper && names(f->bound.upper->param, p));
      return bound_param ? Polarity::Mixed : out;
    }
  }
  return Polarity::Undefined;
}

// ---------------------------------------------------------------------------
// Size and subtypes

int formula_size(const Formula& f) {
  switch (f->op) {
    case Op::True:
    case Op::False:
    case Op::Atom: return 0;
    case Op::Exists:
    case Op::Not:
    case Op::Eventually:
    case Op::Always: return formula_size(f->a);
    case Op::Until: return formula_size(f->a) + formula_size(f->b);
    case Op::And:
    case Op::Or:
    case Op::Implies: return 1 + formula_size(f->a) + formula_size(f->b);
  }
  return 0;
}

namespace {

bool type_one(const Formula& f) {
  switch (f->op) {
    case Op::True:
    case Op::False:
    case Op::Atom: return true;
    case Op::Exists: return f->a->op == Op::Atom;
    case Op::Not:
    case Op::Eventually:
    case Op::Always: return type_one(f->a);
    default: return type_one(f->a) && type_one(f->b);
  }
}

bool exists_free(const Formula& f) {
  switch (f->op) {
    case Op::True:
    case Op::False:
    case Op::Atom: return true;
    case Op::Exists: return false;
    case Op::Not:
    case Op::Eventually:
    case Op::Always: return exists_free(f->a);
    default: return exists_free(f->a) && exists_free(f->b);
  }
}

// Fragment membership of f (or of !f when `neg`) after pushing negation to
// the atoms. A negated neighbor quantifier is judged by its negated body.
bool fragment(const Formula& f, bool neg, bool cosafe) {
  switch (f->op) {
    case Op::True: return cosafe ? !neg : neg;
    case Op::False: return cosafe ? neg : !neg;
    case Op::Atom: return true;
    case Op::Exists: return fragment(f->a, neg, cosafe);
    case Op::Not: return fragment(f->a, !neg, cosafe);
    case Op::And:
    case Op::Or: return fragment(f->a, neg, cosafe) && fragment(f->b, neg, cosafe);
    case Op::Implies: return fragment(f->a, !neg, cosafe) && fragment(f->b, neg, cosafe);
    case Op::Eventually:
    case Op::Always: {
      bool eventually = (f->op == Op::Eventually) != neg;
      const auto& b = f->bound;
      bool upper_only = b.upper && !b.lower;
      bool ok;
      if (cosafe)
        ok = eventually || upper_only;
      else
        ok = !eventually || upper_only;
      return ok && fragment(f->a, neg, cosafe);
    }
    case Op::Until: {
      if (neg) return false;
      bool upper_only = f->bound.upper && !f->bound.lower;
      if (!cosafe && !upper_only) return false;
      return fragment(f->a, false, cosafe) && fragment(f->b, false, cosafe);
    }
  }
  return false;
}

}  // namespace

bool is_cosafe(const Formula& f) { return fragment(f, false, true); }
bool is_safe(const Formula& f) { return fragment(f, false, false); }

Subtype classify_subtype(const Formula& f) {
  Subtype s;
  s.typeI = type_one(f);
  s.typeII = f->op == Op::Exists && exists_free(f->a);
  s.cosafe = is_cosafe(f);
  s.safe = is_safe(f);
  return s;
}

}  // namespace gtl
