#pragma once

// Terms over the MV signatures. A term is an immutable DAG; subterms are
// shared, so repeated ⊕/⊙ built by scalar_multiple/power stay small in memory.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mvlat/errors.hpp"
#include "mvlat/qunit.hpp"

namespace mvlat {

enum class Op { var, zero, one, add, mul, neg, join, meet };

/// Which operation symbols a term may use. `mv` is {⊕, *, 0, 1}; `positive`
/// is {⊕, ⊙, ∨, ∧, 0, 1}.
enum class Signature { mv, mvlat };

inline std::string_view op_name(Op op) {
  switch (op) {
    case Op::var: return "var";
    case Op::zero: return "0";
    case Op::one: return "1";
    case Op::add: return "add";
    case Op::mul: return "mul";
    case Op::neg: return "neg";
    case Op::join: return "join";
    case Op::meet: return "meet";
  }
  return "?";
}

class Term {
  struct Node {
    Op op;
    int var = -1;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
    int arity = 0;  // max variable index + 1
    bool has_neg = false;
    bool mv_only = true;  // uses only var/0/1/add/neg
    int depth = 1;
  };

 public:
  static Term var(int index) {
    if (index < 0) throw input_error("term: negative variable index");
    auto n = std::make_shared<Node>();
    n->op = Op::var;
    n->var = index;
    n->arity = index + 1;
    return Term(std::move(n));
  }
  static Term zero() { return leaf(Op::zero); }
  static Term one() { return leaf(Op::one); }
  static Term add(const Term& l, const Term& r) { return binary(Op::add, l, r); }
  static Term mul(const Term& l, const Term& r) { return binary(Op::mul, l, r); }
  static Term join(const Term& l, const Term& r) { return binary(Op::join, l, r); }
  static Term meet(const Term& l, const Term& r) { return binary(Op::meet, l, r); }
  static Term neg(const Term& c) {
    auto n = std::make_shared<Node>();
    n->op = Op::neg;
    n->lhs = c.node_;
    n->arity = c.node_->arity;
    n->has_neg = true;
    n->mv_only = c.node_->mv_only;
    n->depth = c.node_->depth + 1;
    return Term(std::move(n));
  }

  Op op() const { return node_->op; }
  int var_index() const { return node_->var; }
  Term lhs() const { return Term(node_->lhs); }
  Term rhs() const { return Term(node_->rhs); }
  Term child() const { return Term(node_->lhs); }

  /// Number of leading variables the term can refer to.
  int arity() const { return node_->arity; }
  int depth() const { return node_->depth; }
  bool negation_free() const { return !node_->has_neg; }

  /// The positive signature is exactly the Neg-free terms; the mv signature
  /// allows only ⊕ and * over variables and constants.
  bool in_signature(Signature sig) const {
    return sig == Signature::mvlat ? negation_free() : node_->mv_only;
  }

  /// Number of distinct nodes in the DAG.
  std::size_t dag_size() const {
    std::unordered_map<const Node*, bool> seen;
    std::vector<const Node*> stack{node_.get()};
    while (!stack.empty()) {
      auto* n = stack.back();
      stack.pop_back();
      if (!n || seen.count(n)) continue;
      seen[n] = true;
      stack.push_back(n->lhs.get());
      stack.push_back(n->rhs.get());
    }
    return seen.size();
  }

  /// Structural equality (on the expanded tree).
  friend bool operator==(const Term& a, const Term& b) { return equal(a.node_.get(), b.node_.get()); }

  /// Generic bottom-up fold with memoization on shared nodes. `Leaf(op, var)`
  /// handles var/zero/one, `Unary(op, v)` and `Binary(op, l, r)` the rest.
  template <class T, class Leaf, class Unary, class Binary>
  T fold(Leaf&& leaf_fn, Unary&& unary_fn, Binary&& binary_fn) const {
    std::unordered_map<const Node*, T> memo;
    return fold_rec<T>(node_.get(), memo, leaf_fn, unary_fn, binary_fn);
  }

 private:
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Term leaf(Op op) {
    auto n = std::make_shared<Node>();
    n->op = op;
    return Term(std::move(n));
  }

  static Term binary(Op op, const Term& l, const Term& r) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = l.node_;
    n->rhs = r.node_;
    n->arity = std::max(l.node_->arity, r.node_->arity);
    n->has_neg = l.node_->has_neg || r.node_->has_neg;
    n->mv_only = op == Op::add && l.node_->mv_only && r.node_->mv_only;
    n->depth = std::max(l.node_->depth, r.node_->depth) + 1;
    return Term(std::move(n));
  }

  static bool equal(const Node* a, const Node* b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->op != b->op || a->var != b->var) return false;
    return equal(a->lhs.get(), b->lhs.get()) && equal(a->rhs.get(), b->rhs.get());
  }

  template <class T, class Leaf, class Unary, class Binary>
  static T fold_rec(const Node* n, std::unordered_map<const Node*, T>& memo, Leaf& leaf_fn, Unary& unary_fn,
                    Binary& binary_fn) {
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    T result = [&]() -> T {
      switch (n->op) {
        case Op::var:
        case Op::zero:
        case Op::one:
          return leaf_fn(n->op, n->var);
        case Op::neg:
          return unary_fn(n->op, fold_rec<T>(n->lhs.get(), memo, leaf_fn, unary_fn, binary_fn));
        default: {
          T l = fold_rec<T>(n->lhs.get(), memo, leaf_fn, unary_fn, binary_fn);
          T r = fold_rec<T>(n->rhs.get(), memo, leaf_fn, unary_fn, binary_fn);
          return binary_fn(n->op, l, r);
        }
      }
    }();
    memo.emplace(n, result);
    return result;
  }

  std::shared_ptr<const Node> node_;
};

/// Evaluates `t` in the standard MV-algebra [0,1].
inline UnitRational eval(const Term& t, std::span<const UnitRational> args) {
  if (static_cast<std::size_t>(t.arity()) > args.size())
    throw input_error("eval: term has arity " + std::to_string(t.arity()) + " but " + std::to_string(args.size()) +
                      " arguments were given");
  return t.fold<UnitRational>(
      [&](Op op, int v) {
        if (op == Op::var) return args[static_cast<std::size_t>(v)];
        return op == Op::zero ? UnitRational::zero() : UnitRational::one();
      },
      [](Op, const UnitRational& x) { return mv_neg(x); },
      [](Op op, const UnitRational& l, const UnitRational& r) {
        switch (op) {
          case Op::add: return mv_add(l, r);
          case Op::mul: return mv_mul(l, r);
          case Op::join: return join(l, r);
          default: return meet(l, r);
        }
      });
}

inline UnitRational eval(const Term& t, std::initializer_list<UnitRational> args) {
  return eval(t, std::span<const UnitRational>(args.begin(), args.size()));
}

/// Replaces every `var(i)` in `t` by `args[i]`.
inline Term compose(const Term& t, std::span<const Term> args) {
  if (static_cast<std::size_t>(t.arity()) > args.size()) throw input_error("compose: not enough arguments");
  return t.fold<Term>(
      [&](Op op, int v) {
        if (op == Op::var) return args[static_cast<std::size_t>(v)];
        return op == Op::zero ? Term::zero() : Term::one();
      },
      [](Op, const Term& c) { return Term::neg(c); },
      [](Op op, const Term& l, const Term& r) {
        switch (op) {
          case Op::add: return Term::add(l, r);
          case Op::mul: return Term::mul(l, r);
          case Op::join: return Term::join(l, r);
          default: return Term::meet(l, r);
        }
      });
}

namespace detail {

inline Term balanced(Op op, const Term& t, std::int64_t n, std::unordered_map<std::int64_t, Term>& memo) {
  if (n == 1) return t;
  if (auto it = memo.find(n); it != memo.end()) return it->second;
  Term l = balanced(op, t, n / 2, memo);
  Term r = balanced(op, t, n - n / 2, memo);
  Term result = op == Op::add ? Term::add(l, r) : Term::mul(l, r);
  memo.emplace(n, result);
  return result;
}

}  // namespace detail

/// n·t, the n-fold ⊕ of t, as a balanced tree.
inline Term scalar_multiple(std::int64_t n, const Term& t) {
  if (n < 1) throw input_error("scalar_multiple: n must be at least 1");
  std::unordered_map<std::int64_t, Term> memo;
  return detail::balanced(Op::add, t, n, memo);
}

/// t^n, the n-fold ⊙ of t, as a balanced tree.
inline Term power(const Term& t, std::int64_t n) {
  if (n < 1) throw input_error("power: n must be at least 1");
  std::unordered_map<std::int64_t, Term> memo;
  return detail::balanced(Op::mul, t, n, memo);
}

// ---------------------------------------------------------------------------
// S-expressions: (add (mul v0 v0) v1), constants 0 and 1.

inline std::string to_sexpr(const Term& t) {
  std::string out;
  auto rec = [&](auto& self, const Term& u) -> void {
    switch (u.op()) {
      case Op::var:
        out += "v" + std::to_string(u.var_index());
        return;
      case Op::zero:
        out += "0";
        return;
      case Op::one:
        out += "1";
        return;
      case Op::neg:
        out += "(neg ";
        self(self, u.child());
        out += ")";
        return;
      default:
        out += "(";
        out += op_name(u.op());
        out += " ";
        self(self, u.lhs());
        out += " ";
        self(self, u.rhs());
        out += ")";
    }
  };
  rec(rec, t);
  return out;
}

inline Term parse_sexpr(std::string_view text) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) -> Term {
    throw input_error("term: " + why + " at offset " + std::to_string(pos) + " in '" + std::string(text) + "'");
  };
  auto skip = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n')) ++pos;
  };
  auto atom = [&] {
    std::size_t start = pos;
    while (pos < text.size() && text[pos] != ' ' && text[pos] != '(' && text[pos] != ')' && text[pos] != '\t' &&
           text[pos] != '\n')
      ++pos;
    return text.substr(start, pos - start);
  };
  auto rec = [&](auto& self) -> Term {
    skip();
    if (pos >= text.size()) return fail("unexpected end");
    if (text[pos] != '(') {
      auto a = atom();
      if (a == "0") return Term::zero();
      if (a == "1") return Term::one();
      if (a.size() >= 2 && a[0] == 'v') {
        int idx = 0;
        for (char c : a.substr(1)) {
          if (c < '0' || c > '9') return fail("bad variable '" + std::string(a) + "'");
          idx = idx * 10 + (c - '0');
        }
        return Term::var(idx);
      }
      return fail("unknown atom '" + std::string(a) + "'");
    }
    ++pos;
    skip();
    auto head = atom();
    Term result = Term::zero();
    if (head == "neg") {
      result = Term::neg(self(self));
    } else {
      Term l = self(self);
      Term r = self(self);
      if (head == "add")
        result = Term::add(l, r);
      else if (head == "mul")
        result = Term::mul(l, r);
      else if (head == "join")
        result = Term::join(l, r);
      else if (head == "meet")
        result = Term::meet(l, r);
      else
        return fail("unknown operator '" + std::string(head) + "'");
    }
    skip();
    if (pos >= text.size() || text[pos] != ')') return fail("expected ')'");
    ++pos;
    return result;
  };
  Term t = rec(rec);
  skip();
  if (pos != text.size()) fail("trailing input");
  return t;
}

// ---------------------------------------------------------------------------
// Separating terms: for x < y in [0,1], a unary {⊕, ⊙}-term t with t(x) = 0
// and t(y) = 1.

struct SeparatorStep {
  enum class Kind { identity, square_then_multiple, double_then_power, multiple, power };
  Kind kind;
  std::int64_t factor;  // n, m, k or h depending on kind
  UnitRational x;
  UnitRational y;
};

struct Separator {
  Term term;
  std::vector<SeparatorStep> steps;
  int depth = 0;  // number of gap-widening rounds (multiple/power steps)
  int depth_cap = 0;
};

namespace detail {

inline int bit_length(const Integer& v) {
  return v == 0 ? 0 : static_cast<int>(boost::multiprecision::msb(v)) + 1;
}

// ceil(p/q) for positive integers
inline std::int64_t ceil_div(const Integer& p, const Integer& q) {
  Integer r = (p + q - 1) / q;
  return static_cast<std::int64_t>(r);
}

}  // namespace detail

/// Round cap for the gap-doubling recursion: 4 · (bits(den x) + bits(den y)).
inline int separator_depth_cap(const UnitRational& x, const UnitRational& y) {
  return 4 * (detail::bit_length(x.denominator()) + detail::bit_length(y.denominator()));
}

/// Builds the separating term with the four-case recursion.
///   case 1, x <= 1/2 < y:  t(a) = n·(a²),  n = ceil(1 / (2y - 1))
///   case 2, x < 1/2 = y:   t(a) = (2a)^m,  m = ceil(1 / (1 - 2x))
///   case 3, y < 1/2:       k = floor(1/y), recurse on (kx, ky)
///   case 4, 1/2 < x:       h = ceil(1/(1-x)) - 1, recurse on (x^h, y^h)
/// Each round at least doubles y - x, so the depth is logarithmic in the
/// denominators.
inline Separator synthesize_separator_traced(const UnitRational& x0, const UnitRational& y0) {
  if (!(x0 < y0)) throw input_error("synthesize_separator: requires x < y, got " + x0.str() + " >= " + y0.str());
  const UnitRational half(1, 2);
  Separator out{Term::var(0), {}, 0, separator_depth_cap(x0, y0)};

  // Transformations applied so far, innermost first; the final term is
  // tail(g_r(...g_1(a))).
  std::vector<Term> chain;
  UnitRational x = x0, y = y0;
  Term tail = Term::var(0);
  const Term a = Term::var(0);
  for (;;) {
    if (x.is_zero() && y.is_one()) {
      out.steps.push_back({SeparatorStep::Kind::identity, 1, x, y});
      tail = a;
      break;
    }
    if (x <= half && half < y) {
      // y² = 2y - 1 > 0 and x² = 0
      UnitRational y2 = mv_mul(y, y);
      std::int64_t n = detail::ceil_div(y2.denominator(), y2.numerator());
      out.steps.push_back({SeparatorStep::Kind::square_then_multiple, n, x, y});
      tail = scalar_multiple(n, Term::mul(a, a));
      break;
    }
    if (x < half && y == half) {
      UnitRational x2 = mv_add(x, x);  // 2x < 1
      UnitRational gap = mv_neg(x2);   // 1 - 2x
      std::int64_t m = detail::ceil_div(gap.denominator(), gap.numerator());
      out.steps.push_back({SeparatorStep::Kind::double_then_power, m, x, y});
      tail = power(Term::add(a, a), m);
      break;
    }
    if (++out.depth > out.depth_cap)
      throw invariant_error("synthesize_separator: recursion exceeded depth cap " + std::to_string(out.depth_cap) +
                            " for (" + x0.str() + ", " + y0.str() + ")");
    if (y < half) {
      std::int64_t k = static_cast<std::int64_t>(y.denominator() / y.numerator());
      out.steps.push_back({SeparatorStep::Kind::multiple, k, x, y});
      chain.push_back(scalar_multiple(k, a));
      UnitRational kx = x, ky = y;
      for (std::int64_t i = 1; i < k; ++i) {
        kx = mv_add(kx, x);
        ky = mv_add(ky, y);
      }
      x = kx;
      y = ky;
    } else {
      // half < x < y < ... ; h = max{n : x > (n-1)/n} = ceil(1/(1-x)) - 1
      UnitRational gap = mv_neg(x);
      std::int64_t h = detail::ceil_div(gap.denominator(), gap.numerator()) - 1;
      out.steps.push_back({SeparatorStep::Kind::power, h, x, y});
      chain.push_back(power(a, h));
      UnitRational xh = x, yh = y;
      for (std::int64_t i = 1; i < h; ++i) {
        xh = mv_mul(xh, x);
        yh = mv_mul(yh, y);
      }
      x = xh;
      y = yh;
    }
  }
  Term inner = a;
  for (const Term& g : chain) {
    std::vector<Term> arg{inner};
    inner = compose(g, arg);
  }
  std::vector<Term> arg{inner};
  out.term = compose(tail, arg);
  return out;
}

inline Term synthesize_separator(const UnitRational& x, const UnitRational& y) {
  return synthesize_separator_traced(x, y).term;
}

// ---------------------------------------------------------------------------
// Generation witnesses.

/// One step of a staged closure. `element` is an index into the ambient
/// carrier; for Op::var, `lhs` is the generator index.
struct TraceStep {
  int element;
  Op op;
  int lhs = -1;
  int rhs = -1;
  int stage = 0;
};

struct ClosureTrace {
  std::vector<int> generators;  // ambient indices, generator i = generators[i]
  std::vector<TraceStep> steps;  // in discovery order
};

/// For every element of a generated carrier, the first term found that
/// produces it from the generators.
struct GenWitness {
  std::vector<int> generators;
  std::unordered_map<int, Term> terms;  // ambient index -> term over generator indices

  const Term& at(int element) const {
    auto it = terms.find(element);
    if (it == terms.end()) throw input_error("witness: element " + std::to_string(element) + " has no witness");
    return it->second;
  }
};

inline GenWitness record_witnesses(const ClosureTrace& trace, std::span<const int> carrier) {
  GenWitness w;
  w.generators = trace.generators;
  for (const auto& s : trace.steps) {
    if (w.terms.count(s.element))
      throw input_error("witness: element " + std::to_string(s.element) + " derived twice in trace");
    auto operand = [&](int e) -> const Term& {
      auto it = w.terms.find(e);
      if (it == w.terms.end())
        throw input_error("witness: operand " + std::to_string(e) + " used before it was derived");
      return it->second;
    };
    switch (s.op) {
      case Op::var:
        if (s.lhs < 0 || static_cast<std::size_t>(s.lhs) >= trace.generators.size() ||
            trace.generators[static_cast<std::size_t>(s.lhs)] != s.element)
          throw input_error("witness: generator step does not match the generator list");
        w.terms.emplace(s.element, Term::var(s.lhs));
        break;
      case Op::zero: w.terms.emplace(s.element, Term::zero()); break;
      case Op::one: w.terms.emplace(s.element, Term::one()); break;
      case Op::neg: w.terms.emplace(s.element, Term::neg(operand(s.lhs))); break;
      case Op::add: w.terms.emplace(s.element, Term::add(operand(s.lhs), operand(s.rhs))); break;
      case Op::mul: w.terms.emplace(s.element, Term::mul(operand(s.lhs), operand(s.rhs))); break;
      case Op::join: w.terms.emplace(s.element, Term::join(operand(s.lhs), operand(s.rhs))); break;
      case Op::meet: w.terms.emplace(s.element, Term::meet(operand(s.lhs), operand(s.rhs))); break;
    }
  }
  if (w.terms.size() != carrier.size()) throw input_error("witness: trace and carrier have different sizes");
  for (int e : carrier)
    if (!w.terms.count(e)) throw input_error("witness: carrier element " + std::to_string(e) + " missing from trace");
  return w;
}

}  // namespace mvlat
