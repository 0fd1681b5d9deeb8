#pragma once

// Finite MV-algebras and MV-lattices.
//
// A FinAlgebra is either a set of tuples inside a product of Łukasiewicz
// chains (operations computed coordinatewise) or an abstract algebra given by
// operation tables. Both are stored as index tables; tuple carriers are kept
// in lexicographic order, which is a linear extension of the product order.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "mvlat/errors.hpp"
#include "mvlat/qunit.hpp"
#include "mvlat/term.hpp"

namespace mvlat {

using Tuple = std::vector<UnitRational>;
using ElementSet = boost::dynamic_bitset<>;

inline std::string tuple_str(const Tuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += t[i].str();
  }
  return s + ")";
}

inline std::string_view signature_name(Signature sig) { return sig == Signature::mv ? "mv" : "mvlat"; }

inline Signature parse_signature(std::string_view s) {
  if (s == "mv") return Signature::mv;
  if (s == "mvlat") return Signature::mvlat;
  throw input_error("unknown signature '" + std::string(s) + "' (expected mv or mvlat)");
}

inline std::int64_t lcm_of(const std::vector<int>& xs) {
  std::int64_t l = 1;
  for (int x : xs) l = std::lcm(l, static_cast<std::int64_t>(x));
  return l;
}

namespace detail {

inline Tuple tuple_op(Op op, const Tuple& a, const Tuple& b) {
  Tuple r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    switch (op) {
      case Op::add: r[i] = mv_add(a[i], b[i]); break;
      case Op::mul: r[i] = mv_mul(a[i], b[i]); break;
      case Op::join: r[i] = join(a[i], b[i]); break;
      case Op::meet: r[i] = meet(a[i], b[i]); break;
      case Op::neg: r[i] = mv_neg(a[i]); break;
      default: throw invariant_error("tuple_op: not a binary operation");
    }
  }
  return r;
}

inline void check_on_grid(const std::vector<int>& chains, const Tuple& t) {
  if (t.size() != chains.size())
    throw input_error("tuple " + tuple_str(t) + " has " + std::to_string(t.size()) + " coordinates, expected " +
                      std::to_string(chains.size()));
  for (std::size_t j = 0; j < t.size(); ++j)
    if (!t[j].on_grid(chains[j]))
      throw input_error("tuple " + tuple_str(t) + ": coordinate " + std::to_string(j) + " is not in Ł_" +
                        std::to_string(chains[j]));
}

inline const std::vector<Op>& signature_ops(Signature sig) {
  static const std::vector<Op> mv{Op::add, Op::neg};
  static const std::vector<Op> lat{Op::add, Op::mul, Op::join, Op::meet};
  return sig == Signature::mv ? mv : lat;
}

}  // namespace detail

class FinAlgebra {
 public:
  /// Ł_n = {0, 1/n, ..., 1} with the mv signature.
  static FinAlgebra chain(int n) {
    if (n < 1) throw input_error("lukasiewicz_chain: n must be at least 1");
    return product_of_chains({n});
  }

  /// The full product Ł_{n_1} × ... × Ł_{n_k} with the mv signature.
  static FinAlgebra product_of_chains(const std::vector<int>& chains) {
    for (int n : chains)
      if (n < 1) throw input_error("chain order must be at least 1");
    std::vector<Tuple> elems{Tuple{}};
    for (int n : chains) {
      std::vector<Tuple> next;
      for (const auto& t : elems)
        for (int k = 0; k <= n; ++k) {
          Tuple u = t;
          u.emplace_back(k, n);
          next.push_back(std::move(u));
        }
      elems = std::move(next);
    }
    return subset(chains, std::move(elems), Signature::mv);
  }

  /// Coordinatewise product of tuple algebras. The result has the mv
  /// signature only if every factor does.
  static FinAlgebra product(const std::vector<FinAlgebra>& factors) {
    std::vector<int> chains;
    std::vector<Tuple> elems{Tuple{}};
    Signature sig = Signature::mv;
    for (const auto& f : factors) {
      if (!f.is_tuples()) throw input_error("product: factors must be tuple algebras");
      if (f.signature() == Signature::mvlat) sig = Signature::mvlat;
      chains.insert(chains.end(), f.chains().begin(), f.chains().end());
      std::vector<Tuple> next;
      for (const auto& t : elems)
        for (const auto& u : f.elements()) {
          Tuple v = t;
          v.insert(v.end(), u.begin(), u.end());
          next.push_back(std::move(v));
        }
      elems = std::move(next);
    }
    return subset(chains, std::move(elems), sig);
  }

  /// A carrier of tuples inside ∏ Ł_{chains[j]}. Validates grid membership,
  /// presence of 0 and 1, and closure under the signature.
  static FinAlgebra subset(const std::vector<int>& chains, std::vector<Tuple> elements, Signature sig) {
    for (int n : chains)
      if (n < 1) throw input_error("chain order must be at least 1");
    for (const auto& t : elements) detail::check_on_grid(chains, t);
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());

    FinAlgebra a;
    a.sig_ = sig;
    a.tuples_ = true;
    a.chains_ = chains;
    a.elements_ = std::move(elements);
    const int n = static_cast<int>(a.elements_.size());
    a.n_ = n;
    for (int i = 0; i < n; ++i) a.index_.emplace(a.elements_[static_cast<std::size_t>(i)], i);

    Tuple zero(chains.size()), one(chains.size(), UnitRational::one());
    auto z = a.index_.find(zero), o = a.index_.find(one);
    if (z == a.index_.end()) throw input_error("carrier does not contain 0 = " + tuple_str(zero));
    if (o == a.index_.end()) throw input_error("carrier does not contain 1 = " + tuple_str(one));
    a.zero_ = z->second;
    a.one_ = o->second;

    auto lookup = [&](const Tuple& t, const char* what, int x, int y) {
      auto it = a.index_.find(t);
      if (it == a.index_.end())
        throw input_error(std::string("carrier is not closed under ") + what + ": " +
                          tuple_str(a.elements_[static_cast<std::size_t>(x)]) +
                          (y >= 0 ? ", " + tuple_str(a.elements_[static_cast<std::size_t>(y)]) : std::string()) +
                          " gives " + tuple_str(t));
      return it->second;
    };
    const auto sq = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    a.add_.assign(sq, -1);
    a.mul_.assign(sq, -1);
    a.join_.assign(sq, -1);
    a.meet_.assign(sq, -1);
    const bool closed_neg = sig == Signature::mv;
    for (int x = 0; x < n; ++x)
      for (int y = x; y < n; ++y) {
        const auto& tx = a.elements_[static_cast<std::size_t>(x)];
        const auto& ty = a.elements_[static_cast<std::size_t>(y)];
        int s = lookup(detail::tuple_op(Op::add, tx, ty), "addition", x, y);
        a.add_[a.at(x, y)] = a.add_[a.at(y, x)] = s;
        // mv carriers closed under ⊕ and * are closed under the derived
        // operations too; the lookups below recheck that.
        int m = lookup(detail::tuple_op(Op::mul, tx, ty), "multiplication", x, y);
        a.mul_[a.at(x, y)] = a.mul_[a.at(y, x)] = m;
        int j = lookup(detail::tuple_op(Op::join, tx, ty), "join", x, y);
        a.join_[a.at(x, y)] = a.join_[a.at(y, x)] = j;
        int mt = lookup(detail::tuple_op(Op::meet, tx, ty), "meet", x, y);
        a.meet_[a.at(x, y)] = a.meet_[a.at(y, x)] = mt;
      }
    if (closed_neg) {
      a.neg_.resize(static_cast<std::size_t>(n));
      for (int x = 0; x < n; ++x)
        a.neg_[static_cast<std::size_t>(x)] =
            lookup(detail::tuple_op(Op::neg, a.elements_[static_cast<std::size_t>(x)], {}), "negation", x, -1);
    }
    return a;
  }

  /// An abstract algebra. For the mv signature `add` and `neg` are required
  /// and ⊙, ∨, ∧ are derived; for mvlat all four binary tables are required.
  /// The axioms are not checked here (see check_axioms), only table shapes.
  static FinAlgebra from_tables(Signature sig, std::vector<std::string> names, int zero, int one,
                                std::vector<std::vector<int>> add, std::vector<std::vector<int>> mul,
                                std::vector<std::vector<int>> join_t, std::vector<std::vector<int>> meet_t,
                                std::vector<int> neg) {
    FinAlgebra a;
    a.sig_ = sig;
    a.tuples_ = false;
    a.names_ = std::move(names);
    const int n = static_cast<int>(a.names_.size());
    if (n == 0) throw input_error("tables: empty carrier");
    a.n_ = n;
    {
      std::set<std::string> seen(a.names_.begin(), a.names_.end());
      if (seen.size() != a.names_.size()) throw input_error("tables: duplicate element names");
    }
    auto check_index = [&](int v, const std::string& what) {
      if (v < 0 || v >= n) throw input_error("tables: " + what + " index " + std::to_string(v) + " out of range");
    };
    check_index(zero, "zero");
    check_index(one, "one");
    a.zero_ = zero;
    a.one_ = one;
    auto flatten = [&](const std::vector<std::vector<int>>& t, const std::string& what) {
      if (static_cast<int>(t.size()) != n) throw input_error("tables: '" + what + "' must have " + std::to_string(n) + " rows");
      std::vector<int> out;
      out.reserve(static_cast<std::size_t>(n * n));
      for (const auto& row : t) {
        if (static_cast<int>(row.size()) != n)
          throw input_error("tables: '" + what + "' rows must have " + std::to_string(n) + " entries");
        for (int v : row) {
          check_index(v, what);
          out.push_back(v);
        }
      }
      return out;
    };
    a.add_ = flatten(add, "add");
    if (sig == Signature::mv) {
      if (static_cast<int>(neg.size()) != n) throw input_error("tables: mv signature requires 'neg' of length " + std::to_string(n));
      for (int v : neg) check_index(v, "neg");
      a.neg_ = std::move(neg);
      const auto sq = static_cast<std::size_t>(n * n);
      a.mul_.resize(sq);
      a.join_.resize(sq);
      a.meet_.resize(sq);
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          // x ⊙ y = (x* ⊕ y*)*, x ∨ y = (x ⊙ y*) ⊕ y, x ∧ y = (x* ∨ y*)*
          a.mul_[a.at(x, y)] = a.neg(a.add(a.neg(x), a.neg(y)));
        }
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) a.join_[a.at(x, y)] = a.add(a.mul(x, a.neg(y)), y);
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) a.meet_[a.at(x, y)] = a.neg(a.join(a.neg(x), a.neg(y)));
    } else {
      a.mul_ = flatten(mul, "mul");
      a.join_ = flatten(join_t, "join");
      a.meet_ = flatten(meet_t, "meet");
      if (!neg.empty()) {
        if (static_cast<int>(neg.size()) != n) throw input_error("tables: 'neg' has the wrong length");
        for (int v : neg) check_index(v, "neg");
        a.neg_ = std::move(neg);
      }
    }
    return a;
  }

  /// The same carrier viewed as an MV-lattice (⊕, ⊙, ∨, ∧, 0, 1).
  FinAlgebra as_mvlat() const {
    FinAlgebra a = *this;
    a.sig_ = Signature::mvlat;
    return a;
  }

  /// Tuples-representation copy seen as tables, with tuple names.
  FinAlgebra as_tables() const {
    FinAlgebra a = *this;
    if (a.tuples_) {
      a.names_.clear();
      for (int i = 0; i < n_; ++i) a.names_.push_back(name(i));
      a.tuples_ = false;
      a.chains_.clear();
      a.elements_.clear();
      a.index_.clear();
    }
    return a;
  }

  int size() const { return n_; }
  Signature signature() const { return sig_; }
  bool is_tuples() const { return tuples_; }
  bool is_trivial() const { return zero_ == one_; }
  const std::vector<int>& chains() const { return chains_; }
  const std::vector<Tuple>& elements() const { return elements_; }
  const Tuple& element(int i) const { return elements_.at(static_cast<std::size_t>(i)); }
  const std::vector<std::string>& names() const { return names_; }

  std::string name(int i) const {
    if (tuples_) return tuple_str(elements_.at(static_cast<std::size_t>(i)));
    return names_.at(static_cast<std::size_t>(i));
  }

  std::optional<int> find(const Tuple& t) const {
    auto it = index_.find(t);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  int index_of(const Tuple& t) const {
    auto r = find(t);
    if (!r) throw input_error("element " + tuple_str(t) + " is not in the carrier");
    return *r;
  }

  std::optional<int> find_name(const std::string& s) const {
    for (int i = 0; i < n_; ++i)
      if (name(i) == s) return i;
    return std::nullopt;
  }

  int zero() const { return zero_; }
  int one() const { return one_; }
  int add(int x, int y) const { return add_[at(x, y)]; }
  int mul(int x, int y) const { return mul_[at(x, y)]; }
  int join(int x, int y) const { return join_[at(x, y)]; }
  int meet(int x, int y) const { return meet_[at(x, y)]; }
  bool has_neg() const { return !neg_.empty(); }
  int neg(int x) const {
    if (neg_.empty()) throw input_error("algebra has no negation");
    return neg_[static_cast<std::size_t>(x)];
  }

  int apply(Op op, int x, int y = -1) const {
    switch (op) {
      case Op::add: return add(x, y);
      case Op::mul: return mul(x, y);
      case Op::join: return join(x, y);
      case Op::meet: return meet(x, y);
      case Op::neg: return neg(x);
      case Op::zero: return zero_;
      case Op::one: return one_;
      default: throw invariant_error("apply: variable is not an operation");
    }
  }

  /// Lattice order x ≤ y iff x ∧ y = x.
  bool leq(int x, int y) const { return meet(x, y) == x; }

  /// Element indices in an order compatible with ≤. For tuple carriers this
  /// is the identity; for tables it is a stable topological sort.
  std::vector<int> linear_extension() const {
    std::vector<int> order(static_cast<std::size_t>(n_));
    std::iota(order.begin(), order.end(), 0);
    if (tuples_) return order;
    std::vector<int> below(static_cast<std::size_t>(n_), 0);
    for (int x = 0; x < n_; ++x)
      for (int y = 0; y < n_; ++y)
        if (x != y && leq(y, x)) ++below[static_cast<std::size_t>(x)];
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return below[static_cast<std::size_t>(a)] < below[static_cast<std::size_t>(b)]; });
    return order;
  }

  std::vector<Op> ops() const { return detail::signature_ops(sig_); }

  friend bool operator==(const FinAlgebra& a, const FinAlgebra& b) {
    if (a.sig_ != b.sig_ || a.tuples_ != b.tuples_ || a.n_ != b.n_) return false;
    if (a.tuples_) return a.chains_ == b.chains_ && a.elements_ == b.elements_;
    return a.names_ == b.names_ && a.zero_ == b.zero_ && a.one_ == b.one_ && a.add_ == b.add_ &&
           a.mul_ == b.mul_ && a.join_ == b.join_ && a.meet_ == b.meet_ && a.neg_ == b.neg_;
  }

  /// Raw tables (row-major), for serialization.
  std::vector<std::vector<int>> table(Op op) const {
    std::vector<std::vector<int>> t(static_cast<std::size_t>(n_), std::vector<int>(static_cast<std::size_t>(n_)));
    for (int x = 0; x < n_; ++x)
      for (int y = 0; y < n_; ++y) t[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = apply(op, x, y);
    return t;
  }
  const std::vector<int>& neg_table() const { return neg_; }

 private:
  FinAlgebra() = default;
  std::size_t at(int x, int y) const { return static_cast<std::size_t>(x) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(y); }

  Signature sig_ = Signature::mv;
  bool tuples_ = true;
  int n_ = 0;
  std::vector<int> chains_;
  std::vector<Tuple> elements_;
  std::map<Tuple, int> index_;
  std::vector<std::string> names_;
  std::vector<int> add_, mul_, join_, meet_, neg_;
  int zero_ = 0, one_ = 0;
};

inline FinAlgebra lukasiewicz_chain(int n) { return FinAlgebra::chain(n); }

inline ElementSet full_set(const FinAlgebra& a) {
  ElementSet s(static_cast<std::size_t>(a.size()));
  s.set();
  return s;
}

inline ElementSet make_set(const FinAlgebra& a, const std::vector<int>& members) {
  ElementSet s(static_cast<std::size_t>(a.size()));
  for (int m : members) s.set(static_cast<std::size_t>(m));
  return s;
}

inline std::vector<int> members(const ElementSet& s) {
  std::vector<int> out;
  for (auto i = s.find_first(); i != ElementSet::npos; i = s.find_next(i)) out.push_back(static_cast<int>(i));
  return out;
}

/// Evaluates a term inside a finite algebra on element indices.
inline int eval_in(const FinAlgebra& a, const Term& t, const std::vector<int>& args) {
  if (static_cast<std::size_t>(t.arity()) > args.size()) throw input_error("eval_in: not enough arguments");
  return t.fold<int>(
      [&](Op op, int v) {
        if (op == Op::var) return args[static_cast<std::size_t>(v)];
        return op == Op::zero ? a.zero() : a.one();
      },
      [&](Op, int x) { return a.neg(x); }, [&](Op op, int x, int y) { return a.apply(op, x, y); });
}

// ---------------------------------------------------------------------------
// Axioms

struct AxiomFailure {
  std::string law;
  std::vector<int> args;
};

struct AxiomReport {
  bool ok = true;
  std::vector<AxiomFailure> failures;
};

inline AxiomReport check_axioms(const FinAlgebra& a) {
  AxiomReport r;
  const int n = a.size();
  auto fail = [&](const char* law, std::vector<int> args) {
    r.ok = false;
    r.failures.push_back({law, std::move(args)});
  };
  if (a.signature() == Signature::mv) {
    const int z = a.zero();
    for (int x = 0; x < n; ++x) {
      if (a.add(x, z) != x) fail("MV1 x+0=x", {x});
      if (a.neg(a.neg(x)) != x) fail("MV2 x**=x", {x});
      if (a.add(x, a.neg(z)) != a.neg(z)) fail("MV3 x+0*=0*", {x});
      for (int y = 0; y < n; ++y) {
        if (a.add(x, y) != a.add(y, x)) fail("MV1 commutativity", {x, y});
        if (a.add(a.neg(a.add(a.neg(x), y)), y) != a.add(a.neg(a.add(a.neg(y), x)), x)) fail("MV4", {x, y});
        for (int w = 0; w < n; ++w)
          if (a.add(a.add(x, y), w) != a.add(x, a.add(y, w))) fail("MV1 associativity", {x, y, w});
      }
    }
    if (a.one() != a.neg(z)) fail("1=0*", {});
    return r;
  }
  const int z = a.zero(), o = a.one();
  for (int x = 0; x < n; ++x) {
    if (a.join(x, z) != x) fail("x∨0=x", {x});
    if (a.meet(x, o) != x) fail("x∧1=x", {x});
    if (a.mul(x, o) != x) fail("eq1 x·1=x", {x});
    if (a.add(x, z) != x) fail("eq2 x+0=x", {x});
    for (int y = 0; y < n; ++y) {
      if (a.join(x, y) != a.join(y, x)) fail("∨ commutative", {x, y});
      if (a.meet(x, y) != a.meet(y, x)) fail("∧ commutative", {x, y});
      if (a.add(x, y) != a.add(y, x)) fail("+ commutative", {x, y});
      if (a.mul(x, y) != a.mul(y, x)) fail("· commutative", {x, y});
      if (a.join(x, a.meet(x, y)) != x) fail("absorption ∨∧", {x, y});
      if (a.meet(x, a.join(x, y)) != x) fail("absorption ∧∨", {x, y});
      if (a.join(a.mul(x, y), a.meet(x, y)) != a.meet(x, y)) fail("eq3 (x·y)∨(x∧y)=x∧y", {x, y});
      if (a.join(a.add(x, y), a.join(x, y)) != a.add(x, y)) fail("eq4 (x+y)∨(x∨y)=x+y", {x, y});
      for (int w = 0; w < n; ++w) {
        if (a.join(a.join(x, y), w) != a.join(x, a.join(y, w))) fail("∨ associative", {x, y, w});
        if (a.meet(a.meet(x, y), w) != a.meet(x, a.meet(y, w))) fail("∧ associative", {x, y, w});
        if (a.meet(x, a.join(y, w)) != a.join(a.meet(x, y), a.meet(x, w))) fail("distributive", {x, y, w});
        if (a.add(x, a.join(y, w)) != a.join(a.add(x, y), a.add(x, w))) fail("+ over ∨", {x, y, w});
        if (a.add(x, a.meet(y, w)) != a.meet(a.add(x, y), a.add(x, w))) fail("+ over ∧", {x, y, w});
        if (a.mul(x, a.join(y, w)) != a.join(a.mul(x, y), a.mul(x, w))) fail("· over ∨", {x, y, w});
        if (a.mul(x, a.meet(y, w)) != a.meet(a.mul(x, y), a.mul(x, w))) fail("· over ∧", {x, y, w});
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Generation

namespace detail {

// Staged closure S_0 = seed ∪ {0,1}, S_{i+1} = S_i ∪ {op(x, y)}. `apply`
// returns the id of op(x, y), allocating fresh ids as needed. The first
// derivation of each element is recorded.
template <class Apply>
ClosureTrace staged_closure(const std::vector<int>& seed, int zero, int one, Signature sig, Apply&& apply) {
  ClosureTrace trace;
  std::set<int> seen;
  std::vector<int> found;
  for (int s : seed)
    if (std::find(trace.generators.begin(), trace.generators.end(), s) == trace.generators.end())
      trace.generators.push_back(s);
  for (std::size_t i = 0; i < trace.generators.size(); ++i) {
    int g = trace.generators[i];
    if (g == zero) {
      trace.steps.push_back({g, Op::zero});
    } else if (g == one) {
      trace.steps.push_back({g, Op::one});
    } else {
      trace.steps.push_back({g, Op::var, static_cast<int>(i)});
    }
    seen.insert(g);
    found.push_back(g);
  }
  if (!seen.count(zero)) {
    trace.steps.push_back({zero, Op::zero});
    seen.insert(zero);
    found.push_back(zero);
  }
  if (!seen.count(one)) {
    trace.steps.push_back({one, Op::one});
    seen.insert(one);
    found.push_back(one);
  }
  const auto& ops = signature_ops(sig);
  std::size_t stage_begin = 0;
  for (int stage = 1;; ++stage) {
    const std::size_t stage_end = found.size();
    if (stage_begin == stage_end) break;
    auto emit = [&](int c, Op op, int l, int r) {
      if (seen.insert(c).second) {
        found.push_back(c);
        trace.steps.push_back({c, op, l, r, stage});
      }
    };
    for (std::size_t i = stage_begin; i < stage_end; ++i) {
      const int x = found[i];
      for (Op op : ops) {
        if (op == Op::neg) {
          emit(apply(op, x, -1), op, x, -1);
          continue;
        }
        for (std::size_t j = 0; j < stage_end; ++j) {
          const int y = found[j];
          emit(apply(op, x, y), op, x, y);
          emit(apply(op, y, x), op, y, x);
        }
      }
    }
    stage_begin = stage_end;
  }
  return trace;
}

}  // namespace detail

/// Result of closing a seed inside an ambient algebra. Indices are ambient.
struct Generated {
  std::vector<int> carrier;  // sorted
  ClosureTrace trace;
};

inline Generated generate(const FinAlgebra& ambient, const std::vector<int>& seed, Signature sig) {
  for (int s : seed)
    if (s < 0 || s >= ambient.size()) throw input_error("generate: seed element out of range");
  if (sig == Signature::mv && !ambient.has_neg()) throw input_error("generate: mv closure needs negation");
  Generated g;
  g.trace = detail::staged_closure(seed, ambient.zero(), ambient.one(), sig,
                                   [&](Op op, int x, int y) { return ambient.apply(op, x, y); });
  for (const auto& s : g.trace.steps) g.carrier.push_back(s.element);
  std::sort(g.carrier.begin(), g.carrier.end());
  return g;
}

/// Independent closure by worklist over bitsets, for cross-checks.
inline ElementSet close_worklist(const FinAlgebra& ambient, const ElementSet& seed, Signature sig) {
  ElementSet s = seed;
  s.set(static_cast<std::size_t>(ambient.zero()));
  s.set(static_cast<std::size_t>(ambient.one()));
  std::vector<int> work = members(s);
  const auto& ops = detail::signature_ops(sig);
  while (!work.empty()) {
    int x = work.back();
    work.pop_back();
    auto add = [&](int c) {
      if (!s.test(static_cast<std::size_t>(c))) {
        s.set(static_cast<std::size_t>(c));
        work.push_back(c);
      }
    };
    for (Op op : ops) {
      if (op == Op::neg) {
        add(ambient.neg(x));
        continue;
      }
      for (int y : members(s)) {
        add(ambient.apply(op, x, y));
        add(ambient.apply(op, y, x));
      }
    }
  }
  return s;
}

/// Materializes a sub-carrier of a tuple ambient as its own algebra.
inline FinAlgebra sub_algebra(const FinAlgebra& ambient, const std::vector<int>& carrier, Signature sig) {
  if (!ambient.is_tuples()) throw input_error("sub_algebra: ambient must be a tuple algebra");
  std::vector<Tuple> elems;
  for (int c : carrier) elems.push_back(ambient.element(c));
  return FinAlgebra::subset(ambient.chains(), std::move(elems), sig);
}

/// Closure of a tuple seed without materializing the ambient product. The
/// trace refers to indices of the returned algebra.
struct GeneratedAlgebra {
  FinAlgebra algebra;
  ClosureTrace trace;
};

inline GeneratedAlgebra generate_tuples(const std::vector<int>& chains, const std::vector<Tuple>& seed, Signature sig) {
  for (const auto& t : seed) detail::check_on_grid(chains, t);
  std::map<Tuple, int> ids;
  std::vector<Tuple> by_id;
  auto id_of = [&](const Tuple& t) {
    auto [it, fresh] = ids.emplace(t, static_cast<int>(by_id.size()));
    if (fresh) by_id.push_back(t);
    return it->second;
  };
  std::vector<int> seed_ids;
  for (const auto& t : seed) seed_ids.push_back(id_of(t));
  const int zero = id_of(Tuple(chains.size()));
  const int one = id_of(Tuple(chains.size(), UnitRational::one()));
  ClosureTrace trace = detail::staged_closure(seed_ids, zero, one, sig, [&](Op op, int x, int y) {
    const Tuple tx = by_id[static_cast<std::size_t>(x)];
    if (op == Op::neg) return id_of(detail::tuple_op(op, tx, {}));
    const Tuple ty = by_id[static_cast<std::size_t>(y)];
    return id_of(detail::tuple_op(op, tx, ty));
  });
  std::vector<Tuple> elems;
  for (const auto& s : trace.steps) elems.push_back(by_id[static_cast<std::size_t>(s.element)]);
  FinAlgebra a = FinAlgebra::subset(chains, elems, sig);
  auto remap = [&](int id) { return id < 0 ? id : a.index_of(by_id[static_cast<std::size_t>(id)]); };
  for (auto& g : trace.generators) g = remap(g);
  for (auto& s : trace.steps) {
    s.element = remap(s.element);
    if (s.op != Op::var) {
      s.lhs = remap(s.lhs);
      s.rhs = remap(s.rhs);
    }
  }
  return {std::move(a), std::move(trace)};
}

// ---------------------------------------------------------------------------
// Homomorphisms into [0,1]

struct Hom {
  std::vector<UnitRational> values;  // indexed by source element
  friend bool operator==(const Hom&, const Hom&) = default;
  friend auto operator<=>(const Hom& a, const Hom& b) { return a.values <=> b.values; }
};

struct HomSet {
  std::vector<Hom> homs;
  std::int64_t bound = 1;
  bool possibly_incomplete = false;
};

/// Exhaustive preservation check, independent of the search.
inline bool is_hom(const FinAlgebra& a, const std::vector<UnitRational>& v, Signature sig) {
  if (static_cast<int>(v.size()) != a.size()) return false;
  if (!v[static_cast<std::size_t>(a.zero())].is_zero() || !v[static_cast<std::size_t>(a.one())].is_one()) return false;
  const int n = a.size();
  auto val = [&](int i) -> const UnitRational& { return v[static_cast<std::size_t>(i)]; };
  for (int x = 0; x < n; ++x) {
    if (sig == Signature::mv && val(a.neg(x)) != mv_neg(val(x))) return false;
    for (int y = 0; y < n; ++y) {
      if (val(a.add(x, y)) != mv_add(val(x), val(y))) return false;
      if (sig == Signature::mvlat) {
        if (val(a.mul(x, y)) != mv_mul(val(x), val(y))) return false;
        if (val(a.join(x, y)) != join(val(x), val(y))) return false;
        if (val(a.meet(x, y)) != meet(val(x), val(y))) return false;
      }
    }
  }
  return true;
}

inline std::int64_t default_hom_bound(const FinAlgebra& a) {
  if (a.is_tuples()) return lcm_of(a.chains());
  std::int64_t l = 1;
  for (std::int64_t k = 2; k <= std::min<std::int64_t>(a.size() - 1, 12); ++k) l = std::lcm(l, k);
  return l;
}

/// All homomorphisms a → Ł_bound ⊆ [0,1] preserving a's signature, sorted by
/// value vector. Without a bound, tuple algebras use lcm of the chain orders
/// (complete) and table algebras lcm(1..min(|a|-1, 12)).
inline HomSet enumerate_homs(const FinAlgebra& a, std::optional<std::int64_t> bound = std::nullopt) {
  HomSet out;
  const std::int64_t L = bound.value_or(default_hom_bound(a));
  if (L < 1) throw input_error("enumerate_homs: bound must be positive");
  out.bound = L;
  if (a.is_tuples()) {
    out.possibly_incomplete = L % lcm_of(a.chains()) != 0;
  } else {
    out.possibly_incomplete = bound.has_value() || a.signature() == Signature::mvlat || a.size() - 1 > 12;
  }
  if (a.is_trivial()) return out;

  const int n = a.size();
  const Signature sig = a.signature();
  const auto order = a.linear_extension();
  std::vector<std::int64_t> val(static_cast<std::size_t>(n), -1);
  std::vector<int> assigned;  // trail
  std::vector<std::vector<std::int64_t>> found;

  auto gval = [&](int i) -> std::int64_t& { return val[static_cast<std::size_t>(i)]; };
  auto grid_op = [&](Op op, std::int64_t x, std::int64_t y) -> std::int64_t {
    switch (op) {
      case Op::add: return std::min(L, x + y);
      case Op::mul: return std::max<std::int64_t>(0, x + y - L);
      case Op::join: return std::max(x, y);
      case Op::meet: return std::min(x, y);
      case Op::neg: return L - x;
      default: return -1;
    }
  };
  const auto& ops = detail::signature_ops(sig);

  // Assigns e := v and propagates consequences; false on conflict.
  auto assign = [&](int e, std::int64_t v) {
    std::vector<int> queue;
    auto set = [&](int x, std::int64_t w) {
      if (gval(x) == -1) {
        gval(x) = w;
        assigned.push_back(x);
        queue.push_back(x);
        return true;
      }
      return gval(x) == w;
    };
    if (!set(e, v)) return false;
    while (!queue.empty()) {
      int x = queue.back();
      queue.pop_back();
      for (Op op : ops) {
        if (op == Op::neg) {
          if (!set(a.neg(x), grid_op(op, gval(x), 0))) return false;
          continue;
        }
        for (int k = 0; k < static_cast<int>(assigned.size()); ++k) {
          int y = assigned[static_cast<std::size_t>(k)];
          if (!set(a.apply(op, x, y), grid_op(op, gval(x), gval(y)))) return false;
          if (!set(a.apply(op, y, x), grid_op(op, gval(y), gval(x)))) return false;
        }
      }
      for (int y : assigned) {
        if (a.leq(x, y) && gval(x) > gval(y)) return false;
        if (a.leq(y, x) && gval(y) > gval(x)) return false;
      }
    }
    return true;
  };
  auto undo_to = [&](std::size_t mark) {
    while (assigned.size() > mark) {
      gval(assigned.back()) = -1;
      assigned.pop_back();
    }
  };

  bool ok = assign(a.zero(), 0) && assign(a.one(), L);
  if (!ok) return out;

  auto rec = [&](auto& self, std::size_t pos) -> void {
    while (pos < order.size() && gval(order[pos]) != -1) ++pos;
    if (pos == order.size()) {
      found.push_back(val);
      return;
    }
    const int e = order[pos];
    std::int64_t lo = 0, hi = L;
    for (int y : assigned) {
      if (a.leq(y, e)) lo = std::max(lo, gval(y));
      if (a.leq(e, y)) hi = std::min(hi, gval(y));
    }
    for (std::int64_t v = lo; v <= hi; ++v) {
      const std::size_t mark = assigned.size();
      if (assign(e, v)) self(self, pos + 1);
      undo_to(mark);
    }
  };
  rec(rec, 0);

  for (const auto& f : found) {
    Hom h;
    h.values.reserve(f.size());
    for (auto v : f) h.values.emplace_back(v, L);
    if (!is_hom(a, h.values, sig)) throw invariant_error("enumerate_homs: search produced a non-homomorphism");
    out.homs.push_back(std::move(h));
  }
  std::sort(out.homs.begin(), out.homs.end());
  out.homs.erase(std::unique(out.homs.begin(), out.homs.end()), out.homs.end());
  return out;
}

inline bool kernel_intersection_is_diagonal(const FinAlgebra& a, const std::vector<Hom>& homs) {
  for (int x = 0; x < a.size(); ++x)
    for (int y = x + 1; y < a.size(); ++y) {
      bool separated = false;
      for (const auto& h : homs)
        if (h.values[static_cast<std::size_t>(x)] != h.values[static_cast<std::size_t>(y)]) {
          separated = true;
          break;
        }
      if (!separated) return false;
    }
  return true;
}

inline bool kernel_intersection_is_diagonal(const FinAlgebra& a) {
  return kernel_intersection_is_diagonal(a, enumerate_homs(a).homs);
}

// ---------------------------------------------------------------------------
// Morphisms between finite algebras (index maps)

using Morphism = std::vector<int>;

inline bool is_morphism(const FinAlgebra& src, const FinAlgebra& dst, const Morphism& m, Signature sig) {
  if (static_cast<int>(m.size()) != src.size()) return false;
  for (int v : m)
    if (v < 0 || v >= dst.size()) return false;
  auto f = [&](int x) { return m[static_cast<std::size_t>(x)]; };
  if (f(src.zero()) != dst.zero() || f(src.one()) != dst.one()) return false;
  for (int x = 0; x < src.size(); ++x) {
    if (sig == Signature::mv && f(src.neg(x)) != dst.neg(f(x))) return false;
    for (int y = 0; y < src.size(); ++y)
      for (Op op : detail::signature_ops(sig)) {
        if (op == Op::neg) continue;
        if (f(src.apply(op, x, y)) != dst.apply(op, f(x), f(y))) return false;
      }
  }
  return true;
}

inline bool is_bijective(const Morphism& m, int target_size) {
  if (static_cast<int>(m.size()) != target_size) return false;
  std::vector<bool> hit(static_cast<std::size_t>(target_size), false);
  for (int v : m) {
    if (v < 0 || v >= target_size || hit[static_cast<std::size_t>(v)]) return false;
    hit[static_cast<std::size_t>(v)] = true;
  }
  return true;
}

/// All isomorphisms a → b for the given signature, by backtracking with
/// propagation through the operation tables.
inline std::vector<Morphism> isomorphisms(const FinAlgebra& a, const FinAlgebra& b, Signature sig,
                                          std::size_t limit = SIZE_MAX) {
  std::vector<Morphism> out;
  if (a.size() != b.size()) return out;
  const int n = a.size();
  Morphism m(static_cast<std::size_t>(n), -1);
  std::vector<int> inv(static_cast<std::size_t>(n), -1);
  std::vector<int> trail;
  const auto& ops = detail::signature_ops(sig);
  auto assign = [&](int x, int y) {
    std::vector<int> queue;
    auto set = [&](int u, int v) {
      auto& mu = m[static_cast<std::size_t>(u)];
      auto& iv = inv[static_cast<std::size_t>(v)];
      if (mu == -1 && iv == -1) {
        mu = v;
        iv = u;
        trail.push_back(u);
        queue.push_back(u);
        return true;
      }
      return mu == v && iv == u;
    };
    if (!set(x, y)) return false;
    while (!queue.empty()) {
      int u = queue.back();
      queue.pop_back();
      for (Op op : ops) {
        if (op == Op::neg) {
          if (!set(a.neg(u), b.neg(m[static_cast<std::size_t>(u)]))) return false;
          continue;
        }
        for (std::size_t k = 0; k < trail.size(); ++k) {
          int w = trail[k];
          int mu = m[static_cast<std::size_t>(u)], mw = m[static_cast<std::size_t>(w)];
          if (!set(a.apply(op, u, w), b.apply(op, mu, mw))) return false;
          if (!set(a.apply(op, w, u), b.apply(op, mw, mu))) return false;
        }
      }
    }
    return true;
  };
  auto undo_to = [&](std::size_t mark) {
    while (trail.size() > mark) {
      int u = trail.back();
      inv[static_cast<std::size_t>(m[static_cast<std::size_t>(u)])] = -1;
      m[static_cast<std::size_t>(u)] = -1;
      trail.pop_back();
    }
  };
  if (!assign(a.zero(), b.zero()) || !assign(a.one(), b.one())) return out;
  auto rec = [&](auto& self) -> void {
    if (out.size() >= limit) return;
    int x = -1;
    for (int i = 0; i < n; ++i)
      if (m[static_cast<std::size_t>(i)] == -1) {
        x = i;
        break;
      }
    if (x == -1) {
      if (is_morphism(a, b, m, sig)) out.push_back(m);
      return;
    }
    for (int y = 0; y < n; ++y) {
      if (inv[static_cast<std::size_t>(y)] != -1) continue;
      const std::size_t mark = trail.size();
      if (assign(x, y)) self(self);
      undo_to(mark);
    }
  };
  rec(rec);
  return out;
}

inline std::optional<Morphism> find_isomorphism(const FinAlgebra& a, const FinAlgebra& b, Signature sig) {
  auto all = isomorphisms(a, b, sig, 1);
  if (all.empty()) return std::nullopt;
  return all.front();
}

inline std::vector<Morphism> automorphisms(const FinAlgebra& a, Signature sig) { return isomorphisms(a, a, sig); }

// ---------------------------------------------------------------------------
// Positive subreducts and the generated MV-algebra

/// A positive subreduct `a` (tuples, mvlat) together with the MV-algebra
/// b = ⟨a⟩ it generates inside the same product of chains. Generator i of the
/// witnesses is element i of `a`.
struct Subreduct {
  FinAlgebra a;
  FinAlgebra b;
  std::vector<int> embedding;  // a index -> b index
  GenWitness witness;
};

inline Subreduct make_subreduct(const FinAlgebra& a) {
  if (!a.is_tuples()) throw input_error("subreduct: needs a tuple algebra");
  auto g = generate_tuples(a.chains(), a.elements(), Signature::mv);
  std::vector<int> carrier(static_cast<std::size_t>(g.algebra.size()));
  std::iota(carrier.begin(), carrier.end(), 0);
  Subreduct s{a.signature() == Signature::mvlat ? a : a.as_mvlat(), std::move(g.algebra), {}, {}};
  for (const auto& t : a.elements()) s.embedding.push_back(s.b.index_of(t));
  s.witness = record_witnesses(g.trace, carrier);
  return s;
}

/// As above, but requires that `a` generates exactly `b`.
inline Subreduct make_subreduct(const FinAlgebra& a, const FinAlgebra& b) {
  Subreduct s = make_subreduct(a);
  if (!(s.b.chains() == b.chains() && s.b.elements() == b.elements()))
    throw input_error("subreduct does not generate the given algebra (generates " + std::to_string(s.b.size()) +
                      " of " + std::to_string(b.size()) + " elements)");
  return s;
}

/// Extends f ∈ H_a to f̄ : b → [0,1] through the generation witnesses.
inline Hom extend_hom(const Subreduct& s, const Hom& f) {
  if (static_cast<int>(f.values.size()) != s.a.size()) throw input_error("extend_hom: hom has the wrong size");
  Hom out;
  out.values.resize(static_cast<std::size_t>(s.b.size()));
  for (int e = 0; e < s.b.size(); ++e) out.values[static_cast<std::size_t>(e)] = eval(s.witness.at(e), f.values);
  if (!is_hom(s.b, out.values, Signature::mv))
    throw invariant_error("extend_hom: extension does not preserve the MV operations");
  for (int i = 0; i < s.a.size(); ++i)
    if (out.values[static_cast<std::size_t>(s.embedding[static_cast<std::size_t>(i)])] != f.values[static_cast<std::size_t>(i)])
      throw invariant_error("extend_hom: extension does not restrict to the original hom");
  return out;
}

/// Restriction of a hom on b to the carrier of a.
inline Hom restrict_hom(const Subreduct& s, const Hom& g) {
  Hom out;
  for (int e : s.embedding) out.values.push_back(g.values[static_cast<std::size_t>(e)]);
  return out;
}

}  // namespace mvlat
