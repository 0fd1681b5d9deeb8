#pragma once

// Finite MV-topological spaces. Points are indices 0..n-1, fuzzy subsets are
// value vectors over the points, and every membership value lies in a fixed
// grid Ł_N so that closures terminate.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mvlat/order.hpp"

namespace mvlat {

inline Fuzzy constant(std::size_t n, const UnitRational& v) { return Fuzzy(n, v); }

inline Fuzzy fuzzy_op(Op op, const Fuzzy& a, const Fuzzy& b) { return detail::tuple_op(op, a, b); }

inline Fuzzy fuzzy_neg(const Fuzzy& a) {
  Fuzzy r;
  for (const auto& v : a) r.push_back(mv_neg(v));
  return r;
}

inline Fuzzy fuzzy_multiple(std::int64_t n, const Fuzzy& a) {
  Fuzzy r;
  for (const auto& v : a) r.push_back(eval(scalar_multiple(n, Term::var(0)), {v}));
  return r;
}

inline bool fuzzy_leq(const Fuzzy& a, const Fuzzy& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] <= b[i])) return false;
  return true;
}

inline bool is_constant(const Fuzzy& a, const UnitRational& v) {
  return std::all_of(a.begin(), a.end(), [&](const UnitRational& x) { return x == v; });
}

struct MVSpace {
  std::vector<std::string> points;
  std::int64_t grid = 1;         // every value lies in Ł_grid
  std::vector<Fuzzy> opens;      // sorted, no duplicates
  std::optional<Relation> order;  // order[x][y]: x ≤ y

  std::size_t size() const { return points.size(); }
  bool is_open(const Fuzzy& a) const { return std::binary_search(opens.begin(), opens.end(), a); }
  bool is_closed(const Fuzzy& a) const { return is_open(fuzzy_neg(a)); }
  const Relation& require_order(const char* what) const {
    if (!order) throw input_error(std::string(what) + ": the space has no order");
    return *order;
  }
  friend bool operator==(const MVSpace&, const MVSpace&) = default;
};

inline std::vector<std::string> default_point_names(std::size_t n, const std::string& prefix = "f") {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

inline void check_fuzzy(const Fuzzy& a, std::size_t n, std::int64_t grid) {
  if (a.size() != n)
    throw input_error("fuzzy subset has " + std::to_string(a.size()) + " values, the space has " + std::to_string(n) +
                      " points");
  for (const auto& v : a)
    if (!v.on_grid(grid)) throw input_error("membership value " + v.str() + " is not in Ł_" + std::to_string(grid));
}

enum class GenMode { base, subbase };

namespace detail {

// Closes `s` under the given binary pointwise operations.
inline void close_fuzzy(std::set<Fuzzy>& s, const std::vector<Op>& ops, std::size_t max_opens) {
  std::vector<Fuzzy> work(s.begin(), s.end());
  while (!work.empty()) {
    Fuzzy x = std::move(work.back());
    work.pop_back();
    std::vector<Fuzzy> snapshot(s.begin(), s.end());
    for (const auto& y : snapshot)
      for (Op op : ops) {
        auto z = fuzzy_op(op, x, y);
        if (s.insert(z).second) {
          if (s.size() > max_opens)
            throw size_guard_error("topology has more than " + std::to_string(max_opens) + " open sets");
          work.push_back(std::move(z));
        }
      }
  }
}

}  // namespace detail

/// The MV-topology generated by a base or a subbase. A subbase is first
/// closed under ⊕, ⊙, ∧; in both modes the result is then closed under ∨
/// and 0, 1 are added. In base mode the join closure must already be closed
/// under ⊕, ⊙, ∧, otherwise the family is not a base and input_error is thrown.
inline MVSpace generate_topology(std::vector<std::string> points, const std::vector<Fuzzy>& gens, GenMode mode,
                                 std::int64_t grid, std::optional<Relation> order = std::nullopt,
                                 std::size_t max_opens = 4096) {
  if (grid < 1) throw input_error("generate_topology: grid must be positive");
  const auto n = points.size();
  for (const auto& g : gens) check_fuzzy(g, n, grid);
  if (order && (order->size() != n || !is_partial_order(*order)))
    throw input_error("generate_topology: order is not a partial order on the points");
  std::set<Fuzzy> s(gens.begin(), gens.end());
  if (mode == GenMode::subbase) detail::close_fuzzy(s, {Op::add, Op::mul, Op::meet}, max_opens);
  s.insert(constant(n, UnitRational::zero()));
  s.insert(constant(n, UnitRational::one()));
  detail::close_fuzzy(s, {Op::join}, max_opens);
  MVSpace x{std::move(points), grid, std::vector<Fuzzy>(s.begin(), s.end()), std::move(order)};
  if (mode == GenMode::base) {
    for (const auto& a : x.opens)
      for (const auto& b : x.opens)
        for (Op op : {Op::add, Op::mul, Op::meet})
          if (!x.is_open(fuzzy_op(op, a, b)))
            throw input_error("generate_topology: the family is not a base of an MV-topology");
  }
  return x;
}

// ---------------------------------------------------------------------------
// Axioms

struct TopologyAxioms {
  bool constants = true;  // (i)
  bool joins = true;      // (ii)
  bool mul = true;        // (iii)
  bool add = true;        // (iv)
  bool meet = true;       // (v)
  bool ok() const { return constants && joins && mul && add && meet; }
};

inline TopologyAxioms check_topology_axioms(const MVSpace& x) {
  TopologyAxioms r;
  const auto n = x.size();
  r.constants = x.is_open(constant(n, UnitRational::zero())) && x.is_open(constant(n, UnitRational::one()));
  // finite family: binary joins plus the empty join 0 cover arbitrary joins
  for (const auto& a : x.opens)
    for (const auto& b : x.opens) {
      r.joins = r.joins && x.is_open(fuzzy_op(Op::join, a, b));
      r.mul = r.mul && x.is_open(fuzzy_op(Op::mul, a, b));
      r.add = r.add && x.is_open(fuzzy_op(Op::add, a, b));
      r.meet = r.meet && x.is_open(fuzzy_op(Op::meet, a, b));
    }
  return r;
}

// ---------------------------------------------------------------------------
// Clopens

inline std::vector<Fuzzy> clopens(const MVSpace& x) {
  std::vector<Fuzzy> out;
  for (const auto& a : x.opens)
    if (x.is_closed(a)) out.push_back(a);
  return out;
}

inline bool is_increasing(const Relation& order, const Fuzzy& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (order[i][j] && !(a[i] <= a[j])) return false;
  return true;
}

inline std::vector<Fuzzy> increasing_clopens(const MVSpace& x) {
  const auto& ord = x.require_order("increasing_clopens");
  std::vector<Fuzzy> out;
  for (auto& a : clopens(x))
    if (is_increasing(ord, a)) out.push_back(std::move(a));
  return out;
}

// ---------------------------------------------------------------------------
// Maps

using PointMap = std::vector<int>;  // x ↦ f[x]

inline void check_map(const PointMap& f, std::size_t nx, std::size_t ny) {
  if (f.size() != nx) throw input_error("point map has the wrong length");
  for (int v : f)
    if (v < 0 || static_cast<std::size_t>(v) >= ny) throw input_error("point map value out of range");
}

/// f←(β) = β ∘ f
inline Fuzzy preimage(const PointMap& f, const Fuzzy& beta) {
  Fuzzy r;
  for (int v : f) r.push_back(beta[static_cast<std::size_t>(v)]);
  return r;
}

/// f→(α)(y) = ⋁_{f(x)=y} α(x), 0 on empty fibres
inline Fuzzy image(const PointMap& f, const Fuzzy& alpha, std::size_t ny) {
  Fuzzy r(ny, UnitRational::zero());
  for (std::size_t x = 0; x < f.size(); ++x) {
    auto& slot = r[static_cast<std::size_t>(f[x])];
    slot = join(slot, alpha[x]);
  }
  return r;
}

inline bool is_continuous(const PointMap& f, const MVSpace& x, const MVSpace& y) {
  check_map(f, x.size(), y.size());
  return std::all_of(y.opens.begin(), y.opens.end(), [&](const Fuzzy& b) { return x.is_open(preimage(f, b)); });
}

/// The subbase criterion: preimages of a subbase of y are open. `subbase`
/// must generate y's topology.
inline bool is_continuous_via_subbase(const PointMap& f, const MVSpace& x, const MVSpace& y,
                                      const std::vector<Fuzzy>& subbase) {
  check_map(f, x.size(), y.size());
  if (generate_topology(y.points, subbase, GenMode::subbase, y.grid).opens != y.opens)
    throw input_error("is_continuous_via_subbase: the family is not a subbase of the target topology");
  return std::all_of(subbase.begin(), subbase.end(), [&](const Fuzzy& b) { return x.is_open(preimage(f, b)); });
}

inline bool is_open_map(const PointMap& f, const MVSpace& x, const MVSpace& y) {
  check_map(f, x.size(), y.size());
  return std::all_of(x.opens.begin(), x.opens.end(),
                     [&](const Fuzzy& a) { return y.is_open(image(f, a, y.size())); });
}

inline bool is_closed_map(const PointMap& f, const MVSpace& x, const MVSpace& y) {
  check_map(f, x.size(), y.size());
  return std::all_of(x.opens.begin(), x.opens.end(),
                     [&](const Fuzzy& a) { return y.is_closed(image(f, fuzzy_neg(a), y.size())); });
}

inline std::optional<PointMap> inverse_map(const PointMap& f, std::size_t ny) {
  if (f.size() != ny) return std::nullopt;
  PointMap inv(ny, -1);
  for (std::size_t x = 0; x < f.size(); ++x) {
    auto& slot = inv[static_cast<std::size_t>(f[x])];
    if (slot != -1) return std::nullopt;
    slot = static_cast<int>(x);
  }
  return inv;
}

inline bool is_homeomorphism(const PointMap& f, const MVSpace& x, const MVSpace& y) {
  check_map(f, x.size(), y.size());
  auto inv = inverse_map(f, y.size());
  return inv && is_continuous(f, x, y) && is_continuous(*inv, y, x);
}

inline bool is_order_preserving(const PointMap& f, const MVSpace& x, const MVSpace& y) {
  const auto& ox = x.require_order("is_order_preserving");
  const auto& oy = y.require_order("is_order_preserving");
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < f.size(); ++j)
      if (ox[i][j] && !oy[static_cast<std::size_t>(f[i])][static_cast<std::size_t>(f[j])]) return false;
  return true;
}

/// Homeomorphism that also preserves and reflects the order.
inline bool is_order_homeomorphism(const PointMap& f, const MVSpace& x, const MVSpace& y) {
  if (!is_homeomorphism(f, x, y)) return false;
  auto inv = inverse_map(f, y.size());
  return is_order_preserving(f, x, y) && is_order_preserving(*inv, y, x);
}

// ---------------------------------------------------------------------------
// Coverings and compactness

inline bool is_cover(const std::vector<Fuzzy>& family, std::size_t n) {
  Fuzzy j(n, UnitRational::zero());
  for (const auto& a : family) j = fuzzy_op(Op::join, j, a);
  return is_constant(j, UnitRational::one());
}

/// n·α stops changing once n ≥ ⌈1 / least nonzero value of α⌉.
inline std::int64_t saturation_multiplicity(const Fuzzy& a) {
  std::optional<UnitRational> least;
  for (const auto& v : a)
    if (!v.is_zero() && (!least || v < *least)) least = v;
  if (!least) return 1;
  const Integer& p = least->numerator();
  const Integer& q = least->denominator();
  return static_cast<std::int64_t>((q + p - 1) / p);
}

/// Whether some n₁α₁ ⊕ ⋯ ⊕ n_kα_k over `family` equals 1. Sums are monotone
/// in the multiplicities, so the saturated sum over the whole family decides.
inline bool has_additive_subcover(const std::vector<Fuzzy>& family, std::size_t n) {
  Fuzzy s(n, UnitRational::zero());
  for (const auto& a : family) s = fuzzy_op(Op::add, s, fuzzy_multiple(saturation_multiplicity(a), a));
  return is_constant(s, UnitRational::one());
}

/// ⊆-minimal coverings drawn from `family`: the minimal hitting sets of the
/// point sets V_x = {α : α(x) = 1}. Indices refer to `family`.
inline std::vector<std::vector<int>> minimal_covers(const std::vector<Fuzzy>& family, std::size_t n,
                                                    std::size_t max_family = 4096) {
  if (family.size() > max_family)
    throw size_guard_error("minimal_covers: " + std::to_string(family.size()) + " sets, limit is " +
                           std::to_string(max_family));
  std::vector<std::vector<int>> hits(n);
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t x = 0; x < n; ++x)
      if (family[i][x].is_one()) hits[x].push_back(static_cast<int>(i));
  std::set<std::vector<int>> found;
  std::vector<int> chosen;
  auto covered = [&](std::size_t x) {
    return std::any_of(chosen.begin(), chosen.end(), [&](int i) { return family[static_cast<std::size_t>(i)][x].is_one(); });
  };
  auto minimal = [&](const std::vector<int>& c) {
    for (std::size_t k = 0; k < c.size(); ++k) {
      bool redundant = true;
      for (std::size_t x = 0; x < n && redundant; ++x) {
        bool other = false;
        for (std::size_t m = 0; m < c.size() && !other; ++m)
          if (m != k && family[static_cast<std::size_t>(c[m])][x].is_one()) other = true;
        if (!other) redundant = false;
      }
      if (redundant) return false;
    }
    return true;
  };
  std::function<void()> go = [&]() {
    std::size_t x = 0;
    while (x < n && covered(x)) ++x;
    if (x == n) {
      auto c = chosen;
      std::sort(c.begin(), c.end());
      if (minimal(c)) found.insert(std::move(c));
      return;
    }
    if (hits[x].empty()) return;
    for (int i : hits[x]) {
      chosen.push_back(i);
      go();
      chosen.pop_back();
    }
  };
  go();
  return {found.begin(), found.end()};
}

inline bool is_large_subbase(const std::vector<Fuzzy>& s, std::int64_t grid) {
  std::set<Fuzzy> set(s.begin(), s.end());
  for (const auto& a : s)
    for (std::int64_t m = 2; m <= grid; ++m)
      if (!set.count(fuzzy_multiple(m, a))) return false;
  return true;
}

struct CompactnessReport {
  bool strongly_compact = true;  // finitely many opens: every cover is finite
  bool compact = true;
  int minimal_covers = 0;
  std::optional<bool> alexander;  // set when a large subbase was given
};

/// Compact iff every ⊆-minimal open cover has an additive subcover: any
/// cover contains a minimal one. The optional large subbase adds the
/// Alexander path, which must agree.
inline CompactnessReport compactness(const MVSpace& x, const std::vector<Fuzzy>* large_subbase = nullptr,
                                     std::size_t max_opens = 4096) {
  CompactnessReport r;
  const auto covers = minimal_covers(x.opens, x.size(), max_opens);
  r.minimal_covers = static_cast<int>(covers.size());
  for (const auto& c : covers) {
    std::vector<Fuzzy> fam;
    for (int i : c) fam.push_back(x.opens[static_cast<std::size_t>(i)]);
    if (!has_additive_subcover(fam, x.size())) r.compact = false;
  }
  if (large_subbase) {
    if (!is_large_subbase(*large_subbase, x.grid))
      throw input_error("compactness: the declared subbase is not large");
    if (generate_topology(x.points, *large_subbase, GenMode::subbase, x.grid, std::nullopt, max_opens).opens != x.opens)
      throw input_error("compactness: the declared family is not a subbase of the topology");
    bool ok = true;
    for (const auto& c : minimal_covers(*large_subbase, x.size(), max_opens)) {
      std::vector<Fuzzy> fam;
      for (int i : c) fam.push_back((*large_subbase)[static_cast<std::size_t>(i)]);
      if (!has_additive_subcover(fam, x.size())) ok = false;
    }
    r.alexander = ok;
    if (ok && !r.compact) throw invariant_error("compactness: the Alexander path and the definition disagree");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Separation

inline Fuzzy crisp_point(std::size_t n, std::size_t x) {
  Fuzzy r(n, UnitRational::zero());
  r[x] = UnitRational::one();
  return r;
}

struct SeparationReport {
  bool t0 = true;
  bool hausdorff = true;
  bool crisp_singletons_closed = true;
  bool compact = true;
  std::optional<bool> totally_order_disconnected;  // P2, needs an order
  bool clopen_base = true;                         // P3
  std::optional<bool> priestley;
};

inline SeparationReport separation_axioms(const MVSpace& x) {
  SeparationReport r;
  const auto n = x.size();
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      if (p == q) continue;
      bool dist = false;
      for (const auto& a : x.opens)
        if (a[p] != a[q]) dist = true;
      r.t0 = r.t0 && dist;
      bool sep = false;
      for (const auto& a : x.opens) {
        if (!a[p].is_one()) continue;
        for (const auto& b : x.opens)
          if (b[q].is_one() && is_constant(fuzzy_op(Op::meet, a, b), UnitRational::zero())) {
            sep = true;
            break;
          }
        if (sep) break;
      }
      r.hausdorff = r.hausdorff && sep;
    }
  for (std::size_t p = 0; p < n; ++p) r.crisp_singletons_closed = r.crisp_singletons_closed && x.is_closed(crisp_point(n, p));
  r.compact = compactness(x).compact;

  const auto cl = clopens(x);
  for (const auto& a : x.opens) {
    Fuzzy j(n, UnitRational::zero());
    for (const auto& c : cl)
      if (fuzzy_leq(c, a)) j = fuzzy_op(Op::join, j, c);
    if (j != a) r.clopen_base = false;
  }

  if (x.order) {
    const auto up = increasing_clopens(x);
    bool p2 = true;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q) {
        if ((*x.order)[p][q]) continue;
        bool found = std::any_of(up.begin(), up.end(), [&](const Fuzzy& a) { return a[p].is_one() && a[q].is_zero(); });
        p2 = p2 && found;
      }
    r.totally_order_disconnected = p2;
    r.priestley = r.compact && p2 && r.clopen_base;
  }
  return r;
}

}  // namespace mvlat
