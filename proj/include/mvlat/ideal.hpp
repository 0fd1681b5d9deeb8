#pragma once

// Ideals of finite MV-algebras and MV-lattices, the maximal spectrum, the
// Belluce representation, traces on positive subreducts, and cuts.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "mvlat/algebra.hpp"

namespace mvlat {

inline ElementSet down_set(const FinAlgebra& a, int x) {
  ElementSet s(static_cast<std::size_t>(a.size()));
  for (int y = 0; y < a.size(); ++y)
    if (a.leq(y, x)) s.set(static_cast<std::size_t>(y));
  return s;
}

inline ElementSet up_set(const FinAlgebra& a, int x) {
  ElementSet s(static_cast<std::size_t>(a.size()));
  for (int y = 0; y < a.size(); ++y)
    if (a.leq(x, y)) s.set(static_cast<std::size_t>(y));
  return s;
}

inline bool set_less(const ElementSet& x, const ElementSet& y) { return members(x) < members(y); }

inline std::string set_str(const FinAlgebra& a, const ElementSet& s) {
  std::string out = "{";
  bool first = true;
  for (int m : members(s)) {
    if (!first) out += ", ";
    first = false;
    out += a.name(m);
  }
  return out + "}";
}

/// 0 ∈ I, I downward closed, I closed under + (⊕).
inline bool is_ideal(const FinAlgebra& a, const ElementSet& s) {
  if (!s.test(static_cast<std::size_t>(a.zero()))) return false;
  const auto ms = members(s);
  for (int x : ms) {
    for (int y = 0; y < a.size(); ++y)
      if (a.leq(y, x) && !s.test(static_cast<std::size_t>(y))) return false;
    for (int y : ms)
      if (!s.test(static_cast<std::size_t>(a.add(x, y)))) return false;
  }
  return true;
}

/// Proper ideal with x ∧ y ∈ I implying x ∈ I or y ∈ I.
inline bool is_prime_ideal(const FinAlgebra& a, const ElementSet& s) {
  if (!is_ideal(a, s) || s.test(static_cast<std::size_t>(a.one()))) return false;
  for (int x = 0; x < a.size(); ++x)
    for (int y = 0; y < a.size(); ++y)
      if (s.test(static_cast<std::size_t>(a.meet(x, y))) && !s.test(static_cast<std::size_t>(x)) &&
          !s.test(static_cast<std::size_t>(y)))
        return false;
  return true;
}

/// All ideals, sorted by member list. In a finite algebra an ideal is the
/// down-set of the sum of its members, so principal down-sets closed under +
/// are all of them.
inline std::vector<ElementSet> ideals(const FinAlgebra& a) {
  std::vector<ElementSet> out;
  for (int x = 0; x < a.size(); ++x) {
    auto d = down_set(a, x);
    if (is_ideal(a, d)) out.push_back(std::move(d));
  }
  std::sort(out.begin(), out.end(), set_less);
  return out;
}

inline void require_nontrivial(const FinAlgebra& b, const char* what) {
  if (b.is_trivial()) throw input_error(std::string(what) + ": the trivial algebra is not allowed");
}

inline std::vector<ElementSet> maximal_ideals(const FinAlgebra& b) {
  require_nontrivial(b, "maximal_ideals");
  std::vector<ElementSet> proper;
  for (auto& i : ideals(b))
    if (!i.test(static_cast<std::size_t>(b.one()))) proper.push_back(i);
  std::vector<ElementSet> out;
  for (const auto& i : proper) {
    bool maximal = true;
    for (const auto& j : proper)
      if (i != j && i.is_subset_of(j)) maximal = false;
    if (maximal) out.push_back(i);
  }
  return out;
}

inline std::vector<ElementSet> prime_ideals(const FinAlgebra& b) {
  require_nontrivial(b, "prime_ideals");
  std::vector<ElementSet> out;
  for (auto& i : ideals(b))
    if (is_prime_ideal(b, i)) out.push_back(i);
  return out;
}

inline ElementSet radical(const FinAlgebra& b) {
  auto ms = maximal_ideals(b);
  ElementSet r = full_set(b);
  for (const auto& m : ms) r &= m;
  return r;
}

inline bool is_semisimple(const FinAlgebra& b) {
  if (b.is_trivial()) return false;
  return radical(b).count() == 1;
}

/// d(x, y) = (x ⊖ y) ⊕ (y ⊖ x), inside an mv algebra.
inline int distance(const FinAlgebra& b, int x, int y) {
  return b.add(b.mul(x, b.neg(y)), b.mul(y, b.neg(x)));
}

struct Quotient {
  FinAlgebra algebra;   // tables, mv signature
  Morphism projection;  // b -> quotient
};

/// b / ~_I with x ~ y iff d(x, y) ∈ I. Class i is named after its least
/// member.
inline Quotient quotient(const FinAlgebra& b, const ElementSet& ideal) {
  if (!b.has_neg()) throw input_error("quotient: needs an mv algebra");
  if (!is_ideal(b, ideal)) throw input_error("quotient: not an ideal: " + set_str(b, ideal));
  const int n = b.size();
  std::vector<int> cls(static_cast<std::size_t>(n), -1);
  std::vector<int> reps;
  for (int x = 0; x < n; ++x) {
    if (cls[static_cast<std::size_t>(x)] != -1) continue;
    const int id = static_cast<int>(reps.size());
    reps.push_back(x);
    for (int y = x; y < n; ++y)
      if (ideal.test(static_cast<std::size_t>(distance(b, x, y)))) {
        if (cls[static_cast<std::size_t>(y)] != -1) throw invariant_error("quotient: ~_I is not transitive");
        cls[static_cast<std::size_t>(y)] = id;
      }
  }
  const int k = static_cast<int>(reps.size());
  auto c = [&](int x) { return cls[static_cast<std::size_t>(x)]; };
  std::vector<std::vector<int>> add(static_cast<std::size_t>(k), std::vector<int>(static_cast<std::size_t>(k)));
  std::vector<int> neg(static_cast<std::size_t>(k));
  for (int x = 0; x < n; ++x) {
    if (c(b.neg(x)) != c(b.neg(reps[static_cast<std::size_t>(c(x))])))
      throw invariant_error("quotient: negation is not compatible with ~_I");
    for (int y = 0; y < n; ++y) {
      const int via_reps = c(b.add(reps[static_cast<std::size_t>(c(x))], reps[static_cast<std::size_t>(c(y))]));
      if (c(b.add(x, y)) != via_reps) throw invariant_error("quotient: addition is not compatible with ~_I");
    }
  }
  std::vector<std::string> names;
  for (int i = 0; i < k; ++i) {
    const int r = reps[static_cast<std::size_t>(i)];
    names.push_back("[" + b.name(r) + "]");
    neg[static_cast<std::size_t>(i)] = c(b.neg(r));
    for (int j = 0; j < k; ++j)
      add[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = c(b.add(r, reps[static_cast<std::size_t>(j)]));
  }
  Quotient q{FinAlgebra::from_tables(Signature::mv, std::move(names), c(b.zero()), c(b.one()), std::move(add), {}, {},
                                     {}, std::move(neg)),
             std::move(cls)};
  return q;
}

inline bool is_chain(const FinAlgebra& a) {
  for (int x = 0; x < a.size(); ++x)
    for (int y = 0; y < a.size(); ++y)
      if (!a.leq(x, y) && !a.leq(y, x)) return false;
  return true;
}

/// a ↦ â with â(M) = ι_M(a/M); ι_M sends the class of rank r in the chain
/// b/M ≅ Ł_m to r/m.
struct Belluce {
  std::vector<ElementSet> max;                 // Max b, sorted
  std::vector<std::vector<UnitRational>> hat;  // hat[a][i] = â(M_i)
};

inline Belluce belluce_embedding(const FinAlgebra& b) {
  if (!is_semisimple(b)) throw input_error("belluce_embedding: algebra is not semisimple");
  Belluce out;
  out.max = maximal_ideals(b);
  out.hat.assign(static_cast<std::size_t>(b.size()), std::vector<UnitRational>(out.max.size()));
  for (std::size_t i = 0; i < out.max.size(); ++i) {
    auto q = quotient(b, out.max[i]);
    const auto& c = q.algebra;
    if (!is_chain(c)) throw invariant_error("belluce_embedding: quotient by a maximal ideal is not a chain");
    const int m = c.size() - 1;
    std::vector<UnitRational> iota(static_cast<std::size_t>(c.size()));
    for (int x = 0; x < c.size(); ++x) {
      int rank = 0;
      for (int y = 0; y < c.size(); ++y)
        if (y != x && c.leq(y, x)) ++rank;
      iota[static_cast<std::size_t>(x)] = UnitRational(rank, m);
    }
    if (!is_hom(c, iota, Signature::mv))
      throw invariant_error("belluce_embedding: rank map of a simple quotient is not an embedding");
    for (int a = 0; a < b.size(); ++a)
      out.hat[static_cast<std::size_t>(a)][i] = iota[static_cast<std::size_t>(q.projection[static_cast<std::size_t>(a)])];
  }
  for (int x = 0; x < b.size(); ++x)
    for (int y = x + 1; y < b.size(); ++y)
      if (out.hat[static_cast<std::size_t>(x)] == out.hat[static_cast<std::size_t>(y)])
        throw invariant_error("belluce_embedding: map is not injective");
  return out;
}

inline ElementSet zero_set(const FinAlgebra& a, const Hom& f) {
  ElementSet s(static_cast<std::size_t>(a.size()));
  for (int x = 0; x < a.size(); ++x)
    if (f.values[static_cast<std::size_t>(x)].is_zero()) s.set(static_cast<std::size_t>(x));
  return s;
}

/// Pairs hom i with maximal ideal pairing[i] = f_i⁻¹[0]. Checks totality,
/// injectivity and surjectivity, and that f(a) = ι_{f⁻¹[0]}(a / f⁻¹[0]).
inline std::vector<int> hom_ideal_bijection(const FinAlgebra& b, const std::vector<Hom>& homs, const Belluce& bell) {
  std::vector<int> pairing;
  std::vector<bool> hit(bell.max.size(), false);
  for (const auto& f : homs) {
    auto k = zero_set(b, f);
    auto it = std::find(bell.max.begin(), bell.max.end(), k);
    if (it == bell.max.end()) throw invariant_error("hom_ideal_bijection: a kernel is not a maximal ideal");
    const auto i = static_cast<std::size_t>(it - bell.max.begin());
    if (hit[i]) throw invariant_error("hom_ideal_bijection: two homs share a kernel");
    hit[i] = true;
    pairing.push_back(static_cast<int>(i));
    for (int a = 0; a < b.size(); ++a)
      if (bell.hat[static_cast<std::size_t>(a)][i] != f.values[static_cast<std::size_t>(a)])
        throw invariant_error("hom_ideal_bijection: f(a) differs from the canonical embedding of a/M");
  }
  if (std::find(hit.begin(), hit.end(), false) != hit.end())
    throw invariant_error("hom_ideal_bijection: some maximal ideal is not a kernel");
  return pairing;
}

inline std::vector<int> hom_ideal_bijection(const FinAlgebra& b) {
  return hom_ideal_bijection(b, enumerate_homs(b).homs, belluce_embedding(b));
}

/// Max≤A = {M ∩ A : M ∈ Max B} in the order of Max B, with inclusion.
struct MaxLe {
  std::vector<ElementSet> traces;       // over the carrier of a
  std::vector<std::vector<bool>> incl;  // incl[i][j]: traces[i] ⊆ traces[j]
};

inline MaxLe max_le(const Subreduct& s) {
  MaxLe out;
  for (const auto& m : maximal_ideals(s.b)) {
    ElementSet t(static_cast<std::size_t>(s.a.size()));
    for (int i = 0; i < s.a.size(); ++i)
      if (m.test(static_cast<std::size_t>(s.embedding[static_cast<std::size_t>(i)]))) t.set(static_cast<std::size_t>(i));
    if (!is_prime_ideal(s.a, t)) throw invariant_error("max_le: a trace is not a prime ideal of the subreduct");
    out.traces.push_back(std::move(t));
  }
  const auto k = out.traces.size();
  out.incl.assign(k, std::vector<bool>(k, false));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) out.incl[i][j] = out.traces[i].is_subset_of(out.traces[j]);
  return out;
}

// ---------------------------------------------------------------------------
// Cuts

inline ElementSet lower_bounds(const FinAlgebra& a, const ElementSet& x) {
  ElementSet r = full_set(a);
  for (int m : members(x)) r &= down_set(a, m);
  return r;
}

inline ElementSet upper_bounds(const FinAlgebra& a, const ElementSet& x) {
  ElementSet r = full_set(a);
  for (int m : members(x)) r &= up_set(a, m);
  return r;
}

inline bool is_cut(const FinAlgebra& a, const ElementSet& x) { return lower_bounds(a, upper_bounds(a, x)) == x; }

/// Every cut, found as the closed sets of X ↦ luX by breadth-first search.
inline std::vector<ElementSet> enumerate_cuts(const FinAlgebra& a, int max_carrier = 64) {
  if (a.size() > max_carrier)
    throw size_guard_error("enumerate_cuts: carrier has " + std::to_string(a.size()) + " elements, limit is " +
                           std::to_string(max_carrier));
  std::vector<ElementSet> ups, downs;
  for (int x = 0; x < a.size(); ++x) {
    ups.push_back(up_set(a, x));
    downs.push_back(down_set(a, x));
  }
  auto lu = [&](const ElementSet& s) {
    ElementSet u = full_set(a);
    for (auto i = s.find_first(); i != ElementSet::npos; i = s.find_next(i)) u &= ups[i];
    ElementSet l = full_set(a);
    for (auto i = u.find_first(); i != ElementSet::npos; i = u.find_next(i)) l &= downs[i];
    return l;
  };
  std::vector<ElementSet> found{lu(ElementSet(static_cast<std::size_t>(a.size())))};
  std::set<std::vector<int>> seen{members(found.front())};
  for (std::size_t k = 0; k < found.size(); ++k) {
    for (int e = 0; e < a.size(); ++e) {
      if (found[k].test(static_cast<std::size_t>(e))) continue;
      ElementSet next = found[k];
      next.set(static_cast<std::size_t>(e));
      next = lu(next);
      if (seen.insert(members(next)).second) found.push_back(next);
    }
  }
  std::sort(found.begin(), found.end(), set_less);
  return found;
}

using Fuzzy = std::vector<UnitRational>;

inline Fuzzy pointwise_inf(const std::vector<Fuzzy>& fs, std::size_t width) {
  Fuzzy r(width, UnitRational::one());
  for (const auto& f : fs)
    for (std::size_t i = 0; i < width; ++i) r[i] = meet(r[i], f[i]);
  return r;
}

inline Fuzzy pointwise_sup(const std::vector<Fuzzy>& fs, std::size_t width) {
  Fuzzy r(width, UnitRational::zero());
  for (const auto& f : fs)
    for (std::size_t i = 0; i < width; ++i) r[i] = join(r[i], f[i]);
  return r;
}

/// d(X̂, ûX) = ⋀{d(â, b̂) : a ∈ X, b ∈ uX}, cross-checked against the
/// equivalent ⋀{b̂ ⊖ â}.
inline Fuzzy cut_distance(const FinAlgebra& a, const Belluce& bell, const ElementSet& x) {
  const auto width = bell.max.size();
  std::vector<Fuzzy> ds, subs;
  const auto ux = upper_bounds(a, x);
  for (int p : members(x))
    for (int q : members(ux)) {
      const auto& hp = bell.hat[static_cast<std::size_t>(p)];
      const auto& hq = bell.hat[static_cast<std::size_t>(q)];
      Fuzzy d(width), s(width);
      for (std::size_t i = 0; i < width; ++i) {
        d[i] = dist(hp[i], hq[i]);
        s[i] = mv_sub(hq[i], hp[i]);
      }
      ds.push_back(std::move(d));
      subs.push_back(std::move(s));
    }
  auto r = pointwise_inf(ds, width);
  if (r != pointwise_inf(subs, width)) throw invariant_error("cut_distance: the two forms of the distance disagree");
  return r;
}

inline bool is_limit_cut(const FinAlgebra& a, const Belluce& bell, const ElementSet& x) {
  for (const auto& v : cut_distance(a, bell, x))
    if (!v.is_zero()) return false;
  return true;
}

inline Fuzzy hat_sup(const Belluce& bell, const ElementSet& x) {
  std::vector<Fuzzy> fs;
  for (int p : members(x)) fs.push_back(bell.hat[static_cast<std::size_t>(p)]);
  return pointwise_sup(fs, bell.max.size());
}

/// The second characterization: some cut Y has ⋁X̂ = ⋀Ŷ*. Returns Y.
inline std::optional<ElementSet> dual_cut_witness(const Belluce& bell, const ElementSet& x,
                                                  const std::vector<ElementSet>& cuts) {
  const auto sup = hat_sup(bell, x);
  for (const auto& y : cuts) {
    std::vector<Fuzzy> negs;
    for (int p : members(y)) {
      Fuzzy f = bell.hat[static_cast<std::size_t>(p)];
      for (auto& v : f) v = mv_neg(v);
      negs.push_back(std::move(f));
    }
    if (pointwise_inf(negs, bell.max.size()) == sup) return y;
  }
  return std::nullopt;
}

/// Least element of uX, if any.
inline std::optional<int> supremum(const FinAlgebra& a, const ElementSet& x) {
  const auto ux = upper_bounds(a, x);
  for (int c : members(ux)) {
    bool least = true;
    for (int d : members(ux))
      if (!a.leq(c, d)) {
        least = false;
        break;
      }
    if (least) return c;
  }
  return std::nullopt;
}

struct CutCheck {
  ElementSet cut;
  bool limit = false;         // distance path
  bool dual_witness = false;  // characterization path
  std::optional<int> sup;     // supremum in the carrier
  bool sup_in_image = false;  // ⋁X̂ ∈ Â
};

struct LccReport {
  bool lcc = true;
  bool paths_agree = true;
  std::vector<CutCheck> cuts;
};

inline LccReport is_lcc(const FinAlgebra& b, int max_carrier = 64) {
  if (!is_semisimple(b)) throw input_error("is_lcc: algebra is not semisimple");
  const auto bell = belluce_embedding(b);
  const auto cuts = enumerate_cuts(b, max_carrier);
  LccReport r;
  for (const auto& x : cuts) {
    CutCheck c;
    c.cut = x;
    c.limit = is_limit_cut(b, bell, x);
    c.dual_witness = dual_cut_witness(bell, x, cuts).has_value();
    c.sup = supremum(b, x);
    const auto s = hat_sup(bell, x);
    c.sup_in_image = std::find(bell.hat.begin(), bell.hat.end(), s) != bell.hat.end();
    if (c.limit != c.dual_witness) r.paths_agree = false;
    if (c.limit && (!c.sup || !c.sup_in_image)) r.lcc = false;
    r.cuts.push_back(std::move(c));
  }
  return r;
}

}  // namespace mvlat
