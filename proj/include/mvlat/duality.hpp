#pragma once

// The functors Υ (MV-lattice ↦ ordered dual space) and Clop↑ (ordered space
// ↦ increasing clopens), their actions on morphisms, the unit and counit,
// duality verdicts, and the comparison with the maximal spectrum.

#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "mvlat/mvtop.hpp"

namespace mvlat {

struct DualSpace {
  MVSpace space;             // points f0, f1, ... in canonical hom order
  std::vector<Hom> homs;     // H_A
  std::vector<Fuzzy> tilde;  // tilde[a] = ã, ã(f) = f(a)
  FinAlgebra b;              // ⟨Ã⟩ as tuples over the points, mv signature
  std::vector<int> tilde_in_b;
  bool possibly_incomplete = false;  // hom search may have missed homs
  bool diagonal = true;              // ⋂ ker f = Δ, so a ↦ ã is injective

  std::vector<Fuzzy> large_subbase() const {
    std::vector<Fuzzy> s = tilde;
    for (const auto& t : tilde) s.push_back(fuzzy_neg(t));
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
  }
};

namespace detail {

inline int denominator_of(const UnitRational& v) { return static_cast<int>(v.denominator()); }

inline std::vector<int> coordinate_chains(const std::vector<Fuzzy>& rows, std::size_t k) {
  std::vector<int> chains(k, 1);
  for (const auto& r : rows)
    for (std::size_t i = 0; i < k; ++i) chains[i] = std::lcm(chains[i], denominator_of(r[i]));
  return chains;
}

inline std::int64_t grid_of(const std::vector<int>& chains) { return lcm_of(chains); }

}  // namespace detail

/// Υ(a) = (H_a, τ_a, ≤). τ_a has base B = ⟨Ã⟩; B is closed under ∨, so it is
/// the topology itself. Cross-checked against the topology generated by the
/// large subbase Ã ∪ Ã*.
inline DualSpace upsilon(const FinAlgebra& a, std::optional<std::int64_t> bound = std::nullopt,
                         std::size_t max_opens = 4096) {
  auto hs = enumerate_homs(a, bound);
  const auto k = hs.homs.size();
  std::vector<Fuzzy> tilde(static_cast<std::size_t>(a.size()), Fuzzy(k));
  for (std::size_t i = 0; i < k; ++i)
    for (int x = 0; x < a.size(); ++x) tilde[static_cast<std::size_t>(x)][i] = hs.homs[i].values[static_cast<std::size_t>(x)];
  const auto chains = detail::coordinate_chains(tilde, k);
  auto gen = generate_tuples(chains, tilde, Signature::mv);
  if (static_cast<std::size_t>(gen.algebra.size()) > max_opens)
    throw size_guard_error("upsilon: ⟨Ã⟩ has " + std::to_string(gen.algebra.size()) + " elements, limit is " +
                           std::to_string(max_opens));
  const auto grid = detail::grid_of(chains);
  Relation order = pointwise_order(hs.homs);
  MVSpace sp{default_point_names(k), grid, gen.algebra.elements(), order};

  DualSpace d{std::move(sp), hs.homs, tilde, std::move(gen.algebra), {}, hs.possibly_incomplete,
              kernel_intersection_is_diagonal(a, hs.homs)};
  for (const auto& t : d.tilde) d.tilde_in_b.push_back(d.b.index_of(t));

  if (!check_topology_axioms(d.space).ok()) throw invariant_error("upsilon: ⟨Ã⟩ is not an MV-topology");
  auto via_subbase = generate_topology(d.space.points, d.large_subbase(), GenMode::subbase, grid, order, max_opens);
  if (via_subbase.opens != d.space.opens)
    throw invariant_error("upsilon: the subbase Ã ∪ Ã* generates a different topology");
  if (k > 0 && !d.b.is_trivial() && maximal_ideals(d.b).size() != k)
    throw invariant_error("upsilon: |Max ⟨Ã⟩| differs from |H_A|");
  return d;
}

/// Clop↑X as a tuple MV-lattice over Ł_grid^points.
inline FinAlgebra clop_up(const MVSpace& x) {
  auto up = increasing_clopens(x);
  std::vector<int> chains(x.size(), static_cast<int>(x.grid));
  return FinAlgebra::subset(chains, std::move(up), Signature::mvlat);
}

/// Υq : H_c → H_a, h ↦ h ∘ q, for an MV-lattice morphism q : a → c.
inline PointMap upsilon_on_morphism(const FinAlgebra& a, const FinAlgebra& c, const Morphism& q,
                                    const std::vector<Hom>& homs_a, const std::vector<Hom>& homs_c) {
  if (!is_morphism(a, c, q, Signature::mvlat)) throw input_error("upsilon_on_morphism: q is not an MV-lattice morphism");
  PointMap out;
  for (const auto& h : homs_c) {
    Hom hq;
    for (int e : q) hq.values.push_back(h.values[static_cast<std::size_t>(e)]);
    auto it = std::find(homs_a.begin(), homs_a.end(), hq);
    if (it == homs_a.end()) throw invariant_error("upsilon_on_morphism: h ∘ q is not among the homs of the source");
    out.push_back(static_cast<int>(it - homs_a.begin()));
  }
  return out;
}

inline PointMap upsilon_on_morphism(const DualSpace& da, const DualSpace& dc, const FinAlgebra& a, const FinAlgebra& c,
                                    const Morphism& q) {
  return upsilon_on_morphism(a, c, q, da.homs, dc.homs);
}

/// Clop↑f : Clop↑Y → Clop↑X, β ↦ β ∘ f, as an index map between clop_up(y)
/// and clop_up(x).
inline Morphism clop_up_on_morphism(const PointMap& f, const MVSpace& x, const MVSpace& y, const FinAlgebra& cy,
                                    const FinAlgebra& cx) {
  check_map(f, x.size(), y.size());
  Morphism m;
  for (const auto& beta : cy.elements()) {
    auto pre = preimage(f, beta);
    auto idx = cx.find(pre);
    if (!idx) throw input_error("clop_up_on_morphism: a preimage is not an increasing clopen of the source");
    m.push_back(*idx);
  }
  return m;
}

/// ε_a : a → Clop↑Υa, a ↦ ã
inline Morphism counit(const FinAlgebra& a, const DualSpace& d, const FinAlgebra& clop) {
  Morphism m;
  for (const auto& t : d.tilde) {
    auto idx = clop.find(t);
    if (!idx) throw invariant_error("counit: ã is not an increasing clopen");
    m.push_back(*idx);
  }
  if (!is_morphism(a, clop, m, Signature::mvlat)) throw invariant_error("counit: ε is not an MV-lattice morphism");
  return m;
}

/// η_X : X → ΥClop↑X, x ↦ f_x with f_x(α) = α(x)
inline PointMap unit(const MVSpace& x, const FinAlgebra& clop, const DualSpace& dual) {
  PointMap out;
  for (std::size_t p = 0; p < x.size(); ++p) {
    Hom fx;
    for (const auto& alpha : clop.elements()) fx.values.push_back(alpha[p]);
    auto it = std::find(dual.homs.begin(), dual.homs.end(), fx);
    if (it == dual.homs.end()) throw invariant_error("unit: evaluation at a point is not among the homs");
    out.push_back(static_cast<int>(it - dual.homs.begin()));
  }
  return out;
}

inline bool is_identity(const std::vector<int>& m) {
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i] != static_cast<int>(i)) return false;
  return true;
}

inline std::vector<int> compose(const std::vector<int>& g, const std::vector<int>& f) {
  std::vector<int> out;
  for (int v : f) out.push_back(g[static_cast<std::size_t>(v)]);
  return out;
}

struct TriangleReport {
  bool space_side = false;    // (Clop↑η_X) ∘ ε_{Clop↑X} = id
  bool algebra_side = false;  // (Υε_A) ∘ η_{ΥA} = id
};

/// First triangle for a space x.
inline bool triangle_space(const MVSpace& x) {
  auto c = clop_up(x);
  auto dc = upsilon(c);
  auto cc = clop_up(dc.space);
  auto eps = counit(c, dc, cc);           // Clop↑X → Clop↑ΥClop↑X
  auto eta = unit(x, c, dc);              // X → ΥClop↑X
  auto clop_eta = clop_up_on_morphism(eta, x, dc.space, cc, c);  // Clop↑ΥClop↑X → Clop↑X
  return is_identity(compose(clop_eta, eps));
}

/// Second triangle for an algebra a.
inline bool triangle_algebra(const FinAlgebra& a) {
  auto d = upsilon(a);
  auto c = clop_up(d.space);
  auto dc = upsilon(c);
  auto eps = counit(a, d, c);                              // A → Clop↑ΥA
  auto eta = unit(d.space, c, dc);                         // ΥA → ΥClop↑ΥA
  auto ups_eps = upsilon_on_morphism(a, c, eps, d.homs, dc.homs);  // ΥClop↑ΥA → ΥA
  return is_identity(compose(ups_eps, eta));
}

// ---------------------------------------------------------------------------
// Verdicts

struct DualityVerdict {
  bool lcc = false;
  bool h_complete = false;
  bool counit_iso = false;
  bool unit_order_homeo = false;
  bool triangles = false;
  bool priestley = false;
  bool lcc_vacuous = false;  // space side: finite, so lcc always holds
  std::vector<std::string> failed;
  // certificates
  std::optional<Morphism> counit_map, counit_inverse;
  std::optional<PointMap> unit_map;
  std::optional<std::vector<Tuple>> enlargement;  // strictly larger compatible subreduct
  bool ok() const { return failed.empty(); }
};

inline std::vector<int> invert(const std::vector<int>& m) {
  std::vector<int> inv(m.size(), -1);
  for (std::size_t i = 0; i < m.size(); ++i) inv[static_cast<std::size_t>(m[i])] = static_cast<int>(i);
  return inv;
}

namespace detail {

inline void finish(DualityVerdict& v, bool space_side) {
  auto need = [&](bool ok, const char* name) {
    if (!ok) v.failed.emplace_back(name);
  };
  need(v.lcc, "lcc");
  need(v.h_complete, "h_complete");
  if (space_side) need(v.priestley, "priestley");
  if (!space_side) need(v.counit_iso, "counit_iso");
  need(v.unit_order_homeo, "unit_order_homeo");
  need(v.triangles, "triangles");
}

inline Subreduct tilde_subreduct(const DualSpace& d) {
  return make_subreduct(FinAlgebra::subset(d.b.chains(), d.tilde, Signature::mvlat));
}

}  // namespace detail

/// Algebra side: ⟨Ã⟩ is lcc, Ã is H-complete in ⟨Ã⟩, ε_a is an isomorphism
/// onto Clop↑Υa, η on Υa is an order homeomorphism, and both triangles hold.
inline DualityVerdict check_duality(const FinAlgebra& a, int max_carrier = 64) {
  if (a.signature() != Signature::mvlat) throw input_error("check_duality: needs an MV-lattice");
  DualityVerdict v;
  auto d = upsilon(a);
  if (!d.diagonal) throw input_error("check_duality: the homs do not separate points (⋂ ker f ≠ Δ)");
  if (d.b.size() > max_carrier)
    throw size_guard_error("check_duality: ⟨Ã⟩ has " + std::to_string(d.b.size()) + " elements, limit is " +
                           std::to_string(max_carrier));
  v.lcc = is_lcc(d.b, max_carrier).lcc;

  auto s = detail::tilde_subreduct(d);
  auto h = is_h_complete(s, max_carrier);
  v.h_complete = h.complete;
  if (h.certificate) {
    v.enlargement.emplace();
    for (int e : *h.certificate) v.enlargement->push_back(s.b.element(e));
  }

  auto c = clop_up(d.space);
  auto eps = counit(a, d, c);
  v.counit_map = eps;
  v.counit_iso = is_bijective(eps, c.size()) && is_morphism(c, a, invert(eps), Signature::mvlat);
  if (v.counit_iso) v.counit_inverse = invert(eps);

  auto dc = upsilon(c);
  auto eta = unit(d.space, c, dc);
  v.unit_map = eta;
  v.unit_order_homeo = is_order_homeomorphism(eta, d.space, dc.space);

  v.triangles = triangle_algebra(a) && triangle_space(d.space);
  v.priestley = separation_axioms(d.space).priestley.value_or(false);
  detail::finish(v, false);
  return v;
}

/// Space side: x is Priestley, Clop↑x is lcc (always, being finite) and
/// H-complete, and η_x is an order homeomorphism.
inline DualityVerdict check_duality_space(const MVSpace& x, int max_carrier = 64) {
  x.require_order("check_duality_space");
  DualityVerdict v;
  v.lcc_vacuous = true;
  v.priestley = separation_axioms(x).priestley.value_or(false);
  auto c = clop_up(x);
  auto s = make_subreduct(c);
  if (s.b.size() > max_carrier)
    throw size_guard_error("check_duality_space: ⟨Clop↑X⟩ has " + std::to_string(s.b.size()) +
                           " elements, limit is " + std::to_string(max_carrier));
  v.lcc = s.b.is_trivial() || is_lcc(s.b, max_carrier).lcc;
  auto h = is_h_complete(s, max_carrier);
  v.h_complete = h.complete;
  if (h.certificate) {
    v.enlargement.emplace();
    for (int e : *h.certificate) v.enlargement->push_back(s.b.element(e));
  }
  auto dc = upsilon(c);
  auto eta = unit(x, c, dc);
  v.unit_map = eta;
  v.unit_order_homeo = is_order_homeomorphism(eta, x, dc.space);
  v.triangles = triangle_space(x);
  detail::finish(v, true);
  return v;
}

// ---------------------------------------------------------------------------
// Comparison with the maximal spectrum

struct StoneReport {
  PointMap f;  // hom i ↦ index of f̄_i⁻¹[0] in Max b
  bool bijective = false;
  bool continuous = false;
  bool open = false;
  bool homeomorphism = false;
  bool preimage_formula = false;  // F←(b̂) = b̃ for every b
  bool trivial_order = false;
  bool clop_up_is_clop = false;
  MVSpace max_space;  // (Max b, Ω_b)
  bool ok() const {
    return bijective && continuous && open && homeomorphism && preimage_formula && trivial_order && clop_up_is_clop;
  }
};

inline StoneReport stone_compare(const FinAlgebra& b) {
  if (!b.has_neg()) throw input_error("stone_compare: needs an MV-algebra");
  if (!is_semisimple(b)) throw input_error("stone_compare: algebra is not semisimple");
  StoneReport r;
  auto d = upsilon(b.as_mvlat());
  auto bell = belluce_embedding(b);
  std::vector<int> chains;
  for (std::size_t i = 0; i < bell.max.size(); ++i) {
    int l = 1;
    for (const auto& h : bell.hat) l = std::lcm(l, detail::denominator_of(h[i]));
    chains.push_back(l);
  }
  std::vector<std::string> names;
  for (std::size_t i = 0; i < bell.max.size(); ++i) names.push_back("M" + std::to_string(i));
  r.max_space = generate_topology(names, bell.hat, GenMode::base, lcm_of(chains));

  for (const auto& f : d.homs) {
    auto z = zero_set(b, f);
    auto it = std::find(bell.max.begin(), bell.max.end(), z);
    if (it == bell.max.end()) throw invariant_error("stone_compare: a zero set is not a maximal ideal");
    r.f.push_back(static_cast<int>(it - bell.max.begin()));
  }
  r.bijective = inverse_map(r.f, bell.max.size()).has_value();
  r.continuous = is_continuous(r.f, d.space, r.max_space);
  r.open = is_open_map(r.f, d.space, r.max_space);
  r.homeomorphism = is_homeomorphism(r.f, d.space, r.max_space);
  r.preimage_formula = true;
  for (int x = 0; x < b.size(); ++x)
    if (preimage(r.f, bell.hat[static_cast<std::size_t>(x)]) != d.tilde[static_cast<std::size_t>(x)])
      r.preimage_formula = false;
  r.trivial_order = strict_pairs(*d.space.order).empty();
  r.clop_up_is_clop = increasing_clopens(d.space) == clopens(d.space);
  return r;
}

}  // namespace mvlat
