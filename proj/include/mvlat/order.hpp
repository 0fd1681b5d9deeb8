#pragma once

// The ordered hom-set H_A, the compatibility relation on Hom(B,[0,1])
// induced by a generating subreduct, H-completeness, and the transfer
// between the hom order and inclusion of zero sets.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mvlat/ideal.hpp"
#include "mvlat/term.hpp"

namespace mvlat {

using Relation = std::vector<std::vector<bool>>;  // r[i][j]: i ≤ j

inline bool pointwise_leq(const Hom& f, const Hom& g) {
  for (std::size_t k = 0; k < f.values.size(); ++k)
    if (!(f.values[k] <= g.values[k])) return false;
  return true;
}

inline bool is_partial_order(const Relation& r) {
  const auto n = r.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!r[i][i]) return false;
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && r[i][j] && r[j][i]) return false;
      for (std::size_t k = 0; k < n; ++k)
        if (r[i][j] && r[j][k] && !r[i][k]) return false;
    }
  }
  return true;
}

/// Covering pairs (lower, upper) of a partial order.
inline std::vector<std::pair<int, int>> hasse_edges(const Relation& r) {
  std::vector<std::pair<int, int>> out;
  const int n = static_cast<int>(r.size());
  auto lt = [&](int i, int j) { return i != j && r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!lt(i, j)) continue;
      bool cover = true;
      for (int k = 0; k < n && cover; ++k)
        if (lt(i, k) && lt(k, j)) cover = false;
      if (cover) out.emplace_back(i, j);
    }
  return out;
}

/// Strict pairs (i, j) with i < j in the order.
inline std::set<std::pair<int, int>> strict_pairs(const Relation& r) {
  std::set<std::pair<int, int>> out;
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < r.size(); ++j)
      if (i != j && r[i][j]) out.emplace(static_cast<int>(i), static_cast<int>(j));
  return out;
}

struct HomPoset {
  HomSet homs;
  Relation leq;
};

inline Relation pointwise_order(const std::vector<Hom>& homs) {
  Relation r(homs.size(), std::vector<bool>(homs.size(), false));
  for (std::size_t i = 0; i < homs.size(); ++i)
    for (std::size_t j = 0; j < homs.size(); ++j) r[i][j] = pointwise_leq(homs[i], homs[j]);
  return r;
}

inline HomPoset hom_poset(const FinAlgebra& a, std::optional<std::int64_t> bound = std::nullopt) {
  HomPoset p{enumerate_homs(a, bound), {}};
  p.leq = pointwise_order(p.homs.homs);
  if (!is_partial_order(p.leq)) throw invariant_error("hom_poset: pointwise order is not a partial order");
  return p;
}

// ---------------------------------------------------------------------------
// Compatibility

/// ≼_A over the canonical homs of b: g_i ≼ g_j iff g_i|_A ≤ g_j|_A.
struct CompatRelation {
  std::vector<Hom> b_homs;
  Relation rel;
};

inline CompatRelation compat_relation(const Subreduct& s) {
  CompatRelation c{enumerate_homs(s.b).homs, {}};
  std::vector<Hom> restricted;
  for (const auto& g : c.b_homs) restricted.push_back(restrict_hom(s, g));
  c.rel = pointwise_order(restricted);

  // Cross-check through H_A: extension is a bijection H_A → Hom(b,[0,1]).
  auto ha = enumerate_homs(s.a).homs;
  if (ha.size() != c.b_homs.size())
    throw invariant_error("compat_relation: |H_A| = " + std::to_string(ha.size()) + " but |Hom(B,[0,1])| = " +
                          std::to_string(c.b_homs.size()));
  std::vector<int> to_b;
  for (const auto& f : ha) {
    auto it = std::find(c.b_homs.begin(), c.b_homs.end(), extend_hom(s, f));
    if (it == c.b_homs.end()) throw invariant_error("compat_relation: an extension is not among the homs of B");
    to_b.push_back(static_cast<int>(it - c.b_homs.begin()));
  }
  for (std::size_t i = 0; i < ha.size(); ++i)
    for (std::size_t j = 0; j < ha.size(); ++j)
      if (pointwise_leq(ha[i], ha[j]) !=
          c.rel[static_cast<std::size_t>(to_b[i])][static_cast<std::size_t>(to_b[j])])
        throw invariant_error("compat_relation: extension and restriction disagree on the order");
  if (!is_partial_order(c.rel)) throw invariant_error("compat_relation: relation is not a partial order");
  return c;
}

inline bool same_ambient(const FinAlgebra& x, const FinAlgebra& y) {
  return x.chains() == y.chains() && x.elements() == y.elements();
}

inline bool are_compatible(const Subreduct& s, const Subreduct& t) {
  if (!same_ambient(s.b, t.b)) throw input_error("are_compatible: the subreducts generate different algebras");
  return compat_relation(s).rel == compat_relation(t).rel;
}

// ---------------------------------------------------------------------------
// Order versus zero sets

struct KernelPair {
  int i = 0, j = 0;
  bool leq = false;         // f_i ≤ f_j
  bool kernel_sub = false;  // f_j⁻¹[0] ⊆ f_i⁻¹[0]
  // when f_i ≰ f_j: a with f_i(a) > f_j(a), the separator t and c = t(a)
  // with f_j(c) = 0 and f_i(c) = 1, so c ∈ f_j⁻¹[0] \ f_i⁻¹[0]
  std::optional<int> witness_arg;
  std::optional<Term> separator;
  std::optional<int> witness;
};

struct KernelReport {
  bool ok = true;
  std::vector<KernelPair> pairs;
};

inline KernelReport order_vs_kernels(const FinAlgebra& a, const std::vector<Hom>& homs) {
  KernelReport r;
  std::vector<ElementSet> zs;
  for (const auto& f : homs) zs.push_back(zero_set(a, f));
  for (std::size_t i = 0; i < homs.size(); ++i)
    for (std::size_t j = 0; j < homs.size(); ++j) {
      if (i == j) continue;
      KernelPair p;
      p.i = static_cast<int>(i);
      p.j = static_cast<int>(j);
      p.leq = pointwise_leq(homs[i], homs[j]);
      p.kernel_sub = zs[j].is_subset_of(zs[i]);
      if (!p.leq) {
        for (int x = 0; x < a.size(); ++x) {
          const auto& fi = homs[i].values[static_cast<std::size_t>(x)];
          const auto& fj = homs[j].values[static_cast<std::size_t>(x)];
          if (fj < fi) {
            auto t = synthesize_separator(fj, fi);
            const int c = eval_in(a, t, {x});
            p.witness_arg = x;
            p.separator = t;
            p.witness = c;
            if (!homs[j].values[static_cast<std::size_t>(c)].is_zero() ||
                !homs[i].values[static_cast<std::size_t>(c)].is_one())
              throw invariant_error("order_vs_kernels: separator does not separate");
            break;
          }
        }
      }
      if (p.leq != p.kernel_sub) r.ok = false;
      r.pairs.push_back(std::move(p));
    }
  return r;
}

inline KernelReport order_vs_kernels(const FinAlgebra& a) { return order_vs_kernels(a, enumerate_homs(a).homs); }

// ---------------------------------------------------------------------------
// Poset isomorphism

/// Order isomorphism between two finite posets by backtracking, matching
/// up/down degrees first.
inline std::optional<std::vector<int>> poset_isomorphism(const Relation& p, const Relation& q) {
  const int n = static_cast<int>(p.size());
  if (static_cast<int>(q.size()) != n) return std::nullopt;
  auto degrees = [](const Relation& r, int i) {
    int up = 0, down = 0;
    for (std::size_t j = 0; j < r.size(); ++j) {
      up += r[static_cast<std::size_t>(i)][j];
      down += r[j][static_cast<std::size_t>(i)];
    }
    return std::pair{up, down};
  };
  std::vector<int> map(static_cast<std::size_t>(n), -1);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  std::function<bool(int)> go = [&](int i) {
    if (i == n) return true;
    for (int c = 0; c < n; ++c) {
      if (used[static_cast<std::size_t>(c)] || degrees(p, i) != degrees(q, c)) continue;
      bool ok = true;
      for (int k = 0; k < i && ok; ++k) {
        const auto mk = static_cast<std::size_t>(map[static_cast<std::size_t>(k)]);
        const auto ui = static_cast<std::size_t>(i), uk = static_cast<std::size_t>(k), uc = static_cast<std::size_t>(c);
        ok = p[ui][uk] == q[uc][mk] && p[uk][ui] == q[mk][uc];
      }
      if (!ok) continue;
      map[static_cast<std::size_t>(i)] = c;
      used[static_cast<std::size_t>(c)] = true;
      if (go(i + 1)) return true;
      used[static_cast<std::size_t>(c)] = false;
    }
    map[static_cast<std::size_t>(i)] = -1;
    return false;
  };
  if (!go(0)) return std::nullopt;
  return map;
}

/// Max≤A and Max≤E both indexed by Max B; the canonical map I ∩ A ↦ I ∩ E
/// is an order isomorphism iff the inclusion matrices agree.
inline bool max_le_match(const MaxLe& x, const MaxLe& y) { return x.incl == y.incl; }

// ---------------------------------------------------------------------------
// H-completeness

struct HCompleteness {
  bool complete = true;
  std::optional<std::vector<int>> certificate;  // smallest strictly larger compatible E (b indices)
  std::optional<std::vector<int>> largest;      // largest compatible E
  int compatible_count = 0;                     // compatible E ⊋ A found
  int explored = 0;                             // closures computed
};

inline std::vector<int> carrier_in_b(const Subreduct& s) {
  std::vector<int> c = s.embedding;
  std::sort(c.begin(), c.end());
  return c;
}

inline Subreduct subreduct_of_carrier(const Subreduct& s, const std::vector<int>& carrier) {
  std::vector<Tuple> elems;
  for (int c : carrier) elems.push_back(s.b.element(c));
  return make_subreduct(FinAlgebra::subset(s.b.chains(), std::move(elems), Signature::mvlat));
}

/// Compatibility relation restricted from b's homs to an arbitrary carrier
/// of b; cheap form used during the search.
inline Relation restricted_order(const std::vector<Hom>& b_homs, const std::vector<int>& carrier) {
  std::vector<Hom> r;
  for (const auto& g : b_homs) {
    Hom h;
    for (int c : carrier) h.values.push_back(g.values[static_cast<std::size_t>(c)]);
    r.push_back(std::move(h));
  }
  return pointwise_order(r);
}

/// Every mvlat-closed E with A ⊆ E ⊆ B reachable by adding one element and
/// closing. With `prune`, only compatible E are expanded: A ⊆ E ⊆ E′ gives
/// ≼_E′ ⊆ ≼_E ⊆ ≼_A, so an incompatible E has no compatible superset, and
/// every compatible E is reached through compatible intermediate closures.
inline std::vector<std::vector<int>> closed_supersets(const Subreduct& s, const std::vector<Hom>& b_homs,
                                                      const Relation& base, bool prune, int* explored = nullptr) {
  const auto start = carrier_in_b(s);
  std::vector<std::vector<int>> found{start};
  std::set<std::vector<int>> seen{start};
  for (std::size_t k = 0; k < found.size(); ++k) {
    if (prune && restricted_order(b_homs, found[k]) != base) continue;
    const auto cur = make_set(s.b, found[k]);
    for (int e = 0; e < s.b.size(); ++e) {
      if (cur.test(static_cast<std::size_t>(e))) continue;
      auto seed = found[k];
      seed.push_back(e);
      auto g = generate(s.b, seed, Signature::mvlat);
      if (explored) ++*explored;
      if (seen.insert(g.carrier).second) found.push_back(std::move(g.carrier));
    }
  }
  return found;
}

inline HCompleteness is_h_complete(const Subreduct& s, int max_carrier = 64) {
  if (s.b.size() > max_carrier)
    throw size_guard_error("is_h_complete: generated algebra has " + std::to_string(s.b.size()) +
                           " elements, limit is " + std::to_string(max_carrier));
  HCompleteness h;
  const auto b_homs = enumerate_homs(s.b).homs;
  const auto start = carrier_in_b(s);
  const auto base = restricted_order(b_homs, start);
  if (base != compat_relation(s).rel) throw invariant_error("is_h_complete: restricted order differs from ≼_A");
  for (auto& e : closed_supersets(s, b_homs, base, true, &h.explored)) {
    if (e == start || restricted_order(b_homs, e) != base) continue;
    ++h.compatible_count;
    auto smaller = [](const std::vector<int>& x, const std::vector<int>& y) {
      return x.size() != y.size() ? x.size() < y.size() : x < y;
    };
    if (!h.certificate || smaller(e, *h.certificate)) h.certificate = e;
    if (!h.largest || smaller(*h.largest, e)) h.largest = e;
  }
  h.complete = h.compatible_count == 0;
  return h;
}

}  // namespace mvlat
