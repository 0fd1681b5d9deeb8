#include <gtest/gtest.h>

#include "mvlat/order.hpp"
#include "mvlat/worked_examples.hpp"

using namespace mvlat;

namespace {

UnitRational q(std::int64_t p, std::int64_t d) { return UnitRational(p, d); }

// Which coordinate projection a hom of a tuple algebra is, or -1.
int projection_index(const FinAlgebra& a, const Hom& f) {
  for (std::size_t k = 0; k < a.chains().size(); ++k) {
    bool same = true;
    for (int x = 0; x < a.size() && same; ++x) same = a.element(x)[k] == f.values[static_cast<std::size_t>(x)];
    if (same) return static_cast<int>(k);
  }
  return -1;
}

examples::Edges edges_by_projection(const FinAlgebra& a, const std::vector<Hom>& homs, const Relation& r) {
  examples::Edges out;
  for (auto [i, j] : strict_pairs(r))
    out.insert({projection_index(a, homs[static_cast<std::size_t>(i)]), projection_index(a, homs[static_cast<std::size_t>(j)])});
  return out;
}

// Oracle for ≼_A when B is a full product: compare coordinates over A.
Relation coordinate_order(const FinAlgebra& a) {
  const auto k = a.chains().size();
  Relation r(k, std::vector<bool>(k, true));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (const auto& t : a.elements())
        if (!(t[i] <= t[j])) r[i][j] = false;
  return r;
}

std::vector<FinAlgebra> square_subreducts() {
  auto sq = FinAlgebra::product_of_chains({2, 2});
  std::vector<FinAlgebra> out;
  for (std::uint32_t mask = 0; mask < (1u << 9); ++mask) {
    if (!(mask & 1u) || !(mask & (1u << 8))) continue;
    std::vector<Tuple> elems;
    for (int i = 0; i < 9; ++i)
      if (mask & (1u << i)) elems.push_back(sq.element(i));
    try {
      out.push_back(FinAlgebra::subset({2, 2}, elems, Signature::mvlat));
    } catch (const input_error&) {
    }
  }
  return out;
}

FinAlgebra mirror_square_a() {
  return FinAlgebra::subset({2, 2},
                            {{q(0, 1), q(0, 1)}, {q(1, 2), q(0, 1)}, {q(1, 1), q(0, 1)}, {q(1, 1), q(1, 2)},
                             {q(1, 1), q(1, 1)}},
                            Signature::mvlat);
}

}  // namespace

TEST(Order, HasseEdges) {
  // 0 < 1 < 2 and 0 < 2
  Relation r{{true, true, true}, {false, true, true}, {false, false, true}};
  EXPECT_TRUE(is_partial_order(r));
  EXPECT_EQ(hasse_edges(r), (std::vector<std::pair<int, int>>{{0, 1}, {1, 2}}));
  Relation bad{{true, true}, {true, true}};
  EXPECT_FALSE(is_partial_order(bad));
}

TEST(Order, HomPosetOfSquareA) {
  auto a = examples::square_a();
  auto p = hom_poset(a);
  ASSERT_EQ(p.homs.homs.size(), 2u);
  EXPECT_EQ(edges_by_projection(a, p.homs.homs, p.leq), (examples::Edges{{0, 1}}));
}

TEST(Order, HomPosetOfL223) {
  auto a = examples::l223_a();
  auto pa = hom_poset(a);
  ASSERT_EQ(pa.homs.homs.size(), 3u);
  EXPECT_EQ(edges_by_projection(a, pa.homs.homs, pa.leq), examples::golden_h_a());
  auto c = examples::l223_c();
  auto pc = hom_poset(c);
  EXPECT_EQ(edges_by_projection(c, pc.homs.homs, pc.leq), examples::golden_h_c());
  auto b = examples::l223_b();
  auto pb = hom_poset(b);
  EXPECT_EQ(edges_by_projection(b, pb.homs.homs, pb.leq), examples::golden_h_a());
}

TEST(Order, FullAlgebraHasTrivialOrder) {
  for (const auto& chains : std::vector<std::vector<int>>{{2, 2}, {2, 2, 3}, {1, 4, 2}}) {
    auto e = FinAlgebra::product_of_chains(chains);
    auto p = hom_poset(e);
    EXPECT_TRUE(strict_pairs(p.leq).empty());
    auto s = make_subreduct(e.as_mvlat());
    auto c = compat_relation(s);
    for (std::size_t i = 0; i < c.rel.size(); ++i)
      for (std::size_t j = 0; j < c.rel.size(); ++j) EXPECT_EQ(c.rel[i][j], i == j);
  }
}

TEST(Order, CompatRelationMatchesCoordinateOracle) {
  for (const auto& a : {examples::l223_a(), examples::l223_b(), examples::l223_c(), examples::square_a()}) {
    auto s = make_subreduct(a);
    auto c = compat_relation(s);
    // homs of a full product sort in coordinate order
    for (std::size_t k = 0; k < c.b_homs.size(); ++k) EXPECT_EQ(projection_index(s.b, c.b_homs[k]), static_cast<int>(k));
    EXPECT_EQ(c.rel, coordinate_order(a));
  }
  for (const auto& a : square_subreducts()) {
    auto s = make_subreduct(a);
    if (s.b.size() != 9) continue;
    EXPECT_EQ(compat_relation(s).rel, coordinate_order(a));
  }
}

TEST(Order, CompatibilityOfL223) {
  auto a = make_subreduct(examples::l223_a());
  auto b = make_subreduct(examples::l223_b());
  auto c = make_subreduct(examples::l223_c());
  EXPECT_TRUE(are_compatible(a, b));
  EXPECT_FALSE(are_compatible(a, c));
  EXPECT_FALSE(are_compatible(b, c));
  EXPECT_TRUE(are_compatible(a, a));
  EXPECT_THROW(are_compatible(a, make_subreduct(examples::square_a())), input_error);

  // A ⊆ B ⊆ C gives ≼_C ⊆ ≼_B ⊆ ≼_A
  auto ra = compat_relation(a).rel, rb = compat_relation(b).rel, rc = compat_relation(c).rel;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      if (rc[i][j]) {
        EXPECT_TRUE(rb[i][j]);
      }
      if (rb[i][j]) {
        EXPECT_TRUE(ra[i][j]);
      }
    }
}

TEST(Order, MonotonicityOverSquareSubreducts) {
  auto subs = square_subreducts();
  std::vector<Subreduct> gen;
  for (const auto& a : subs) {
    auto s = make_subreduct(a);
    if (s.b.size() == 9) gen.push_back(std::move(s));
  }
  ASSERT_GT(gen.size(), 3u);
  for (const auto& x : gen)
    for (const auto& y : gen) {
      const auto ex = make_set(x.b, carrier_in_b(x)), ey = make_set(y.b, carrier_in_b(y));
      if (!ex.is_subset_of(ey)) continue;
      auto rx = compat_relation(x).rel, ry = compat_relation(y).rel;
      for (std::size_t i = 0; i < rx.size(); ++i)
        for (std::size_t j = 0; j < rx.size(); ++j)
          if (ry[i][j]) {
            EXPECT_TRUE(rx[i][j]);
          }
    }
}

TEST(Order, OrderVersusKernels) {
  for (const auto& a : square_subreducts()) {
    auto r = order_vs_kernels(a);
    EXPECT_TRUE(r.ok);
    for (const auto& p : r.pairs)
      if (!p.leq) {
        ASSERT_TRUE(p.witness.has_value());
        EXPECT_TRUE(p.separator->negation_free());
      }
  }
  auto sa = examples::square_a();
  auto r = order_vs_kernels(sa);
  EXPECT_TRUE(r.ok);

  // L223 C: f₂ ∥ f₃ and neither zero set contains the other
  auto c = examples::l223_c();
  auto homs = enumerate_homs(c).homs;
  int i2 = -1, i3 = -1;
  for (std::size_t k = 0; k < homs.size(); ++k) {
    if (projection_index(c, homs[k]) == 1) i2 = static_cast<int>(k);
    if (projection_index(c, homs[k]) == 2) i3 = static_cast<int>(k);
  }
  auto rc = order_vs_kernels(c, homs);
  EXPECT_TRUE(rc.ok);
  for (const auto& p : rc.pairs)
    if ((p.i == i2 && p.j == i3) || (p.i == i3 && p.j == i2)) {
      EXPECT_FALSE(p.leq);
      EXPECT_FALSE(p.kernel_sub);
      ASSERT_TRUE(p.witness.has_value());
      EXPECT_TRUE(homs[static_cast<std::size_t>(p.j)].values[static_cast<std::size_t>(*p.witness)].is_zero());
      EXPECT_TRUE(homs[static_cast<std::size_t>(p.i)].values[static_cast<std::size_t>(*p.witness)].is_one());
    }
  for (const auto& alg : {examples::l223_a(), examples::l223_b()}) EXPECT_TRUE(order_vs_kernels(alg).ok);
}

TEST(Order, PosetIsomorphism) {
  Relation chain{{true, true, true}, {false, true, true}, {false, false, true}};
  Relation rev{{true, false, false}, {true, true, false}, {true, true, true}};
  auto m = poset_isomorphism(chain, rev);
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(*m, (std::vector<int>{2, 1, 0}));
  Relation vee{{true, false, false}, {true, true, true}, {false, false, true}};
  Relation wedge{{true, true, false}, {false, true, false}, {false, true, true}};
  EXPECT_FALSE(poset_isomorphism(vee, wedge).has_value());
  EXPECT_FALSE(poset_isomorphism(chain, vee).has_value());
  EXPECT_TRUE(poset_isomorphism(vee, vee).has_value());
}

TEST(Order, CompatibilityMatchesMaxLe) {
  // through the index-preserving map I ∩ A ↦ I ∩ E
  std::vector<Subreduct> l223{make_subreduct(examples::l223_a()), make_subreduct(examples::l223_b()),
                              make_subreduct(examples::l223_c())};
  for (const auto& x : l223)
    for (const auto& y : l223) EXPECT_EQ(are_compatible(x, y), max_le_match(max_le(x), max_le(y)));

  std::vector<Subreduct> gen;
  for (const auto& a : square_subreducts()) {
    auto s = make_subreduct(a);
    if (s.b.size() == 9) gen.push_back(std::move(s));
  }
  for (const auto& x : gen)
    for (const auto& y : gen) EXPECT_EQ(are_compatible(x, y), max_le_match(max_le(x), max_le(y)));

  // an abstract isomorphism is not enough: A and its mirror image both have a
  // 2-chain as Max≤ but induce opposite orders on Hom(B,[0,1])
  auto a = make_subreduct(examples::square_a());
  auto m = make_subreduct(mirror_square_a());
  EXPECT_TRUE(poset_isomorphism(max_le(a).incl, max_le(m).incl).has_value());
  EXPECT_FALSE(are_compatible(a, m));
  EXPECT_FALSE(max_le_match(max_le(a), max_le(m)));
}

TEST(Order, HCompletenessOfL223) {
  auto a = make_subreduct(examples::l223_a());
  auto ha = is_h_complete(a);
  EXPECT_FALSE(ha.complete);
  ASSERT_TRUE(ha.certificate.has_value());
  auto b = make_subreduct(examples::l223_b());
  EXPECT_EQ(*ha.certificate, carrier_in_b(b));
  ASSERT_TRUE(ha.largest.has_value());
  EXPECT_EQ(*ha.largest, carrier_in_b(b));

  EXPECT_TRUE(is_h_complete(b).complete);
  EXPECT_TRUE(is_h_complete(make_subreduct(examples::l223_c())).complete);

  auto full = make_subreduct(FinAlgebra::product_of_chains({2, 2, 3}).as_mvlat());
  EXPECT_TRUE(is_h_complete(full).complete);
  EXPECT_THROW(is_h_complete(a, 30), size_guard_error);
}

TEST(Order, PrunedSearchFindsEveryCompatibleSuperset) {
  auto check = [](const Subreduct& s) {
    const auto homs = enumerate_homs(s.b).homs;
    const auto base = restricted_order(homs, carrier_in_b(s));
    std::set<std::vector<int>> pruned, full;
    for (auto& e : closed_supersets(s, homs, base, true))
      if (restricted_order(homs, e) == base) pruned.insert(e);
    for (auto& e : closed_supersets(s, homs, base, false))
      if (restricted_order(homs, e) == base) full.insert(e);
    EXPECT_EQ(pruned, full);
  };
  for (const auto& a : square_subreducts()) {
    auto s = make_subreduct(a);
    if (s.b.size() == 9) check(s);
  }
  check(make_subreduct(examples::l223_a()));
  check(make_subreduct(examples::l223_c()));
}

TEST(Order, SubreductOfCarrierRoundTrip) {
  auto a = make_subreduct(examples::l223_a());
  auto again = subreduct_of_carrier(a, carrier_in_b(a));
  EXPECT_EQ(again.a, a.a);
}
