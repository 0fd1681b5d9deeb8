#include <gtest/gtest.h>

#include "mvlat/duality.hpp"
#include "mvlat/worked_examples.hpp"

using namespace mvlat;

namespace {

// Oracle: every tuple over Ł_grid^n, kept if monotone for the order.
std::vector<Tuple> brute_increasing(const MVSpace& x) {
  std::vector<Tuple> all{Tuple{}};
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::vector<Tuple> next;
    for (const auto& t : all)
      for (std::int64_t k = 0; k <= x.grid; ++k) {
        auto u = t;
        u.emplace_back(k, x.grid);
        next.push_back(u);
      }
    all = std::move(next);
  }
  std::vector<Tuple> out;
  for (const auto& t : all) {
    bool ok = true;
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < x.size(); ++j)
        if ((*x.order)[i][j] && !(t[i] <= t[j])) ok = false;
    if (ok) out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Ordered space whose opens are all fuzzy subsets over Ł_grid^n.
MVSpace full_ordered(std::size_t n, std::int64_t grid, Relation order) {
  std::vector<Fuzzy> gens;
  for (std::size_t i = 0; i < n; ++i) {
    Fuzzy f(n, UnitRational(0, 1));
    f[i] = UnitRational(1, grid);
    gens.push_back(f);
  }
  return generate_topology(default_point_names(n, "x"), gens, GenMode::subbase, grid, order);
}

Relation chain_order(std::size_t n) {
  Relation r(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) r[i][j] = true;
  return r;
}

std::vector<FinAlgebra> product_corpus() {
  std::vector<FinAlgebra> out;
  for (int n = 1; n <= 4; ++n) out.push_back(FinAlgebra::product_of_chains({n}));
  out.push_back(FinAlgebra::product_of_chains({1, 1}));
  out.push_back(FinAlgebra::product_of_chains({2, 2}));
  out.push_back(FinAlgebra::product_of_chains({2, 3}));
  out.push_back(FinAlgebra::product_of_chains({1, 2, 1}));
  return out;
}

}  // namespace

TEST(Upsilon, SquareA) {
  auto d = upsilon(examples::square_a());
  EXPECT_EQ(d.space.size(), 2u);
  EXPECT_EQ(d.space.grid, 2);
  EXPECT_EQ(d.b.size(), 9);
  EXPECT_EQ(d.space.opens.size(), 9u);
  EXPECT_EQ(strict_pairs(*d.space.order).size(), 1u);
  EXPECT_TRUE(d.diagonal);
  EXPECT_FALSE(d.possibly_incomplete);
  auto c = clop_up(d.space);
  EXPECT_EQ(c.elements(), brute_increasing(d.space));
  EXPECT_EQ(c.size(), 6);
}

TEST(Upsilon, TwoElementChain) {
  auto d = upsilon(FinAlgebra::chain(1).as_mvlat());
  EXPECT_EQ(d.space.size(), 1u);
  EXPECT_EQ(d.space.opens.size(), 2u);
}

TEST(Upsilon, L223C) {
  auto d = upsilon(examples::l223_c());
  EXPECT_EQ(d.space.size(), 3u);
  EXPECT_EQ(strict_pairs(*d.space.order).size(), 1u);
}

TEST(Upsilon, OpensAreTildeClosure) {
  for (const auto& a : product_corpus()) {
    auto d = upsilon(a.as_mvlat());
    EXPECT_EQ(d.space.size(), a.chains().size());
    for (int i : d.tilde_in_b) EXPECT_TRUE(d.space.is_open(d.b.element(i)));
    // a product is its own ⟨Ã⟩
    EXPECT_EQ(d.b.size(), a.size());
  }
}

TEST(ClopUp, MatchesBruteForce) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::int64_t g = 1; g <= 2; ++g) {
      auto x = full_ordered(n, g, chain_order(n));
      EXPECT_EQ(clop_up(x).elements(), brute_increasing(x)) << n << " " << g;
    }
}

TEST(ClopUp, EmptySpace) {
  MVSpace x{{}, 1, {Fuzzy{}}, Relation{}};
  auto c = clop_up(x);
  EXPECT_EQ(c.size(), 1);
  EXPECT_TRUE(c.is_trivial());
}

TEST(Duality, L223BPasses) {
  auto v = check_duality(examples::l223_b());
  EXPECT_TRUE(v.ok()) << (v.failed.empty() ? "" : v.failed.front());
  EXPECT_TRUE(v.counit_inverse.has_value());
  EXPECT_TRUE(v.priestley);
}

TEST(Duality, L223AFails) {
  auto v = check_duality(examples::l223_a());
  EXPECT_FALSE(v.h_complete);
  EXPECT_FALSE(v.counit_iso);
  EXPECT_TRUE(v.lcc);
  EXPECT_TRUE(v.unit_order_homeo);
  EXPECT_TRUE(v.triangles);
  ASSERT_TRUE(v.enlargement.has_value());
  // enlargement is over the points of Υ(A); map each hom to its projection
  auto a = examples::l223_a();
  auto d = upsilon(a);
  std::vector<std::size_t> proj;
  for (const auto& h : d.homs)
    for (std::size_t j = 0; j < 3; ++j) {
      bool same = true;
      for (int x = 0; x < a.size(); ++x)
        if (h.values[static_cast<std::size_t>(x)] != a.element(x)[j]) same = false;
      if (same) proj.push_back(j);
    }
  ASSERT_EQ(proj.size(), 3u);
  std::vector<Tuple> expected;
  auto b = examples::l223_b();
  for (const auto& t : b.elements()) {
    Tuple u;
    for (auto j : proj) u.push_back(t[j]);
    expected.push_back(u);
  }
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(*v.enlargement, expected);
  EXPECT_EQ(v.failed, (std::vector<std::string>{"h_complete", "counit_iso"}));
}

TEST(Duality, SquareAFails) {
  auto v = check_duality(examples::square_a());
  EXPECT_FALSE(v.h_complete);
  EXPECT_FALSE(v.counit_iso);
}

TEST(Duality, ProductsPass) {
  for (const auto& a : product_corpus()) {
    auto v = check_duality(a.as_mvlat());
    EXPECT_TRUE(v.ok());
  }
}

TEST(Duality, CounitIsoIffHComplete) {
  for (const auto& a : {examples::square_a(), examples::l223_a(), examples::l223_b(), examples::l223_c()}) {
    auto v = check_duality(a);
    EXPECT_EQ(v.counit_iso, v.h_complete);
  }
}

TEST(Duality, SpaceSide) {
  for (std::size_t n = 1; n <= 3; ++n) {
    auto x = full_ordered(n, 2, chain_order(n));
    auto v = check_duality_space(x);
    EXPECT_TRUE(v.ok()) << n;
    EXPECT_TRUE(v.lcc_vacuous);
  }
}

TEST(Triangles, Hold) {
  for (const auto& a : {examples::square_a(), examples::l223_a(), examples::l223_c()}) {
    EXPECT_TRUE(triangle_algebra(a));
    EXPECT_TRUE(triangle_space(upsilon(a).space));
  }
}

TEST(Functoriality, UpsilonPreservesComposition) {
  // Ł1 → Ł2 → Ł4 inclusions, as MV-lattices
  auto l1 = FinAlgebra::chain(1).as_mvlat();
  auto l2 = FinAlgebra::chain(2).as_mvlat();
  auto l4 = FinAlgebra::chain(4).as_mvlat();
  Morphism p{0, 2}, q{0, 2, 4};
  auto d1 = upsilon(l1), d2 = upsilon(l2), d4 = upsilon(l4);
  auto up = upsilon_on_morphism(l1, l2, p, d1.homs, d2.homs);
  auto uq = upsilon_on_morphism(l2, l4, q, d2.homs, d4.homs);
  auto uqp = upsilon_on_morphism(l1, l4, compose(q, p), d1.homs, d4.homs);
  EXPECT_EQ(compose(up, uq), uqp);
  EXPECT_TRUE(is_continuous(uq, d4.space, d2.space));
  EXPECT_TRUE(is_order_preserving(uq, d4.space, d2.space));
  auto id = upsilon_on_morphism(l2, l2, Morphism{0, 1, 2}, d2.homs, d2.homs);
  EXPECT_TRUE(is_identity(id));
}

TEST(Functoriality, ClopUpPreservesComposition) {
  auto x = full_ordered(3, 1, chain_order(3));
  auto y = full_ordered(2, 1, chain_order(2));
  auto z = full_ordered(1, 1, chain_order(1));
  PointMap f{0, 0, 1}, g{0, 0};
  auto cx = clop_up(x), cy = clop_up(y), cz = clop_up(z);
  auto cf = clop_up_on_morphism(f, x, y, cy, cx);
  auto cg = clop_up_on_morphism(g, y, z, cz, cy);
  auto cgf = clop_up_on_morphism(compose(g, f), x, z, cz, cx);
  EXPECT_EQ(compose(cf, cg), cgf);
  EXPECT_TRUE(is_morphism(cy, cx, cf, Signature::mvlat));
  PointMap bad{1, 0, 0};  // reverses the order
  EXPECT_THROW(clop_up_on_morphism(bad, x, y, cy, cx), input_error);
}

TEST(Stone, Compare) {
  for (const auto& a : {FinAlgebra::product_of_chains({2, 2}), FinAlgebra::product_of_chains({3}),
                        FinAlgebra::product_of_chains({2, 2, 3}), FinAlgebra::product_of_chains({1})}) {
    auto r = stone_compare(a);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.f.size(), a.chains().size());
  }
}

TEST(Stone, RejectsMvLattice) { EXPECT_THROW(stone_compare(examples::l223_a()), input_error); }

TEST(Compatibility, OrderHomeoIffCompatible) {
  std::vector<FinAlgebra> xs{examples::l223_a(), examples::l223_b(), examples::l223_c()};
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j) {
      auto di = upsilon(xs[i]), dj = upsilon(xs[j]);
      // candidate map: same canonical index
      PointMap id(di.space.size());
      std::iota(id.begin(), id.end(), 0);
      bool homeo = di.space.size() == dj.space.size() && is_order_homeomorphism(id, di.space, dj.space);
      EXPECT_EQ(homeo, are_compatible(make_subreduct(xs[i]), make_subreduct(xs[j]))) << i << j;
    }
}
