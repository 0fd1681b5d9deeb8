#include <gtest/gtest.h>

#include <random>

#include "mvlat/algebra.hpp"
#include "mvlat/term.hpp"

using namespace mvlat;

namespace {
UnitRational q(std::int64_t p, std::int64_t d) { return UnitRational(p, d); }

// Oracle for n·x and x^n: the closed forms min(1, nx) and max(0, nx - n + 1).
UnitRational multiple_oracle(std::int64_t n, const UnitRational& x) {
  Integer num = x.numerator() * n;
  if (num >= x.denominator()) return UnitRational::one();
  return UnitRational(num, x.denominator());
}
UnitRational power_oracle(std::int64_t n, const UnitRational& x) {
  Integer num = x.numerator() * n - (Integer(n) - 1) * x.denominator();
  if (num <= 0) return UnitRational::zero();
  return UnitRational(num, x.denominator());
}
}  // namespace

TEST(Term, EvalExamples) {
  auto v0 = Term::var(0), v1 = Term::var(1);
  EXPECT_EQ(eval(v0, {q(2, 7)}), q(2, 7));
  EXPECT_EQ(eval(Term::add(v0, v0), {q(3, 4)}), UnitRational::one());
  EXPECT_EQ(eval(Term::neg(Term::mul(v0, v1)), {q(1, 2), q(1, 2)}), UnitRational::one());
  EXPECT_EQ(eval(Term::join(v0, v1), {q(1, 3), q(1, 2)}), q(1, 2));
  EXPECT_EQ(eval(Term::meet(v0, Term::one()), {q(1, 3)}), q(1, 3));
  EXPECT_THROW(eval(v1, {q(1, 2)}), input_error);
}

TEST(Term, SignatureTags) {
  auto v0 = Term::var(0);
  EXPECT_TRUE(Term::add(v0, Term::neg(v0)).in_signature(Signature::mv));
  EXPECT_FALSE(Term::add(v0, Term::neg(v0)).in_signature(Signature::mvlat));
  EXPECT_FALSE(Term::mul(v0, v0).in_signature(Signature::mv));
  EXPECT_TRUE(Term::meet(Term::mul(v0, v0), v0).in_signature(Signature::mvlat));
  EXPECT_EQ(Term::add(Term::var(3), v0).arity(), 4);
}

TEST(Term, MultiplesAndPowers) {
  EXPECT_EQ(eval(scalar_multiple(2, Term::var(0)), {q(1, 3)}), q(2, 3));
  EXPECT_EQ(eval(power(Term::var(0), 2), {q(3, 4)}), q(1, 2));
  EXPECT_THROW(scalar_multiple(0, Term::var(0)), input_error);
  EXPECT_THROW(power(Term::var(0), 0), input_error);
  for (int n = 1; n <= 40; ++n)
    for (int d = 1; d <= 15; ++d)
      for (int p = 0; p <= d; ++p) {
        auto x = q(p, d);
        EXPECT_EQ(eval(scalar_multiple(n, Term::var(0)), {x}), multiple_oracle(n, x));
        EXPECT_EQ(eval(power(Term::var(0), n), {x}), power_oracle(n, x));
        // x^h = 0 whenever x <= (h-1)/h
        if (x <= q(n - 1, n)) {
          EXPECT_TRUE(eval(power(Term::var(0), n), {x}).is_zero());
        }
      }
  // balanced trees keep the DAG logarithmic
  auto big = scalar_multiple(1 << 20, Term::var(0));
  EXPECT_LE(big.dag_size(), 30u);
  EXPECT_EQ(eval(big, {q(1, 1 << 21)}), q(1, 2));
}

TEST(Term, SexprRoundTrip) {
  auto t = Term::add(Term::mul(Term::var(0), Term::var(0)), Term::var(1));
  EXPECT_EQ(to_sexpr(t), "(add (mul v0 v0) v1)");
  EXPECT_EQ(parse_sexpr("(add (mul v0 v0) v1)"), t);
  auto u = parse_sexpr("(join (neg v2) (meet 0 1))");
  EXPECT_EQ(to_sexpr(u), "(join (neg v2) (meet 0 1))");
  EXPECT_THROW(parse_sexpr("(add v0)"), input_error);
  EXPECT_THROW(parse_sexpr("(foo v0 v1)"), input_error);
  EXPECT_THROW(parse_sexpr("v0 v1"), input_error);
}

TEST(Term, SeparatorExamples) {
  auto id = synthesize_separator(UnitRational::zero(), UnitRational::one());
  EXPECT_EQ(to_sexpr(id), "v0");

  auto s = synthesize_separator_traced(q(1, 4), q(1, 2));
  EXPECT_EQ(s.steps.back().kind, SeparatorStep::Kind::double_then_power);
  EXPECT_EQ(s.steps.back().factor, 2);
  EXPECT_EQ(to_sexpr(s.term), "(mul (add v0 v0) (add v0 v0))");
  EXPECT_TRUE(eval(s.term, {q(1, 4)}).is_zero());
  EXPECT_TRUE(eval(s.term, {q(1, 2)}).is_one());

  auto c1 = synthesize_separator_traced(q(1, 2), q(3, 4));
  EXPECT_EQ(c1.steps.back().kind, SeparatorStep::Kind::square_then_multiple);
  EXPECT_EQ(c1.steps.back().factor, 2);
  EXPECT_EQ(to_sexpr(c1.term), "(add (mul v0 v0) (mul v0 v0))");

  EXPECT_THROW(synthesize_separator(q(1, 2), q(1, 2)), input_error);
  EXPECT_THROW(synthesize_separator(q(2, 3), q(1, 2)), input_error);
}

TEST(Term, SeparatorBothCasesApplicableChoosesCaseOne) {
  // x < 1/2 < y satisfies both case conditions' shapes; case 1 wins.
  auto s = synthesize_separator_traced(q(1, 3), q(2, 3));
  EXPECT_EQ(s.steps.front().kind, SeparatorStep::Kind::square_then_multiple);
}

TEST(Term, SeparatorRecursiveCases) {
  auto low = synthesize_separator_traced(q(1, 10), q(1, 5));
  EXPECT_EQ(low.steps.front().kind, SeparatorStep::Kind::multiple);
  auto high = synthesize_separator_traced(q(4, 5), q(9, 10));
  EXPECT_EQ(high.steps.front().kind, SeparatorStep::Kind::power);
  for (const auto* s : {&low, &high}) {
    EXPECT_TRUE(s->term.negation_free());
    EXPECT_LE(s->depth, s->depth_cap);
  }
  EXPECT_TRUE(eval(low.term, {q(1, 10)}).is_zero());
  EXPECT_TRUE(eval(low.term, {q(1, 5)}).is_one());
  EXPECT_TRUE(eval(high.term, {q(4, 5)}).is_zero());
  EXPECT_TRUE(eval(high.term, {q(9, 10)}).is_one());
}

TEST(Term, SeparatorExhaustiveSmallDenominators) {
  std::vector<UnitRational> pts;
  for (int d = 1; d <= 20; ++d)
    for (int p = 0; p <= d; ++p) {
      UnitRational x(p, d);
      if (std::find(pts.begin(), pts.end(), x) == pts.end()) pts.push_back(x);
    }
  for (const auto& x : pts)
    for (const auto& y : pts) {
      if (!(x < y)) continue;
      auto s = synthesize_separator_traced(x, y);
      ASSERT_TRUE(eval(s.term, {x}).is_zero()) << x << " " << y;
      ASSERT_TRUE(eval(s.term, {y}).is_one()) << x << " " << y;
      ASSERT_TRUE(s.term.negation_free());
      ASSERT_TRUE(s.term.in_signature(Signature::mvlat));
      ASSERT_LE(s.depth, s.depth_cap);
      // monotone in the argument: everything above y also maps to 1
      ASSERT_TRUE(eval(s.term, {UnitRational::one()}).is_one());
    }
}

TEST(Term, ComposeSubstitutes) {
  auto t = parse_sexpr("(add v0 v1)");
  std::vector<Term> args{parse_sexpr("(mul v0 v0)"), Term::var(0)};
  EXPECT_EQ(to_sexpr(compose(t, args)), "(add (mul v0 v0) v0)");
}

TEST(Term, WitnessesFromTrace) {
  // generators {0,1} give constant witnesses
  auto l2 = FinAlgebra::chain(2);
  auto g = generate(l2, {l2.zero(), l2.one()}, Signature::mv);
  auto w = record_witnesses(g.trace, g.carrier);
  EXPECT_EQ(to_sexpr(w.at(l2.zero())), "0");
  EXPECT_EQ(to_sexpr(w.at(l2.one())), "1");

  auto sq = FinAlgebra::product_of_chains({2, 2});
  std::vector<int> seed;
  for (auto [a, b] : std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {0, 2}, {1, 2}, {2, 2}})
    seed.push_back(sq.index_of({q(a, 2), q(b, 2)}));
  auto gen = generate(sq, seed, Signature::mv);
  ASSERT_EQ(gen.carrier.size(), 9u);
  auto wit = record_witnesses(gen.trace, gen.carrier);
  const int e10 = sq.index_of({q(1, 1), q(0, 1)});
  EXPECT_EQ(to_sexpr(wit.at(e10)), "(neg v2)");  // generator 2 is (0,1)
  for (int e : gen.carrier) {
    std::vector<UnitRational> xs, ys;
    for (int s : wit.generators) {
      xs.push_back(sq.element(s)[0]);
      ys.push_back(sq.element(s)[1]);
    }
    EXPECT_EQ(eval(wit.at(e), xs), sq.element(e)[0]);
    EXPECT_EQ(eval(wit.at(e), ys), sq.element(e)[1]);
  }
  for (std::size_t i = 0; i < seed.size(); ++i)
    if (seed[i] != sq.zero() && seed[i] != sq.one()) {
      EXPECT_EQ(wit.at(seed[i]), Term::var(static_cast<int>(i)));
    }
}

TEST(Term, WitnessRejectsInconsistentTrace) {
  ClosureTrace t;
  t.generators = {3};
  t.steps = {{3, Op::var, 0}, {4, Op::add, 3, 9}};
  std::vector<int> carrier{3, 4};
  EXPECT_THROW(record_witnesses(t, carrier), input_error);
  ClosureTrace u;
  u.generators = {3};
  u.steps = {{3, Op::var, 0}};
  std::vector<int> bigger{3, 5};
  EXPECT_THROW(record_witnesses(u, bigger), input_error);
}
