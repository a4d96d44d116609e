#include <gtest/gtest.h>

#include <random>

#include <magari/eval.hpp>
#include <magari/syntax.hpp>

#include "support.hpp"

using namespace magari;

namespace {

Element el(const char* s) { return parse_element(s); }

TEST(Evaluate, Examples) {
  EXPECT_EQ(evaluate(parse("!D0"), {}), el("0(1)"));
  EXPECT_EQ(evaluate(parse("p & D p"), {{"p", Element::one()}}), Element::one());
  EXPECT_EQ(evaluate(parse("@q"), {{"q", el("01(0)")}}), Element::zero());
  EXPECT_EQ(evaluate(parse("Dp"), {{"p", el("0(1)")}}), el("1(0)"));
}

TEST(Evaluate, UnboundVariableIsNamed) {
  try {
    evaluate(parse("p & D qq"), {{"p", Element::one()}});
    FAIL() << "expected unbound_variable";
  } catch (const unbound_variable& e) {
    EXPECT_EQ(e.name(), "qq");
  }
}

TEST(Evaluate, Literal) {
  EXPECT_EQ(evaluate(Formula::literal(el("0110(0)")), {}), el("0110(0)"));
}

TEST(EvaluateClosed, Examples) {
  EXPECT_EQ(evaluate_closed(parse("!D0")), el("0(1)"));
  EXPECT_EQ(evaluate_closed(parse("D(D(0))")), el("11(0)"));
  // c for F = !p at i = 1: the complement of a_1 = 0(1).
  EXPECT_EQ(evaluate_closed(parse("!(!D 0)")), el("1(0)"));
  EXPECT_THROW(evaluate_closed(parse("p")), unbound_variable);
}

TEST(EvaluateClosed, DeltaPowerTerms) {
  for (std::size_t i = 0; i <= 16; ++i) {
    EXPECT_EQ(evaluate_closed(delta_iterate(Formula::zero(), i)), delta_power(i));
    EXPECT_EQ(evaluate_closed(neg_delta_power_term(i)), neg_delta_power(i));
  }
}

TEST(HoldsEquation, Examples) {
  std::mt19937_64 rng(21);
  const Formula lob = parse("D(Dp->p)");
  const Formula dp = parse("Dp");
  for (int n = 0; n < 500; ++n)
    EXPECT_TRUE(holds_equation(lob, dp, {{"p", magari::testing::random_element(rng, 10)}}));
  EXPECT_FALSE(holds_equation(parse("p"), parse("!p"), {{"p", Element::zero()}}));
  EXPECT_TRUE(holds_equation(parse("p"), parse("p"), {{"p", el("0101(0)")}}));
}

// Coordinates 1..n of a value depend only on coordinates 1..n of the inputs.
TEST(Evaluate, TruncationConsistency) {
  std::mt19937_64 rng(22);
  magari::testing::FormulaGen gen;
  std::uniform_int_distribution<std::size_t> cut(1, 8);
  for (int n = 0; n < 300; ++n) {
    const Formula f = gen(rng, 5);
    const Assignment a = magari::testing::random_assignment(rng, {"p", "q", "r"}, 8);
    const std::size_t k = cut(rng);
    Assignment b;
    for (const auto& [name, value] : a) {
      std::vector<bool> bits = project(value, k).bits;
      const Element noise = magari::testing::random_element(rng, 6);
      for (std::size_t j = 1; j <= 6; ++j)
        bits.push_back(noise.coordinate(j));
      b[name] = Element::canonicalize(std::move(bits), noise.tail());
    }
    EXPECT_EQ(project(evaluate(f, a), k), project(evaluate(f, b), k)) << print(f);
  }
}

TEST(Evaluate, SharedSubtermsAreEvaluatedOnce) {
  // 12 nested ∇ desugar to a DAG whose tree expansion is astronomically large.
  Formula f = Formula::var("p");
  for (int k = 0; k < 12; ++k)
    f = Formula::nabla(f);
  const Formula core = desugar(f);
  EXPECT_EQ(evaluate(core, {{"p", el("1(0)")}}), Element::one());
  EXPECT_EQ(evaluate(core, {{"p", el("0(1)")}}), Element::zero());
}

} // namespace
