#include <gtest/gtest.h>

#include <random>

#include <magari/eval.hpp>
#include <magari/formula.hpp>
#include <magari/syntax.hpp>
#include <magari/transducer.hpp>

#include "support.hpp"

using namespace magari;

namespace {

const Formula p = Formula::var("p");
const Formula q = Formula::var("q");
const Formula r = Formula::var("r");

TEST(Parse, Precedence) {
  EXPECT_EQ(parse("!p&q|r"), Formula::disjunction(Formula::conjunction(Formula::negation(p), q), r));
  EXPECT_EQ(parse("D(D(0))"), Formula::delta(Formula::delta(Formula::zero())));
  EXPECT_EQ(parse("p->q->r"), Formula::implication(p, Formula::implication(q, r)));
  EXPECT_EQ(parse("p<->q<->r"), Formula::equivalence(Formula::equivalence(p, q), r));
  EXPECT_EQ(parse("p | q -> r <-> p"),
            Formula::equivalence(Formula::implication(Formula::disjunction(p, q), r), p));
  EXPECT_EQ(parse("Dp & #q | @r"),
            Formula::disjunction(Formula::conjunction(Formula::delta(p), Formula::box(q)), Formula::nabla(r)));
}

TEST(Parse, UnicodeAliases) {
  EXPECT_EQ(parse("¬Δp ∧ □q ∨ ∇r"), parse("!Dp & #q | @r"));
  EXPECT_EQ(parse("p ⊃ q ∼ r"), parse("p -> q <-> r"));
  EXPECT_EQ(parse("p ↔ q"), parse("p <-> q"));
}

TEST(Parse, Identifiers) {
  EXPECT_EQ(parse("foo_1 & bar2"), Formula::conjunction(Formula::var("foo_1"), Formula::var("bar2")));
  EXPECT_THROW(Formula::var("P"), std::invalid_argument);
  EXPECT_THROW(Formula::var("1x"), std::invalid_argument);
}

TEST(Parse, Errors) {
  auto position_of = [](const char* text) -> std::size_t {
    try {
      parse(text);
    } catch (const parse_error& e) {
      return e.position();
    }
    return std::string::npos;
  };
  EXPECT_EQ(position_of("p &"), 3u);
  EXPECT_EQ(position_of("(p"), 2u);
  EXPECT_EQ(position_of("p q"), 2u);
  EXPECT_EQ(position_of("P & q"), 0u); // reserved uppercase
  EXPECT_EQ(position_of("p $ q"), 2u);
  EXPECT_EQ(position_of(""), 0u);
  EXPECT_EQ(position_of("p -"), 2u);
}

TEST(Print, CanonicalSpacing) {
  EXPECT_EQ(print(Formula::delta(Formula::zero())), "D 0");
  EXPECT_EQ(print(Formula::disjunction(Formula::conjunction(Formula::negation(p), q), r)), "!p & q | r");
  EXPECT_EQ(print(parse("(p->q)->r")), "(p -> q) -> r");
  EXPECT_EQ(print(parse("p&(q&r)")), "p & (q & r)");
  EXPECT_EQ(print(parse("p<->(q<->r)")), "p <-> (q <-> r)");
  EXPECT_EQ(print(parse("!(p|q)")), "!(p | q)");
  EXPECT_EQ(print(Formula::literal(parse_element("01(0)"))), "[01(0)]");
}

TEST(Print, RoundTripProperty) {
  std::mt19937_64 rng(11);
  magari::testing::FormulaGen gen;
  for (int n = 0; n < 1000; ++n) {
    const Formula f = gen(rng, 8);
    const std::string text = print(f);
    ASSERT_EQ(parse(text), f) << text;
    EXPECT_EQ(print(parse(text)), text);
  }
}

TEST(Substitute, Basics) {
  EXPECT_EQ(substitute(Formula::conjunction(p, q), {{"p", Formula::negation(r)}}),
            Formula::conjunction(Formula::negation(r), q));
  const Formula f = parse("D(p -> q) & r");
  EXPECT_EQ(substitute(f, {}), f);
  EXPECT_EQ(substitute(Formula::delta(p), {{"p", Formula::zero()}}), Formula::delta(Formula::zero()));
}

TEST(Substitute, IsSimultaneous) {
  const Formula swapped = substitute(parse("p & !q"), {{"p", q}, {"q", p}});
  EXPECT_EQ(swapped, parse("q & !p"));
}

TEST(Substitute, SuperpositionSoundness) {
  std::mt19937_64 rng(12);
  magari::testing::FormulaGen gen;
  for (int n = 0; n < 300; ++n) {
    const Formula f = gen(rng, 4);
    const Formula g = gen(rng, 3);
    const Assignment a = magari::testing::random_assignment(rng, {"p", "q", "r"}, 6);
    Assignment with_value = a;
    with_value["p"] = evaluate(g, a);
    EXPECT_EQ(evaluate(substitute(f, {{"p", g}}), a), evaluate(f, with_value));
  }
}

TEST(Desugar, DerivedOperators) {
  EXPECT_EQ(desugar(Formula::box(p)), Formula::conjunction(p, Formula::delta(p)));
  const Formula box_p = Formula::conjunction(p, Formula::delta(p));
  auto box_of = [](const Formula& f) { return Formula::conjunction(f, Formula::delta(f)); };
  EXPECT_EQ(desugar(Formula::nabla(p)), box_of(Formula::negation(box_of(Formula::negation(box_p)))));
  EXPECT_EQ(desugar(Formula::delta(p)), Formula::delta(p));
  EXPECT_EQ(desugar(parse("p <-> q")), parse("(p -> q) & (q -> p)"));
  EXPECT_TRUE(is_core(desugar(parse("@#(p <-> D q)"))));
}

TEST(Desugar, SharesOperands) {
  const Formula d = desugar(Formula::box(parse("p & q")));
  EXPECT_EQ(d.lhs().id(), d.rhs().lhs().id());
}

TEST(Desugar, PreservesSemantics) {
  std::mt19937_64 rng(13);
  magari::testing::FormulaGen gen;
  for (int n = 0; n < 500; ++n) {
    const Formula f = gen(rng, 5);
    const Assignment a = magari::testing::random_assignment(rng, {"p", "q", "r"}, 6);
    const Element v = evaluate(f, a);
    const Formula core = desugar(f);
    EXPECT_EQ(evaluate(core, a), v);
    EXPECT_EQ(evaluate(constant_fold(core), a), v);
  }
}

TEST(ConstantFold, ClosedSubterms) {
  EXPECT_EQ(constant_fold(parse("!D0")), Formula::literal(parse_element("0(1)")));
  const Formula folded = constant_fold(Formula::conjunction(p, Formula::one()));
  EXPECT_EQ(folded, Formula::conjunction(p, Formula::literal(Element::one())));
  const Formula closed = parse("D(D 0 -> !D D D 0) | 0");
  EXPECT_EQ(constant_fold(closed), Formula::literal(evaluate_closed(closed)));
  EXPECT_EQ(constant_fold(parse("D p & q")), parse("D p & q"));
}

TEST(Measures, FreeVarsAndDepth) {
  EXPECT_EQ(free_vars(parse("p & D q")), (std::vector<std::string>{"p", "q"}));
  EXPECT_EQ(free_vars(parse("r | p | r")), (std::vector<std::string>{"p", "r"}));
  EXPECT_TRUE(free_vars(parse("D 0")).empty());
  EXPECT_EQ(modal_depth(Formula::delta(Formula::delta(Formula::zero()))), 2u);
  EXPECT_EQ(modal_depth(parse("#p")), 1u);
  EXPECT_EQ(modal_depth(parse("@p")), 3u);
  EXPECT_EQ(modal_depth(parse("@p")), modal_depth(desugar(parse("@p"))));
}

TEST(Measures, DeltaNodesShareSubterms) {
  const Formula nab = desugar(Formula::nabla(p));
  EXPECT_EQ(delta_nodes(nab), 3u);
  // Counted as a tree, ∇ repeats each □ operand; sharing never increases the count.
  std::size_t tree_deltas = 0;
  auto count = [&](auto& self, const Formula& f) -> void {
    if (f.kind() == Kind::delta)
      ++tree_deltas;
    if (is_unary(f.kind()) || is_binary(f.kind()))
      self(self, f.lhs());
    if (is_binary(f.kind()))
      self(self, f.rhs());
  };
  count(count, nab);
  EXPECT_EQ(tree_deltas, 7u);
  EXPECT_EQ(delta_nodes(parse("D p & D p")), 1u);
  EXPECT_EQ(delta_nodes(parse("@q & !@q")), 3u);
}

} // namespace
