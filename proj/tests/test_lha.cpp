#include "oracles.hpp"
#include "rtlha/lha.hpp"

#include <gtest/gtest.h>

using namespace rtlha;

namespace {

LhaState at(const std::string& loc, Rat x1, Rat x2) { return {loc, {{"x1", std::move(x1)}, {"x2", std::move(x2)}}}; }

const Lha& paper_instance() {
  static const Lha lha = two_reservoir(10, 5, 5, 15, 15, 30, 30);
  return lha;
}

AffineExpr random_expr(oracle::Rng& rng) {
  AffineExpr e;
  e.coeffs["x1"] = oracle::random_rat(rng, -3, 3);
  e.coeffs["x2"] = oracle::random_rat(rng, -3, 3);
  e.constant = oracle::random_rat(rng, -40, 40);
  return e;
}

}  // namespace

TEST(Affine, Eval) {
  EXPECT_EQ(eval_affine(AffineExpr::var("x1"), {{"x1", 30}}), Rat(30));
  EXPECT_EQ(eval_affine(AffineExpr::constant_of(Rat(10) - Rat(5)), {}), Rat(5));
  AffineExpr e{{{"x1", 2}, {"x2", 3}}, 1};
  EXPECT_EQ(eval_affine(e, {{"x1", Rat(1, 2)}, {"x2", Rat(1, 3)}}), Rat(3));
  EXPECT_THROW(eval_affine(AffineExpr::var("y"), {{"x1", 1}}), ModelError);
}

TEST(Affine, Holds) {
  AffineConstraint c{AffineExpr::var("x2") - 15, Relation::LessEq};
  EXPECT_FALSE(holds(c, {{"x2", 25}}));
  EXPECT_TRUE(holds(c, {{"x2", 15}}));
  EXPECT_TRUE(holds({AffineExpr::var("x2") - 15, Relation::Equal}, {{"x2", 15}}));
  EXPECT_FALSE(holds({AffineExpr::var("x2") - 15, Relation::Greater}, {{"x2", 15}}));
  EXPECT_TRUE(holds({AffineExpr::var("x2") - 15, Relation::Less}, {{"x2", 14}}));
  EXPECT_THROW(holds(c, {{"x1", 0}}), ModelError);
}

TEST(Affine, EvaluationIsPure) {
  oracle::Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    AffineConstraint c{random_expr(rng), static_cast<Relation>(oracle::uniform(rng, 0, 4))};
    Valuation v{{"x1", oracle::random_rat(rng, 0, 50)}, {"x2", oracle::random_rat(rng, 0, 50)}};
    bool first = holds(c, v);
    for (int k = 0; k < 3; ++k) EXPECT_EQ(holds(c, v), first);
  }
}

TEST(Flow, Examples) {
  const auto& q1 = paper_instance().location("q1");
  EXPECT_EQ(flow(q1, {{"x1", 30}, {"x2", 30}}, 1), (Valuation{{"x1", 35}, {"x2", 25}}));
  EXPECT_EQ(flow(q1, {{"x1", 30}, {"x2", 30}}, 3), (Valuation{{"x1", 45}, {"x2", 15}}));
  EXPECT_EQ(flow(q1, {{"x1", 30}, {"x2", 30}}, 0), (Valuation{{"x1", 30}, {"x2", 30}}));
}

TEST(Flow, Additivity) {
  oracle::Rng rng(22);
  for (int i = 0; i < 1000; ++i) {
    Location loc{"l", {{"x1", oracle::random_rat(rng, -10, 10)}, {"x2", oracle::random_rat(rng, -10, 10)}}, {}, {}};
    Valuation v{{"x1", oracle::random_rat(rng, 0, 100)}, {"x2", oracle::random_rat(rng, 0, 100)}};
    Time t1 = oracle::random_rat(rng, 0, 10), t2 = oracle::random_rat(rng, 0, 10);
    EXPECT_EQ(flow(loc, flow(loc, v, t1), t2), flow(loc, v, t1 + t2));
  }
}

TEST(Flow, ConvexitySoundness) {
  oracle::Rng rng(23);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    Location loc{"l", {{"x1", oracle::random_rat(rng, -10, 10)}, {"x2", oracle::random_rat(rng, -10, 10)}}, {}, {}};
    std::vector<AffineConstraint> inv;
    for (std::size_t c = 0, n = oracle::uniform(rng, 1, 3); c < n; ++c)
      inv.push_back({random_expr(rng), static_cast<Relation>(oracle::uniform(rng, 0, 4))});
    Valuation v{{"x1", oracle::random_rat(rng, 0, 30)}, {"x2", oracle::random_rat(rng, 0, 30)}};
    Rat delta = oracle::random_rat(rng, 0, 5);
    if (!holds_all(inv, v) || !holds_all(inv, flow(loc, v, delta))) continue;
    ++checked;
    for (int k = 1; k <= 16; ++k) EXPECT_TRUE(holds_all(inv, flow(loc, v, delta * Rat(k, 17))));
  }
  EXPECT_GT(checked, 50);
}

TEST(TimedSuccessor, Examples) {
  const auto& lha = paper_instance();
  EXPECT_EQ(timed_successor(lha, at("q1", 30, 30), 3), at("q1", 45, 15));
  EXPECT_EQ(timed_successor(lha, at("q1", 30, 30), 1), at("q1", 35, 25));
  EXPECT_EQ(timed_successor(lha, at("q1", 30, 15), 1), std::nullopt);
  EXPECT_EQ(timed_successor(lha, at("q1", 30, 30), 0), at("q1", 30, 30));
  EXPECT_EQ(timed_successor(lha, at("q1", 30, 30), 4), std::nullopt);
}

TEST(DiscreteSuccessors, Examples) {
  const auto& lha = paper_instance();
  auto steps = discrete_successors(lha, at("q1", 45, 15));
  ASSERT_EQ(steps.size(), 1U);
  EXPECT_EQ(steps[0].label, "moveright");
  EXPECT_EQ(steps[0].state, at("q2", 45, 15));
  EXPECT_TRUE(discrete_successors(lha, at("q1", 30, 30)).empty());
  EXPECT_TRUE(discrete_successors(lha, at("q2", 30, 30)).empty());
}

TEST(DiscreteSuccessors, SimultaneousAssignment) {
  auto x1 = AffineExpr::var("x1"), x2 = AffineExpr::var("x2");
  Lha swap({"x1", "x2"}, {{"a", {}, {}, {}}, {"b", {}, {}, {}}},
           {{"a", "b", "swap", {}, {{"x1", x2}, {"x2", x1}}}}, {"a", {{"x1", 1}, {"x2", 2}}});
  auto steps = swap.discrete_successors(swap.initial());
  ASSERT_EQ(steps.size(), 1U);
  EXPECT_EQ(steps[0].state, (LhaState{"b", {{"x1", 2}, {"x2", 1}}}));
}

TEST(DiscreteSuccessors, TargetInvariantFilters) {
  Lha m({"x"}, {{"a", {}, {}, {}}, {"b", {}, {{AffineExpr::var("x") - 5, Relation::GreaterEq}}, {}}},
        {{"a", "b", "go", {}, {}}}, {"a", {{"x", 1}}});
  EXPECT_TRUE(m.discrete_successors(m.initial()).empty());
}

TEST(TwoReservoir, Construction) {
  EXPECT_NO_THROW(two_reservoir(10, 5, 5, 15, 15, 30, 30));
  try {
    two_reservoir(10, 5, 5, 15, 15, 30, 10);
    FAIL() << "expected an error";
  } catch (const ModelError& e) {
    EXPECT_NE(std::string(e.what()).find("x2 >= r2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(two_reservoir(10, -5, 5, 15, 15, 30, 30), ModelError);
}

TEST(TwoReservoir, SwitchKeepsLevels) {
  const auto& lha = paper_instance();
  for (const auto& s : lha.discrete_successors(at("q2", 15, 45))) {
    EXPECT_EQ(s.label, "moveleft");
    EXPECT_EQ(s.state.valuation, at("q1", 15, 45).valuation);
  }
}

TEST(TwoReservoir, ConservationWhenBalanced) {
  oracle::Rng rng(24);
  int steps = 0;
  for (int i = 0; i < 1000; ++i) {
    Rat v1 = oracle::random_rat(rng, 0, 10), v2 = oracle::random_rat(rng, 0, 10);
    Rat r1 = oracle::random_rat(rng, 0, 20), r2 = oracle::random_rat(rng, 0, 20);
    Rat x1 = r1 + oracle::random_rat(rng, 0, 30), x2 = r2 + oracle::random_rat(rng, 0, 30);
    Lha lha = two_reservoir(v1 + v2, v1, v2, r1, r2, x1, x2, oracle::coin(rng) ? "q1" : "q2");
    LhaState s = lha.initial();
    for (int k = 0; k < 5; ++k) {
      auto next = lha.timed_successor(s, oracle::random_rat(rng, 0, 3));
      if (!next) {
        auto sw = lha.discrete_successors(s);
        if (sw.empty()) break;
        next = sw.front().state;
      }
      ++steps;
      EXPECT_EQ(next->valuation.at("x1") + next->valuation.at("x2"), x1 + x2);
      s = *next;
    }
  }
  EXPECT_GT(steps, 1000);
}

TEST(LhaModel, Validation) {
  auto x = AffineExpr::var("x");
  EXPECT_THROW(Lha({"x"}, {{"a", {}, {}, {}}}, {{"a", "zz", "go", {}, {}}}, {"a", {{"x", 0}}}), ModelError);
  EXPECT_THROW(Lha({"x"}, {{"a", {}, {}, {}}}, {{"a", "a", "go", {}, {{"x", x}, {"x", x}}}}, {"a", {{"x", 0}}}),
               ModelError);
  EXPECT_THROW(Lha({"x"}, {{"a", {}, {}, {}}, {"a", {}, {}, {}}}, {}, {"a", {{"x", 0}}}), ModelError);
  EXPECT_THROW(Lha({"x"}, {{"a", {}, {{AffineExpr::var("y"), Relation::Equal}}, {}}}, {}, {"a", {{"x", 0}}}),
               ModelError);
  EXPECT_THROW(Lha({"x"}, {{"a", {}, {{x - 1, Relation::GreaterEq}}, {}}}, {}, {"a", {{"x", 0}}}), ModelError);
}

TEST(LhaModel, JsonRoundTrip) {
  const auto& lha = paper_instance();
  json j = to_json(lha);
  EXPECT_EQ(j.at("kind"), "lha");
  EXPECT_EQ(lha_from_json(j), lha);
}
