#include "oracles.hpp"
#include "rtlha/reservoir.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace rtlha;

namespace {

Reservoir res(ReservoirId id, Rat level, Rat leak = 5, Rat lower = 15, Rat upper = 50) {
  return {id, std::move(lower), std::move(upper), std::move(level), std::move(leak)};
}

NResState system_of(ReservoirId hose, const std::vector<Rat>& levels, Rat rate = 10) {
  std::vector<Reservoir> rs;
  for (std::size_t i = 0; i < levels.size(); ++i) rs.push_back(res(i, levels[i]));
  return NResState({std::move(rate), hose}, std::move(rs));
}

std::vector<Rat> levels_of(const NResState& s) {
  std::vector<Rat> out;
  for (const auto& r : s.reservoirs()) out.push_back(r.level);
  return out;
}

NResState random_system(oracle::Rng& rng) {
  std::size_t n = oracle::uniform(rng, 1, 5);
  std::vector<Reservoir> rs;
  Rat max_leak{0};
  for (std::size_t i = 0; i < n; ++i) {
    Rat lower = oracle::random_rat(rng, 0, 20);
    Rat leak = oracle::random_rat(rng, 0, 8);
    max_leak = max(max_leak, leak);
    rs.push_back({i, lower, lower + oracle::random_rat(rng, 0, 40), oracle::random_rat(rng, 0, 60), leak});
  }
  return NResState({max_leak + oracle::random_rat(rng, 0, 10), oracle::uniform(rng, 0, n - 1)}, std::move(rs));
}

}  // namespace

TEST(Fill, Examples) {
  EXPECT_EQ(fill(res(0, 30), 10, 1).level, Rat(35));
  EXPECT_EQ(fill(res(0, 30), 10, 0), res(0, 30));
  EXPECT_EQ(fill(res(0, 45), 10, 2).level, Rat(55));
  try {
    fill(res(0, 30, 12), 10, 1);
    FAIL() << "expected an error";
  } catch (const ModelError& e) {
    EXPECT_NE(std::string(e.what()).find("hose slower than leak"), std::string::npos);
  }
}

TEST(Drain, Examples) {
  std::vector<Reservoir> rs{res(1, 30), res(2, 30)};
  auto out = drain(rs, 1);
  EXPECT_EQ(out[0].level, Rat(25));
  EXPECT_EQ(out[1].level, Rat(25));
  std::vector<Reservoir> low{res(0, 3)};
  EXPECT_EQ(drain(low, 1)[0].level, Rat(0));
  EXPECT_EQ(drain(rs, 0), rs);
}

TEST(NeedsRefill, Examples) {
  std::vector<Reservoir> a{res(0, 15), res(1, 40)}, b{res(0, 40), res(1, 20)}, none;
  EXPECT_TRUE(needs_refill(a));
  EXPECT_FALSE(needs_refill(b));
  EXPECT_FALSE(needs_refill(none));
}

TEST(MoveHose, Examples) {
  auto succ = move_hose_successors(system_of(0, {45, 15, 15}));
  ASSERT_EQ(succ.size(), 2U);
  EXPECT_EQ(succ[0].label, "move-hose");
  EXPECT_EQ(succ[0].state.hose().position, 1U);
  EXPECT_EQ(succ[1].state.hose().position, 2U);

  auto one = move_hose_successors(system_of(0, {40, 15}));
  ASSERT_EQ(one.size(), 1U);
  EXPECT_EQ(one[0].state.hose().position, 1U);

  EXPECT_TRUE(move_hose_successors(system_of(0, {30, 30, 30})).empty());
  EXPECT_TRUE(move_hose_successors(system_of(0, {10, 15})).empty());
}

TEST(Tick, Examples) {
  auto t = tick(system_of(1, {40, 15}), 1);
  ASSERT_TRUE(t);
  EXPECT_EQ(levels_of(*t), (std::vector<Rat>{35, 20}));
  EXPECT_FALSE(tick(system_of(0, {40, 15}), 1));
  auto s = system_of(0, {40, 15});
  EXPECT_EQ(tick(s, 0), s);
}

TEST(Valuation, Examples) {
  EXPECT_TRUE(valuation(system_of(0, {45, 15, 15}), kOneDown));
  EXPECT_FALSE(valuation(system_of(0, {45, 15, 15}), kMacondo));
  EXPECT_TRUE(valuation(system_of(0, {15, 15, 15}), kMacondo));
  EXPECT_THROW(valuation(system_of(0, {15}), "flood"), ModelError);
}

TEST(NResStateModel, Validation) {
  EXPECT_THROW(NResState({10, 0}, {}), ModelError);
  EXPECT_THROW(NResState({10, 3}, {res(0, 30)}), ModelError);
  EXPECT_THROW(NResState({10, 0}, {res(0, 30), res(0, 20)}), ModelError);
  EXPECT_THROW(NResState({10, 0}, {res(0, 30, 5, 20, 10)}), ModelError);
  EXPECT_THROW(NResState({10, 0}, {res(0, -1)}), ModelError);
}

TEST(NResStateModel, WellFormed) {
  EXPECT_FALSE(well_formed(system_of(0, {30, 30, 30})));
  EXPECT_TRUE(well_formed(system_of(0, {30, 30})));
}

TEST(NResStateModel, Render) {
  EXPECT_EQ(render(system_of(0, {30, 25})),
            "hose(10,0) < 0 | thr:(15,50), hth: 30, rte: 5 > < 1 | thr:(15,50), hth: 25, rte: 5 >");
}

TEST(NResProperties, ConservationWithoutSaturation) {
  oracle::Rng rng(31);
  int checked = 0;
  for (int i = 0; checked < 1000; ++i) {
    ASSERT_LT(i, 100000);
    auto s = random_system(rng);
    Time t = oracle::random_rat(rng, 0, 4);
    auto next = tick(s, t);
    if (!next) continue;
    bool saturates = std::any_of(s.reservoirs().begin(), s.reservoirs().end(), [&](const Reservoir& r) {
      return r.id != s.hose().position && r.level < r.leak * t.value();
    });
    if (saturates) continue;
    ++checked;
    Rat before{0}, after{0}, leak{0};
    for (const auto& r : s.reservoirs()) {
      before += r.level;
      leak += r.leak;
    }
    for (const auto& r : next->reservoirs()) after += r.level;
    EXPECT_EQ(after, before + (s.hose().rate - leak) * t.value());
  }
}

TEST(NResProperties, TickAdditivity) {
  oracle::Rng rng(32);
  int checked = 0;
  for (int i = 0; i < 20000 && checked < 500; ++i) {
    auto s = random_system(rng);
    Time t1 = oracle::random_rat(rng, 0, 3), t2 = oracle::random_rat(rng, 0, 3);
    auto a = tick(s, t1);
    if (!a) continue;
    auto b = tick(*a, t2);
    auto whole = tick(s, t1 + t2);
    if (!b || !whole) continue;
    bool saturates = false;
    for (const auto& r : s.reservoirs())
      if (r.id != s.hose().position && r.level < r.leak * (t1 + t2).value()) saturates = true;
    if (saturates) continue;
    ++checked;
    EXPECT_EQ(*b, *whole);
  }
  EXPECT_GT(checked, 100);
}

TEST(NResProperties, MoveHoseKeepsReservoirs) {
  oracle::Rng rng(33);
  for (int i = 0; i < 1000; ++i) {
    auto s = random_system(rng);
    for (const auto& step : move_hose_successors(s)) {
      EXPECT_EQ(step.state.reservoirs(), s.reservoirs());
      EXPECT_NE(step.state.hose().position, s.hose().position);
    }
  }
}

TEST(NResProperties, SerializationIgnoresInputOrder) {
  oracle::Rng rng(34);
  for (int i = 0; i < 300; ++i) {
    auto s = random_system(rng);
    auto rs = s.reservoirs();
    std::shuffle(rs.begin(), rs.end(), rng);
    NResState permuted(s.hose(), rs);
    EXPECT_EQ(render(permuted), render(s));
    EXPECT_EQ(permuted, s);
  }
}

TEST(NResProperties, NeedsRefillIsOneDown) {
  oracle::Rng rng(35);
  for (int i = 0; i < 1000; ++i) {
    auto s = random_system(rng);
    EXPECT_EQ(needs_refill(s.reservoirs()), valuation(s, kOneDown));
  }
}

TEST(NResModel, JsonRoundTrip) {
  oracle::Rng rng(36);
  for (int i = 0; i < 200; ++i) {
    auto s = random_system(rng);
    EXPECT_EQ(nres_from_json(json::parse(to_json(s).dump())), s);
  }
}
