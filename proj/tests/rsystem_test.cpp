#include <gtest/gtest.h>

#include "oracles.hpp"
#include "riq/rsystem.hpp"

using namespace riq;

namespace {

Role R(const std::string& n, bool inv = false) { return make_role(n, inv); }

std::set<Production> prods(const RSystem& g) { return {g.productions.begin(), g.productions.end()}; }

}  // namespace

TEST(BuildRSystem, TwoProductionsPerRia) {
  RSystem g = build_rsystem(std::vector<RIA>{{{R("r"), R("s")}, R("t")}});
  std::set<Production> want = {{R("t"), {R("r"), R("s")}}, {R("t", true), {R("s", true), R("r", true)}}};
  EXPECT_EQ(prods(g), want);
  EXPECT_TRUE(build_rsystem(std::vector<RIA>{}).productions.empty());
  RSystem unit = build_rsystem(std::vector<RIA>{{{R("r")}, R("s")}});
  std::set<Production> want_unit = {{R("s"), {R("r")}}, {R("s", true), {R("r", true)}}};
  EXPECT_EQ(prods(unit), want_unit);
}

TEST(BuildRSystem, Deduplicates) {
  RSystem g = build_rsystem(std::vector<RIA>{{{R("r")}, R("s")}, {{R("r")}, R("s")}});
  EXPECT_EQ(g.productions.size(), 2u);
}

TEST(DerivesBounded, Examples) {
  RSystem g = build_rsystem(std::vector<RIA>{{{R("r"), R("s")}, R("t")}, {{R("u"), R("v")}, R("s")}});
  auto one = derives_bounded(g, {R("t")}, {R("r"), R("s")}, 3);
  ASSERT_TRUE(one);
  EXPECT_EQ(one->size(), 2u);
  auto zero = derives_bounded(g, {R("r"), R("s")}, {R("r"), R("s")}, 0);
  ASSERT_TRUE(zero);
  EXPECT_EQ(zero->size(), 1u);
  auto two = derives_bounded(g, {R("t")}, {R("r"), R("u"), R("v")}, 2);
  ASSERT_TRUE(two);
  EXPECT_EQ(two->size(), 3u);
  EXPECT_FALSE(derives_bounded(g, {R("t")}, {R("r"), R("u"), R("v")}, 1));
  EXPECT_FALSE(derives_bounded(g, {R("t")}, {R("s"), R("r")}, 5));
}

TEST(InLanguage, TransitiveRole) {
  RSystem g = build_rsystem(std::vector<RIA>{{{R("r"), R("r")}, R("r")}});
  EXPECT_TRUE(in_language(g, R("r"), {R("r")}));
  EXPECT_TRUE(in_language(g, R("r"), {R("r"), R("r"), R("r")}));
  EXPECT_FALSE(in_language(g, R("r"), {R("r"), R("r", true)}));
  EXPECT_TRUE(in_language(g, R("r", true), {R("r", true), R("r", true)}));
  EXPECT_FALSE(in_language(g, R("r"), {}));
}

TEST(CflClosure, SingleEdgeAndInverse) {
  RSystem g = build_rsystem(std::vector<RIA>{});
  ReachTable t = cfl_closure(g, 2, {{0, R("r"), 1}});
  EXPECT_TRUE(t.contains(R("r"), 0, 1));
  EXPECT_TRUE(t.contains(R("r", true), 1, 0));
  EXPECT_FALSE(t.contains(R("r"), 1, 0));
}

TEST(CflClosure, ChainUnderComposition) {
  RSystem g = build_rsystem(std::vector<RIA>{{{R("r"), R("s")}, R("t")}});
  ReachTable t = cfl_closure(g, 3, {{0, R("r"), 1}, {1, R("s"), 2}});
  EXPECT_TRUE(t.contains(R("t"), 0, 2));
  EXPECT_TRUE(t.contains(R("t", true), 2, 0));
  auto w = t.witness(R("t"), 0, 2);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->word, (Word{R("r"), R("s")}));
  EXPECT_EQ(w->nodes, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_TRUE(in_language(g, R("t"), w->word));
}

TEST(CflClosure, WitnessesAreGenuineWalks) {
  oracle::Gen gen(3);
  const std::vector<std::string> names = {"r", "s"};
  for (int i = 0; i < 100; ++i) {
    std::size_t n = 2 + static_cast<std::size_t>(gen.pick(4));
    std::vector<LabeledEdge> edges;
    for (int e = gen.pick(5); e >= 0; --e) {
      edges.push_back({static_cast<std::size_t>(gen.pick(static_cast<int>(n))), gen.role(names, true),
                       static_cast<std::size_t>(gen.pick(static_cast<int>(n)))});
    }
    std::vector<RIA> rbox = {{{gen.role(names, true), gen.role(names, true)}, R(names[gen.pick(2)])}};
    RSystem g = build_rsystem(rbox);
    ReachTable t = cfl_closure(g, n, edges);
    for (const auto& r : t.roles()) {
      for (const auto& [u, v] : t.pairs(r)) {
        auto w = t.witness(r, u, v);
        ASSERT_TRUE(w);
        ASSERT_TRUE(in_language(g, r, w->word));
        ASSERT_EQ(w->nodes.front(), u);
        ASSERT_EQ(w->nodes.back(), v);
        for (std::size_t k = 0; k < w->word.size(); ++k) {
          const Role& a = w->word[k];
          bool found = false;
          for (const auto& e : edges) {
            if (e.from == w->nodes[k] && e.to == w->nodes[k + 1] && e.role == a) found = true;
            if (e.to == w->nodes[k] && e.from == w->nodes[k + 1] && e.role == a.inverse()) found = true;
          }
          ASSERT_TRUE(found);
        }
      }
    }
  }
}

TEST(CflClosure, MonotoneInEdges) {
  oracle::Gen gen(8);
  const std::vector<std::string> names = {"r", "s"};
  RSystem g = build_rsystem(std::vector<RIA>{{{R("r"), R("s")}, R("s")}});
  for (int i = 0; i < 50; ++i) {
    std::vector<LabeledEdge> edges;
    for (int e = 0; e < 4; ++e) {
      edges.push_back({static_cast<std::size_t>(gen.pick(4)), gen.role(names, true),
                       static_cast<std::size_t>(gen.pick(4))});
    }
    ReachTable small = cfl_closure(g, 4, edges);
    edges.push_back({static_cast<std::size_t>(gen.pick(4)), gen.role(names, true),
                     static_cast<std::size_t>(gen.pick(4))});
    ReachTable big = cfl_closure(g, 4, edges);
    for (const auto& r : small.roles()) {
      for (const auto& [u, v] : small.pairs(r)) ASSERT_TRUE(big.contains(r, u, v));
    }
  }
}
