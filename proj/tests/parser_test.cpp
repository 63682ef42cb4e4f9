#include <gtest/gtest.h>

#include "oracles.hpp"
#include "riq/parser.hpp"

using namespace riq;

namespace {

Concept A() { return Concept::name("A"); }
Concept B() { return Concept::name("B"); }
Role r() { return make_role("r"); }

}  // namespace

TEST(ParseOntology, Lines) {
  Ontology o = parse_ontology("ria: r o s <= t\ngci: A <= B\n");
  ASSERT_EQ(o.rbox.size(), 1u);
  EXPECT_EQ(o.rbox[0], (RIA{{r(), make_role("s")}, make_role("t")}));
  ASSERT_EQ(o.tbox.size(), 1u);
  EXPECT_EQ(o.tbox[0], Concept::disj(Concept::neg_name("A"), B()));

  Ontology top = parse_ontology("gci: TOP <= forall r . A");
  EXPECT_EQ(top.tbox[0], Concept::forall(r(), A()));

  Ontology inv = parse_ontology("ria: r- <= s");
  EXPECT_EQ(inv.rbox[0], (RIA{{r().inverse()}, make_role("s")}));
}

TEST(ParseOntology, CommentsAndRoleDeclarations) {
  Ontology o = parse_ontology("# header\nroles: r, s\n\ngci: A <= some s . B  # trailing\n");
  EXPECT_EQ(o.declared_roles, (std::set<std::string>{"r", "s"}));
  EXPECT_EQ(o.tbox.size(), 1u);
}

TEST(ParseOntology, ErrorsCarryPositions) {
  try {
    parse_ontology("gci: A <= B\ngci: A <= (B and\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_GT(e.column(), 0u);
  }
  EXPECT_THROW(parse_ontology("ria: r o r <= r\ngci: atmost 1 r . A <= B"), Error);
  EXPECT_THROW(parse_concept("atmost 3000000000 r . A"), Error);
  EXPECT_THROW(parse_concept("_T"), Error);
  EXPECT_THROW(parse_concept("A'"), Error);
}

TEST(ParseOntology, StrictModeRejectsUndeclaredRoles) {
  ParseOptions strict;
  strict.strict = true;
  EXPECT_THROW(parse_ontology("roles: r\ngci: A <= some s . B", strict), Error);
  EXPECT_NO_THROW(parse_ontology("roles: r, s\ngci: A <= some s . B", strict));
}

TEST(ParseConcept, Examples) {
  EXPECT_EQ(parse_concept("A and some r . B"), Concept::conj(A(), Concept::exists(r(), B())));
  EXPECT_EQ(parse_concept("atleast 2 r . (A or B)"), Concept::at_least(2, r(), Concept::disj(A(), B())));
  EXPECT_EQ(parse_concept("not atmost 1 r . A"), Concept::at_least(2, r(), A()));
  EXPECT_EQ(parse_concept("not (A and B)"), Concept::disj(Concept::neg_name("A"), Concept::neg_name("B")));
  EXPECT_EQ(parse_concept("not (some r . A)"), Concept::forall(r(), Concept::neg_name("A")));
  EXPECT_TRUE(parse_concept("TOP").is_top());
  EXPECT_TRUE(parse_concept("BOT").is_bottom());
}

TEST(ParseConcept, Precedence) {
  EXPECT_EQ(parse_concept("A or B and not A"),
            Concept::disj(A(), Concept::conj(B(), Concept::neg_name("A"))));
  EXPECT_EQ(parse_concept("not A and B"), Concept::conj(Concept::neg_name("A"), B()));
  EXPECT_EQ(parse_concept("some r . A and B"), Concept::exists(r(), Concept::conj(A(), B())));
  EXPECT_EQ(parse_concept("(some r . A) and B"), Concept::conj(Concept::exists(r(), A()), B()));
  EXPECT_EQ(parse_concept("only r- . A"), Concept::forall(r().inverse(), A()));
  EXPECT_EQ(parse_concept("exists r . A"), parse_concept("some r . A"));
}

TEST(ParseGoal, SplitsAtSubsumption) {
  RawGCI g = parse_goal("A and B <= A");
  EXPECT_EQ(g.sub, Concept::conj(A(), B()));
  EXPECT_EQ(g.sup, A());
}

TEST(Render, Examples) {
  EXPECT_EQ(render(Concept::conj(A(), Concept::exists(r(), B()))), "A and some r . B");
  EXPECT_EQ(render(Concept::top()), "TOP");
  EXPECT_EQ(render(Concept::bottom()), "BOT");
}

TEST(Render, ConceptRoundTrip) {
  oracle::Gen gen(17);
  oracle::ConceptShape shape;
  shape.names = {"A", "B", "C"};
  shape.roles = {"r", "s"};
  shape.depth = 6;
  shape.max_count = 4;
  for (int i = 0; i < 1000; ++i) {
    Concept c = gen.random_concept(shape);
    ASSERT_EQ(parse_concept(render(c)), c) << render(c);
  }
}

TEST(Render, OntologyRoundTrip) {
  oracle::Gen gen(23);
  oracle::ConceptShape shape;
  shape.roles = {"r", "s"};
  shape.depth = 3;
  for (int i = 0; i < 200; ++i) {
    std::vector<RIA> rbox;
    if (gen.coin(50)) rbox.push_back({{make_role("s"), make_role("s")}, make_role("s")});
    shape.roles = rbox.empty() ? std::vector<std::string>{"r", "s"} : std::vector<std::string>{"r"};
    std::vector<RawGCI> gcis;
    for (int k = gen.pick(3); k > 0; --k) gcis.push_back({gen.random_concept(shape), gen.random_concept(shape)});
    Ontology o = normalize_ontology(gcis, rbox, {"r", "s"});
    Ontology back = parse_ontology(render(o));
    ASSERT_EQ(back, o) << render(o);
  }
}
