#include <gtest/gtest.h>

#include <cstdlib>

#include "riq/parser.hpp"
#include "riq/prover.hpp"
#include "riq/semantics.hpp"

using namespace riq;

namespace {

ProveResult check(const std::string& onto, const std::string& c, const std::string& d) {
  Ontology o = parse_ontology(onto);
  return subsumes(o, parse_concept(c), parse_concept(d));
}

void expect_proved(const std::string& onto, const std::string& c, const std::string& d) {
  Ontology o = parse_ontology(onto);
  ProveResult r = subsumes(o, parse_concept(c), parse_concept(d));
  ASSERT_EQ(r.verdict, Verdict::Proved) << c << " <= " << d << ": " << r.reason;
  ASSERT_TRUE(r.proof);
  EXPECT_TRUE(check_proof(o, *r.proof)) << check_proof_detailed(o, *r.proof).message;
}

void expect_refuted(const std::string& onto, const std::string& c, const std::string& d) {
  Ontology o = parse_ontology(onto);
  ProveResult r = subsumes(o, parse_concept(c), parse_concept(d));
  ASSERT_EQ(r.verdict, Verdict::Refuted) << c << " <= " << d << ": " << r.reason;
  ASSERT_TRUE(r.countermodel);
  Sequent goal = subsumption_goal(o, parse_concept(c), parse_concept(d));
  EXPECT_TRUE(falsifies(r.countermodel->interpretation, r.countermodel->assignment, o, goal));
}

}  // namespace

TEST(Prove, EmptyOntologyTautology) {
  Ontology o = make_ontology({}, {});
  ProveResult r = prove(o, parse_sequent("|- x0 : not A or (A or B)"));
  ASSERT_EQ(r.verdict, Verdict::Proved);
  EXPECT_TRUE(check_proof(o, *r.proof));
}

TEST(Prove, RefutesWithOneElementModel) {
  ProveResult r = check("", "A", "B");
  ASSERT_EQ(r.verdict, Verdict::Refuted);
  const Interpretation& i = r.countermodel->interpretation;
  EXPECT_EQ(i.domain_size, 1u);
  std::size_t d = r.countermodel->assignment.at(Label{0});
  EXPECT_TRUE(i.concepts.at("A").count(d));
  EXPECT_FALSE(i.concepts.count("B") && i.concepts.at("B").count(d));
}

TEST(Prove, RoleInclusion) { expect_proved("ria: r <= s", "some r . A", "some s . A"); }

TEST(Subsumes, Examples) {
  expect_proved("", "A and B", "A");
  expect_proved("gci: A <= B", "A", "B");
  expect_refuted("", "A", "some r . A");
  ProveResult r = check("", "A", "some r . A");
  const auto& roles = r.countermodel->interpretation.roles;
  EXPECT_TRUE(!roles.count("r") || roles.at("r").empty());
}

TEST(Subsumes, Quantifiers) {
  expect_proved("", "(only r . A) and some r . B", "some r . (A and B)");
  expect_refuted("", "some r . A", "only r . A");
  expect_proved("", "some r . A", "not only r . not A");
  expect_proved("", "some r- . some r . A", "some r- . some r . A");
  expect_proved("", "some r . only r- . A", "A");
}

TEST(Subsumes, RoleHierarchies) {
  expect_proved("ria: r o r <= r", "some r . some r . A", "some r . A");
  expect_refuted("", "some r . some r . A", "some r . A");
  expect_proved("ria: r o s <= t", "some r . some s . A", "some t . A");
  expect_proved("ria: r- <= s", "some r . A", "some r . some s . A or some r . A");
  expect_proved("ria: r- <= s", "A", "only r . some s . A");
  expect_proved("ria: r o r <= r", "only r . A", "only r . only r . A");
}

TEST(Subsumes, Counting) {
  expect_proved("", "atleast 2 r . A", "some r . A");
  expect_proved("", "atleast 2 r . A", "atleast 1 r . TOP");
  expect_refuted("", "atleast 1 r . A", "atleast 2 r . A");
  expect_proved("", "(atmost 0 r . A) and some r . B", "some r . not A");
  expect_proved("", "(atmost 1 r . A) and (some r . (A and B)) and some r . (A and C)", "some r . (A and B and C)");
  expect_refuted("", "atmost 1 r . A", "atmost 0 r . A");
  expect_proved("", "TOP", "atleast 0 r . A");
  expect_refuted("", "TOP", "atleast 1 r . A");
}

TEST(Subsumes, Tbox) {
  expect_proved("gci: A <= some r . B\ngci: B <= C", "A", "some r . C");
  expect_proved("gci: TOP <= only r . A", "some r . B", "some r . (A and B)");
  expect_refuted("gci: A <= B", "B", "A");
}

TEST(ExtractCountermodel, ClosesRoleInclusions) {
  Ontology o = parse_ontology("ria: r o s <= t");
  ProveResult r = subsumes(o, parse_concept("some r . some s . A"), parse_concept("some t . B"));
  ASSERT_EQ(r.verdict, Verdict::Refuted);
  const Interpretation& i = r.countermodel->interpretation;
  EXPECT_TRUE(is_model(i, o));
  EXPECT_FALSE(i.roles.at("t").empty());
}

TEST(Limits, UnknownWhenTheBudgetRunsOut) {
  Ontology o = parse_ontology("gci: TOP <= some r . A");
  ProverLimits tiny;
  tiny.max_steps = 3;
  ProveResult r = subsumes(o, parse_concept("A"), parse_concept("B"), tiny);
  EXPECT_EQ(r.verdict, Verdict::Unknown);
  EXPECT_FALSE(r.reason.empty());
}

TEST(Limits, EnvironmentOverridesSteps) {
  ::setenv("RIQ_MAX_STEPS", "123", 1);
  EXPECT_EQ(default_limits().max_steps, 123u);
  ::unsetenv("RIQ_MAX_STEPS");
  EXPECT_EQ(default_limits().max_steps, 50000u);
}

TEST(Determinism, SameInputSameResult) {
  Ontology o = parse_ontology("ria: r o r <= r\ngci: A <= some r . B");
  Concept c = parse_concept("A and only r . C");
  Concept d = parse_concept("some r . (B and C)");
  ProveResult a = subsumes(o, c, d);
  ProveResult b = subsumes(o, c, d);
  ASSERT_EQ(a.verdict, b.verdict);
  EXPECT_EQ(a.steps, b.steps);
  if (a.proof) EXPECT_EQ(render(*a.proof), render(*b.proof));
}
