#include <gtest/gtest.h>

#include <random>

#include "riq/parser.hpp"
#include "riq/prover.hpp"
#include "riq/semantics.hpp"
#include "riq/sequent.hpp"

using namespace riq;

namespace {

Label L(std::uint32_t i) { return Label{i}; }
Role r() { return make_role("r"); }
Concept A() { return Concept::name("A"); }
Concept notA() { return Concept::neg_name("A"); }

std::set<std::set<Label>> partition(const EqClasses& e) {
  std::set<std::set<Label>> out;
  for (const auto& c : e.classes) out.insert({c.begin(), c.end()});
  return out;
}

Sequent example_one() {
  Sequent s;
  s.antecedent = {StructuralAtom::role_atom(r(), L(0), L(1)), StructuralAtom::role_atom(r(), L(0), L(2)),
                  StructuralAtom::role_atom(r(), L(0), L(3)), StructuralAtom::eq(L(2), L(3))};
  s.consequent = {{L(0), Concept::at_least(2, r(), Concept::name("C"))}};
  return s;
}

ProofNode excluded_middle() {
  ProofNode leaf;
  leaf.rule = RuleTag::Id;
  leaf.conclusion = parse_sequent("|- x0 : A, x0 : not A");
  leaf.witness.principal = 0;
  leaf.witness.partner = 1;
  ProofNode root;
  root.rule = RuleTag::Or;
  root.conclusion = parse_sequent("|- x0 : A or not A");
  root.witness.principal = 0;
  root.premises = {leaf};
  return root;
}

ProofNode* find_rule(ProofNode& p, RuleTag t) {
  if (p.rule == t) return &p;
  for (auto& q : p.premises) {
    if (auto* f = find_rule(q, t)) return f;
  }
  return nullptr;
}

}  // namespace

TEST(EqClasses, Examples) {
  EXPECT_EQ(partition(eq_classes({StructuralAtom::role_atom(r(), L(0), L(1))})),
            (std::set<std::set<Label>>{{L(0)}, {L(1)}}));
  EXPECT_EQ(partition(eq_classes(example_one().antecedent)),
            (std::set<std::set<Label>>{{L(1)}, {L(0)}, {L(2), L(3)}}));
  EqClasses t = eq_classes({StructuralAtom::eq(L(0), L(1)), StructuralAtom::eq(L(1), L(2))});
  EXPECT_EQ(partition(t), (std::set<std::set<Label>>{{L(0), L(1), L(2)}}));
  EXPECT_TRUE(t.same(L(2), L(0)));
  auto path = eq_path({StructuralAtom::eq(L(0), L(1)), StructuralAtom::eq(L(2), L(1))}, L(0), L(2));
  ASSERT_TRUE(path);
  EXPECT_EQ(*path, (std::vector<Label>{L(0), L(1), L(2)}));
}

TEST(PropagationGraph, Examples) {
  PropagationGraph g = build_prop_graph(example_one());
  EXPECT_EQ(g.nodes.classes.size(), 3u);
  EXPECT_EQ(g.edges.size(), 4u);
  for (const auto& e : g.edges) {
    LabeledEdge back{e.to, e.role.inverse(), e.from};
    EXPECT_NE(std::find(g.edges.begin(), g.edges.end(), back), g.edges.end());
  }

  PropagationGraph single = build_prop_graph(parse_sequent("|- x0 : A"));
  EXPECT_EQ(single.nodes.classes.size(), 1u);
  EXPECT_TRUE(single.edges.empty());

  PropagationGraph merged = build_prop_graph(parse_sequent("x0 = x1, r(x0,x2) |- x0 : A"));
  EXPECT_EQ(merged.nodes.classes.size(), 2u);
  ASSERT_EQ(merged.edges.size(), 2u);
  for (const auto& e : merged.edges) {
    if (e.role == r()) {
      EXPECT_EQ(e.from, merged.nodes.of(L(1)));
      EXPECT_EQ(e.to, merged.nodes.of(L(2)));
    }
  }
}

TEST(PropReachable, Examples) {
  Ontology empty = make_ontology({}, {});
  RSystem g = build_rsystem(empty);
  Sequent s = example_one();
  EXPECT_TRUE(prop_reachable(g, s, L(0), L(1), r()));
  EXPECT_TRUE(prop_reachable(g, s, L(0), L(3), r()));
  EXPECT_FALSE(prop_reachable(g, s, L(0), L(0), r()));
  EXPECT_FALSE(prop_reachable(g, s, L(1), L(0), r()));
  EXPECT_TRUE(prop_reachable(g, s, L(1), L(0), r().inverse()));

  EXPECT_FALSE(prop_reachable(g, parse_sequent("|- x0 : A"), L(0), L(0), r()));

  Ontology chain = parse_ontology("ria: r o s <= t");
  RSystem gc = build_rsystem(chain);
  Sequent c = parse_sequent("r(x0,x1), s(x1,x2) |- x0 : A");
  auto w = prop_reachable(gc, c, L(0), L(2), make_role("t"));
  ASSERT_TRUE(w);
  EXPECT_TRUE(check_path_witness(gc, c, L(0), make_role("t"), *w));
}

TEST(ApplyRule, ExampleOneAtLeast) {
  Ontology o = make_ontology({}, {});
  RSystem g = build_rsystem(o);
  RuleContext ctx{o, g};
  Sequent s = example_one();
  Witness sel;
  sel.principal = 0;
  sel.targets = {L(1), L(2)};
  RuleInstance inst = apply_rule(ctx, RuleTag::AtLeast, s, sel);
  ASSERT_EQ(inst.premises.size(), 3u);
  EXPECT_EQ(render(inst.premises[0]), render(s) + ", x1 : C");
  EXPECT_EQ(render(inst.premises[1]), render(s) + ", x2 : C");
  EXPECT_TRUE(inst.premises[2].antecedent.count(StructuralAtom::eq(L(1), L(2))));
  sel.targets = {L(2), L(3)};
  EXPECT_NO_THROW(apply_rule(ctx, RuleTag::AtLeast, s, sel));
  sel.targets = {L(0), L(1)};
  EXPECT_THROW(apply_rule(ctx, RuleTag::AtLeast, s, sel), Error);
}

TEST(ApplyRule, ZeroAtLeastHasNoPremises) {
  Ontology o = make_ontology({}, {});
  RSystem g = build_rsystem(o);
  RuleContext ctx{o, g};
  Sequent s{{}, {{L(0), Concept::at_least(0, r(), A())}}};
  Witness sel;
  sel.principal = 0;
  EXPECT_TRUE(apply_rule(ctx, RuleTag::AtLeast, s, sel).premises.empty());
}

TEST(ApplyRule, OrAndIdEq) {
  Ontology o = make_ontology({}, {});
  RSystem g = build_rsystem(o);
  RuleContext ctx{o, g};
  Witness sel;
  sel.principal = 0;
  RuleInstance orr = apply_rule(ctx, RuleTag::Or, parse_sequent("r(x0,x1) |- x0 : A or B"), sel);
  ASSERT_EQ(orr.premises.size(), 1u);
  EXPECT_TRUE(same_sequent(orr.premises[0], parse_sequent("r(x0,x1) |- x0 : A, x0 : B")));

  Sequent ideq = parse_sequent("r(x0,x1), r(x0,x2), x1 = x2, x1 != x2 |- x0 : A");
  Witness neq;
  neq.neq = StructuralAtom::neq(L(1), L(2));
  EXPECT_TRUE(apply_rule(ctx, RuleTag::IdEq, ideq, neq).premises.empty());
  Sequent apart = parse_sequent("r(x0,x1), r(x0,x2), x1 != x2 |- x0 : A");
  EXPECT_THROW(apply_rule(ctx, RuleTag::IdEq, apart, neq), Error);
}

TEST(ApplyRule, ForallUsesFreshLabelAndGciList) {
  Ontology o = parse_ontology("gci: A <= B");
  RSystem g = build_rsystem(o);
  RuleContext ctx{o, g};
  Sequent s = parse_sequent("r(x0,x3) |- x0 : only r . A");
  Witness sel;
  sel.principal = 0;
  RuleInstance inst = apply_rule(ctx, RuleTag::Forall, s, sel);
  ASSERT_EQ(inst.witness.fresh.size(), 1u);
  Label y = inst.witness.fresh[0];
  for (Label z : labels_of(s)) EXPECT_GT(y.id, z.id);
  const Sequent& p = inst.premises[0];
  EXPECT_TRUE(p.antecedent.count(StructuralAtom::role_atom(r(), L(0), y)));
  EXPECT_EQ(p.consequent.size(), 2u);
  EXPECT_TRUE(is_valid_sequent(p));
}

TEST(ApplyRule, AtMostAddsInequalities) {
  Ontology o = make_ontology({}, {});
  RSystem g = build_rsystem(o);
  RuleContext ctx{o, g};
  Witness sel;
  sel.principal = 0;
  RuleInstance inst = apply_rule(ctx, RuleTag::AtMost, parse_sequent("|- x0 : atmost 1 r . A"), sel);
  const Sequent& p = inst.premises[0];
  ASSERT_EQ(inst.witness.fresh.size(), 2u);
  Label y0 = inst.witness.fresh[0], y1 = inst.witness.fresh[1];
  EXPECT_TRUE(p.antecedent.count(StructuralAtom::neq(y0, y1)));
  EXPECT_TRUE(p.antecedent.count(StructuralAtom::role_atom(r(), L(0), y0)));
  EXPECT_EQ(p.consequent.size(), 2u);
  EXPECT_EQ(p.consequent[0].cpt, notA());
}

TEST(CheckProof, HandBuiltAndSize) {
  Ontology o = make_ontology({}, {});
  ProofNode p = excluded_middle();
  EXPECT_TRUE(check_proof(o, p));
  EXPECT_EQ(proof_size(p), 5u);
  ProofNode broken = p;
  broken.premises[0].witness.partner = 0;
  EXPECT_FALSE(check_proof(o, broken));
}

TEST(CheckProof, ProverProofsAndStaleWitness) {
  Ontology o = parse_ontology("ria: r <= s");
  ProveResult res = subsumes(o, parse_concept("some r . A"), parse_concept("some s . A"));
  ASSERT_EQ(res.verdict, Verdict::Proved);
  ASSERT_TRUE(res.proof);
  EXPECT_TRUE(check_proof(o, *res.proof));

  ProofNode bad = *res.proof;
  ProofNode* ex = find_rule(bad, RuleTag::Exists);
  ASSERT_NE(ex, nullptr);
  ASSERT_FALSE(ex->witness.paths.empty());
  ex->witness.paths[0].word = {make_role("s").inverse()};
  ProofCheck c = check_proof_detailed(o, bad);
  EXPECT_FALSE(c.ok);
  EXPECT_NE(c.message.find("exists"), std::string::npos) << c.message;
}

TEST(ProofJson, RoundTrip) {
  Ontology o = parse_ontology("ria: r <= s\ngci: A <= B");
  ProveResult res = subsumes(o, parse_concept("some r . A"), parse_concept("some s . B"));
  ASSERT_EQ(res.verdict, Verdict::Proved);
  ProofNode back = parse_proof(render(*res.proof));
  EXPECT_TRUE(check_proof(o, back));
  EXPECT_EQ(proof_size(back), proof_size(*res.proof));
  EXPECT_EQ(render(back), render(*res.proof));
}

TEST(Substitute, Examples) {
  Sequent s = parse_sequent("r(x0,x1), x0 != x1 |- x1 : A");
  EXPECT_TRUE(same_sequent(substitute_label(s, L(2), L(1)), parse_sequent("r(x0,x2), x0 != x2 |- x2 : A")));
  EXPECT_TRUE(same_sequent(substitute_label(s, L(0), L(0)), s));
  EXPECT_TRUE(same_sequent(substitute_label(parse_sequent("|- x1 : A"), L(0), L(1)), parse_sequent("|- x0 : A")));
}

TEST(Weaken, Examples) {
  Sequent s = parse_sequent("r(x0,x1) |- x0 : A");
  EXPECT_TRUE(same_sequent(weaken(s, StructuralAtom::neq(L(0), L(1))),
                           parse_sequent("r(x0,x1), x0 != x1 |- x0 : A")));
  EXPECT_EQ(weaken(s, LabeledConcept{L(1), A()}).consequent.size(), 2u);
  EXPECT_THROW(weaken(s, LabeledConcept{L(5), A()}), Error);
  EXPECT_THROW(weaken(s, StructuralAtom::eq(L(0), L(5))), Error);
}

TEST(Sequent, WeightAndValidity) {
  EXPECT_EQ(weight(parse_sequent("|- x0 : A")), 1u);
  EXPECT_EQ(weight(parse_sequent("r(x0,x1) |- x0 : A, x1 : B")), 3u);
  EXPECT_FALSE(is_valid_sequent(parse_sequent("|- x0 : A, x1 : B")));
  EXPECT_FALSE(is_valid_sequent(parse_sequent("r(x0,x1) |- x2 : A")));
  EXPECT_FALSE(is_valid_sequent(parse_sequent("r(x0,x2), r(x1,x2) |- x0 : A")));
  EXPECT_TRUE(is_valid_sequent(parse_sequent("r(x0,x1), r-(x1,x2) |- x2 : A")));
}

// Every rule instance in prover proofs preserves satisfaction downwards on random small models.
TEST(RuleSoundness, PremisesSatisfiedImplyConclusion) {
  Ontology o = parse_ontology("ria: r o r <= r\ngci: A <= some r . B");
  std::vector<std::pair<std::string, std::string>> goals = {
      {"some r . some r . B", "some r . B"},
      {"A", "some r . B"},
      {"atleast 2 s . A", "some s . A"},
      {"(atmost 0 s . A) and some s . B", "some s . not A"},
      {"(only r . A) and some r . B", "some r . (A and B)"},
  };
  std::mt19937 rng(4);
  for (const auto& [c, d] : goals) {
    ProveResult res = subsumes(o, parse_concept(c), parse_concept(d));
    ASSERT_EQ(res.verdict, Verdict::Proved) << c << " <= " << d;
    std::vector<const ProofNode*> todo{&*res.proof};
    while (!todo.empty()) {
      const ProofNode* n = todo.back();
      todo.pop_back();
      std::set<Label> labels = labels_of(n->conclusion);
      for (const auto& p : n->premises) {
        auto more = labels_of(p.conclusion);
        labels.insert(more.begin(), more.end());
      }
      for (int trial = 0; trial < 30; ++trial) {
        Interpretation i;
        i.domain_size = 1 + rng() % 3;
        for (const char* name : {"A", "B"}) {
          i.concepts[name];
          for (std::size_t d = 0; d < i.domain_size; ++d) {
            if (rng() % 2) i.concepts[name].insert(d);
          }
        }
        for (const char* role : {"r", "s"}) {
          i.roles[role];
          for (std::size_t a = 0; a < i.domain_size; ++a) {
            for (std::size_t b = 0; b < i.domain_size; ++b) {
              if (rng() % 3 == 0) i.roles[role].insert({a, b});
            }
          }
        }
        i.roles = ria_closure(i.roles, o.rbox);
        Assignment asg;
        for (Label x : labels) asg[x] = rng() % i.domain_size;
        bool all = true;
        for (const auto& p : n->premises) all = all && seq_satisfied(i, asg, o, p.conclusion);
        if (all) {
          ASSERT_TRUE(seq_satisfied(i, asg, o, n->conclusion)) << rule_name(n->rule) << ": " << render(n->conclusion);
        }
      }
      for (const auto& p : n->premises) todo.push_back(&p);
    }
  }
}
