#include "riq/prover.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>

#include "riq/parser.hpp"

namespace riq {

ProverLimits default_limits() {
  ProverLimits l;
  if (const char* env = std::getenv("RIQ_MAX_STEPS")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) l.max_steps = static_cast<std::size_t>(v);
  }
  return l;
}

std::string render(Verdict v) {
  switch (v) {
    case Verdict::Proved: return "proved";
    case Verdict::Refuted: return "refuted";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

Sequent subsumption_goal(const Ontology& o, const Concept& c, const Concept& d) {
  Label x{0};
  Sequent s;
  s.consequent = gci_list(o, x);
  s.consequent.push_back({x, Concept::disj(nnf_negate(c), d)});
  return s;
}

ProveResult subsumes(const Ontology& o, const Concept& c, const Concept& d, const ProverLimits& limits) {
  return prove(o, subsumption_goal(o, c, d), limits);
}

CounterModel extract_countermodel(const Ontology& o, const Sequent& goal, const std::set<StructuralAtom>& gamma,
                                  const std::set<LabeledConcept>& seen) {
  std::set<Label> extra;
  for (const auto& lc : seen) extra.insert(lc.label);
  for (const auto& lc : goal.consequent) extra.insert(lc.label);
  EqClasses cls = eq_classes(gamma, extra);

  Signature sig = signature_of(o);
  for (const auto& lc : seen) {
    auto s = signature_of(lc.cpt);
    sig.concepts.insert(s.concepts.begin(), s.concepts.end());
    sig.roles.insert(s.roles.begin(), s.roles.end());
  }
  for (const auto& a : gamma) {
    if (a.kind == StructuralAtom::Kind::Role) sig.roles.insert(a.role.name);
  }

  CounterModel cm;
  Interpretation& I = cm.interpretation;
  I.domain_size = cls.classes.size();
  for (const auto& n : sig.concepts) I.concepts[n];
  for (const auto& r : sig.roles) I.roles[r];
  for (const auto& lc : seen) {
    if (lc.cpt.kind() == ConceptKind::NegName && lc.cpt.atom() != kReservedName) {
      I.concepts[lc.cpt.atom()].insert(cls.of(lc.label));
    }
  }
  for (const auto& a : gamma) {
    if (a.kind != StructuralAtom::Kind::Role) continue;
    std::size_t u = cls.of(a.from), v = cls.of(a.to);
    I.roles[a.role.name].insert(a.role.inverted ? std::make_pair(v, u) : std::make_pair(u, v));
  }
  I.roles = ria_closure(std::move(I.roles), o.rbox);

  for (const auto& [x, k] : cls.class_of) cm.assignment[x] = k;
  if (!is_model(I, o)) throw Error("extracted interpretation is not a model of the ontology");
  Sequent branch{gamma, std::vector<LabeledConcept>(seen.begin(), seen.end())};
  if (!falsifies(I, cm.assignment, o, branch) || !falsifies(I, cm.assignment, o, goal)) {
    throw Error("extracted interpretation does not refute the branch");
  }
  Assignment restricted;
  for (Label x : labels_of(goal)) restricted[x] = cm.assignment.at(x);
  cm.assignment = std::move(restricted);
  return cm;
}

namespace {

constexpr int kStages = 7;  // s=, or, and, exists, forall, atmost, atleast

struct Item {
  RuleTag tag;
  LabeledConcept principal;
  std::vector<Label> targets;
};

struct Branch {
  Sequent seq;
  std::set<LabeledConcept> seen;
  std::set<LabeledConcept> expanded;
  std::uint32_t next_label = 0;
  std::size_t label_count = 0;
  int stage = kStages;
  bool progress = true;
  bool closed = false;
  std::deque<Item> queue;
  std::optional<Propagation> prop;
};

struct Task {
  Branch branch;
  std::vector<ProofNode> chain;
  bool branching = false;
  bool failed = false;
  std::vector<Branch> children;
  std::size_t next_child = 0;
  std::vector<ProofNode> child_proofs;

  explicit Task(Branch b) : branch(std::move(b)) {}
};

class Search {
 public:
  Search(const Ontology& o, const ProverLimits& limits)
      : o_(o), g_(build_rsystem(o)), ctx_{o, g_}, limits_(limits) {}

  ProveResult run(const Sequent& goal);

 private:
  enum class Outcome { Closed, Branching, Saturated, BranchLimit, StepLimit };

  Outcome step_branch(Task& t);
  void note_new(Branch& b, std::size_t from, bool gamma_changed);
  void collect(Branch& b);
  bool applicable(Branch& b, const Item& item);
  const Propagation& propagation(Branch& b) {
    if (!b.prop) b.prop = compute_propagation(g_, b.seq);
    return *b.prop;
  }
  bool covered(Branch& b, std::size_t cls, const Concept& c) {
    for (Label z : propagation(b).graph.nodes.classes[cls]) {
      if (b.seen.count({z, c})) return true;
    }
    return false;
  }
  ProofNode leaf(const Branch& b);
  static ProofNode fold(std::vector<ProofNode>& chain);

  const Ontology& o_;
  RSystem g_;
  RuleContext ctx_;
  ProverLimits limits_;
  std::size_t steps_ = 0;
};

void Search::note_new(Branch& b, std::size_t from, bool gamma_changed) {
  for (std::size_t i = from; i < b.seq.consequent.size(); ++i) {
    const auto& lc = b.seq.consequent[i];
    b.seen.insert(lc);
    if (lc.cpt.is_literal()) {
      Concept neg = nnf_negate(lc.cpt);
      if (b.seen.count({lc.label, neg})) b.closed = true;
    } else if (lc.cpt.kind() == ConceptKind::AtLeast && lc.cpt.count() == 0) {
      b.closed = true;
    }
  }
  if (gamma_changed) {
    b.prop.reset();
    bool has_eq = false, has_neq = false;
    for (const auto& a : b.seq.antecedent) {
      has_eq |= a.kind == StructuralAtom::Kind::Eq;
      has_neq |= a.kind == StructuralAtom::Kind::Neq;
    }
    if (!has_eq || !has_neq) return;
    for (const auto& a : b.seq.antecedent) {
      if (a.kind == StructuralAtom::Kind::Neq && propagation(b).graph.nodes.same(a.from, a.to)) b.closed = true;
    }
  }
}

ProofNode Search::leaf(const Branch& b) {
  const auto& d = b.seq.consequent;
  for (const auto& a : b.seq.antecedent) {
    if (a.kind != StructuralAtom::Kind::Neq) continue;
    if (eq_path(b.seq.antecedent, a.from, a.to)) {
      Witness sel;
      sel.neq = a;
      RuleInstance inst = apply_rule(ctx_, RuleTag::IdEq, b.seq, sel);
      return {RuleTag::IdEq, b.seq, inst.witness, {}};
    }
  }
  std::map<LabeledConcept, std::size_t> first;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i].cpt.is_literal()) {
      auto it = first.find({d[i].label, nnf_negate(d[i].cpt)});
      if (it != first.end()) {
        Witness sel;
        sel.principal = it->second;
        sel.partner = i;
        RuleInstance inst = apply_rule(ctx_, RuleTag::Id, b.seq, sel);
        return {RuleTag::Id, b.seq, inst.witness, {}};
      }
      first.emplace(d[i], i);
    } else if (d[i].cpt.kind() == ConceptKind::AtLeast && d[i].cpt.count() == 0) {
      Witness sel;
      sel.principal = i;
      RuleInstance inst = apply_rule(ctx_, RuleTag::AtLeast, b.seq, sel);
      return {RuleTag::AtLeast, b.seq, inst.witness, {}};
    }
  }
  throw Error("branch marked closed without an axiom");
}

ProofNode Search::fold(std::vector<ProofNode>& chain) {
  ProofNode proof = std::move(chain.back());
  for (std::size_t i = chain.size() - 1; i-- > 0;) {
    chain[i].premises.push_back(std::move(proof));
    proof = std::move(chain[i]);
  }
  chain.clear();
  return proof;
}

void Search::collect(Branch& b) {
  std::set<LabeledConcept> distinct;
  auto kind_for = [](int stage) {
    switch (stage) {
      case 1: return ConceptKind::Or;
      case 2: return ConceptKind::And;
      case 3: return ConceptKind::Exists;
      case 4: return ConceptKind::Forall;
      case 5: return ConceptKind::AtMost;
      default: return ConceptKind::AtLeast;
    }
  };
  if (b.stage == 0) {
    const auto& nodes = propagation(b).graph.nodes;
    for (const auto& lc : b.seen) {
      if (!lc.cpt.is_literal()) continue;
      for (Label y : nodes.classes[nodes.of(lc.label)]) {
        if (y != lc.label && !b.seen.count({y, lc.cpt})) b.queue.push_back({RuleTag::SubstEq, lc, {y}});
      }
    }
    return;
  }
  ConceptKind kind = kind_for(b.stage);
  for (const auto& lc : b.seq.consequent) {
    if (lc.cpt.kind() != kind || !distinct.insert(lc).second) continue;
    switch (kind) {
      case ConceptKind::Or:
      case ConceptKind::And:
      case ConceptKind::Forall:
      case ConceptKind::AtMost:
        if (!b.expanded.count(lc)) {
          RuleTag tag = kind == ConceptKind::Or    ? RuleTag::Or
                        : kind == ConceptKind::And ? RuleTag::And
                        : kind == ConceptKind::Forall ? RuleTag::Forall
                                                      : RuleTag::AtMost;
          b.queue.push_back({tag, lc, {}});
        }
        break;
      case ConceptKind::Exists:
      case ConceptKind::AtLeast: {
        const auto& p = propagation(b);
        std::size_t cx = p.graph.nodes.of(lc.label);
        std::vector<std::size_t> open;
        for (std::size_t k : p.reach.successors(lc.cpt.role(), cx)) {
          if (!covered(b, k, lc.cpt.body())) open.push_back(k);
        }
        if (kind == ConceptKind::Exists) {
          for (std::size_t k : open) b.queue.push_back({RuleTag::Exists, lc, {p.graph.nodes.classes[k].front()}});
        } else if (lc.cpt.count() > 0 && open.size() >= lc.cpt.count()) {
          std::vector<Label> ys;
          for (std::size_t i = 0; i < lc.cpt.count(); ++i) ys.push_back(p.graph.nodes.classes[open[i]].front());
          b.queue.push_back({RuleTag::AtLeast, lc, ys});
        }
        break;
      }
      default: break;
    }
  }
}

bool Search::applicable(Branch& b, const Item& item) {
  switch (item.tag) {
    case RuleTag::SubstEq: return !b.seen.count({item.targets[0], item.principal.cpt});
    case RuleTag::Exists: {
      const auto& nodes = propagation(b).graph.nodes;
      return !covered(b, nodes.of(item.targets[0]), item.principal.cpt.body());
    }
    case RuleTag::AtLeast: {
      const auto& nodes = propagation(b).graph.nodes;
      std::set<std::size_t> classes;
      for (Label y : item.targets) {
        std::size_t k = nodes.of(y);
        if (!classes.insert(k).second || covered(b, k, item.principal.cpt.body())) return false;
      }
      return true;
    }
    default: return !b.expanded.count(item.principal);
  }
}

Search::Outcome Search::step_branch(Task& t) {
  Branch& b = t.branch;
  while (true) {
    if (b.closed) {
      t.chain.push_back(leaf(b));
      return Outcome::Closed;
    }
    if (steps_ >= limits_.max_steps) return Outcome::StepLimit;
    if (b.queue.empty()) {
      if (b.stage == kStages - 1) {
        if (!b.progress) return Outcome::Saturated;
        b.progress = false;
        b.stage = 0;
      } else if (b.stage == kStages) {
        b.stage = 0;
        b.progress = false;
      } else {
        ++b.stage;
      }
      collect(b);
      continue;
    }
    Item item = std::move(b.queue.front());
    b.queue.pop_front();
    if (!applicable(b, item)) continue;
    auto it = std::find(b.seq.consequent.begin(), b.seq.consequent.end(), item.principal);
    if (it == b.seq.consequent.end()) continue;

    Witness sel;
    sel.principal = static_cast<std::size_t>(it - b.seq.consequent.begin());
    sel.targets = item.targets;
    std::size_t need = 0;
    if (item.tag == RuleTag::Forall) need = 1;
    if (item.tag == RuleTag::AtMost) need = static_cast<std::size_t>(item.principal.cpt.count()) + 1;
    if (need > 0) {
      if (b.label_count + need > limits_.max_labels) return Outcome::BranchLimit;
      for (std::size_t i = 0; i < need; ++i) sel.fresh.push_back(Label{b.next_label + static_cast<std::uint32_t>(i)});
    }

    bool reach_rule = item.tag == RuleTag::Exists || item.tag == RuleTag::AtLeast;
    RuleInstance inst = apply_rule(ctx_, item.tag, b.seq, sel, reach_rule ? &propagation(b) : nullptr);
    ++steps_;
    b.progress = true;
    b.next_label += static_cast<std::uint32_t>(need);
    b.label_count += need;
    bool removes = item.tag == RuleTag::Or || item.tag == RuleTag::And || item.tag == RuleTag::Forall ||
                   item.tag == RuleTag::AtMost;
    if (removes) b.expanded.insert(item.principal);
    std::size_t base = b.seq.consequent.size() - (removes ? 1 : 0);

    t.chain.push_back({item.tag, b.seq, std::move(inst.witness), {}});
    if (inst.premises.size() == 1) {
      bool gamma_changed = inst.premises[0].antecedent.size() != b.seq.antecedent.size();
      b.seq = std::move(inst.premises[0]);
      note_new(b, base, gamma_changed);
      continue;
    }
    if (inst.premises.empty()) return Outcome::Closed;
    for (auto& p : inst.premises) {
      Branch child;
      child.seen = b.seen;
      child.expanded = b.expanded;
      child.next_label = b.next_label;
      child.label_count = b.label_count;
      child.stage = b.stage;
      child.progress = true;
      child.queue = b.queue;
      bool gamma_changed = p.antecedent.size() != b.seq.antecedent.size();
      if (!gamma_changed) child.prop = b.prop;
      child.seq = std::move(p);
      note_new(child, base, gamma_changed);
      t.children.push_back(std::move(child));
    }
    return Outcome::Branching;
  }
}

ProveResult Search::run(const Sequent& goal) {
  validate_sequent(goal);
  for (const auto& lc : goal.consequent) require_simple_counts(o_, lc.cpt);

  ProveResult result;
  Branch root;
  root.seq = goal;
  std::set<Label> ls = labels_of(goal);
  root.next_label = ls.rbegin()->id + 1;
  root.label_count = ls.size();
  note_new(root, 0, true);

  std::vector<Task> stack;
  stack.emplace_back(std::move(root));
  bool unknown = false;
  std::string unknown_reason;

  auto deliver = [&](ProofNode proof, bool failed) -> bool {
    stack.pop_back();
    if (stack.empty()) {
      if (!failed) result.proof = std::move(proof);
      return true;
    }
    if (failed) {
      stack.back().failed = true;
    } else {
      stack.back().child_proofs.push_back(std::move(proof));
    }
    return false;
  };

  while (!stack.empty()) {
    Task& t = stack.back();
    if (t.branching) {
      if (t.next_child < t.children.size()) {
        Branch child = std::move(t.children[t.next_child++]);
        stack.emplace_back(std::move(child));
        continue;
      }
      bool failed = t.failed;
      ProofNode proof;
      if (!failed) {
        t.chain.back().premises = std::move(t.child_proofs);
        proof = fold(t.chain);
      }
      if (deliver(std::move(proof), failed)) break;
      continue;
    }
    Outcome out = step_branch(t);
    switch (out) {
      case Outcome::Closed: {
        ProofNode proof = fold(t.chain);
        if (deliver(std::move(proof), false)) goto done;
        break;
      }
      case Outcome::Branching: t.branching = true; break;
      case Outcome::Saturated: {
        result.verdict = Verdict::Refuted;
        result.countermodel = extract_countermodel(o_, goal, t.branch.seq.antecedent, t.branch.seen);
        for (const auto& task : stack) {
          for (const auto& n : task.chain) {
            std::string line = rule_name(n.rule);
            if (n.witness.principal != kNone && n.witness.principal < n.conclusion.consequent.size()) {
              line += " " + render(n.conclusion.consequent[n.witness.principal]);
            }
            result.trace.push_back(std::move(line));
          }
        }
        result.steps = steps_;
        return result;
      }
      case Outcome::BranchLimit:
        unknown = true;
        unknown_reason = "label limit reached on a branch";
        if (deliver({}, true)) goto done;
        break;
      case Outcome::StepLimit:
        result.verdict = Verdict::Unknown;
        result.reason = "step limit reached";
        result.steps = steps_;
        return result;
    }
  }
done:
  result.steps = steps_;
  if (result.proof && !unknown) {
    result.verdict = Verdict::Proved;
  } else {
    result.proof.reset();
    result.verdict = Verdict::Unknown;
    result.reason = unknown_reason.empty() ? "search incomplete" : unknown_reason;
  }
  return result;
}

}  // namespace

ProveResult prove(const Ontology& o, const Sequent& goal, const ProverLimits& limits) {
  Search s(o, limits);
  return s.run(goal);
}

}  // namespace riq
