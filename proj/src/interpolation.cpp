#include "riq/interpolation.hpp"

#include <algorithm>
#include <json.hpp>

#include "riq/parser.hpp"
#include "riq/semantics.hpp"

namespace riq {

namespace {

struct Element {
  bool is_atom;
  StructuralAtom atom;
  std::optional<LabeledConcept> lc;
};

std::vector<Element> elements(const MiniSequent& m) {
  std::vector<Element> out;
  for (const auto& a : m.antecedent) out.push_back({true, a, std::nullopt});
  for (const auto& lc : m.consequent) out.push_back({false, {}, lc});
  return out;
}

// Adds the negation of e to m.
void add_negated(MiniSequent& m, const Element& e) {
  if (e.is_atom) {
    StructuralAtom a = e.atom;
    a.kind = a.kind == StructuralAtom::Kind::Eq ? StructuralAtom::Kind::Neq : StructuralAtom::Kind::Eq;
    m.antecedent.insert(a);
  } else {
    m.consequent.insert({e.lc->label, nnf_negate(e.lc->cpt)});
  }
}

bool subset(const MiniSequent& a, const MiniSequent& b) {
  return std::includes(b.antecedent.begin(), b.antecedent.end(), a.antecedent.begin(), a.antecedent.end()) &&
         std::includes(b.consequent.begin(), b.consequent.end(), a.consequent.begin(), a.consequent.end());
}

std::size_t size_of(const MiniSequent& m) { return m.antecedent.size() + m.consequent.size(); }

}  // namespace

bool dominates(const MiniSequent& a, const MiniSequent& b) { return subset(b, a); }

Interpolant orthogonal(const Interpolant& g) {
  std::vector<MiniSequent> acc{MiniSequent{}};
  for (const auto& member : g) {
    std::vector<MiniSequent> next;
    for (const auto& e : elements(member)) {
      for (const auto& partial : acc) {
        MiniSequent m = partial;
        add_negated(m, e);
        next.push_back(std::move(m));
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    acc = std::move(next);
  }
  return Interpolant(acc.begin(), acc.end());
}

Interpolant reduce_subsumed(const Interpolant& g) {
  std::vector<const MiniSequent*> by_size;
  for (const auto& m : g) by_size.push_back(&m);
  std::stable_sort(by_size.begin(), by_size.end(),
                   [](const MiniSequent* a, const MiniSequent* b) { return size_of(*a) < size_of(*b); });
  std::vector<const MiniSequent*> kept;
  for (const MiniSequent* m : by_size) {
    bool redundant = false;
    for (const MiniSequent* k : kept) {
      if (subset(*k, *m)) {
        redundant = true;
        break;
      }
    }
    if (!redundant) kept.push_back(m);
  }
  Interpolant out;
  for (const MiniSequent* m : kept) out.insert(*m);
  return out;
}

Interpolant orthogonal_reduced(const Interpolant& g, std::size_t max_members) {
  Interpolant acc{MiniSequent{}};
  for (const auto& member : g) {
    Interpolant next;
    for (const auto& e : elements(member)) {
      for (const auto& partial : acc) {
        MiniSequent m = partial;
        add_negated(m, e);
        next.insert(std::move(m));
        if (next.size() > max_members) throw Error("interpolant too large");
      }
    }
    acc = reduce_subsumed(next);
  }
  return acc;
}

Interpolant box_interpolant(const Role& r, Label x, Label y, const Interpolant& g) {
  Interpolant out;
  for (const auto& m : g) {
    if (antecedent_labels(m.antecedent).count(y)) throw Error("label " + render(y) + " occurs in an (in)equality");
    MiniSequent res;
    res.antecedent = m.antecedent;
    std::vector<Concept> at_y;
    for (const auto& lc : m.consequent) {
      if (lc.label == y) {
        if (!lc.cpt.is_bottom()) at_y.push_back(lc.cpt);
      } else {
        res.consequent.insert(lc);
      }
    }
    res.consequent.insert({x, Concept::forall(r, disjunction(at_y))});
    out.insert(std::move(res));
  }
  return out;
}

Interpolant leq_interpolant(std::uint32_t n, const Role& r, Label x, const std::vector<Label>& ys,
                            const Interpolant& g) {
  if (ys.size() != static_cast<std::size_t>(n) + 1) throw Error("(atmost) interpolant needs n + 1 labels");
  std::set<Label> fresh(ys.begin(), ys.end());
  Interpolant out;
  for (const auto& m : g) {
    MiniSequent res;
    for (const auto& a : m.antecedent) {
      bool in_from = fresh.count(a.from) > 0, in_to = fresh.count(a.to) > 0;
      if (!in_from && !in_to) {
        res.antecedent.insert(a);
      } else if (!(in_from && in_to && a.kind == StructuralAtom::Kind::Neq)) {
        throw Error("unexpected atom " + render(a) + " over the new labels");
      }
    }
    std::vector<Concept> at_ys;
    for (const auto& lc : m.consequent) {
      if (fresh.count(lc.label)) {
        if (!lc.cpt.is_bottom()) at_ys.push_back(lc.cpt);
      } else {
        res.consequent.insert(lc);
      }
    }
    res.consequent.insert({x, Concept::at_most(n, r, nnf_negate(disjunction(at_ys)))});
    out.insert(std::move(res));
  }
  return out;
}

Concept interpolant_concept(const Interpolant& g, Label x) {
  std::vector<Concept> conjuncts;
  for (const auto& m : g) {
    if (!m.antecedent.empty()) throw Error("interpolant member has (in)equalities");
    std::vector<Concept> disjuncts;
    bool trivial = false;
    for (const auto& lc : m.consequent) {
      if (lc.label != x) throw Error("interpolant member uses label " + render(lc.label));
      if (lc.cpt.is_top()) trivial = true;
      if (!lc.cpt.is_bottom()) disjuncts.push_back(lc.cpt);
    }
    if (trivial) continue;
    if (disjuncts.empty()) return Concept::bottom();
    conjuncts.push_back(disjunction(disjuncts));
  }
  return conjunction(conjuncts);
}

std::set<Label> labels_of(const Interpolant& g) {
  std::set<Label> out;
  for (const auto& m : g) {
    for (Label z : antecedent_labels(m.antecedent)) out.insert(z);
    for (const auto& lc : m.consequent) out.insert(lc.label);
  }
  return out;
}

std::set<std::string> concept_names(const Interpolant& g) {
  std::set<std::string> out;
  for (const auto& m : g) {
    for (const auto& lc : m.consequent) {
      auto n = concept_names(lc.cpt);
      out.insert(n.begin(), n.end());
    }
  }
  return out;
}

namespace {

bool removes_principal(RuleTag t) {
  return t == RuleTag::Or || t == RuleTag::And || t == RuleTag::Forall || t == RuleTag::AtMost;
}

void annotate(const RuleContext& ctx, const ProofNode& n, std::vector<Side> sides,
              std::map<StructuralAtom, Side> neqs, std::size_t o1_gcis, PartitionedNode& out) {
  out.node = &n;
  if (sides.size() != n.conclusion.consequent.size()) throw Error("partition does not cover the sequent");
  for (const auto& a : n.conclusion.antecedent) {
    if (a.kind == StructuralAtom::Kind::Neq && !neqs.count(a)) throw Error("inequality without a side");
  }
  RuleInstance inst = apply_rule(ctx, n.rule, n.conclusion, n.witness);
  if (inst.premises.size() != n.premises.size()) throw Error("proof does not match its rules");
  for (std::size_t i = 0; i < inst.premises.size(); ++i) {
    const Sequent& want = inst.premises[i];
    const Sequent& got = n.premises[i].conclusion;
    if (want.antecedent != got.antecedent || want.consequent != got.consequent) {
      throw Error("premise " + std::to_string(i) + " of " + rule_name(n.rule) + " is not in rule order");
    }
  }
  out.sides = sides;
  out.neq_sides = neqs;
  if (inst.premises.empty()) return;

  const std::size_t p = n.witness.principal;
  const Side ps = sides.at(p);
  std::vector<Side> kept = sides;
  if (removes_principal(n.rule)) kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(p));
  auto gci_sides = [&](std::vector<Side>& v) {
    for (std::size_t i = 0; i < ctx.ontology.tbox.size(); ++i) v.push_back(i < o1_gcis ? Side::One : Side::Two);
  };

  out.premises.resize(inst.premises.size());
  for (std::size_t i = 0; i < inst.premises.size(); ++i) {
    std::vector<Side> s = kept;
    std::map<StructuralAtom, Side> q = neqs;
    switch (n.rule) {
      case RuleTag::Or: s.insert(s.end(), {ps, ps}); break;
      case RuleTag::And:
      case RuleTag::SubstEq:
      case RuleTag::Exists: s.push_back(ps); break;
      case RuleTag::AtLeast:
        if (i < n.witness.targets.size()) s.push_back(ps);
        break;
      case RuleTag::Forall:
        s.push_back(ps);
        gci_sides(s);
        break;
      case RuleTag::AtMost:
        for (std::size_t k = 0; k < n.witness.fresh.size(); ++k) {
          s.push_back(ps);
          gci_sides(s);
        }
        for (const auto& a : inst.premises[i].antecedent) {
          if (a.kind == StructuralAtom::Kind::Neq && !q.count(a)) q[a] = ps;
        }
        break;
      default: break;
    }
    annotate(ctx, n.premises[i], std::move(s), std::move(q), o1_gcis, out.premises[i]);
  }
}

MiniSequent single(const LabeledConcept& lc) {
  MiniSequent m;
  m.consequent.insert(lc);
  return m;
}

class Extractor {
 public:
  Extractor(const Ontology& o1, const Ontology& o2) {
    for (const auto& c : o1.tbox) {
      auto n = concept_names(c);
      names1_.insert(n.begin(), n.end());
    }
    for (const auto& c : o2.tbox) {
      auto n = concept_names(c);
      names2_.insert(n.begin(), n.end());
    }
  }

  Interpolant run(const PartitionedNode& pp) {
    std::vector<Interpolant> sub;
    for (const auto& child : pp.premises) sub.push_back(run(child));
    Interpolant g = at_node(pp, sub);
    check(pp, g);
    ++nodes_;
    return g;
  }

  bool ok() const { return message_.empty(); }
  const std::string& message() const { return message_; }
  std::size_t nodes() const { return nodes_; }

 private:
  Interpolant at_node(const PartitionedNode& pp, std::vector<Interpolant>& sub) {
    const ProofNode& n = *pp.node;
    const auto& d = n.conclusion.consequent;
    switch (n.rule) {
      case RuleTag::Id: {
        Side a = pp.sides[n.witness.principal], b = pp.sides[n.witness.partner];
        Label x = d[n.witness.principal].label;
        if (a == Side::Two && b == Side::Two) return {single({x, Concept::top()})};
        if (a == Side::One && b == Side::One) return {single({x, Concept::bottom()})};
        const LabeledConcept& right = a == Side::Two ? d[n.witness.principal] : d[n.witness.partner];
        return {single(right)};
      }
      case RuleTag::IdEq: {
        StructuralAtom a = *n.witness.neq;
        if (pp.neq_sides.at(a) == Side::One) a.kind = StructuralAtom::Kind::Eq;
        MiniSequent m;
        m.antecedent.insert(a);
        return {m};
      }
      default: break;
    }
    Side ps = pp.sides[n.witness.principal];
    const LabeledConcept& pr = d[n.witness.principal];
    // A principal in partition 1 is handled on the swapped sequent.
    if (ps == Side::One) {
      for (auto& g : sub) g = orthogonal_reduced(g);
    }
    Interpolant g;
    switch (n.rule) {
      case RuleTag::Forall:
        g = box_interpolant(pr.cpt.role(), pr.label, n.witness.fresh.at(0), sub.at(0));
        break;
      case RuleTag::AtMost:
        g = leq_interpolant(pr.cpt.count(), pr.cpt.role(), pr.label, n.witness.fresh, sub.at(0));
        break;
      default:
        for (const auto& s : sub) g.insert(s.begin(), s.end());
        g = reduce_subsumed(g);
    }
    if (ps == Side::One) g = orthogonal_reduced(g);
    return g;
  }

  void fail(const PartitionedNode& pp, const std::string& what) {
    if (message_.empty()) message_ = rule_name(pp.node->rule) + " node: " + what;
  }

  void check(const PartitionedNode& pp, const Interpolant& g) {
    const Sequent& s = pp.node->conclusion;
    std::set<std::string> left = names1_, right = names2_;
    for (std::size_t i = 0; i < s.consequent.size(); ++i) {
      auto n = concept_names(s.consequent[i].cpt);
      (pp.sides[i] == Side::One ? left : right).insert(n.begin(), n.end());
    }
    auto neq_on = [&](const StructuralAtom& a, Side side) {
      for (auto at : {StructuralAtom::neq(a.from, a.to), StructuralAtom::neq(a.to, a.from)}) {
        auto it = pp.neq_sides.find(at);
        if (it != pp.neq_sides.end() && it->second == side) return true;
      }
      return false;
    };
    std::set<Label> ls = labels_of(s);
    for (const auto& m : g) {
      for (const auto& a : m.antecedent) {
        if (a.kind == StructuralAtom::Kind::Eq && !neq_on(a, Side::One)) fail(pp, "equality without inequality in partition 1");
        if (a.kind == StructuralAtom::Kind::Neq && !neq_on(a, Side::Two)) fail(pp, "inequality not in partition 2");
        if (a.kind == StructuralAtom::Kind::Role) fail(pp, "role atom in interpolant");
      }
    }
    for (Label z : labels_of(g)) {
      if (!ls.count(z)) fail(pp, "label " + render(z) + " not in the sequent");
    }
    for (const auto& name : concept_names(g)) {
      if (!left.count(name) || !right.count(name)) fail(pp, "concept name " + name + " not shared");
    }
  }

  std::set<std::string> names1_, names2_;
  std::string message_;
  std::size_t nodes_ = 0;
};

}  // namespace

PartitionedNode annotate_partition(const Ontology& o, const ProofNode& p, const EndSplit& split) {
  RSystem g = build_rsystem(o);
  RuleContext ctx{o, g};
  PartitionedNode out;
  annotate(ctx, p, split.consequent, {}, split.o1_gcis, out);
  return out;
}

Extraction extract_interpolant(const PartitionedNode& pp, const Ontology& o1, const Ontology& o2) {
  Extractor ex(o1, o2);
  Extraction out;
  out.root = ex.run(pp);
  out.invariants_ok = ex.ok();
  out.invariant_message = ex.message();
  out.nodes = ex.nodes();
  return out;
}

InterpolationResult compute_concept_interpolant(const Ontology& o1, const Ontology& o2, const Concept& c,
                                                const Concept& d, const ProverLimits& limits) {
  Ontology o = ontology_union(o1, o2);
  Label x{0};
  Sequent goal;
  EndSplit split;
  split.o1_gcis = o1.tbox.size();
  for (auto& lc : gci_list(o1, x)) {
    goal.consequent.push_back(std::move(lc));
    split.consequent.push_back(Side::One);
  }
  goal.consequent.push_back({x, nnf_negate(c)});
  split.consequent.push_back(Side::One);
  goal.consequent.push_back({x, d});
  split.consequent.push_back(Side::Two);
  for (auto& lc : gci_list(o2, x)) {
    goal.consequent.push_back(std::move(lc));
    split.consequent.push_back(Side::Two);
  }

  InterpolationResult result;
  ProveResult pr = prove(o, goal, limits);
  result.verdict = pr.verdict;
  if (pr.verdict != Verdict::Proved) {
    result.message = pr.verdict == Verdict::Refuted ? "the subsumption does not hold" : pr.reason;
    return result;
  }
  PartitionedNode pp = annotate_partition(o, *pr.proof, split);
  Extraction ex = extract_interpolant(pp, o1, o2);
  result.sequents = ex.root;
  result.invariants_ok = ex.invariants_ok;
  result.message = ex.invariant_message;
  result.interpolant = interpolant_concept(ex.root, x);
  result.proof = std::move(pr.proof);
  return result;
}

InterpolantCheck verify_interpolant(const Ontology& o1, const Ontology& o2, const Concept& c, const Concept& d,
                                    const Concept& i, const ProverLimits& limits) {
  InterpolantCheck out;
  std::set<std::string> left = concept_names(c), right = concept_names(d);
  for (const auto& g : o1.tbox) {
    auto n = concept_names(g);
    left.insert(n.begin(), n.end());
  }
  for (const auto& g : o2.tbox) {
    auto n = concept_names(g);
    right.insert(n.begin(), n.end());
  }
  out.signature_ok = true;
  for (const auto& n : concept_names(i)) {
    if (!left.count(n) || !right.count(n)) {
      out.signature_ok = false;
      out.message = "concept name " + n + " is not shared";
    }
  }
  Ontology o = ontology_union(o1, o2);
  out.sub_proved = subsumes(o, c, i, limits).verdict == Verdict::Proved;
  out.sup_proved = subsumes(o, i, d, limits).verdict == Verdict::Proved;
  if (!out.sub_proved && out.message.empty()) out.message = "C <= I not proved";
  if (!out.sup_proved && out.message.empty()) out.message = "I <= D not proved";

  OracleOptions opts;
  opts.samples = 2000;
  out.oracle_ran = true;
  for (const auto& goal : {subsumption_goal(o, c, i), subsumption_goal(o, i, d)}) {
    if (find_countermodel_bounded(o, goal, opts).model) {
      out.oracle_ok = false;
      if (out.message.empty()) out.message = "bounded counter-model found";
    }
  }
  return out;
}

std::string render(const MiniSequent& m) {
  Sequent s;
  s.antecedent = m.antecedent;
  s.consequent.assign(m.consequent.begin(), m.consequent.end());
  return render(s);
}

std::string render(const Interpolant& g) {
  std::string out = "{";
  bool first = true;
  for (const auto& m : g) {
    out += first ? " " : " ; ";
    out += render(m);
    first = false;
  }
  return out + (g.empty() ? "}" : " }");
}

std::string interpolant_to_json(const Interpolant& g, const std::optional<Concept>& cpt) {
  using nlohmann::json;
  json members = json::array();
  for (const auto& m : g) {
    json ante = json::array(), cons = json::array();
    for (const auto& a : m.antecedent) ante.push_back(render(a));
    for (const auto& lc : m.consequent) cons.push_back(render(lc));
    members.push_back({{"antecedent", ante}, {"consequent", cons}});
  }
  json doc = {{"members", members}};
  if (cpt) doc["concept"] = render(*cpt);
  return doc.dump(2);
}

}  // namespace riq
