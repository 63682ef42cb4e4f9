#include "riq/sequent.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>

#include "riq/parser.hpp"

namespace riq {

bool same_sequent(const Sequent& a, const Sequent& b) {
  if (a.antecedent != b.antecedent || a.consequent.size() != b.consequent.size()) return false;
  auto x = a.consequent;
  auto y = b.consequent;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

std::set<Label> antecedent_labels(const std::set<StructuralAtom>& gamma) {
  std::set<Label> out;
  for (const auto& a : gamma) {
    out.insert(a.from);
    out.insert(a.to);
  }
  return out;
}

std::set<Label> labels_of(const Sequent& s) {
  std::set<Label> out = antecedent_labels(s.antecedent);
  for (const auto& lc : s.consequent) out.insert(lc.label);
  return out;
}

namespace {

std::string tree_problem(const std::set<StructuralAtom>& gamma) {
  std::set<Label> nodes = antecedent_labels(gamma);
  std::map<Label, Label> parent;
  std::map<Label, std::vector<Label>> children;
  for (const auto& a : gamma) {
    if (a.kind != StructuralAtom::Kind::Role) continue;
    if (a.from == a.to) return "role atom " + render(a) + " is a loop";
    auto [it, fresh] = parent.emplace(a.to, a.from);
    if (!fresh) {
      if (it->second != a.from) return "label " + render(a.to) + " has two parents";
      continue;
    }
    children[a.from].push_back(a.to);
  }
  std::vector<Label> roots;
  for (Label x : nodes) {
    if (!parent.count(x)) roots.push_back(x);
  }
  if (roots.size() != 1) return "role atoms do not form a single tree";
  std::set<Label> reached{roots[0]};
  std::vector<Label> todo{roots[0]};
  while (!todo.empty()) {
    Label x = todo.back();
    todo.pop_back();
    for (Label y : children[x]) {
      if (reached.insert(y).second) todo.push_back(y);
    }
  }
  if (reached.size() != nodes.size()) return "role atoms contain a cycle";
  return {};
}

}  // namespace

void validate_sequent(const Sequent& s) {
  if (s.antecedent.empty()) {
    std::set<Label> ls;
    for (const auto& lc : s.consequent) ls.insert(lc.label);
    if (ls.size() != 1) throw Error("sequent with empty antecedent must use exactly one label");
    return;
  }
  std::set<Label> gl = antecedent_labels(s.antecedent);
  for (const auto& lc : s.consequent) {
    if (!gl.count(lc.label)) throw Error("label " + render(lc.label) + " does not occur in the antecedent");
  }
  if (auto p = tree_problem(s.antecedent); !p.empty()) throw Error("tree-shape invariant broken: " + p);
}

bool is_valid_sequent(const Sequent& s) {
  try {
    validate_sequent(s);
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::size_t weight(const Sequent& s) {
  std::size_t w = s.antecedent.size();
  for (const auto& lc : s.consequent) w += weight(lc.cpt);
  return w;
}

Sequent substitute_label(const Sequent& s, Label x, Label y) {
  auto sub = [&](Label z) { return z == y ? x : z; };
  Sequent out;
  for (auto a : s.antecedent) {
    a.from = sub(a.from);
    a.to = sub(a.to);
    out.antecedent.insert(a);
  }
  for (const auto& lc : s.consequent) out.consequent.push_back({sub(lc.label), lc.cpt});
  try {
    validate_sequent(out);
  } catch (const Error& e) {
    throw Error(std::string("substitution result violates sequent invariants: ") + e.what());
  }
  return out;
}

Sequent weaken(const Sequent& s, const StructuralAtom& atom) {
  if (atom.kind == StructuralAtom::Kind::Role) throw Error("weakening only adds equalities and inequalities");
  std::set<Label> ls = labels_of(s);
  if (!ls.count(atom.from) || !ls.count(atom.to)) throw Error("weakening introduces a new label");
  Sequent out = s;
  out.antecedent.insert(atom);
  validate_sequent(out);
  return out;
}

Sequent weaken(const Sequent& s, const LabeledConcept& lc) {
  if (!labels_of(s).count(lc.label)) throw Error("weakening introduces a new label");
  Sequent out = s;
  out.consequent.push_back(lc);
  return out;
}

std::vector<LabeledConcept> gci_list(const Ontology& o, Label x) {
  std::vector<LabeledConcept> out;
  out.reserve(o.tbox.size());
  for (const auto& c : o.tbox) out.push_back({x, nnf_negate(c)});
  return out;
}

std::size_t EqClasses::of(Label x) const {
  auto it = class_of.find(x);
  if (it == class_of.end()) throw Error("label " + render(x) + " is not a node");
  return it->second;
}

bool EqClasses::same(Label x, Label y) const {
  if (x == y) return true;
  auto a = class_of.find(x);
  auto b = class_of.find(y);
  return a != class_of.end() && b != class_of.end() && a->second == b->second;
}

EqClasses eq_classes(const std::set<StructuralAtom>& gamma, const std::set<Label>& extra) {
  std::set<Label> all = antecedent_labels(gamma);
  all.insert(extra.begin(), extra.end());
  std::map<Label, Label> parent;
  for (Label x : all) parent[x] = x;
  std::function<Label(Label)> find = [&](Label x) {
    Label p = parent[x];
    if (p == x) return x;
    Label r = find(p);
    parent[x] = r;
    return r;
  };
  for (const auto& a : gamma) {
    if (a.kind != StructuralAtom::Kind::Eq) continue;
    Label ra = find(a.from), rb = find(a.to);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::map<Label, std::vector<Label>> groups;
  for (Label x : all) groups[find(x)].push_back(x);
  EqClasses out;
  for (auto& [root, members] : groups) {
    for (Label x : members) out.class_of[x] = out.classes.size();
    out.classes.push_back(std::move(members));
  }
  return out;
}

std::optional<std::vector<Label>> eq_path(const std::set<StructuralAtom>& gamma, Label x, Label y) {
  if (x == y) return std::vector<Label>{x};
  std::map<Label, std::vector<Label>> adj;
  for (const auto& a : gamma) {
    if (a.kind != StructuralAtom::Kind::Eq) continue;
    adj[a.from].push_back(a.to);
    adj[a.to].push_back(a.from);
  }
  std::map<Label, Label> prev;
  std::deque<Label> queue{x};
  prev[x] = x;
  while (!queue.empty()) {
    Label u = queue.front();
    queue.pop_front();
    for (Label v : adj[u]) {
      if (prev.count(v)) continue;
      prev[v] = u;
      if (v == y) {
        std::vector<Label> path{y};
        while (path.back() != x) path.push_back(prev[path.back()]);
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(v);
    }
  }
  return std::nullopt;
}

PropagationGraph build_prop_graph(const Sequent& s) {
  PropagationGraph g;
  std::set<Label> extra;
  for (const auto& lc : s.consequent) extra.insert(lc.label);
  g.nodes = eq_classes(s.antecedent, extra);
  std::set<LabeledEdge> edges;
  for (const auto& a : s.antecedent) {
    if (a.kind != StructuralAtom::Kind::Role) continue;
    std::size_t u = g.nodes.of(a.from), v = g.nodes.of(a.to);
    edges.insert({u, a.role, v});
    edges.insert({v, a.role.inverse(), u});
  }
  g.edges.assign(edges.begin(), edges.end());
  return g;
}

Propagation compute_propagation(const RSystem& g, const Sequent& s) {
  Propagation p;
  p.graph = build_prop_graph(s);
  p.reach = cfl_closure(g, p.graph.nodes.classes.size(), p.graph.edges);
  return p;
}

std::optional<PathWitness> prop_reachable(const Propagation& p, Label x, Label y, const Role& r) {
  auto cx = p.graph.nodes.class_of.find(x);
  auto cy = p.graph.nodes.class_of.find(y);
  if (cx == p.graph.nodes.class_of.end() || cy == p.graph.nodes.class_of.end()) return std::nullopt;
  auto w = p.reach.witness(r, cx->second, cy->second);
  if (!w) return std::nullopt;
  PathWitness out;
  out.target = y;
  out.word = w->word;
  for (std::size_t node : w->nodes) out.path.push_back(p.graph.nodes.classes[node].front());
  out.path.front() = x;
  out.path.back() = y;
  return out;
}

std::optional<PathWitness> prop_reachable(const RSystem& g, const Sequent& s, Label x, Label y,
                                          const Role& r) {
  return prop_reachable(compute_propagation(g, s), x, y, r);
}

bool check_path_witness(const RSystem& g, const Sequent& s, Label x, const Role& r, const PathWitness& w) {
  if (w.word.empty() || w.path.size() != w.word.size() + 1) return false;
  if (!in_language(g, r, w.word)) return false;
  std::set<Label> extra;
  for (const auto& lc : s.consequent) extra.insert(lc.label);
  EqClasses cls = eq_classes(s.antecedent, extra);
  for (Label z : w.path) {
    if (!cls.class_of.count(z)) return false;
  }
  if (!cls.class_of.count(x) || !cls.class_of.count(w.target)) return false;
  if (!cls.same(w.path.front(), x) || !cls.same(w.path.back(), w.target)) return false;
  std::set<std::tuple<std::size_t, Role, std::size_t>> steps;
  for (const auto& a : s.antecedent) {
    if (a.kind != StructuralAtom::Kind::Role) continue;
    steps.insert({cls.of(a.from), a.role, cls.of(a.to)});
    steps.insert({cls.of(a.to), a.role.inverse(), cls.of(a.from)});
  }
  for (std::size_t i = 0; i < w.word.size(); ++i) {
    if (!steps.count({cls.of(w.path[i]), w.word[i], cls.of(w.path[i + 1])})) return false;
  }
  return true;
}

std::string rule_name(RuleTag t) {
  switch (t) {
    case RuleTag::Id: return "id";
    case RuleTag::IdEq: return "id_eq";
    case RuleTag::SubstEq: return "subst_eq";
    case RuleTag::Or: return "or";
    case RuleTag::And: return "and";
    case RuleTag::Exists: return "exists";
    case RuleTag::Forall: return "forall";
    case RuleTag::AtMost: return "atmost";
    case RuleTag::AtLeast: return "atleast";
  }
  return "?";
}

std::optional<RuleTag> parse_rule_name(const std::string& s) {
  for (auto t : {RuleTag::Id, RuleTag::IdEq, RuleTag::SubstEq, RuleTag::Or, RuleTag::And, RuleTag::Exists,
                 RuleTag::Forall, RuleTag::AtMost, RuleTag::AtLeast}) {
    if (rule_name(t) == s) return t;
  }
  return std::nullopt;
}

namespace {

const LabeledConcept& principal_of(const Sequent& c, const Witness& sel, ConceptKind kind) {
  if (sel.principal >= c.consequent.size()) throw Error("principal index out of range");
  const LabeledConcept& lc = c.consequent[sel.principal];
  if (lc.cpt.kind() != kind) throw Error("principal formula does not match the rule");
  return lc;
}

std::vector<LabeledConcept> without(const std::vector<LabeledConcept>& v, std::size_t i) {
  std::vector<LabeledConcept> out;
  out.reserve(v.size() + 4);
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k != i) out.push_back(v[k]);
  }
  return out;
}

std::vector<Label> fresh_labels(const Sequent& c, const Witness& sel, std::size_t n) {
  std::set<Label> used = labels_of(c);
  if (!sel.fresh.empty()) {
    if (sel.fresh.size() != n) throw Error("wrong number of fresh labels");
    std::set<Label> distinct(sel.fresh.begin(), sel.fresh.end());
    if (distinct.size() != n) throw Error("fresh labels are not distinct");
    for (Label y : sel.fresh) {
      if (used.count(y)) throw Error("label " + render(y) + " is not fresh");
    }
    return sel.fresh;
  }
  std::uint32_t next = used.empty() ? 0 : used.rbegin()->id + 1;
  std::vector<Label> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(Label{next + static_cast<std::uint32_t>(i)});
  return out;
}

PathWitness reach_or_throw(const RuleContext& ctx, const Sequent& c, const Propagation* cached,
                           std::optional<Propagation>& local, Label x, Label y, const Role& r) {
  if (!labels_of(c).count(y)) throw Error("label " + render(y) + " does not occur in the sequent");
  if (!cached) {
    if (!local) local = compute_propagation(ctx.rsystem, c);
    cached = &*local;
  }
  auto w = prop_reachable(*cached, x, y, r);
  if (!w) throw Error("no propagation path for " + render(r) + " from " + render(x) + " to " + render(y));
  return *w;
}

}  // namespace

RuleInstance apply_rule(const RuleContext& ctx, RuleTag rule, const Sequent& c, const Witness& sel,
                        const Propagation* cached) {
  validate_sequent(c);
  RuleInstance inst{rule, c, {}, {}};
  Witness& w = inst.witness;
  w.principal = sel.principal;
  std::optional<Propagation> local;

  switch (rule) {
    case RuleTag::Id: {
      if (sel.principal >= c.consequent.size() || sel.partner >= c.consequent.size()) {
        throw Error("literal index out of range");
      }
      const auto& a = c.consequent[sel.principal];
      const auto& b = c.consequent[sel.partner];
      bool complementary = a.label == b.label && a.cpt.is_literal() && b.cpt.is_literal() &&
                           a.cpt.kind() != b.cpt.kind() && a.cpt.atom() == b.cpt.atom();
      if (!complementary) throw Error("(id) needs complementary literals on one label");
      w.partner = sel.partner;
      return inst;
    }
    case RuleTag::IdEq: {
      if (!sel.neq || sel.neq->kind != StructuralAtom::Kind::Neq || !c.antecedent.count(*sel.neq)) {
        throw Error("(id_eq) needs an inequality of the antecedent");
      }
      auto path = eq_path(c.antecedent, sel.neq->from, sel.neq->to);
      if (!path) throw Error("inequality endpoints are not equal");
      w.neq = sel.neq;
      w.eq_path = *path;
      return inst;
    }
    case RuleTag::SubstEq: {
      if (sel.principal >= c.consequent.size()) throw Error("principal index out of range");
      const auto& lit = c.consequent[sel.principal];
      if (!lit.cpt.is_literal()) throw Error("(subst_eq) principal must be a literal");
      if (sel.targets.size() != 1) throw Error("(subst_eq) needs one target label");
      Label y = sel.targets[0];
      auto path = eq_path(c.antecedent, lit.label, y);
      if (!path) throw Error("target is not equal to the principal label");
      w.targets = {y};
      w.eq_path = *path;
      Sequent p = c;
      p.consequent.push_back({y, lit.cpt});
      inst.premises.push_back(std::move(p));
      return inst;
    }
    case RuleTag::Or: {
      const auto& lc = principal_of(c, sel, ConceptKind::Or);
      Sequent p{c.antecedent, without(c.consequent, sel.principal)};
      p.consequent.push_back({lc.label, lc.cpt.left()});
      p.consequent.push_back({lc.label, lc.cpt.right()});
      inst.premises.push_back(std::move(p));
      return inst;
    }
    case RuleTag::And: {
      const auto& lc = principal_of(c, sel, ConceptKind::And);
      auto rest = without(c.consequent, sel.principal);
      for (const auto& part : {lc.cpt.left(), lc.cpt.right()}) {
        Sequent p{c.antecedent, rest};
        p.consequent.push_back({lc.label, part});
        inst.premises.push_back(std::move(p));
      }
      return inst;
    }
    case RuleTag::Exists: {
      const auto& lc = principal_of(c, sel, ConceptKind::Exists);
      if (sel.targets.size() != 1) throw Error("(exists) needs one target label");
      Label y = sel.targets[0];
      w.targets = {y};
      w.paths = {reach_or_throw(ctx, c, cached, local, lc.label, y, lc.cpt.role())};
      Sequent p = c;
      p.consequent.push_back({y, lc.cpt.body()});
      inst.premises.push_back(std::move(p));
      return inst;
    }
    case RuleTag::Forall: {
      const auto& lc = principal_of(c, sel, ConceptKind::Forall);
      Label y = fresh_labels(c, sel, 1)[0];
      w.fresh = {y};
      Sequent p{c.antecedent, without(c.consequent, sel.principal)};
      p.antecedent.insert(StructuralAtom::role_atom(lc.cpt.role(), lc.label, y));
      p.consequent.push_back({y, lc.cpt.body()});
      for (auto& g : gci_list(ctx.ontology, y)) p.consequent.push_back(std::move(g));
      inst.premises.push_back(std::move(p));
      return inst;
    }
    case RuleTag::AtMost: {
      const auto& lc = principal_of(c, sel, ConceptKind::AtMost);
      std::size_t n = lc.cpt.count();
      auto ys = fresh_labels(c, sel, n + 1);
      w.fresh = ys;
      Concept neg = nnf_negate(lc.cpt.body());
      Sequent p{c.antecedent, without(c.consequent, sel.principal)};
      for (std::size_t i = 0; i < ys.size(); ++i) {
        for (std::size_t j = i + 1; j < ys.size(); ++j) p.antecedent.insert(StructuralAtom::neq(ys[i], ys[j]));
        p.antecedent.insert(StructuralAtom::role_atom(lc.cpt.role(), lc.label, ys[i]));
      }
      for (Label y : ys) {
        p.consequent.push_back({y, neg});
        for (auto& g : gci_list(ctx.ontology, y)) p.consequent.push_back(std::move(g));
      }
      inst.premises.push_back(std::move(p));
      return inst;
    }
    case RuleTag::AtLeast: {
      const auto& lc = principal_of(c, sel, ConceptKind::AtLeast);
      std::size_t n = lc.cpt.count();
      if (sel.targets.size() != n) throw Error("(atleast) needs exactly n target labels");
      std::set<Label> distinct(sel.targets.begin(), sel.targets.end());
      if (distinct.size() != n) throw Error("(atleast) target labels must be distinct");
      w.targets = sel.targets;
      for (Label y : sel.targets) {
        w.paths.push_back(reach_or_throw(ctx, c, cached, local, lc.label, y, lc.cpt.role()));
      }
      for (Label y : sel.targets) {
        Sequent p = c;
        p.consequent.push_back({y, lc.cpt.body()});
        inst.premises.push_back(std::move(p));
      }
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          Sequent p = c;
          p.antecedent.insert(StructuralAtom::eq(sel.targets[i], sel.targets[j]));
          inst.premises.push_back(std::move(p));
        }
      }
      return inst;
    }
  }
  throw Error("unknown rule");
}

std::size_t proof_size(const ProofNode& p) {
  std::size_t n = 0;
  std::vector<const ProofNode*> todo{&p};
  while (!todo.empty()) {
    const ProofNode* q = todo.back();
    todo.pop_back();
    n += weight(q->conclusion);
    for (const auto& c : q->premises) todo.push_back(&c);
  }
  return n;
}

namespace {

bool valid_eq_chain(const std::set<StructuralAtom>& gamma, const std::vector<Label>& path, Label x, Label y) {
  if (path.empty() || path.front() != x || path.back() != y) return false;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (!gamma.count(StructuralAtom::eq(path[i], path[i + 1])) &&
        !gamma.count(StructuralAtom::eq(path[i + 1], path[i]))) {
      return false;
    }
  }
  return true;
}

std::string stored_witness_problem(const RSystem& g, const ProofNode& n) {
  const Witness& w = n.witness;
  const Sequent& c = n.conclusion;
  switch (n.rule) {
    case RuleTag::IdEq:
      if (!w.neq || !valid_eq_chain(c.antecedent, w.eq_path, w.neq->from, w.neq->to)) return "bad equality chain";
      return {};
    case RuleTag::SubstEq:
      if (w.targets.size() != 1 ||
          !valid_eq_chain(c.antecedent, w.eq_path, c.consequent[w.principal].label, w.targets[0])) {
        return "bad equality chain";
      }
      return {};
    case RuleTag::Exists:
    case RuleTag::AtLeast: {
      if (w.paths.size() != w.targets.size()) return "missing propagation witness";
      const auto& lc = c.consequent[w.principal];
      for (std::size_t i = 0; i < w.paths.size(); ++i) {
        if (w.paths[i].target != w.targets[i]) return "propagation witness has the wrong target";
        if (!check_path_witness(g, c, lc.label, lc.cpt.role(), w.paths[i])) {
          return "propagation witness is not a path for " + render(lc.cpt.role());
        }
      }
      return {};
    }
    default: return {};
  }
}

}  // namespace

ProofCheck check_proof_detailed(const Ontology& o, const ProofNode& root) {
  RSystem g = build_rsystem(o);
  RuleContext ctx{o, g};
  std::size_t index = 0;
  std::vector<const ProofNode*> todo{&root};
  while (!todo.empty()) {
    const ProofNode* n = todo.back();
    todo.pop_back();
    std::string where = "node " + std::to_string(index++) + " (" + rule_name(n->rule) + "): ";
    RuleInstance inst;
    try {
      inst = apply_rule(ctx, n->rule, n->conclusion, n->witness);
    } catch (const Error& e) {
      return {false, where + e.what()};
    }
    if (inst.premises.size() != n->premises.size()) return {false, where + "wrong number of premises"};
    for (std::size_t i = 0; i < inst.premises.size(); ++i) {
      if (!same_sequent(inst.premises[i], n->premises[i].conclusion)) {
        return {false, where + "premise " + std::to_string(i) + " does not follow from the rule"};
      }
    }
    if (auto p = stored_witness_problem(g, *n); !p.empty()) return {false, where + p};
    for (auto it = n->premises.rbegin(); it != n->premises.rend(); ++it) todo.push_back(&*it);
  }
  return {};
}

bool check_proof(const Ontology& o, const ProofNode& p) { return check_proof_detailed(o, p).ok; }

}  // namespace riq
