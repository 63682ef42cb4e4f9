#include "riq/core.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>

namespace riq {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t node_hash(const ConceptNode& n) {
  std::size_t h = std::hash<int>{}(static_cast<int>(n.kind));
  h = mix(h, std::hash<std::string>{}(n.name));
  h = mix(h, std::hash<std::string>{}(n.role.name));
  h = mix(h, n.role.inverted ? 1 : 2);
  h = mix(h, n.n);
  for (const auto& op : n.operands) h = mix(h, op.hash());
  return h;
}

}  // namespace

Role make_role(std::string name, bool inverted) {
  if (name.empty()) throw Error("empty role name");
  return Role{std::move(name), inverted};
}

Concept Concept::build(ConceptKind k, std::string name, Role role, std::uint32_t n,
                       std::vector<Concept> operands) {
  auto node = std::make_shared<ConceptNode>();
  node->kind = k;
  node->name = std::move(name);
  node->role = std::move(role);
  node->n = n;
  node->operands = std::move(operands);
  node->hash = node_hash(*node);
  return Concept(std::move(node));
}

Concept Concept::name(std::string n) {
  if (n.empty()) throw Error("empty concept name");
  return build(ConceptKind::Name, std::move(n), {}, 0, {});
}

Concept Concept::neg_name(std::string n) {
  if (n.empty()) throw Error("empty concept name");
  return build(ConceptKind::NegName, std::move(n), {}, 0, {});
}

Concept Concept::conj(Concept a, Concept b) {
  return build(ConceptKind::And, {}, {}, 0, {std::move(a), std::move(b)});
}

Concept Concept::disj(Concept a, Concept b) {
  return build(ConceptKind::Or, {}, {}, 0, {std::move(a), std::move(b)});
}

Concept Concept::exists(Role r, Concept c) {
  return build(ConceptKind::Exists, {}, std::move(r), 0, {std::move(c)});
}

Concept Concept::forall(Role r, Concept c) {
  return build(ConceptKind::Forall, {}, std::move(r), 0, {std::move(c)});
}

Concept Concept::at_most(std::uint32_t n, Role r, Concept c) {
  if (n > kMaxCount) throw Error("number restriction count out of range");
  return build(ConceptKind::AtMost, {}, std::move(r), n, {std::move(c)});
}

Concept Concept::at_least(std::uint32_t n, Role r, Concept c) {
  if (n > kMaxCount) throw Error("number restriction count out of range");
  return build(ConceptKind::AtLeast, {}, std::move(r), n, {std::move(c)});
}

Concept Concept::top() {
  static const Concept t = disj(name(kReservedName), neg_name(kReservedName));
  return t;
}

Concept Concept::bottom() {
  static const Concept b = conj(name(kReservedName), neg_name(kReservedName));
  return b;
}

ConceptKind Concept::kind() const { return node_->kind; }
const std::string& Concept::atom() const { return node_->name; }
const Role& Concept::role() const { return node_->role; }
std::uint32_t Concept::count() const { return node_->n; }
const Concept& Concept::left() const { return node_->operands.at(0); }
const Concept& Concept::right() const { return node_->operands.at(1); }
const Concept& Concept::body() const { return node_->operands.at(0); }
std::size_t Concept::hash() const { return node_->hash; }

bool Concept::is_literal() const {
  return node_->kind == ConceptKind::Name || node_->kind == ConceptKind::NegName;
}

bool Concept::is_top() const { return *this == top(); }
bool Concept::is_bottom() const { return *this == bottom(); }

bool operator==(const Concept& a, const Concept& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash) return false;
  return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Concept& a, const Concept& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  const ConceptNode& x = *a.node_;
  const ConceptNode& y = *b.node_;
  if (auto c = x.kind <=> y.kind; c != 0) return c;
  if (auto c = x.name <=> y.name; c != 0) return c;
  if (auto c = x.role <=> y.role; c != 0) return c;
  if (auto c = x.n <=> y.n; c != 0) return c;
  for (std::size_t i = 0; i < x.operands.size(); ++i) {
    if (auto c = x.operands[i] <=> y.operands[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

Concept nnf_negate(const Concept& c) {
  if (c.is_top()) return Concept::bottom();
  if (c.is_bottom()) return Concept::top();
  switch (c.kind()) {
    case ConceptKind::Name: return Concept::neg_name(c.atom());
    case ConceptKind::NegName: return Concept::name(c.atom());
    case ConceptKind::And: return Concept::disj(nnf_negate(c.left()), nnf_negate(c.right()));
    case ConceptKind::Or: return Concept::conj(nnf_negate(c.left()), nnf_negate(c.right()));
    case ConceptKind::Exists: return Concept::forall(c.role(), nnf_negate(c.body()));
    case ConceptKind::Forall: return Concept::exists(c.role(), nnf_negate(c.body()));
    case ConceptKind::AtMost:
      if (c.count() == kMaxCount) throw Error("number restriction count out of range");
      return Concept::at_least(c.count() + 1, c.role(), c.body());
    case ConceptKind::AtLeast:
      if (c.count() == 0) return Concept::bottom();
      return Concept::at_most(c.count() - 1, c.role(), c.body());
  }
  throw Error("unknown concept kind");
}

std::size_t weight(const Concept& c) {
  switch (c.kind()) {
    case ConceptKind::Name:
    case ConceptKind::NegName: return 1;
    case ConceptKind::And:
    case ConceptKind::Or: return weight(c.left()) + weight(c.right()) + 1;
    case ConceptKind::Exists:
    case ConceptKind::Forall: return weight(c.body()) + 1;
    case ConceptKind::AtMost: return weight(c.body()) + c.count() + 1;
    case ConceptKind::AtLeast: return weight(c.body()) + c.count();
  }
  return 0;
}

namespace {

void collect(const Concept& c, std::set<std::string>* names, std::set<std::string>* roles) {
  switch (c.kind()) {
    case ConceptKind::Name:
    case ConceptKind::NegName:
      if (names && c.atom() != kReservedName) names->insert(c.atom());
      return;
    case ConceptKind::And:
    case ConceptKind::Or:
      collect(c.left(), names, roles);
      collect(c.right(), names, roles);
      return;
    default:
      if (roles) roles->insert(c.role().name);
      collect(c.body(), names, roles);
  }
}

}  // namespace

std::set<std::string> concept_names(const Concept& c) {
  std::set<std::string> out;
  collect(c, &out, nullptr);
  return out;
}

std::set<std::string> role_names(const Concept& c) {
  std::set<std::string> out;
  collect(c, nullptr, &out);
  return out;
}

Concept disjunction(const std::vector<Concept>& cs) {
  if (cs.empty()) return Concept::bottom();
  Concept out = cs.front();
  for (std::size_t i = 1; i < cs.size(); ++i) out = Concept::disj(out, cs[i]);
  return out;
}

Concept conjunction(const std::vector<Concept>& cs) {
  if (cs.empty()) return Concept::top();
  Concept out = cs.front();
  for (std::size_t i = 1; i < cs.size(); ++i) out = Concept::conj(out, cs[i]);
  return out;
}

std::set<std::string> simple_roles(const std::vector<RIA>& rbox, const std::set<std::string>& names) {
  std::set<std::string> universe = names;
  std::map<std::string, std::vector<const RIA*>> targeting;
  for (const auto& ria : rbox) {
    universe.insert(ria.rhs.name);
    for (const auto& r : ria.lhs) universe.insert(r.name);
    targeting[ria.rhs.name].push_back(&ria);
  }
  std::set<std::string> simple;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& name : universe) {
      if (simple.count(name)) continue;
      bool ok = true;
      for (const RIA* ria : targeting[name]) {
        if (ria->lhs.size() != 1 || !simple.count(ria->lhs[0].name)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        simple.insert(name);
        changed = true;
      }
    }
  }
  return simple;
}

bool is_simple(const std::vector<RIA>& rbox, const std::string& role_name) {
  return simple_roles(rbox, {role_name}).count(role_name) > 0;
}

namespace {

std::string ria_text(const RIA& ria) {
  std::string out;
  for (std::size_t i = 0; i < ria.lhs.size(); ++i) {
    if (i) out += " o ";
    out += ria.lhs[i].name + (ria.lhs[i].inverted ? "-" : "");
  }
  out += " <= " + ria.rhs.name + (ria.rhs.inverted ? "-" : "");
  return out;
}

// Constraints s < r imposed by one RIA, or nullopt when no shape matches.
std::optional<std::vector<std::string>> shape_constraints(const RIA& ria) {
  if (ria.rhs.inverted || ria.lhs.empty()) return std::nullopt;
  const std::string& r = ria.rhs.name;
  const Role self{r, false};
  const auto& w = ria.lhs;
  if (w.size() == 2 && w[0] == self && w[1] == self) return std::vector<std::string>{};
  if (w.size() == 1 && (w[0] == self || w[0] == self.inverse())) return std::vector<std::string>{};
  auto others = [&](std::size_t from, std::size_t to) -> std::optional<std::vector<std::string>> {
    std::vector<std::string> out;
    for (std::size_t i = from; i < to; ++i) {
      if (w[i].name == r) return std::nullopt;
      out.push_back(w[i].name);
    }
    return out;
  };
  if (w.front() == self) {
    if (auto c = others(1, w.size())) return c;
  }
  if (w.back() == self) {
    if (auto c = others(0, w.size() - 1)) return c;
  }
  return others(0, w.size());
}

}  // namespace

RegularityReport find_regular_order(const std::vector<RIA>& rbox) {
  RegularityReport report;
  std::map<std::string, std::set<std::string>> succ;
  std::map<std::pair<std::string, std::string>, std::vector<const RIA*>> source;
  for (const auto& ria : rbox) {
    auto cons = shape_constraints(ria);
    if (!cons) {
      report.regular = false;
      report.offending.push_back(ria);
      if (report.message.empty()) report.message = "no regular shape matches: " + ria_text(ria);
      continue;
    }
    for (const auto& s : *cons) {
      succ[s].insert(ria.rhs.name);
      succ[ria.rhs.name];
      source[{s, ria.rhs.name}].push_back(&ria);
    }
  }
  if (!report.regular) return report;

  std::map<std::string, int> color;
  std::vector<std::string> stack;
  std::function<bool(const std::string&)> dfs = [&](const std::string& u) {
    color[u] = 1;
    stack.push_back(u);
    for (const auto& v : succ[u]) {
      if (color[v] == 1) {
        auto it = std::find(stack.begin(), stack.end(), v);
        report.cycle.assign(it, stack.end());
        report.cycle.push_back(v);
        return true;
      }
      if (color[v] == 0 && dfs(v)) return true;
    }
    stack.pop_back();
    color[u] = 2;
    return false;
  };
  for (const auto& [u, _] : succ) {
    if (color[u] == 0 && dfs(u)) break;
  }
  if (!report.cycle.empty()) {
    report.regular = false;
    std::set<RIA> seen;
    for (std::size_t i = 0; i + 1 < report.cycle.size(); ++i) {
      for (const RIA* ria : source[{report.cycle[i], report.cycle[i + 1]}]) {
        if (seen.insert(*ria).second) report.offending.push_back(*ria);
      }
    }
    std::string names;
    for (std::size_t i = 0; i < report.cycle.size(); ++i) {
      if (i) names += " < ";
      names += report.cycle[i];
    }
    report.message = "role order has a cycle: " + names;
    return report;
  }

  for (const auto& [u, _] : succ) {
    std::vector<std::string> todo(succ[u].begin(), succ[u].end());
    while (!todo.empty()) {
      std::string v = todo.back();
      todo.pop_back();
      if (!report.order.insert({u, v}).second) continue;
      for (const auto& w : succ[v]) todo.push_back(w);
    }
  }
  return report;
}

namespace {

void check_counts(const Concept& c, const std::set<std::string>& simple) {
  switch (c.kind()) {
    case ConceptKind::Name:
    case ConceptKind::NegName: return;
    case ConceptKind::And:
    case ConceptKind::Or:
      check_counts(c.left(), simple);
      check_counts(c.right(), simple);
      return;
    case ConceptKind::AtMost:
    case ConceptKind::AtLeast:
      if (!simple.count(c.role().name))
        throw Error("non-simple role '" + c.role().name + "' in a number restriction");
      [[fallthrough]];
    default: check_counts(c.body(), simple);
  }
}

std::set<std::string> count_roles(const Concept& c) {
  std::set<std::string> out;
  std::function<void(const Concept&)> walk = [&](const Concept& d) {
    switch (d.kind()) {
      case ConceptKind::Name:
      case ConceptKind::NegName: return;
      case ConceptKind::And:
      case ConceptKind::Or:
        walk(d.left());
        walk(d.right());
        return;
      case ConceptKind::AtMost:
      case ConceptKind::AtLeast: out.insert(d.role().name); [[fallthrough]];
      default: walk(d.body());
    }
  };
  walk(c);
  return out;
}

}  // namespace

void require_simple_counts(const Ontology& o, const Concept& c) {
  check_counts(c, simple_roles(o.rbox, count_roles(c)));
}

Ontology make_ontology(std::vector<Concept> tbox, std::vector<RIA> rbox,
                       std::set<std::string> declared_roles) {
  Ontology o;
  o.tbox = std::move(tbox);
  o.rbox = std::move(rbox);
  o.declared_roles = std::move(declared_roles);
  std::set<std::string> counted;
  for (const auto& c : o.tbox) {
    auto r = count_roles(c);
    counted.insert(r.begin(), r.end());
  }
  auto simple = simple_roles(o.rbox, counted);
  for (const auto& c : o.tbox) check_counts(c, simple);
  o.regularity = find_regular_order(o.rbox);
  return o;
}

Ontology normalize_ontology(const std::vector<RawGCI>& gcis, const std::vector<RIA>& rias,
                            const std::set<std::string>& declared_roles) {
  std::vector<Concept> tbox;
  tbox.reserve(gcis.size());
  for (const auto& g : gcis) {
    if (g.sub.is_top()) {
      tbox.push_back(g.sup);
    } else {
      tbox.push_back(Concept::disj(nnf_negate(g.sub), g.sup));
    }
  }
  return make_ontology(std::move(tbox), rias, declared_roles);
}

Ontology ontology_union(const Ontology& a, const Ontology& b) {
  std::vector<Concept> tbox = a.tbox;
  tbox.insert(tbox.end(), b.tbox.begin(), b.tbox.end());
  std::vector<RIA> rbox = a.rbox;
  rbox.insert(rbox.end(), b.rbox.begin(), b.rbox.end());
  std::set<std::string> roles = a.declared_roles;
  roles.insert(b.declared_roles.begin(), b.declared_roles.end());
  return make_ontology(std::move(tbox), std::move(rbox), std::move(roles));
}

Signature signature_of(const Concept& c) {
  Signature s;
  collect(c, &s.concepts, &s.roles);
  return s;
}

Signature signature_of(const Ontology& o) {
  Signature s;
  s.roles = o.declared_roles;
  for (const auto& c : o.tbox) collect(c, &s.concepts, &s.roles);
  for (const auto& ria : o.rbox) {
    s.roles.insert(ria.rhs.name);
    for (const auto& r : ria.lhs) s.roles.insert(r.name);
  }
  return s;
}

Signature signature_of(const Ontology& o, const std::vector<Concept>& cs) {
  Signature s = signature_of(o);
  for (const auto& c : cs) collect(c, &s.concepts, &s.roles);
  return s;
}

}  // namespace riq
