#include "riq/semantics.hpp"

#include <algorithm>
#include <bit>
#include <json.hpp>
#include <random>

#include "riq/parser.hpp"

namespace riq {

namespace {

// Element sets as bit vectors: a single word for small domains, a word vector otherwise.
struct Mask {
  std::uint64_t v = 0;
};

Mask make_empty(Mask, std::size_t) { return {}; }
Mask band(Mask a, Mask b) { return {a.v & b.v}; }
Mask bor(Mask a, Mask b) { return {a.v | b.v}; }
Mask bminus(Mask a, Mask b) { return {a.v & ~b.v}; }
std::size_t bcount(Mask a) { return static_cast<std::size_t>(std::popcount(a.v)); }
bool btest(Mask a, std::size_t i) { return (a.v >> i) & 1u; }
void bset(Mask& a, std::size_t i) { a.v |= std::uint64_t{1} << i; }
bool bequal(Mask a, Mask b) { return a.v == b.v; }

struct Dyn {
  std::vector<std::uint64_t> w;
};

Dyn make_empty(const Dyn&, std::size_t n) { return {std::vector<std::uint64_t>((n + 63) / 64, 0)}; }
Dyn band(const Dyn& a, const Dyn& b) {
  Dyn r = a;
  for (std::size_t i = 0; i < r.w.size(); ++i) r.w[i] &= b.w[i];
  return r;
}
Dyn bor(const Dyn& a, const Dyn& b) {
  Dyn r = a;
  for (std::size_t i = 0; i < r.w.size(); ++i) r.w[i] |= b.w[i];
  return r;
}
Dyn bminus(const Dyn& a, const Dyn& b) {
  Dyn r = a;
  for (std::size_t i = 0; i < r.w.size(); ++i) r.w[i] &= ~b.w[i];
  return r;
}
std::size_t bcount(const Dyn& a) {
  std::size_t n = 0;
  for (auto x : a.w) n += static_cast<std::size_t>(std::popcount(x));
  return n;
}
bool btest(const Dyn& a, std::size_t i) { return (a.w[i / 64] >> (i % 64)) & 1u; }
void bset(Dyn& a, std::size_t i) { a.w[i / 64] |= std::uint64_t{1} << (i % 64); }
bool bequal(const Dyn& a, const Dyn& b) { return a.w == b.w; }

struct CNode {
  ConceptKind kind;
  int sym = -1;
  int role = -1;
  std::uint32_t n = 0;
  int a = -1;
  int b = -1;
};

struct Symbols {
  std::map<std::string, int> names;
  std::map<std::string, int> roles;
  bool grow = true;
};

int symbol(std::map<std::string, int>& table, const std::string& s, bool grow) {
  auto it = table.find(s);
  if (it != table.end()) return it->second;
  if (!grow) throw Error("unknown symbol '" + s + "'");
  int id = static_cast<int>(table.size());
  table.emplace(s, id);
  return id;
}

// Role slot: 2 * role index, plus one for the inverse.
int compile(const Concept& c, Symbols& syms, std::vector<CNode>& out) {
  CNode n{c.kind()};
  switch (c.kind()) {
    case ConceptKind::Name:
    case ConceptKind::NegName:
      n.sym = c.atom() == kReservedName ? -1 : symbol(syms.names, c.atom(), syms.grow);
      break;
    case ConceptKind::And:
    case ConceptKind::Or:
      n.a = compile(c.left(), syms, out);
      n.b = compile(c.right(), syms, out);
      break;
    default:
      n.role = 2 * symbol(syms.roles, c.role().name, syms.grow) + (c.role().inverted ? 1 : 0);
      n.n = c.count();
      n.a = compile(c.body(), syms, out);
  }
  out.push_back(n);
  return static_cast<int>(out.size()) - 1;
}

template <class B>
struct Model {
  std::size_t n = 0;
  B full;
  std::vector<B> names;
  // succ[slot][element]
  std::vector<std::vector<B>> succ;
};

template <class B>
B eval(const std::vector<CNode>& prog, int root, const Model<B>& m) {
  std::vector<B> val(static_cast<std::size_t>(root) + 1);
  B none = make_empty(m.full, m.n);
  for (int i = 0; i <= root; ++i) {
    const CNode& c = prog[static_cast<std::size_t>(i)];
    B r = none;
    switch (c.kind) {
      case ConceptKind::Name: r = c.sym < 0 ? none : m.names[static_cast<std::size_t>(c.sym)]; break;
      case ConceptKind::NegName:
        r = bminus(m.full, c.sym < 0 ? none : m.names[static_cast<std::size_t>(c.sym)]);
        break;
      case ConceptKind::And: r = band(val[c.a], val[c.b]); break;
      case ConceptKind::Or: r = bor(val[c.a], val[c.b]); break;
      default: {
        const B& body = val[c.a];
        const auto& succ = m.succ[static_cast<std::size_t>(c.role)];
        for (std::size_t e = 0; e < m.n; ++e) {
          bool in = false;
          switch (c.kind) {
            case ConceptKind::Exists: in = bcount(band(succ[e], body)) > 0; break;
            case ConceptKind::Forall: in = bcount(bminus(succ[e], body)) == 0; break;
            case ConceptKind::AtMost: in = bcount(band(succ[e], body)) <= c.n; break;
            default: in = bcount(band(succ[e], body)) >= c.n; break;
          }
          if (in) bset(r, e);
        }
      }
    }
    val[static_cast<std::size_t>(i)] = std::move(r);
  }
  return val[static_cast<std::size_t>(root)];
}

Model<Dyn> dyn_model(const Interpretation& I, const Symbols& syms) {
  Model<Dyn> m;
  m.n = I.domain_size;
  Dyn none = make_empty(Dyn{}, m.n);
  m.full = none;
  for (std::size_t e = 0; e < m.n; ++e) bset(m.full, e);
  m.names.assign(syms.names.size(), none);
  for (const auto& [name, id] : syms.names) {
    auto it = I.concepts.find(name);
    if (it == I.concepts.end()) continue;
    for (std::size_t e : it->second) {
      if (e >= m.n) throw Error("element out of range in concept '" + name + "'");
      bset(m.names[static_cast<std::size_t>(id)], e);
    }
  }
  m.succ.assign(2 * syms.roles.size(), std::vector<Dyn>(m.n, none));
  for (const auto& [name, id] : syms.roles) {
    auto it = I.roles.find(name);
    if (it == I.roles.end()) continue;
    for (const auto& [a, b] : it->second) {
      if (a >= m.n || b >= m.n) throw Error("element out of range in role '" + name + "'");
      bset(m.succ[2 * static_cast<std::size_t>(id)][a], b);
      bset(m.succ[2 * static_cast<std::size_t>(id) + 1][b], a);
    }
  }
  return m;
}

Symbols symbols_of(const Interpretation& I) {
  Symbols s;
  for (const auto& [name, _] : I.concepts) symbol(s.names, name, true);
  for (const auto& [name, _] : I.roles) symbol(s.roles, name, true);
  s.grow = false;
  return s;
}

RolePairs compose(const RolePairs& a, const RolePairs& b) {
  std::map<std::size_t, std::vector<std::size_t>> next;
  for (const auto& [x, y] : b) next[x].push_back(y);
  RolePairs out;
  for (const auto& [x, y] : a) {
    auto it = next.find(y);
    if (it == next.end()) continue;
    for (std::size_t z : it->second) out.insert({x, z});
  }
  return out;
}

RolePairs converse(const RolePairs& a) {
  RolePairs out;
  for (const auto& [x, y] : a) out.insert({y, x});
  return out;
}

RolePairs extension(const std::map<std::string, RolePairs>& roles, const Role& r) {
  auto it = roles.find(r.name);
  if (it == roles.end()) return {};
  return r.inverted ? converse(it->second) : it->second;
}

RolePairs chain(const std::map<std::string, RolePairs>& roles, const std::vector<Role>& w) {
  RolePairs acc = extension(roles, w.front());
  for (std::size_t i = 1; i < w.size(); ++i) acc = compose(acc, extension(roles, w[i]));
  return acc;
}

std::size_t lookup(const Assignment& a, Label x) {
  auto it = a.find(x);
  if (it == a.end()) throw Error("label " + render(x) + " is not assigned");
  return it->second;
}

}  // namespace

std::set<std::size_t> interpret_concept(const Concept& c, const Interpretation& I) {
  Symbols syms = symbols_of(I);
  std::vector<CNode> prog;
  int root = compile(c, syms, prog);
  Dyn r = eval(prog, root, dyn_model(I, syms));
  std::set<std::size_t> out;
  for (std::size_t e = 0; e < I.domain_size; ++e) {
    if (btest(r, e)) out.insert(e);
  }
  return out;
}

bool is_model(const Interpretation& I, const Ontology& o) {
  for (const auto& ria : o.rbox) {
    RolePairs lhs = chain(I.roles, ria.lhs);
    RolePairs rhs = extension(I.roles, ria.rhs);
    if (!std::includes(rhs.begin(), rhs.end(), lhs.begin(), lhs.end())) return false;
  }
  if (o.tbox.empty()) return true;
  Symbols syms = symbols_of(I);
  Model<Dyn> m = dyn_model(I, syms);
  for (const auto& c : o.tbox) {
    std::vector<CNode> prog;
    int root = compile(c, syms, prog);
    if (!bequal(eval(prog, root, m), m.full)) return false;
  }
  return true;
}

bool holds_antecedent(const Interpretation& I, const Assignment& a, const std::set<StructuralAtom>& gamma) {
  for (const auto& at : gamma) {
    std::size_t x = lookup(a, at.from), y = lookup(a, at.to);
    switch (at.kind) {
      case StructuralAtom::Kind::Eq:
        if (x != y) return false;
        break;
      case StructuralAtom::Kind::Neq:
        if (x == y) return false;
        break;
      case StructuralAtom::Kind::Role: {
        auto it = I.roles.find(at.role.name);
        if (it == I.roles.end()) return false;
        auto pair = at.role.inverted ? std::make_pair(y, x) : std::make_pair(x, y);
        if (!it->second.count(pair)) return false;
      }
    }
  }
  return true;
}

bool holds_some(const Interpretation& I, const Assignment& a, const std::vector<LabeledConcept>& delta) {
  if (delta.empty()) return false;
  Symbols syms = symbols_of(I);
  Model<Dyn> m = dyn_model(I, syms);
  for (const auto& lc : delta) {
    std::vector<CNode> prog;
    int root = compile(lc.cpt, syms, prog);
    if (btest(eval(prog, root, m), lookup(a, lc.label))) return true;
  }
  return false;
}

bool seq_satisfied(const Interpretation& I, const Assignment& a, const Ontology& o, const Sequent& s) {
  if (!is_model(I, o) || !holds_antecedent(I, a, s.antecedent)) return true;
  return holds_some(I, a, s.consequent);
}

bool falsifies(const Interpretation& I, const Assignment& a, const Ontology& o, const Sequent& s) {
  return !seq_satisfied(I, a, o, s);
}

std::map<std::string, RolePairs> ria_closure(std::map<std::string, RolePairs> roles, const std::vector<RIA>& rbox) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& ria : rbox) {
      RolePairs add = chain(roles, ria.lhs);
      if (ria.rhs.inverted) add = converse(add);
      auto& target = roles[ria.rhs.name];
      std::size_t before = target.size();
      target.insert(add.begin(), add.end());
      if (target.size() != before) changed = true;
    }
  }
  return roles;
}

bool exhaustive_feasible(const Signature& sig, std::size_t max_domain) {
  return sig.concepts.size() <= 3 && sig.roles.size() <= 2 && max_domain <= 3;
}

namespace {

class Search {
 public:
  Search(const Ontology& o, const Sequent& s) : o_(o), s_(s) {
    Signature sig = signature_of(o);
    for (const auto& lc : s.consequent) {
      auto cs = signature_of(lc.cpt);
      sig.concepts.insert(cs.concepts.begin(), cs.concepts.end());
      sig.roles.insert(cs.roles.begin(), cs.roles.end());
    }
    for (const auto& a : s.antecedent) {
      if (a.kind == StructuralAtom::Kind::Role) sig.roles.insert(a.role.name);
    }
    for (const auto& n : sig.concepts) symbol(syms_.names, n, true);
    for (const auto& r : sig.roles) symbol(syms_.roles, r, true);
    syms_.grow = false;
    for (const auto& c : o.tbox) {
      gcis_.emplace_back();
      gci_roots_.push_back(compile(c, syms_, gcis_.back()));
    }
    for (const auto& lc : s.consequent) {
      delta_.emplace_back();
      delta_roots_.push_back(compile(lc.cpt, syms_, delta_.back()));
    }
    std::set<Label> ls = labels_of(s);
    labels_.assign(ls.begin(), ls.end());
    for (const auto& ria : o.rbox) {
      std::vector<int> slots;
      for (const auto& r : ria.lhs) slots.push_back(slot(r));
      rias_.push_back({slots, slot(ria.rhs)});
    }
  }

  std::size_t name_count() const { return syms_.names.size(); }
  std::size_t role_count() const { return syms_.roles.size(); }

  // Checks one interpretation given by element colors and role bits; fills `found` on success.
  bool check(std::size_t d, const std::vector<std::uint32_t>& colors, const std::vector<std::uint64_t>& rel,
             std::optional<CounterModel>& found) {
    Model<Mask> m;
    m.n = d;
    m.full.v = (d == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << d) - 1);
    m.names.assign(name_count(), Mask{});
    for (std::size_t e = 0; e < d; ++e) {
      for (std::size_t k = 0; k < name_count(); ++k) {
        if ((colors[e] >> k) & 1u) bset(m.names[k], e);
      }
    }
    m.succ.assign(2 * role_count(), std::vector<Mask>(d));
    for (std::size_t r = 0; r < role_count(); ++r) {
      for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
          if ((rel[r] >> (a * d + b)) & 1u) {
            bset(m.succ[2 * r][a], b);
            bset(m.succ[2 * r + 1][b], a);
          }
        }
      }
    }
    for (const auto& [lhs, rhs] : rias_) {
      for (std::size_t a = 0; a < d; ++a) {
        Mask cur{std::uint64_t{1} << a};
        for (int s : lhs) {
          Mask next{};
          for (std::size_t b = 0; b < d; ++b) {
            if (btest(cur, b)) next = bor(next, m.succ[static_cast<std::size_t>(s)][b]);
          }
          cur = next;
        }
        if (bminus(cur, m.succ[static_cast<std::size_t>(rhs)][a]).v) return false;
      }
    }
    for (std::size_t i = 0; i < gcis_.size(); ++i) {
      if (!bequal(eval(gcis_[i], gci_roots_[i], m), m.full)) return false;
    }
    std::vector<Mask> delta;
    for (std::size_t i = 0; i < delta_.size(); ++i) delta.push_back(eval(delta_[i], delta_roots_[i], m));

    std::vector<std::size_t> assign(labels_.size(), 0);
    while (true) {
      if (assignment_falsifies(m, delta, assign)) {
        found = to_counter_model(d, colors, rel, assign);
        return true;
      }
      std::size_t k = 0;
      while (k < assign.size() && ++assign[k] == d) assign[k++] = 0;
      if (k == assign.size()) break;
    }
    return false;
  }

  // Sampled relations are closed under the role inclusions so that more samples are models.
  void close_relations(std::size_t d, std::vector<std::uint64_t>& rel) const {
    auto has = [&](int slot, std::size_t a, std::size_t b) {
      std::size_t r = static_cast<std::size_t>(slot / 2);
      if (slot % 2) std::swap(a, b);
      return (rel[r] >> (a * d + b)) & 1u;
    };
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& [lhs, rhs] : rias_) {
        for (std::size_t a = 0; a < d; ++a) {
          std::uint64_t cur = std::uint64_t{1} << a;
          for (int s : lhs) {
            std::uint64_t next = 0;
            for (std::size_t b = 0; b < d; ++b) {
              if (!((cur >> b) & 1u)) continue;
              for (std::size_t c = 0; c < d; ++c) {
                if (has(s, b, c)) next |= std::uint64_t{1} << c;
              }
            }
            cur = next;
          }
          for (std::size_t b = 0; b < d; ++b) {
            if (!((cur >> b) & 1u) || has(rhs, a, b)) continue;
            std::size_t x = a, y = b;
            if (rhs % 2) std::swap(x, y);
            rel[static_cast<std::size_t>(rhs / 2)] |= std::uint64_t{1} << (x * d + y);
            changed = true;
          }
        }
      }
    }
  }

 private:
  int slot(const Role& r) const {
    return 2 * syms_.roles.at(r.name) + (r.inverted ? 1 : 0);
  }

  std::size_t index_of(Label x) const {
    return static_cast<std::size_t>(std::lower_bound(labels_.begin(), labels_.end(), x) - labels_.begin());
  }

  bool assignment_falsifies(const Model<Mask>& m, const std::vector<Mask>& delta,
                            const std::vector<std::size_t>& assign) const {
    for (const auto& at : s_.antecedent) {
      std::size_t x = assign[index_of(at.from)], y = assign[index_of(at.to)];
      switch (at.kind) {
        case StructuralAtom::Kind::Eq:
          if (x != y) return false;
          break;
        case StructuralAtom::Kind::Neq:
          if (x == y) return false;
          break;
        case StructuralAtom::Kind::Role:
          if (!btest(m.succ[static_cast<std::size_t>(slot(at.role))][x], y)) return false;
      }
    }
    for (std::size_t i = 0; i < delta.size(); ++i) {
      if (btest(delta[i], assign[index_of(s_.consequent[i].label)])) return false;
    }
    return true;
  }

  CounterModel to_counter_model(std::size_t d, const std::vector<std::uint32_t>& colors,
                                const std::vector<std::uint64_t>& rel, const std::vector<std::size_t>& assign) const {
    CounterModel cm;
    cm.interpretation.domain_size = d;
    for (const auto& [name, k] : syms_.names) {
      auto& ext = cm.interpretation.concepts[name];
      for (std::size_t e = 0; e < d; ++e) {
        if ((colors[e] >> k) & 1u) ext.insert(e);
      }
    }
    for (const auto& [name, r] : syms_.roles) {
      auto& ext = cm.interpretation.roles[name];
      for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
          if ((rel[static_cast<std::size_t>(r)] >> (a * d + b)) & 1u) ext.insert({a, b});
        }
      }
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) cm.assignment[labels_[i]] = assign[i];
    return cm;
  }

  const Ontology& o_;
  const Sequent& s_;
  Symbols syms_;
  std::vector<std::vector<CNode>> gcis_, delta_;
  std::vector<int> gci_roots_, delta_roots_;
  std::vector<Label> labels_;
  std::vector<std::pair<std::vector<int>, int>> rias_;
};

}  // namespace

OracleResult find_countermodel_bounded(const Ontology& o, const Sequent& s, const OracleOptions& opts) {
  if (opts.max_domain == 0 || opts.max_domain > 8) throw Error("oracle domain bound must be between 1 and 8");
  Search search(o, s);
  OracleResult result;
  result.max_domain = opts.max_domain;
  const std::size_t k = search.name_count(), m = search.role_count();
  if (k > 16) throw Error("oracle signature too large");
  bool exhaustive = opts.mode == OracleMode::Exhaustive ||
                    (opts.mode == OracleMode::Auto && k <= 3 && m <= 2 && opts.max_domain <= 3);
  result.exhaustive = exhaustive;

  if (exhaustive) {
    for (std::size_t d = 1; d <= opts.max_domain; ++d) {
      if (d * d * m > 62) throw Error("exhaustive oracle search too large");
      const std::uint32_t colors_n = 1u << k;
      std::vector<std::uint32_t> colors(d, 0);
      // Colors are enumerated non-decreasing: every interpretation is isomorphic to such a one.
      while (true) {
        const std::uint64_t rel_space = std::uint64_t{1} << (d * d);
        std::vector<std::uint64_t> rel(m, 0);
        while (true) {
          if (search.check(d, colors, rel, result.model)) return result;
          std::size_t r = 0;
          while (r < m && ++rel[r] == rel_space) rel[r++] = 0;
          if (r == m) break;
        }
        std::size_t i = d;
        while (i > 0 && colors[i - 1] + 1 == colors_n) --i;
        if (i == 0) break;
        ++colors[i - 1];
        for (std::size_t j = i; j < d; ++j) colors[j] = colors[i - 1];
      }
    }
    return result;
  }

  std::mt19937_64 rng(opts.seed);
  for (std::size_t n = 0; n < opts.samples; ++n) {
    std::size_t d = 1 + rng() % opts.max_domain;
    std::vector<std::uint32_t> colors(d);
    for (auto& c : colors) c = static_cast<std::uint32_t>(rng() & ((1u << k) - 1));
    std::vector<std::uint64_t> rel(m);
    const std::uint64_t mask = (d * d == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << (d * d)) - 1);
    for (auto& r : rel) r = rng() & rng() & mask;
    search.close_relations(d, rel);
    if (search.check(d, colors, rel, result.model)) return result;
  }
  return result;
}

std::string model_to_json(const Interpretation& I, const Assignment* a) {
  using nlohmann::json;
  json doc;
  doc["domain"] = json::array();
  for (std::size_t e = 0; e < I.domain_size; ++e) doc["domain"].push_back(e);
  doc["concepts"] = json::object();
  for (const auto& [name, ext] : I.concepts) {
    if (name == kReservedName) continue;
    doc["concepts"][name] = json(std::vector<std::size_t>(ext.begin(), ext.end()));
  }
  doc["roles"] = json::object();
  for (const auto& [name, ext] : I.roles) {
    json pairs = json::array();
    for (const auto& [x, y] : ext) pairs.push_back({x, y});
    doc["roles"][name] = pairs;
  }
  if (a) {
    doc["assignment"] = json::object();
    for (const auto& [x, e] : *a) doc["assignment"][render(x)] = e;
  }
  return doc.dump(2);
}

CounterModel model_from_json(const std::string& text) {
  using nlohmann::json;
  try {
    json doc = json::parse(text);
    CounterModel cm;
    cm.interpretation.domain_size = doc.at("domain").size();
    for (const auto& [name, ext] : doc.at("concepts").items()) {
      cm.interpretation.concepts[name] = ext.get<std::set<std::size_t>>();
    }
    for (const auto& [name, ext] : doc.at("roles").items()) {
      auto& pairs = cm.interpretation.roles[name];
      for (const auto& p : ext) pairs.insert({p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>()});
    }
    if (doc.contains("assignment")) {
      for (const auto& [x, e] : doc["assignment"].items()) cm.assignment[parse_label(x)] = e.get<std::size_t>();
    }
    return cm;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed model JSON: ") + e.what());
  }
}

}  // namespace riq
