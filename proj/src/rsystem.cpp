#include "riq/rsystem.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

namespace riq {

RSystem build_rsystem(const std::vector<RIA>& rbox) {
  std::set<Production> prods;
  RSystem g;
  for (const auto& ria : rbox) {
    if (ria.lhs.empty()) throw Error("role inclusion with empty left-hand side");
    prods.insert(Production{ria.rhs, ria.lhs});
    Word mirrored;
    for (auto it = ria.lhs.rbegin(); it != ria.lhs.rend(); ++it) mirrored.push_back(it->inverse());
    prods.insert(Production{ria.rhs.inverse(), mirrored});
  }
  g.productions.assign(prods.begin(), prods.end());
  for (const auto& p : g.productions) {
    g.roles.insert(p.lhs);
    g.roles.insert(p.lhs.inverse());
    for (const auto& r : p.rhs) {
      g.roles.insert(r);
      g.roles.insert(r.inverse());
    }
  }
  return g;
}

std::optional<std::vector<Word>> derives_bounded(const RSystem& g, const Word& from, const Word& to,
                                                 std::size_t max_steps) {
  if (from == to) return std::vector<Word>{from};
  if (from.empty() || from.size() > to.size()) return std::nullopt;
  std::map<Word, Word> parent;
  std::deque<std::pair<Word, std::size_t>> queue;
  parent.emplace(from, Word{});
  queue.emplace_back(from, 0);
  while (!queue.empty()) {
    auto [cur, depth] = queue.front();
    queue.pop_front();
    if (depth == max_steps) continue;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      for (const auto& p : g.productions) {
        if (p.lhs != cur[i]) continue;
        if (cur.size() - 1 + p.rhs.size() > to.size()) continue;
        Word next(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(i));
        next.insert(next.end(), p.rhs.begin(), p.rhs.end());
        next.insert(next.end(), cur.begin() + static_cast<std::ptrdiff_t>(i) + 1, cur.end());
        if (parent.count(next)) continue;
        parent.emplace(next, cur);
        if (next == to) {
          std::vector<Word> chain{next};
          Word w = cur;
          while (true) {
            chain.push_back(w);
            if (w == from) break;
            w = parent.at(w);
          }
          std::reverse(chain.begin(), chain.end());
          return chain;
        }
        queue.emplace_back(std::move(next), depth + 1);
      }
    }
  }
  return std::nullopt;
}

bool in_language(const RSystem& g, const Role& r, const Word& word) {
  const std::size_t n = word.size();
  if (n == 0) return false;
  // derive[i][len] holds the roles generating word[i, i+len).
  std::vector<std::vector<std::set<Role>>> derive(n, std::vector<std::set<Role>>(n + 1));
  auto sequence_derives = [&](const Word& rhs, std::size_t start, std::size_t len) {
    // reach[k] = set of end offsets after consuming rhs[0..k)
    std::set<std::size_t> ends{start};
    for (const auto& sym : rhs) {
      std::set<std::size_t> next;
      for (std::size_t e : ends) {
        for (std::size_t l = 1; e + l <= start + len; ++l) {
          if (l == len && rhs.size() > 1) continue;
          if (derive[e][l].count(sym)) next.insert(e + l);
        }
      }
      ends = std::move(next);
      if (ends.empty()) return false;
    }
    return ends.count(start + len) > 0;
  };
  for (std::size_t len = 1; len <= n; ++len) {
    for (std::size_t i = 0; i + len <= n; ++i) {
      auto& cell = derive[i][len];
      if (len == 1) cell.insert(word[i]);
      bool changed = true;
      while (changed) {
        changed = false;
        for (const auto& p : g.productions) {
          if (cell.count(p.lhs) || p.rhs.size() > len) continue;
          if (sequence_derives(p.rhs, i, len)) {
            cell.insert(p.lhs);
            changed = true;
          }
        }
      }
    }
  }
  return derive[0][n].count(r) > 0;
}

bool ReachTable::contains(const Role& r, std::size_t u, std::size_t v) const {
  auto it = symbol_of_.find(r);
  if (it == symbol_of_.end()) return false;
  return index_.count({u, it->second, v}) > 0;
}

std::vector<std::size_t> ReachTable::successors(const Role& r, std::size_t u) const {
  std::vector<std::size_t> out;
  auto it = symbol_of_.find(r);
  if (it == symbol_of_.end()) return out;
  auto lo = index_.lower_bound({u, it->second, 0});
  for (; lo != index_.end(); ++lo) {
    const auto& [from, sym, to] = lo->first;
    if (from != u || sym != it->second) break;
    out.push_back(to);
  }
  return out;
}

std::set<std::pair<std::size_t, std::size_t>> ReachTable::pairs(const Role& r) const {
  std::set<std::pair<std::size_t, std::size_t>> out;
  auto it = symbol_of_.find(r);
  if (it == symbol_of_.end()) return out;
  for (const auto& f : facts_) {
    if (f.symbol == it->second) out.insert({f.from, f.to});
  }
  return out;
}

std::set<Role> ReachTable::roles() const {
  std::set<Role> out;
  for (const auto& [r, _] : symbol_of_) out.insert(r);
  return out;
}

void ReachTable::unfold(std::size_t fact, Word& word, std::vector<std::size_t>& nodes) const {
  const Fact& f = facts_[fact];
  switch (f.kind) {
    case 0: {
      for (const auto& [r, s] : symbol_of_) {
        if (s == f.symbol) {
          word.push_back(r);
          break;
        }
      }
      nodes.push_back(f.to);
      return;
    }
    case 1: unfold(f.a, word, nodes); return;
    default:
      unfold(f.a, word, nodes);
      unfold(f.b, word, nodes);
  }
}

std::optional<ReachWitness> ReachTable::witness(const Role& r, std::size_t u, std::size_t v) const {
  auto it = symbol_of_.find(r);
  if (it == symbol_of_.end()) return std::nullopt;
  auto f = index_.find({u, it->second, v});
  if (f == index_.end()) return std::nullopt;
  ReachWitness w;
  w.nodes.push_back(u);
  unfold(f->second, w.word, w.nodes);
  return w;
}

ReachTable cfl_closure(const RSystem& g, std::size_t node_count, const std::vector<LabeledEdge>& edges) {
  ReachTable t;
  t.nodes_ = node_count;
  auto symbol = [&](const Role& r) {
    auto [it, fresh] = t.symbol_of_.emplace(r, t.symbol_of_.size());
    (void)fresh;
    return it->second;
  };
  for (const auto& r : g.roles) symbol(r);
  for (const auto& e : edges) {
    if (e.from >= node_count || e.to >= node_count) throw Error("edge endpoint out of range");
    symbol(e.role);
    symbol(e.role.inverse());
  }
  std::size_t next_symbol = t.symbol_of_.size();

  // Binarized grammar: unit[X] = {A : A -> X}, left[X] = {(Y, A) : A -> X Y}, right[Y] = {(X, A)}.
  std::map<std::size_t, std::vector<std::size_t>> unit;
  std::map<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>> as_left, as_right;
  for (const auto& p : g.productions) {
    std::size_t head = symbol(p.lhs);
    if (p.rhs.size() == 1) {
      unit[symbol(p.rhs[0])].push_back(head);
      continue;
    }
    std::size_t acc = symbol(p.rhs[0]);
    for (std::size_t i = 1; i < p.rhs.size(); ++i) {
      std::size_t target = (i + 1 == p.rhs.size()) ? head : next_symbol++;
      std::size_t rhs_sym = symbol(p.rhs[i]);
      as_left[acc].push_back({rhs_sym, target});
      as_right[rhs_sym].push_back({acc, target});
      acc = target;
    }
  }

  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> out_edges, in_edges;
  std::deque<std::size_t> work;
  auto add = [&](std::size_t from, std::size_t sym, std::size_t to, int kind, std::size_t a, std::size_t b) {
    auto key = std::make_tuple(from, sym, to);
    if (t.index_.count(key)) return;
    std::size_t id = t.facts_.size();
    t.facts_.push_back({from, sym, to, kind, a, b});
    t.index_.emplace(key, id);
    out_edges[{sym, from}].push_back(id);
    in_edges[{sym, to}].push_back(id);
    work.push_back(id);
  };
  for (const auto& e : edges) {
    add(e.from, symbol(e.role), e.to, 0, 0, 0);
    add(e.to, symbol(e.role.inverse()), e.from, 0, 0, 0);
  }
  while (!work.empty()) {
    std::size_t id = work.front();
    work.pop_front();
    const auto f = t.facts_[id];
    if (auto u = unit.find(f.symbol); u != unit.end()) {
      for (std::size_t head : u->second) add(f.from, head, f.to, 1, id, 0);
    }
    if (auto l = as_left.find(f.symbol); l != as_left.end()) {
      for (const auto& [rhs_sym, head] : l->second) {
        auto it = out_edges.find({rhs_sym, f.to});
        if (it == out_edges.end()) continue;
        std::vector<std::size_t> partners = it->second;
        for (std::size_t pid : partners) add(f.from, head, t.facts_[pid].to, 2, id, pid);
      }
    }
    if (auto r = as_right.find(f.symbol); r != as_right.end()) {
      for (const auto& [lhs_sym, head] : r->second) {
        auto it = in_edges.find({lhs_sym, f.from});
        if (it == in_edges.end()) continue;
        std::vector<std::size_t> partners = it->second;
        for (std::size_t pid : partners) add(t.facts_[pid].from, head, f.to, 2, pid, id);
      }
    }
  }
  return t;
}

}  // namespace riq
