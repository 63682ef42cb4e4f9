// Random generators and brute-force reference implementations shared by the tests.
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "riq/core.hpp"
#include "riq/rsystem.hpp"

namespace oracle {

using riq::Concept;
using riq::Role;

struct ConceptShape {
  std::vector<std::string> names = {"A", "B"};
  std::vector<std::string> roles = {"r"};
  int depth = 2;
  bool counts = true;
  std::uint32_t max_count = 2;
};

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool coin(int percent) { return pick(100) < percent; }
  std::mt19937_64& rng() { return rng_; }

  Role role(const std::vector<std::string>& roles, bool inverses) {
    return Role{roles[pick(static_cast<int>(roles.size()))], inverses && coin(30)};
  }

  Concept literal(const ConceptShape& s) {
    const std::string& n = s.names[pick(static_cast<int>(s.names.size()))];
    return coin(50) ? Concept::name(n) : Concept::neg_name(n);
  }

  /// Counts under >= start at 1 so that negation stays an involution.
  Concept random_concept(const ConceptShape& s, int depth) {
    if (depth <= 0 || coin(25)) return literal(s);
    int kinds = s.counts ? 6 : 4;
    switch (pick(kinds)) {
      case 0: return Concept::conj(random_concept(s, depth - 1), random_concept(s, depth - 1));
      case 1: return Concept::disj(random_concept(s, depth - 1), random_concept(s, depth - 1));
      case 2: return Concept::exists(role(s.roles, true), random_concept(s, depth - 1));
      case 3: return Concept::forall(role(s.roles, true), random_concept(s, depth - 1));
      case 4:
        return Concept::at_most(static_cast<std::uint32_t>(pick(static_cast<int>(s.max_count) + 1)),
                                role(s.roles, true), random_concept(s, depth - 1));
      default:
        return Concept::at_least(static_cast<std::uint32_t>(1 + pick(static_cast<int>(s.max_count))),
                                 role(s.roles, true), random_concept(s, depth - 1));
    }
  }

  Concept random_concept(const ConceptShape& s) { return random_concept(s, s.depth); }

 private:
  std::mt19937_64 rng_;
};

/// Productions of the rewriting system, written out independently of the library.
inline std::vector<std::pair<Role, std::vector<Role>>> productions(const std::vector<riq::RIA>& rbox) {
  std::vector<std::pair<Role, std::vector<Role>>> out;
  for (const auto& ria : rbox) {
    out.push_back({ria.rhs, ria.lhs});
    std::vector<Role> mirror;
    for (auto it = ria.lhs.rbegin(); it != ria.lhs.rend(); ++it) mirror.push_back(Role{it->name, !it->inverted});
    out.push_back({Role{ria.rhs.name, !ria.rhs.inverted}, mirror});
  }
  return out;
}

/// Words derivable from r in at most `steps` rewriting steps, capped at `max_len` symbols.
inline std::set<std::vector<Role>> derivable(const std::vector<riq::RIA>& rbox, const Role& r, int steps,
                                             std::size_t max_len) {
  auto prods = productions(rbox);
  std::set<std::vector<Role>> seen{{r}};
  std::vector<std::vector<Role>> frontier{{r}};
  for (int k = 0; k < steps; ++k) {
    std::vector<std::vector<Role>> next;
    for (const auto& w : frontier) {
      for (std::size_t i = 0; i < w.size(); ++i) {
        for (const auto& [lhs, rhs] : prods) {
          if (!(w[i] == lhs)) continue;
          std::vector<Role> v(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
          v.insert(v.end(), rhs.begin(), rhs.end());
          v.insert(v.end(), w.begin() + static_cast<std::ptrdiff_t>(i) + 1, w.end());
          if (v.size() > max_len) continue;
          if (seen.insert(v).second) next.push_back(v);
        }
      }
    }
    frontier = std::move(next);
  }
  return seen;
}

/// True when every word derivable from r needs at most `steps` steps and `max_len` symbols, so that the
/// bounded enumeration is the whole language.
inline bool language_within(const std::vector<riq::RIA>& rbox, const Role& r, int steps, std::size_t max_len) {
  auto all = derivable(rbox, r, steps + 1, std::numeric_limits<std::size_t>::max());
  if (all != derivable(rbox, r, steps, std::numeric_limits<std::size_t>::max())) return false;
  return std::all_of(all.begin(), all.end(), [&](const auto& w) { return w.size() <= max_len; });
}

/// (from, role, to) triples witnessed by a walk of at most `max_edges` edges whose word is derivable from
/// the role in at most `steps` steps. Edges are traversed in both directions.
inline std::set<std::tuple<std::size_t, Role, std::size_t>> brute_reach(
    const std::vector<riq::RIA>& rbox, std::size_t nodes, const std::vector<riq::LabeledEdge>& edges,
    const std::set<Role>& roles, int steps, std::size_t max_edges) {
  std::vector<std::vector<std::pair<Role, std::size_t>>> adj(nodes);
  for (const auto& e : edges) {
    adj[e.from].push_back({e.role, e.to});
    adj[e.to].push_back({Role{e.role.name, !e.role.inverted}, e.from});
  }
  std::map<Role, std::set<std::vector<Role>>> lang;
  for (const auto& r : roles) lang[r] = derivable(rbox, r, steps, max_edges);

  std::set<std::tuple<std::size_t, Role, std::size_t>> out;
  std::vector<Role> word;
  auto walk = [&](auto&& self, std::size_t start, std::size_t at) -> void {
    if (!word.empty()) {
      for (const auto& [r, words] : lang) {
        if (words.count(word)) out.insert({start, r, at});
      }
    }
    if (word.size() == max_edges) return;
    for (const auto& [r, to] : adj[at]) {
      word.push_back(r);
      self(self, start, to);
      word.pop_back();
    }
  };
  for (std::size_t u = 0; u < nodes; ++u) walk(walk, u, u);
  return out;
}

}  // namespace oracle
