#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "riq/core.hpp"

namespace riq {

struct Production {
  Role lhs;
  std::vector<Role> rhs;

  friend auto operator<=>(const Production&, const Production&) = default;
  friend bool operator==(const Production&, const Production&) = default;
};

/// Rewriting system read off an RBox: every RIA yields a production and its mirror on inverses.
struct RSystem {
  std::vector<Production> productions;
  std::set<Role> roles;
};

RSystem build_rsystem(const std::vector<RIA>& rbox);
inline RSystem build_rsystem(const Ontology& o) { return build_rsystem(o.rbox); }

using Word = std::vector<Role>;

/// Shortest derivation from `from` to `to` (inclusive of both ends), if one exists within max_steps.
std::optional<std::vector<Word>> derives_bounded(const RSystem& g, const Word& from, const Word& to,
                                                 std::size_t max_steps);

/// Membership of `word` in the language generated from r, by interval dynamic programming.
bool in_language(const RSystem& g, const Role& r, const Word& word);

struct LabeledEdge {
  std::size_t from = 0;
  Role role;
  std::size_t to = 0;

  friend auto operator<=>(const LabeledEdge&, const LabeledEdge&) = default;
  friend bool operator==(const LabeledEdge&, const LabeledEdge&) = default;
};

struct ReachWitness {
  Word word;
  /// Node sequence of length word.size() + 1.
  std::vector<std::size_t> nodes;
};

/// Context-free reachability over a labeled graph, one relation per role.
class ReachTable {
 public:
  bool contains(const Role& r, std::size_t u, std::size_t v) const;
  /// Targets reachable from u along a word generated from r.
  std::vector<std::size_t> successors(const Role& r, std::size_t u) const;
  std::set<std::pair<std::size_t, std::size_t>> pairs(const Role& r) const;
  std::optional<ReachWitness> witness(const Role& r, std::size_t u, std::size_t v) const;
  std::set<Role> roles() const;
  std::size_t node_count() const { return nodes_; }

 private:
  friend ReachTable cfl_closure(const RSystem&, std::size_t, const std::vector<LabeledEdge>&);

  struct Fact {
    std::size_t from, symbol, to;
    int kind;  // 0 base, 1 unit, 2 binary
    std::size_t a, b;
  };
  void unfold(std::size_t fact, Word& word, std::vector<std::size_t>& nodes) const;

  std::size_t nodes_ = 0;
  std::map<Role, std::size_t> symbol_of_;
  std::vector<Fact> facts_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> index_;
};

/// Least fixpoint of Reach(r) over the productions of g, seeded with the edges.
ReachTable cfl_closure(const RSystem& g, std::size_t node_count, const std::vector<LabeledEdge>& edges);

}  // namespace riq
