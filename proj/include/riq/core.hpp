#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace riq {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reserved concept name used to build TOP and BOT. Never accepted from user input.
inline constexpr const char* kReservedName = "_T";

/// Largest count accepted in a number restriction.
inline constexpr std::uint32_t kMaxCount = 2147483647u;

struct Role {
  std::string name;
  bool inverted = false;

  Role inverse() const { return Role{name, !inverted}; }

  friend auto operator<=>(const Role&, const Role&) = default;
  friend bool operator==(const Role&, const Role&) = default;
};

Role make_role(std::string name, bool inverted = false);

enum class ConceptKind : std::uint8_t { Name, NegName, And, Or, Exists, Forall, AtMost, AtLeast };

struct ConceptNode;

/// Immutable concept in negation normal form. Copies share structure.
class Concept {
 public:
  static Concept name(std::string n);
  static Concept neg_name(std::string n);
  static Concept conj(Concept a, Concept b);
  static Concept disj(Concept a, Concept b);
  static Concept exists(Role r, Concept c);
  static Concept forall(Role r, Concept c);
  static Concept at_most(std::uint32_t n, Role r, Concept c);
  static Concept at_least(std::uint32_t n, Role r, Concept c);
  static Concept top();
  static Concept bottom();

  ConceptKind kind() const;
  /// Concept name of a literal.
  const std::string& atom() const;
  const Role& role() const;
  std::uint32_t count() const;
  /// Operands of And/Or.
  const Concept& left() const;
  const Concept& right() const;
  /// Filler of a quantifier or number restriction.
  const Concept& body() const;

  bool is_literal() const;
  bool is_top() const;
  bool is_bottom() const;
  std::size_t hash() const;

  friend bool operator==(const Concept& a, const Concept& b);
  friend std::strong_ordering operator<=>(const Concept& a, const Concept& b);

 private:
  static Concept build(ConceptKind k, std::string name, Role role, std::uint32_t n,
                       std::vector<Concept> operands);
  explicit Concept(std::shared_ptr<const ConceptNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const ConceptNode> node_;
};

struct ConceptNode {
  ConceptKind kind;
  std::string name;
  Role role;
  std::uint32_t n = 0;
  std::vector<Concept> operands;
  std::size_t hash = 0;
};

Concept nnf_negate(const Concept& c);
std::size_t weight(const Concept& c);
/// Concept names occurring in c, reserved name excluded.
std::set<std::string> concept_names(const Concept& c);
std::set<std::string> role_names(const Concept& c);
/// Disjunction/conjunction of a list, BOT/TOP when empty.
Concept disjunction(const std::vector<Concept>& cs);
Concept conjunction(const std::vector<Concept>& cs);

/// Role inclusion axiom lhs[0] o ... o lhs[k-1] <= rhs.
struct RIA {
  std::vector<Role> lhs;
  Role rhs;

  friend auto operator<=>(const RIA&, const RIA&) = default;
  friend bool operator==(const RIA&, const RIA&) = default;
};

struct RegularityReport {
  bool regular = true;
  /// Strict order on role names as (smaller, larger) pairs, transitively closed.
  std::set<std::pair<std::string, std::string>> order;
  std::vector<RIA> offending;
  std::vector<std::string> cycle;
  std::string message;
};

/// Normalized ontology: every GCI is TOP <= C with C in NNF.
struct Ontology {
  std::vector<RIA> rbox;
  std::vector<Concept> tbox;
  std::set<std::string> declared_roles;
  RegularityReport regularity;

  friend bool operator==(const Ontology& a, const Ontology& b) {
    return a.rbox == b.rbox && a.tbox == b.tbox && a.declared_roles == b.declared_roles;
  }
};

struct Signature {
  std::set<std::string> concepts;
  std::set<std::string> roles;
};

bool is_simple(const std::vector<RIA>& rbox, const std::string& role_name);
std::set<std::string> simple_roles(const std::vector<RIA>& rbox, const std::set<std::string>& names);
RegularityReport find_regular_order(const std::vector<RIA>& rbox);

struct RawGCI {
  Concept sub;
  Concept sup;
};

/// Builds an ontology; throws if a number restriction uses a non-simple role.
Ontology normalize_ontology(const std::vector<RawGCI>& gcis, const std::vector<RIA>& rias,
                            const std::set<std::string>& declared_roles = {});
/// Same as normalize_ontology for GCIs already of the form TOP <= C.
Ontology make_ontology(std::vector<Concept> tbox, std::vector<RIA> rbox,
                       std::set<std::string> declared_roles = {});
Ontology ontology_union(const Ontology& a, const Ontology& b);
/// Throws if c places a non-simple role under a number restriction.
void require_simple_counts(const Ontology& o, const Concept& c);

Signature signature_of(const Ontology& o);
Signature signature_of(const Concept& c);
Signature signature_of(const Ontology& o, const std::vector<Concept>& cs);

}  // namespace riq

template <>
struct std::hash<riq::Concept> {
  std::size_t operator()(const riq::Concept& c) const noexcept { return c.hash(); }
};
