#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "riq/core.hpp"
#include "riq/rsystem.hpp"

namespace riq {

struct Label {
  std::uint32_t id = 0;

  friend auto operator<=>(const Label&, const Label&) = default;
  friend bool operator==(const Label&, const Label&) = default;
};

struct StructuralAtom {
  enum class Kind : std::uint8_t { Role, Eq, Neq };

  Kind kind = Kind::Role;
  Role role;
  Label from;
  Label to;

  static StructuralAtom role_atom(Role r, Label x, Label y) { return {Kind::Role, std::move(r), x, y}; }
  static StructuralAtom eq(Label x, Label y) { return {Kind::Eq, {}, x, y}; }
  static StructuralAtom neq(Label x, Label y) { return {Kind::Neq, {}, x, y}; }

  friend auto operator<=>(const StructuralAtom&, const StructuralAtom&) = default;
  friend bool operator==(const StructuralAtom&, const StructuralAtom&) = default;
};

struct LabeledConcept {
  Label label;
  Concept cpt;

  friend auto operator<=>(const LabeledConcept&, const LabeledConcept&) = default;
  friend bool operator==(const LabeledConcept&, const LabeledConcept&) = default;
};

/// Antecedent of structural atoms and a consequent multiset of labeled concepts.
struct Sequent {
  std::set<StructuralAtom> antecedent;
  std::vector<LabeledConcept> consequent;
};

/// Equality up to consequent order.
bool same_sequent(const Sequent& a, const Sequent& b);

std::set<Label> antecedent_labels(const std::set<StructuralAtom>& gamma);
std::set<Label> labels_of(const Sequent& s);
/// Throws Error when the tree shape or label-coverage invariants fail.
void validate_sequent(const Sequent& s);
bool is_valid_sequent(const Sequent& s);
std::size_t weight(const Sequent& s);

/// Replaces every occurrence of y by x.
Sequent substitute_label(const Sequent& s, Label x, Label y);
Sequent weaken(const Sequent& s, const StructuralAtom& atom);
Sequent weaken(const Sequent& s, const LabeledConcept& lc);

/// The GCI list of o placed at x.
std::vector<LabeledConcept> gci_list(const Ontology& o, Label x);

struct EqClasses {
  std::vector<std::vector<Label>> classes;
  std::map<Label, std::size_t> class_of;

  std::size_t of(Label x) const;
  bool same(Label x, Label y) const;
};

EqClasses eq_classes(const std::set<StructuralAtom>& gamma, const std::set<Label>& extra = {});
/// Chain of labels linked by equality atoms from x to y.
std::optional<std::vector<Label>> eq_path(const std::set<StructuralAtom>& gamma, Label x, Label y);

struct PropagationGraph {
  EqClasses nodes;
  std::vector<LabeledEdge> edges;
};

PropagationGraph build_prop_graph(const Sequent& s);

struct PathWitness {
  Label target;
  Word word;
  std::vector<Label> path;
};

struct Propagation {
  PropagationGraph graph;
  ReachTable reach;
};

Propagation compute_propagation(const RSystem& g, const Sequent& s);
std::optional<PathWitness> prop_reachable(const Propagation& p, Label x, Label y, const Role& r);
std::optional<PathWitness> prop_reachable(const RSystem& g, const Sequent& s, Label x, Label y,
                                          const Role& r);
/// Checks a stored path witness against the sequent and the language of r.
bool check_path_witness(const RSystem& g, const Sequent& s, Label x, const Role& r, const PathWitness& w);

enum class RuleTag : std::uint8_t { Id, IdEq, SubstEq, Or, And, Exists, Forall, AtMost, AtLeast };

std::string rule_name(RuleTag t);
std::optional<RuleTag> parse_rule_name(const std::string& s);

inline constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

/// Rule selection and the evidence recorded for it.
struct Witness {
  std::size_t principal = kNone;
  std::size_t partner = kNone;
  std::optional<StructuralAtom> neq;
  std::vector<Label> targets;
  std::vector<Label> fresh;
  std::vector<Label> eq_path;
  std::vector<PathWitness> paths;
};

struct RuleInstance {
  RuleTag rule;
  Sequent conclusion;
  std::vector<Sequent> premises;
  Witness witness;
};

struct RuleContext {
  const Ontology& ontology;
  const RSystem& rsystem;
};

/// Applies a rule bottom-up. Premises keep the conclusion order; removed principals leave the
/// remaining occurrences in place and new occurrences are appended.
RuleInstance apply_rule(const RuleContext& ctx, RuleTag rule, const Sequent& conclusion,
                        const Witness& selection, const Propagation* cached = nullptr);

struct ProofNode {
  RuleTag rule = RuleTag::Id;
  Sequent conclusion;
  Witness witness;
  std::vector<ProofNode> premises;
};

/// Sum of the weights of all sequents in the proof.
std::size_t proof_size(const ProofNode& p);

struct ProofCheck {
  bool ok = true;
  std::string message;
};

ProofCheck check_proof_detailed(const Ontology& o, const ProofNode& p);
bool check_proof(const Ontology& o, const ProofNode& p);

std::string render(Label x);
std::string render(const StructuralAtom& a);
std::string render(const LabeledConcept& lc);
std::string render(const Sequent& s);
Sequent parse_sequent(const std::string& text);
Label parse_label(const std::string& text);

/// Proof JSON text: nodes carry rule, rendered sequent, witness and premises.
std::string render(const ProofNode& p);
ProofNode parse_proof(const std::string& json_text);

}  // namespace riq
