#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "riq/core.hpp"
#include "riq/prover.hpp"
#include "riq/sequent.hpp"

namespace riq {

/// A sequent of (in)equalities over a set of labeled concepts.
struct MiniSequent {
  std::set<StructuralAtom> antecedent;
  std::set<LabeledConcept> consequent;

  friend auto operator<=>(const MiniSequent&, const MiniSequent&) = default;
  friend bool operator==(const MiniSequent&, const MiniSequent&) = default;
};

/// A set of mini-sequents, read as a conjunction of disjunctions.
using Interpolant = std::set<MiniSequent>;

/// Every choice of one negated element per member.
Interpolant orthogonal(const Interpolant& g);
/// orthogonal(g) with non-minimal members removed.
Interpolant orthogonal_reduced(const Interpolant& g, std::size_t max_members = 200000);
/// Drops members that contain another member.
Interpolant reduce_subsumed(const Interpolant& g);
/// True when a contains every element of b.
bool dominates(const MiniSequent& a, const MiniSequent& b);

Interpolant box_interpolant(const Role& r, Label x, Label y, const Interpolant& g);
Interpolant leq_interpolant(std::uint32_t n, const Role& r, Label x, const std::vector<Label>& ys,
                            const Interpolant& g);
/// Conjunction over members of the disjunction of their concepts; members must only use x.
Concept interpolant_concept(const Interpolant& g, Label x);

std::set<Label> labels_of(const Interpolant& g);
std::set<std::string> concept_names(const Interpolant& g);

/// Partition 1 belongs with the first ontology, partition 2 with the second.
enum class Side : std::uint8_t { One = 1, Two = 2 };

struct EndSplit {
  std::vector<Side> consequent;
  /// GCI copies at fresh labels: the first o1_gcis go to partition 1, the rest to partition 2.
  std::size_t o1_gcis = 0;
};

struct PartitionedNode {
  const ProofNode* node = nullptr;
  std::vector<Side> sides;
  std::map<StructuralAtom, Side> neq_sides;
  std::vector<PartitionedNode> premises;
};

PartitionedNode annotate_partition(const Ontology& o, const ProofNode& p, const EndSplit& split);

struct Extraction {
  Interpolant root;
  /// Structural invariants checked on every node of the partitioned proof.
  bool invariants_ok = true;
  std::string invariant_message;
  std::size_t nodes = 0;
};

Extraction extract_interpolant(const PartitionedNode& pp, const Ontology& o1, const Ontology& o2);

struct InterpolationResult {
  Verdict verdict = Verdict::Unknown;
  std::optional<Concept> interpolant;
  Interpolant sequents;
  std::optional<ProofNode> proof;
  bool invariants_ok = false;
  std::string message;
};

/// Proves |- x0 : xi(o1), x0 : not C, x0 : D, x0 : xi(o2) over o1 and o2 and reads an interpolant
/// off the partitioned proof.
InterpolationResult compute_concept_interpolant(const Ontology& o1, const Ontology& o2, const Concept& c,
                                                const Concept& d, const ProverLimits& limits = default_limits());

struct InterpolantCheck {
  bool signature_ok = false;
  bool sub_proved = false;
  bool sup_proved = false;
  /// No bounded counter-model for either direction (vacuous when the oracle was skipped).
  bool oracle_ok = true;
  bool oracle_ran = false;
  std::string message;

  bool ok() const { return signature_ok && sub_proved && sup_proved && oracle_ok; }
};

InterpolantCheck verify_interpolant(const Ontology& o1, const Ontology& o2, const Concept& c, const Concept& d,
                                    const Concept& i, const ProverLimits& limits = default_limits());

std::string render(const MiniSequent& m);
std::string render(const Interpolant& g);
std::string interpolant_to_json(const Interpolant& g, const std::optional<Concept>& cpt);

}  // namespace riq
