#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "riq/core.hpp"
#include "riq/semantics.hpp"
#include "riq/sequent.hpp"

namespace riq {

struct ProverLimits {
  std::size_t max_steps = 50000;
  /// Labels allowed on a single branch.
  std::size_t max_labels = 2000;
};

/// Default limits, with max_steps taken from RIQ_MAX_STEPS when set.
ProverLimits default_limits();

enum class Verdict { Proved, Refuted, Unknown };

std::string render(Verdict v);

struct ProveResult {
  Verdict verdict = Verdict::Unknown;
  std::optional<ProofNode> proof;
  std::optional<CounterModel> countermodel;
  /// Rules applied along the refuted branch, or the reason for Unknown.
  std::vector<std::string> trace;
  std::string reason;
  std::size_t steps = 0;
};

/// Backward proof search for a sequent over o.
ProveResult prove(const Ontology& o, const Sequent& goal, const ProverLimits& limits = default_limits());

/// The sequent |- x0 : xi(o), x0 : not C or D.
Sequent subsumption_goal(const Ontology& o, const Concept& c, const Concept& d);
ProveResult subsumes(const Ontology& o, const Concept& c, const Concept& d,
                     const ProverLimits& limits = default_limits());

/// Interpretation read off a saturated branch: classes as domain, negated literals as concept
/// extensions, role edges closed under the role inclusions. Throws if it fails to refute `goal`.
CounterModel extract_countermodel(const Ontology& o, const Sequent& goal, const std::set<StructuralAtom>& gamma,
                                  const std::set<LabeledConcept>& seen);

}  // namespace riq
