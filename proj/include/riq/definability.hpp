#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "riq/core.hpp"
#include "riq/interpolation.hpp"
#include "riq/prover.hpp"

namespace riq {

/// Raised when the prover gives up on a check.
class Undecided : public Error {
 public:
  using Error::Error;
};

struct ThetaRenaming {
  std::set<std::string> theta;
  /// Every concept name outside theta mapped to a fresh primed name.
  std::map<std::string, std::string> mapping;
};

struct Renamed {
  Ontology o_theta;
  Concept c_theta;
  ThetaRenaming renaming;
};

/// Concept names of c and o.
std::set<std::string> concept_signature(const Ontology& o, const Concept& c);

Concept rename_concept(const Concept& c, const std::map<std::string, std::string>& mapping);
Ontology rename_ontology(const Ontology& o, const std::map<std::string, std::string>& mapping);

/// Throws if theta is not within the concept names of c and o.
Renamed rename_outside_theta(const Ontology& o, const Concept& c, const std::set<std::string>& theta);

/// Proves c <= c_theta over o and its renamed copy.
ProveResult is_implicitly_definable(const Ontology& o, const Concept& c, const std::set<std::string>& theta,
                                    const ProverLimits& limits = default_limits());

struct DefinitionCheck {
  bool signature_ok = false;
  bool sub_proved = false;
  bool sup_proved = false;
  bool oracle_ok = true;
  bool oracle_ran = false;
  std::string message;

  bool ok() const { return signature_ok && sub_proved && sup_proved && oracle_ok; }
};

DefinitionCheck verify_definition(const Ontology& o, const Concept& c, const Concept& def,
                                  const std::set<std::string>& theta, const ProverLimits& limits = default_limits());

struct DefinitionResult {
  Concept definition;
  Renamed renamed;
  ProveResult implicit;
  InterpolationResult interpolation;
  DefinitionCheck check;
};

/// Throws Error("not implicitly definable") when the implicit check is refuted, and an Error carrying the
/// reason when it is unknown.
DefinitionResult explicit_definition(const Ontology& o, const Concept& c, const std::set<std::string>& theta,
                                     const ProverLimits& limits = default_limits());

}  // namespace riq
