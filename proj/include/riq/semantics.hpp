#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "riq/core.hpp"
#include "riq/sequent.hpp"

namespace riq {

using RolePairs = std::set<std::pair<std::size_t, std::size_t>>;

/// Finite interpretation over the domain {0, ..., domain_size - 1}.
struct Interpretation {
  std::size_t domain_size = 0;
  std::map<std::string, std::set<std::size_t>> concepts;
  std::map<std::string, RolePairs> roles;

  friend bool operator==(const Interpretation&, const Interpretation&) = default;
};

using Assignment = std::map<Label, std::size_t>;

std::set<std::size_t> interpret_concept(const Concept& c, const Interpretation& i);
bool is_model(const Interpretation& i, const Ontology& o);
bool holds_antecedent(const Interpretation& i, const Assignment& a, const std::set<StructuralAtom>& gamma);
bool holds_some(const Interpretation& i, const Assignment& a, const std::vector<LabeledConcept>& delta);
bool seq_satisfied(const Interpretation& i, const Assignment& a, const Ontology& o, const Sequent& s);
/// The interpretation is a model of o, satisfies the antecedent and refutes every consequent formula.
bool falsifies(const Interpretation& i, const Assignment& a, const Ontology& o, const Sequent& s);

/// Closes role extensions under the role inclusions.
std::map<std::string, RolePairs> ria_closure(std::map<std::string, RolePairs> roles, const std::vector<RIA>& rbox);

struct CounterModel {
  Interpretation interpretation;
  Assignment assignment;
};

enum class OracleMode { Auto, Exhaustive, Sampled };

struct OracleOptions {
  std::size_t max_domain = 3;
  OracleMode mode = OracleMode::Auto;
  std::size_t samples = 20000;
  std::uint64_t seed = 1;
};

struct OracleResult {
  std::optional<CounterModel> model;
  /// True when every interpretation up to max_domain was covered (modulo element renaming).
  bool exhaustive = false;
  std::size_t max_domain = 0;
};

/// Whether exhaustive search is within the supported size (3 concept names, 2 roles, domain 3).
bool exhaustive_feasible(const Signature& sig, std::size_t max_domain);
OracleResult find_countermodel_bounded(const Ontology& o, const Sequent& s, const OracleOptions& opts = {});

std::string model_to_json(const Interpretation& i, const Assignment* a = nullptr);
CounterModel model_from_json(const std::string& text);

}  // namespace riq
