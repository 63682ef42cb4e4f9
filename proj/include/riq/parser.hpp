#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>

#include "riq/core.hpp"

namespace riq {

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct ParseOptions {
  /// Reject roles that were not declared.
  bool strict = false;
  /// Accept generated names (leading underscore, primes).
  bool internal = false;
  /// Declared roles for strict concept parsing.
  const std::set<std::string>* known_roles = nullptr;
};

Concept parse_concept(std::string_view text, const ParseOptions& opts = {});
/// Parses "C <= D".
RawGCI parse_goal(std::string_view text, const ParseOptions& opts = {});
Ontology parse_ontology(std::string_view text, const ParseOptions& opts = {});
Ontology load_ontology(const std::string& path, const ParseOptions& opts = {});

std::string render(const Role& r);
std::string render(const RIA& ria);
std::string render(const Concept& c);
std::string render(const Ontology& o);

}  // namespace riq
