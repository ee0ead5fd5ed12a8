#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "exemplar/store/example.hpp"

namespace exemplar::validation {

// R1 id, R2 query syntax (parse + serialize/re-parse), R3 language-tagged
// question, R4 http(s) target, R5 query type, R6 federation declaration,
// R7 prefixes, R8 unique id. `Load` covers files that never became an
// example (unreadable Turtle, missing or duplicated query text).
enum class Rule { R1, R2, R3, R4, R5, R6, R7, R8, Load };
enum class Severity { Error, Warning };

std::string_view to_string(Rule rule);
std::string_view to_string(Severity severity);

struct Finding {
  Rule rule;
  Severity severity;
  std::string example_id;
  std::string message;
  std::string file;
  std::optional<std::size_t> line;

  friend bool operator==(const Finding&, const Finding&) = default;
};

struct ValidationReport {
  std::vector<Finding> findings;
  std::size_t errors = 0;
  std::size_t warnings = 0;

  bool passed() const { return errors == 0; }
  std::string to_text() const;
  /// {"passed", "errors", "warnings", "findings": [{rule, severity,
  /// exampleId, message, file, line}]}
  std::string to_json() const;
};

struct ValidateOptions {
  /// Skip the serialize/re-parse half of R2.
  bool skip_roundtrip = false;
};

std::vector<Finding> validate_example(const store::QueryExample& example,
                                      const std::multiset<std::string>& corpus_ids,
                                      const rdf::PrefixMap& registry,
                                      const ValidateOptions& options = {});

/// Per-example findings plus load issues, ordered by (file, rule, message).
ValidationReport validate_corpus(const store::Corpus& corpus, const ValidateOptions& options = {});

/// Rule a loader failure is reported under.
Rule rule_for(store::LoadError::Kind kind);

}  // namespace exemplar::validation
