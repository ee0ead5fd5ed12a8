#include "exemplar/validation/validate.hpp"

#include <algorithm>
#include <json.hpp>

#include "exemplar/sparql/analysis.hpp"
#include "exemplar/sparql/serializer.hpp"

namespace exemplar::validation {

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::R1: return "R1";
    case Rule::R2: return "R2";
    case Rule::R3: return "R3";
    case Rule::R4: return "R4";
    case Rule::R5: return "R5";
    case Rule::R6: return "R6";
    case Rule::R7: return "R7";
    case Rule::R8: return "R8";
    case Rule::Load: return "Load";
  }
  return "?";
}

std::string_view to_string(Severity severity) {
  return severity == Severity::Error ? "error" : "warning";
}

Rule rule_for(store::LoadError::Kind kind) {
  using K = store::LoadError::Kind;
  switch (kind) {
    case K::NoExecutable: return Rule::R1;
    case K::BadTarget: return Rule::R4;
    case K::TypeMismatch: return Rule::R5;
    case K::DuplicateId: return Rule::R8;
    default: return Rule::Load;
  }
}

std::string ValidationReport::to_text() const {
  std::string out;
  for (const auto& f : findings) {
    out += f.file.empty() ? "<memory>" : f.file;
    if (f.line) out += ":" + std::to_string(*f.line);
    out += ": " + std::string(to_string(f.severity)) + " " + std::string(to_string(f.rule));
    if (!f.example_id.empty()) out += " [" + f.example_id + "]";
    out += " " + f.message + "\n";
  }
  out += std::to_string(errors) + " error(s), " + std::to_string(warnings) + " warning(s)\n";
  return out;
}

std::string ValidationReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["passed"] = passed();
  doc["errors"] = errors;
  doc["warnings"] = warnings;
  doc["findings"] = nlohmann::ordered_json::array();
  for (const auto& f : findings) {
    nlohmann::ordered_json j;
    j["rule"] = to_string(f.rule);
    j["severity"] = to_string(f.severity);
    j["exampleId"] = f.example_id;
    j["message"] = f.message;
    j["file"] = f.file;
    j["line"] = f.line ? nlohmann::ordered_json(*f.line) : nlohmann::ordered_json(nullptr);
    doc["findings"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

namespace {

bool well_formed_iri(const std::string& iri) {
  if (iri.empty() || !rdf::has_scheme(iri)) return false;
  return std::none_of(iri.begin(), iri.end(), [](unsigned char c) {
    return c <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' ||
           c == '\\' || c == '^' || c == '`';
  });
}

bool http_iri(const std::string& iri) {
  return well_formed_iri(iri) && (iri.starts_with("http://") || iri.starts_with("https://")) &&
         iri.find("://") + 3 < iri.size();
}

store::QueryType type_of(sparql::QueryForm form) {
  switch (form) {
    case sparql::QueryForm::Select: return store::QueryType::Select;
    case sparql::QueryForm::Ask: return store::QueryType::Ask;
    case sparql::QueryForm::Construct: return store::QueryType::Construct;
    case sparql::QueryForm::Describe: return store::QueryType::Describe;
  }
  return store::QueryType::Select;
}

std::string local_name(const std::string& iri) {
  auto cut = iri.find_last_of("#/");
  return cut == std::string::npos ? iri : iri.substr(cut + 1);
}

class ExampleChecker {
 public:
  ExampleChecker(const store::QueryExample& ex, const std::multiset<std::string>& ids,
                 const rdf::PrefixMap& registry, const ValidateOptions& options)
      : ex_(ex), ids_(ids), registry_(registry), options_(options) {}

  std::vector<Finding> run() {
    check_id();
    check_syntax();
    check_questions();
    check_targets();
    check_type();
    check_federation();
    check_prefixes();
    check_unique();
    return std::move(out_);
  }

 private:
  const store::QueryExample& ex_;
  const std::multiset<std::string>& ids_;
  const rdf::PrefixMap& registry_;
  const ValidateOptions& options_;
  std::vector<Finding> out_;
  std::optional<sparql::Query> strict_ast_;
  std::optional<sparql::Query> extended_ast_;

  void add(Rule rule, Severity severity, std::string message,
           std::optional<std::size_t> line = std::nullopt) {
    out_.push_back({rule, severity, ex_.id, std::move(message), ex_.source_path, line});
  }

  void check_id() {
    if (ex_.id.empty()) {
      add(Rule::R1, Severity::Error, "example subject must be an IRI, not a blank node");
    } else if (!well_formed_iri(ex_.id)) {
      add(Rule::R1, Severity::Error, "malformed example IRI '" + ex_.id + "'");
    }
  }

  void check_syntax() {
    try {
      extended_ast_ = sparql::parse_query(
          ex_.query_text, store::parse_options_for(ex_, registry_, sparql::Dialect::Extended));
    } catch (const sparql::SparqlError&) {
    }
    sparql::Query ast;
    try {
      ast = sparql::parse_query(ex_.query_text,
                                store::parse_options_for(ex_, registry_, sparql::Dialect::Strict));
    } catch (const sparql::SparqlError& e) {
      // Undeclared prefixes are R7's business.
      if (e.kind() != sparql::SparqlError::Kind::UndeclaredPrefix) {
        add(Rule::R2, Severity::Error, std::string("query does not parse: ") + e.what());
      }
      return;
    }
    strict_ast_ = ast;
    if (options_.skip_roundtrip) return;
    try {
      std::string text = sparql::serialize_query(ast);
      if (sparql::parse_query(text, sparql::Dialect::Strict) != ast) {
        add(Rule::R2, Severity::Error, "query does not survive serialize/re-parse unchanged");
      }
    } catch (const sparql::SparqlError& e) {
      add(Rule::R2, Severity::Error, std::string("serialized query fails to re-parse: ") + e.what());
    }
  }

  void check_questions() {
    if (ex_.questions.empty()) {
      add(Rule::R3, Severity::Error, "missing rdfs:comment question");
      return;
    }
    bool tagged = std::any_of(ex_.questions.begin(), ex_.questions.end(),
                              [](const store::Question& q) { return !q.lang.empty(); });
    if (!tagged) add(Rule::R3, Severity::Error, "no question carries a language tag");
  }

  void check_targets() {
    if (ex_.targets.empty()) {
      add(Rule::R4, Severity::Error, "missing schema:target");
      return;
    }
    for (const auto& t : ex_.targets) {
      if (!http_iri(t)) add(Rule::R4, Severity::Error, "target '" + t + "' is not an http(s) IRI");
    }
  }

  void check_type() {
    const auto& expected = store::executable_type(ex_.query_type);
    if (std::find(ex_.types.begin(), ex_.types.end(), expected) == ex_.types.end()) {
      add(Rule::R5, Severity::Error,
          "query given by " + local_name(store::query_property(ex_.query_type)) +
              " but rdf:type " + local_name(expected) + " is missing");
    }
    if (std::find(ex_.types.begin(), ex_.types.end(), store::vocab::kExecutable) == ex_.types.end()) {
      add(Rule::R5, Severity::Warning, "rdf:type sh:SPARQLExecutable is missing");
    }
    const auto& ast = strict_ast_ ? strict_ast_ : extended_ast_;
    if (ast && type_of(ast->form) != ex_.query_type) {
      add(Rule::R5, Severity::Error,
          "query is a " + std::string(sparql::to_string(ast->form)) + " query but declared as " +
              std::string(store::to_string(ex_.query_type)));
    }
  }

  void check_federation() {
    if (!extended_ast_) return;
    bool has_service = sparql::is_federated(*extended_ast_);
    if (ex_.declared_federated && !has_service) {
      add(Rule::R6, Severity::Error, "declared federated but the query has no SERVICE clause");
    } else if (!ex_.declared_federated && has_service) {
      add(Rule::R6, Severity::Warning, "query uses SERVICE but is not declared federated");
    }
  }

  void check_prefixes() {
    sparql::PrefixUsage usage;
    try {
      usage = sparql::used_prefixes(ex_.query_text);
    } catch (const sparql::SparqlError&) {
      return;  // reported by R2
    }
    for (const auto& label : usage.undeclared()) {
      if (ex_.prefix_decls.contains(label) || registry_.contains(label)) continue;
      add(Rule::R7, Severity::Error, "prefix '" + label + ":' is used but never declared");
    }
  }

  void check_unique() {
    if (!ex_.id.empty() && ids_.count(ex_.id) > 1) {
      add(Rule::R8, Severity::Error, "id " + ex_.id + " is used by more than one example");
    }
  }
};

}  // namespace

std::vector<Finding> validate_example(const store::QueryExample& example,
                                      const std::multiset<std::string>& corpus_ids,
                                      const rdf::PrefixMap& registry,
                                      const ValidateOptions& options) {
  return ExampleChecker(example, corpus_ids, registry, options).run();
}

ValidationReport validate_corpus(const store::Corpus& corpus, const ValidateOptions& options) {
  ValidationReport report;
  for (const auto& issue : corpus.issues) {
    report.findings.push_back({rule_for(issue.kind), Severity::Error, issue.example_id,
                               issue.message, issue.path,
                               issue.line > 0 ? std::optional(issue.line) : std::nullopt});
  }
  std::multiset<std::string> ids;
  for (const auto& ex : corpus.examples) ids.insert(ex.id);
  for (const auto& ex : corpus.examples) {
    auto found = validate_example(ex, ids, corpus.prefix_registry, options);
    report.findings.insert(report.findings.end(), found.begin(), found.end());
  }
  std::stable_sort(report.findings.begin(), report.findings.end(),
                   [](const Finding& a, const Finding& b) {
                     return std::tie(a.file, a.rule, a.message) < std::tie(b.file, b.rule, b.message);
                   });
  for (const auto& f : report.findings) {
    (f.severity == Severity::Error ? report.errors : report.warnings)++;
  }
  return report;
}

}  // namespace exemplar::validation
