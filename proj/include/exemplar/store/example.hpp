#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "exemplar/rdf/term.hpp"
#include "exemplar/rdf/turtle.hpp"
#include "exemplar/sparql/parser.hpp"

namespace exemplar::store {

namespace vocab {
inline const std::string kExecutable = std::string(rdf::vocab::kShacl) + "SPARQLExecutable";
inline const std::string kSelectExecutable = std::string(rdf::vocab::kShacl) + "SPARQLSelectExecutable";
inline const std::string kAskExecutable = std::string(rdf::vocab::kShacl) + "SPARQLAskExecutable";
inline const std::string kConstructExecutable =
    std::string(rdf::vocab::kShacl) + "SPARQLConstructExecutable";
inline const std::string kDescribeExecutable =
    std::string(rdf::vocab::kSparqlExamples) + "SPARQLDescribeExecutable";
inline const std::string kSelect = std::string(rdf::vocab::kShacl) + "select";
inline const std::string kAsk = std::string(rdf::vocab::kShacl) + "ask";
inline const std::string kConstruct = std::string(rdf::vocab::kShacl) + "construct";
inline const std::string kDescribe = std::string(rdf::vocab::kSparqlExamples) + "describe";
inline const std::string kPrefixes = std::string(rdf::vocab::kShacl) + "prefixes";
inline const std::string kDeclare = std::string(rdf::vocab::kShacl) + "declare";
inline const std::string kPrefix = std::string(rdf::vocab::kShacl) + "prefix";
inline const std::string kNamespace = std::string(rdf::vocab::kShacl) + "namespace";
inline const std::string kComment = std::string(rdf::vocab::kRdfs) + "comment";
inline const std::string kTarget = std::string(rdf::vocab::kSchema) + "target";
inline const std::string kKeywords = std::string(rdf::vocab::kSchema) + "keywords";
inline const std::string kXsdAnyUri = std::string(rdf::vocab::kXsd) + "anyURI";
}  // namespace vocab

enum class QueryType { Select, Ask, Describe, Construct };

std::string_view to_string(QueryType type);
/// The rdf:type subclass that goes with a query type, e.g. sh:SPARQLAskExecutable.
const std::string& executable_type(QueryType type);
/// The property carrying the query text, e.g. sh:ask.
const std::string& query_property(QueryType type);

struct Question {
  std::string text;
  std::string lang;  // empty when the literal has no language tag
  friend bool operator==(const Question&, const Question&) = default;
};

struct QueryExample {
  std::string id;  // subject IRI; empty when the subject is a blank node
  QueryType query_type = QueryType::Select;
  std::vector<Question> questions;
  std::string query_text;
  std::vector<std::string> targets;
  std::vector<std::string> keywords;
  rdf::PrefixMap prefix_decls;
  bool declared_federated = false;
  bool has_prefixes_link = false;     // carries sh:prefixes
  std::vector<std::string> types;     // rdf:type IRIs in document order
  std::string source_path;
  std::string project;

  /// English question when present, else the first one.
  const Question* preferred_question() const;
  /// English first, then the remaining questions in document order.
  std::vector<Question> questions_for_display() const;

  friend bool operator==(const QueryExample&, const QueryExample&) = default;
};

class LoadError : public std::runtime_error {
 public:
  enum class Kind {
    Io,
    Turtle,
    NoExecutable,
    MultipleExamples,
    QueryText,     // zero or several query-text properties
    TypeMismatch,  // declared subtype disagrees with the query property
    BadTarget,
    DuplicateId,
  };

  LoadError(Kind kind, const std::string& message, std::size_t line = 0)
      : std::runtime_error(message), kind_(kind), line_(line) {}

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

std::string_view to_string(LoadError::Kind kind);

/// Every sh:declare entry found in `triples`, keyed by sh:prefix.
rdf::PrefixMap read_prefix_declarations(const std::vector<rdf::Triple>& triples);

/// All examples described by `triples` (subjects typed sh:SPARQLExecutable
/// or one of its query-form subclasses), ordered by id. Fails on the first
/// malformed example.
std::vector<QueryExample> extract_examples(const std::vector<rdf::Triple>& triples,
                                           const rdf::PrefixMap& project_prefixes);

/// Loads a single-example Turtle file. The project defaults to the parent
/// folder name.
QueryExample load_example_file(const std::filesystem::path& path,
                               const rdf::PrefixMap& project_prefixes,
                               std::optional<std::string> project = {});

/// Same as load_example_file over in-memory text.
QueryExample load_example_text(std::string_view text, const std::string& source_path,
                               const std::string& project, const rdf::PrefixMap& project_prefixes);

struct LoadIssue {
  std::string path;
  LoadError::Kind kind;
  std::string message;
  std::size_t line = 0;
  std::string example_id;  // when known
};

struct Corpus {
  std::filesystem::path root;
  std::vector<QueryExample> examples;  // sorted by (project, source_path)
  std::vector<std::string> projects;   // sorted
  rdf::PrefixMap prefix_registry;
  std::map<std::string, rdf::PrefixMap> project_prefixes;
  std::vector<LoadIssue> issues;

  const QueryExample* find(std::string_view id) const;
  /// Every distinct http(s) target across the corpus, sorted.
  std::vector<std::string> target_endpoints() const;
};

/// Loads `<root>/examples/<Project>/**.ttl` (or `<root>/<Project>/**.ttl`
/// when there is no examples folder). `prefixes.ttl` files feed the
/// registry. Per-file failures are collected in `issues`; for a duplicated
/// id the first file in path order wins. Source paths are stored relative
/// to `root`. Throws LoadError(Io) when `root` is not a directory.
Corpus load_corpus(const std::filesystem::path& root);

/// Builds a corpus from already loaded examples (for tests and bundles).
Corpus make_corpus(std::vector<QueryExample> examples, rdf::PrefixMap registry = {});

enum class SearchField { Question, Query, Keywords };

std::optional<SearchField> parse_search_field(std::string_view name);

/// Case-sensitive substring search, the local counterpart of
/// `FILTER(contains(?question, "..."))`. Results are sorted by id.
/// Throws std::invalid_argument for an empty needle.
std::vector<QueryExample> search(const Corpus& corpus, std::string_view needle,
                                 const std::set<SearchField>& fields = {SearchField::Question});

struct ProjectStats {
  std::string project;
  std::size_t example_count = 0;
  std::size_t parsed_count = 0;
  std::size_t federated_count = 0;
  std::size_t triple_patterns = 0;
  double mean_triple_patterns = 0.0;  // over parsed queries
};

struct UnparsedQuery {
  std::string example_id;
  std::string source_path;
  std::string error;
};

struct CorpusStats {
  std::vector<ProjectStats> projects;
  ProjectStats total;  // project = "all"
  std::vector<UnparsedQuery> unparsed;
};

/// Parse options for an example's query: extended dialect, with the
/// example's own prefix declarations and then the registry as fallbacks.
sparql::ParseOptions parse_options_for(const QueryExample& example, const rdf::PrefixMap& registry,
                                       sparql::Dialect dialect = sparql::Dialect::Extended);

CorpusStats stats(const Corpus& corpus);

}  // namespace exemplar::store
