#include "exemplar/store/example.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "exemplar/sparql/analysis.hpp"

namespace exemplar::store {

namespace fs = std::filesystem;

std::string_view to_string(QueryType type) {
  switch (type) {
    case QueryType::Select: return "Select";
    case QueryType::Ask: return "Ask";
    case QueryType::Describe: return "Describe";
    case QueryType::Construct: return "Construct";
  }
  return "?";
}

const std::string& executable_type(QueryType type) {
  switch (type) {
    case QueryType::Select: return vocab::kSelectExecutable;
    case QueryType::Ask: return vocab::kAskExecutable;
    case QueryType::Describe: return vocab::kDescribeExecutable;
    case QueryType::Construct: return vocab::kConstructExecutable;
  }
  return vocab::kExecutable;
}

const std::string& query_property(QueryType type) {
  switch (type) {
    case QueryType::Select: return vocab::kSelect;
    case QueryType::Ask: return vocab::kAsk;
    case QueryType::Describe: return vocab::kDescribe;
    case QueryType::Construct: return vocab::kConstruct;
  }
  return vocab::kSelect;
}

std::string_view to_string(LoadError::Kind kind) {
  switch (kind) {
    case LoadError::Kind::Io: return "io";
    case LoadError::Kind::Turtle: return "turtle";
    case LoadError::Kind::NoExecutable: return "no-executable";
    case LoadError::Kind::MultipleExamples: return "multiple-examples";
    case LoadError::Kind::QueryText: return "query-text";
    case LoadError::Kind::TypeMismatch: return "type-mismatch";
    case LoadError::Kind::BadTarget: return "bad-target";
    case LoadError::Kind::DuplicateId: return "duplicate-id";
  }
  return "?";
}

const Question* QueryExample::preferred_question() const {
  for (const auto& q : questions) {
    if (q.lang == "en" || q.lang.starts_with("en-")) return &q;
  }
  return questions.empty() ? nullptr : &questions.front();
}

std::vector<Question> QueryExample::questions_for_display() const {
  std::vector<Question> out;
  const Question* first = preferred_question();
  if (first == nullptr) return out;
  out.push_back(*first);
  for (const auto& q : questions) {
    if (&q != first) out.push_back(q);
  }
  return out;
}

namespace {

constexpr QueryType kAllTypes[] = {QueryType::Select, QueryType::Ask, QueryType::Describe,
                                   QueryType::Construct};

const std::string kTargetHttp = std::string(rdf::vocab::kSchemaHttp) + "target";
const std::string kKeywordsHttp = std::string(rdf::vocab::kSchemaHttp) + "keywords";

using Index = std::map<rdf::Term, std::vector<const rdf::Triple*>>;

Index index_by_subject(const std::vector<rdf::Triple>& triples) {
  Index index;
  for (const auto& t : triples) index[t.subject].push_back(&t);
  return index;
}

std::string term_text(const rdf::Term& t) {
  if (const auto* iri = std::get_if<rdf::Iri>(&t)) return iri->value;
  if (const auto* lit = std::get_if<rdf::Literal>(&t)) return lit->lexical;
  return {};
}

std::string local_name(const std::string& iri) {
  auto cut = iri.find_last_of("#/");
  return cut == std::string::npos ? iri : iri.substr(cut + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

void read_declaration(const Index& index, const rdf::Term& decl, rdf::PrefixMap& out) {
  auto it = index.find(decl);
  if (it == index.end()) return;
  std::optional<std::string> label, ns;
  for (const auto* t : it->second) {
    if (t->predicate.value == vocab::kPrefix) label = term_text(t->object);
    if (t->predicate.value == vocab::kNamespace) ns = term_text(t->object);
  }
  if (label && ns && !ns->empty()) out.declare_if_absent(*label, *ns);
}

bool is_executable_type(const std::string& iri) {
  if (iri == vocab::kExecutable) return true;
  return std::any_of(std::begin(kAllTypes), std::end(kAllTypes),
                     [&](QueryType t) { return executable_type(t) == iri; });
}

QueryExample build_example(const rdf::Term& subject, const Index& index,
                           const rdf::PrefixMap& project_prefixes) {
  QueryExample ex;
  if (const auto* iri = std::get_if<rdf::Iri>(&subject)) ex.id = iri->value;
  const std::string name = ex.id.empty() ? rdf::to_string(subject) : ex.id;

  std::vector<std::pair<QueryType, const rdf::Term*>> texts;
  for (const auto* t : index.at(subject)) {
    const auto& p = t->predicate.value;
    if (p == rdf::vocab::kRdfType) {
      if (const auto* type = std::get_if<rdf::Iri>(&t->object)) ex.types.push_back(type->value);
    } else if (p == vocab::kComment) {
      if (const auto* lit = std::get_if<rdf::Literal>(&t->object)) {
        ex.questions.push_back({lit->lexical, lit->language});
      }
    } else if (p == vocab::kTarget || p == kTargetHttp) {
      const auto* target = std::get_if<rdf::Iri>(&t->object);
      if (target == nullptr) {
        throw LoadError(LoadError::Kind::BadTarget,
                        name + ": schema:target must be an IRI, found " + rdf::to_string(t->object));
      }
      ex.targets.push_back(target->value);
    } else if (p == vocab::kKeywords || p == kKeywordsHttp) {
      std::string keyword = term_text(t->object);
      if (!keyword.empty()) ex.keywords.push_back(std::move(keyword));
    } else if (p == vocab::kPrefixes) {
      ex.has_prefixes_link = true;
      if (auto it = index.find(t->object); it != index.end()) {
        for (const auto* d : it->second) {
          if (d->predicate.value == vocab::kDeclare) read_declaration(index, d->object, ex.prefix_decls);
        }
      }
    } else {
      for (QueryType type : kAllTypes) {
        if (p == query_property(type)) texts.emplace_back(type, &t->object);
      }
    }
  }

  if (texts.size() != 1) {
    throw LoadError(LoadError::Kind::QueryText,
                    name + ": expected exactly one of sh:select, sh:ask, sh:construct, "
                           "spex:describe; found " + std::to_string(texts.size()));
  }
  const auto* text = std::get_if<rdf::Literal>(texts.front().second);
  if (text == nullptr) {
    throw LoadError(LoadError::Kind::QueryText, name + ": query text must be a literal");
  }
  ex.query_type = texts.front().first;
  ex.query_text = text->lexical;

  for (const auto& type : ex.types) {
    for (QueryType other : kAllTypes) {
      if (other != ex.query_type && type == executable_type(other)) {
        throw LoadError(LoadError::Kind::TypeMismatch,
                        name + ": typed " + local_name(type) + " but carries " +
                            local_name(query_property(ex.query_type)));
      }
    }
  }

  if (ex.has_prefixes_link) ex.prefix_decls.merge_missing(project_prefixes);
  ex.declared_federated =
      std::any_of(ex.keywords.begin(), ex.keywords.end(),
                  [](const std::string& k) { return lower(k) == "federated"; }) ||
      std::any_of(ex.types.begin(), ex.types.end(),
                  [](const std::string& t) { return local_name(t) == "FederatedQuery"; });
  return ex;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(LoadError::Kind::Io, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<rdf::Triple> parse_or_throw(std::string_view text, const std::string& source) {
  try {
    return rdf::parse_turtle(text).triples;
  } catch (const rdf::TurtleError& e) {
    throw LoadError(LoadError::Kind::Turtle, source + ":" + e.what(), e.line());
  }
}

}  // namespace

rdf::PrefixMap read_prefix_declarations(const std::vector<rdf::Triple>& triples) {
  rdf::PrefixMap out;
  Index index = index_by_subject(triples);
  for (const auto& t : triples) {
    if (t.predicate.value == vocab::kDeclare) read_declaration(index, t.object, out);
  }
  return out;
}

std::vector<QueryExample> extract_examples(const std::vector<rdf::Triple>& triples,
                                           const rdf::PrefixMap& project_prefixes) {
  Index index = index_by_subject(triples);
  std::vector<rdf::Term> subjects;
  for (const auto& t : triples) {
    if (t.predicate.value != rdf::vocab::kRdfType) continue;
    const auto* type = std::get_if<rdf::Iri>(&t.object);
    if (type == nullptr || !is_executable_type(type->value)) continue;
    if (std::find(subjects.begin(), subjects.end(), t.subject) == subjects.end()) {
      subjects.push_back(t.subject);
    }
  }
  std::vector<QueryExample> out;
  for (const auto& s : subjects) out.push_back(build_example(s, index, project_prefixes));
  std::stable_sort(out.begin(), out.end(),
                   [](const QueryExample& a, const QueryExample& b) { return a.id < b.id; });
  return out;
}

QueryExample load_example_text(std::string_view text, const std::string& source_path,
                               const std::string& project, const rdf::PrefixMap& project_prefixes) {
  auto examples = extract_examples(parse_or_throw(text, source_path), project_prefixes);
  if (examples.empty()) {
    throw LoadError(LoadError::Kind::NoExecutable,
                    source_path + ": no subject typed sh:SPARQLExecutable");
  }
  if (examples.size() > 1) {
    throw LoadError(LoadError::Kind::MultipleExamples,
                    source_path + ": " + std::to_string(examples.size()) +
                        " examples in one file; expected one");
  }
  QueryExample ex = std::move(examples.front());
  ex.source_path = source_path;
  ex.project = project;
  return ex;
}

QueryExample load_example_file(const fs::path& path, const rdf::PrefixMap& project_prefixes,
                               std::optional<std::string> project) {
  std::string folder = project ? *project : path.parent_path().filename().string();
  return load_example_text(read_file(path), path.string(), folder, project_prefixes);
}

const QueryExample* Corpus::find(std::string_view id) const {
  for (const auto& ex : examples) {
    if (ex.id == id) return &ex;
  }
  return nullptr;
}

std::vector<std::string> Corpus::target_endpoints() const {
  std::set<std::string> all;
  for (const auto& ex : examples) {
    for (const auto& t : ex.targets) {
      if (t.starts_with("http://") || t.starts_with("https://")) all.insert(t);
    }
  }
  return {all.begin(), all.end()};
}

Corpus load_corpus(const fs::path& root) {
  if (!fs::is_directory(root)) {
    throw LoadError(LoadError::Kind::Io, root.string() + " is not a directory");
  }
  Corpus corpus;
  corpus.root = root;
  const fs::path base = fs::is_directory(root / "examples") ? root / "examples" : root;

  std::vector<fs::path> project_dirs;
  for (const auto& entry : fs::directory_iterator(base)) {
    if (entry.is_directory()) project_dirs.push_back(entry.path());
  }
  std::sort(project_dirs.begin(), project_dirs.end());

  auto relative = [&](const fs::path& p) { return p.lexically_relative(root).generic_string(); };
  std::map<std::string, std::string> seen;  // id -> path

  for (const auto& dir : project_dirs) {
    const std::string project = dir.filename().string();
    corpus.projects.push_back(project);
    rdf::PrefixMap prefixes;
    if (fs::exists(dir / "prefixes.ttl")) {
      try {
        prefixes = read_prefix_declarations(parse_or_throw(read_file(dir / "prefixes.ttl"),
                                                           relative(dir / "prefixes.ttl")));
      } catch (const LoadError& e) {
        corpus.issues.push_back({relative(dir / "prefixes.ttl"), e.kind(), e.what(), e.line(), {}});
      }
    }
    corpus.prefix_registry.merge_missing(prefixes);
    corpus.project_prefixes[project] = prefixes;

    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".ttl" &&
          entry.path().filename() != "prefixes.ttl") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());

    for (const auto& file : files) {
      const std::string rel = relative(file);
      try {
        QueryExample ex = load_example_text(read_file(file), rel, project, prefixes);
        if (auto it = seen.find(ex.id); it != seen.end() && !ex.id.empty()) {
          corpus.issues.push_back({rel, LoadError::Kind::DuplicateId,
                                   "duplicate id " + ex.id + " in " + it->second + " and " + rel,
                                   0, ex.id});
          continue;
        }
        seen.emplace(ex.id, rel);
        corpus.examples.push_back(std::move(ex));
      } catch (const LoadError& e) {
        corpus.issues.push_back({rel, e.kind(), e.what(), e.line(), {}});
      }
    }
  }
  return corpus;
}

Corpus make_corpus(std::vector<QueryExample> examples, rdf::PrefixMap registry) {
  Corpus corpus;
  std::stable_sort(examples.begin(), examples.end(), [](const QueryExample& a, const QueryExample& b) {
    return std::tie(a.project, a.source_path, a.id) < std::tie(b.project, b.source_path, b.id);
  });
  std::set<std::string> projects;
  for (const auto& ex : examples) projects.insert(ex.project);
  corpus.projects.assign(projects.begin(), projects.end());
  corpus.examples = std::move(examples);
  corpus.prefix_registry = std::move(registry);
  return corpus;
}

std::optional<SearchField> parse_search_field(std::string_view name) {
  if (name == "question") return SearchField::Question;
  if (name == "query") return SearchField::Query;
  if (name == "keywords") return SearchField::Keywords;
  return std::nullopt;
}

std::vector<QueryExample> search(const Corpus& corpus, std::string_view needle,
                                 const std::set<SearchField>& fields) {
  if (needle.empty()) throw std::invalid_argument("search needle must not be empty");
  auto contains = [&](const std::string& hay) { return hay.find(needle) != std::string::npos; };
  std::vector<QueryExample> out;
  for (const auto& ex : corpus.examples) {
    bool hit = false;
    if (fields.contains(SearchField::Question)) {
      hit = std::any_of(ex.questions.begin(), ex.questions.end(),
                        [&](const Question& q) { return contains(q.text); });
    }
    if (!hit && fields.contains(SearchField::Query)) hit = contains(ex.query_text);
    if (!hit && fields.contains(SearchField::Keywords)) {
      hit = std::any_of(ex.keywords.begin(), ex.keywords.end(), contains);
    }
    if (hit) out.push_back(ex);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const QueryExample& a, const QueryExample& b) { return a.id < b.id; });
  return out;
}

sparql::ParseOptions parse_options_for(const QueryExample& example, const rdf::PrefixMap& registry,
                                       sparql::Dialect dialect) {
  sparql::ParseOptions options;
  options.dialect = dialect;
  options.extra_prefixes = example.prefix_decls;
  options.extra_prefixes.merge_missing(registry);
  return options;
}

CorpusStats stats(const Corpus& corpus) {
  CorpusStats out;
  out.total.project = "all";
  std::map<std::string, ProjectStats> by_project;
  for (const auto& p : corpus.projects) by_project[p].project = p;

  for (const auto& ex : corpus.examples) {
    auto& ps = by_project[ex.project];
    ps.project = ex.project;
    ++ps.example_count;
    ++out.total.example_count;
    try {
      auto ast = sparql::parse_query(ex.query_text, parse_options_for(ex, corpus.prefix_registry));
      std::size_t tps = sparql::count_triple_patterns(ast);
      bool federated = sparql::is_federated(ast);
      for (auto* s : {&ps, &out.total}) {
        ++s->parsed_count;
        s->triple_patterns += tps;
        if (federated) ++s->federated_count;
      }
    } catch (const sparql::SparqlError& e) {
      out.unparsed.push_back({ex.id, ex.source_path, e.what()});
    }
  }
  for (auto& [name, ps] : by_project) {
    if (ps.parsed_count > 0) {
      ps.mean_triple_patterns = static_cast<double>(ps.triple_patterns) / static_cast<double>(ps.parsed_count);
    }
    out.projects.push_back(ps);
  }
  if (out.total.parsed_count > 0) {
    out.total.mean_triple_patterns =
        static_cast<double>(out.total.triple_patterns) / static_cast<double>(out.total.parsed_count);
  }
  return out;
}

}  // namespace exemplar::store
