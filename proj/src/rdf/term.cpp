#include "exemplar/rdf/term.hpp"

#include <algorithm>
#include <cctype>

namespace exemplar::rdf {

namespace {

std::string escape_nt(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

bool is_local_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '-' || c == '.' || c >= 0x80;
}

}  // namespace

std::string to_string(const Term& term) {
  if (const auto* iri = std::get_if<Iri>(&term)) return "<" + iri->value + ">";
  if (const auto* b = std::get_if<BlankNode>(&term)) return "_:" + b->label;
  const auto& lit = std::get<Literal>(term);
  std::string out = "\"" + escape_nt(lit.lexical) + "\"";
  if (lit.has_language()) {
    out += "@" + lit.language;
  } else if (lit.datatype != vocab::kXsdString) {
    out += "^^<" + lit.datatype + ">";
  }
  return out;
}

std::string to_string(const Triple& t) {
  return to_string(t.subject) + " <" + t.predicate.value + "> " + to_string(t.object) + " .";
}

bool has_scheme(std::string_view iri) {
  if (iri.empty() || !std::isalpha(static_cast<unsigned char>(iri[0]))) return false;
  for (std::size_t i = 1; i < iri.size(); ++i) {
    const auto c = static_cast<unsigned char>(iri[i]);
    if (c == ':') return true;
    if (!std::isalnum(c) && c != '+' && c != '-' && c != '.') return false;
  }
  return false;
}

namespace {

struct UriParts {
  std::string_view scheme, authority, path, query, fragment;
  bool has_authority = false, has_query = false, has_fragment = false;
};

UriParts split_uri(std::string_view s) {
  UriParts p;
  if (auto colon = s.find(':'); colon != std::string_view::npos && has_scheme(s)) {
    p.scheme = s.substr(0, colon);
    s.remove_prefix(colon + 1);
  }
  if (auto hash = s.find('#'); hash != std::string_view::npos) {
    p.fragment = s.substr(hash + 1);
    p.has_fragment = true;
    s = s.substr(0, hash);
  }
  if (auto q = s.find('?'); q != std::string_view::npos) {
    p.query = s.substr(q + 1);
    p.has_query = true;
    s = s.substr(0, q);
  }
  if (s.substr(0, 2) == "//") {
    s.remove_prefix(2);
    auto slash = s.find('/');
    p.authority = s.substr(0, slash);
    p.has_authority = true;
    s = slash == std::string_view::npos ? std::string_view{} : s.substr(slash);
  }
  p.path = s;
  return p;
}

std::string remove_dot_segments(std::string_view path) {
  std::vector<std::string> out;
  bool absolute = !path.empty() && path.front() == '/';
  bool trailing_slash = false;
  std::size_t i = absolute ? 1 : 0;
  while (i <= path.size()) {
    auto next = path.find('/', i);
    if (next == std::string_view::npos) next = path.size();
    std::string_view seg = path.substr(i, next - i);
    trailing_slash = false;
    if (seg == ".") {
      trailing_slash = true;
    } else if (seg == "..") {
      if (!out.empty()) out.pop_back();
      trailing_slash = true;
    } else {
      out.emplace_back(seg);
    }
    i = next + 1;
  }
  std::string result = absolute ? "/" : "";
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (k > 0) result += '/';
    result += out[k];
  }
  if (trailing_slash && (result.empty() || result.back() != '/')) result += '/';
  return result;
}

}  // namespace

std::optional<std::string> resolve_iri(std::string_view base, std::string_view ref) {
  if (has_scheme(ref)) return std::string(ref);
  if (base.empty()) return std::nullopt;
  const UriParts b = split_uri(base);
  const UriParts r = split_uri(ref);
  std::string out = std::string(b.scheme) + ":";
  auto append_authority = [&out](const UriParts& p) {
    if (p.has_authority) out += "//" + std::string(p.authority);
  };
  auto append_tail = [&out](const UriParts& p) {
    if (p.has_query) out += "?" + std::string(p.query);
  };
  if (r.has_authority) {
    append_authority(r);
    out += remove_dot_segments(r.path);
    append_tail(r);
  } else {
    append_authority(b);
    if (r.path.empty()) {
      out += std::string(b.path);
      append_tail(r.has_query ? r : b);
    } else {
      std::string merged;
      if (r.path.front() == '/') {
        merged = std::string(r.path);
      } else if (b.has_authority && b.path.empty()) {
        merged = "/" + std::string(r.path);
      } else {
        auto slash = b.path.rfind('/');
        merged = (slash == std::string_view::npos ? std::string{}
                                                  : std::string(b.path.substr(0, slash + 1))) +
                 std::string(r.path);
      }
      out += remove_dot_segments(merged);
      append_tail(r);
    }
  }
  if (r.has_fragment) out += "#" + std::string(r.fragment);
  return out;
}

bool is_safe_local_name(std::string_view local) {
  if (local.empty()) return true;
  if (local.front() == '-' || local.front() == '.' || local.back() == '.') return false;
  return std::all_of(local.begin(), local.end(),
                     [](char c) { return is_local_char(static_cast<unsigned char>(c)); });
}

PrefixMap::PrefixMap(std::initializer_list<Entry> entries) {
  for (const auto& [label, ns] : entries) declare(label, ns);
}

void PrefixMap::declare(std::string label, std::string ns) {
  for (auto& entry : entries_) {
    if (entry.first == label) {
      entry.second = std::move(ns);
      return;
    }
  }
  entries_.emplace_back(std::move(label), std::move(ns));
}

bool PrefixMap::declare_if_absent(const std::string& label, const std::string& ns) {
  if (contains(label)) return false;
  entries_.emplace_back(label, ns);
  return true;
}

std::optional<std::string> PrefixMap::find(std::string_view label) const {
  for (const auto& [l, ns] : entries_) {
    if (l == label) return ns;
  }
  return std::nullopt;
}

std::string PrefixMap::expand(std::string_view label, std::string_view local) const {
  auto ns = find(label);
  if (!ns) throw UndeclaredPrefixError(std::string(label));
  return *ns + std::string(local);
}

std::optional<std::string> PrefixMap::compact(std::string_view iri) const {
  const Entry* best = nullptr;
  for (const auto& entry : entries_) {
    const auto& ns = entry.second;
    if (ns.empty() || iri.size() < ns.size() || iri.substr(0, ns.size()) != ns) continue;
    if (!is_safe_local_name(iri.substr(ns.size()))) continue;
    if (best == nullptr || ns.size() > best->second.size()) best = &entry;
  }
  if (best == nullptr) return std::nullopt;
  return best->first + ":" + std::string(iri.substr(best->second.size()));
}

void PrefixMap::merge_missing(const PrefixMap& other) {
  for (const auto& [label, ns] : other.entries_) declare_if_absent(label, ns);
}

}  // namespace exemplar::rdf
