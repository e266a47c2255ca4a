#pragma once

// Knowledge-base enrichment: one SPARQL lookup per distinct entity URI
// (rdf:type objects plus the optional gold:hypernym), turned into an ordered
// tag list of human-readable local names.

#include <algorithm>
#include <array>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "semtopic/concurrency.hpp"
#include "semtopic/corpus_io.hpp"
#include "semtopic/error.hpp"
#include "semtopic/http.hpp"
#include "semtopic/spotlight_client.hpp"

namespace semtopic {

inline constexpr std::string_view kHypernymProperty = "http://purl.org/linguistics/gold/hypernym";
inline constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

struct EnrichedEntity {
  std::string surface_form;
  std::string uri;
  std::size_t offset = 0;
  std::vector<std::string> tags;

  friend bool operator==(const EnrichedEntity&, const EnrichedEntity&) = default;
};

struct SparqlQuerySpec {
  std::string subject;
  std::string text;

  http::RequestSpec to_request(const std::string& endpoint) const {
    http::RequestSpec req;
    req.method = "GET";
    req.url = endpoint + (endpoint.find('?') == std::string::npos ? "?" : "&") +
              http::encode_params({{"query", text}, {"format", "application/sparql-results+json"}});
    req.headers.emplace_back("Accept", "application/sparql-results+json");
    return req;
  }
};

// scheme ":" hier-part with no characters that are illegal inside <...>.
inline void validate_absolute_iri(std::string_view iri) {
  const auto colon = iri.find(':');
  const auto is_alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
  if (colon == std::string_view::npos || colon == 0 || !is_alpha(iri[0]))
    throw ValidationError("not an absolute IRI: '" + std::string(iri) + "'");
  for (std::size_t i = 1; i < colon; ++i) {
    const char c = iri[i];
    if (!(is_alpha(c) || (c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.'))
      throw ValidationError("bad IRI scheme: '" + std::string(iri) + "'");
  }
  if (colon + 1 == iri.size()) throw ValidationError("IRI has an empty body: '" + std::string(iri) + "'");
  for (unsigned char c : iri) {
    if (c <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
        c == '`' || c == '\\')
      throw ValidationError("IRI contains a forbidden character: '" + std::string(iri) + "'");
  }
}

inline SparqlQuerySpec build_enrichment_query(std::string_view uri) {
  validate_absolute_iri(uri);
  const std::string subject = "<" + std::string(uri) + ">";
  std::string q;
  q += "SELECT DISTINCT ?type ?hypernym WHERE {\n";
  q += "  " + subject + " <" + std::string(kRdfType) + "> ?type .\n";
  q += "  OPTIONAL { " + subject + " <" + std::string(kHypernymProperty) + "> ?hypernym . }\n";
  q += "}\n";
  return {std::string(uri), std::move(q)};
}

// Last path or fragment segment, percent-decoded, with tag-list delimiters
// (',', '[' and ']') removed.
inline std::string local_name(std::string_view iri) {
  const auto cut = iri.find_last_of("/#");
  const auto tail = cut == std::string_view::npos ? iri : iri.substr(cut + 1);
  std::string decoded = http::percent_decode(tail);
  std::erase_if(decoded, [](char c) { return c == ',' || c == '[' || c == ']'; });
  return decoded;
}

// Type namespaces whose local names become tags. foaf:Person is kept as the
// single exception outside the two ontologies.
inline bool is_tag_type(std::string_view iri) {
  static constexpr std::array<std::string_view, 4> kPrefixes = {
      "http://dbpedia.org/ontology/", "https://dbpedia.org/ontology/", "http://schema.org/", "https://schema.org/"};
  if (iri == "http://xmlns.com/foaf/0.1/Person") return true;
  return std::any_of(kPrefixes.begin(), kPrefixes.end(),
                     [&](std::string_view p) { return iri.starts_with(p) && iri.size() > p.size(); });
}

// [local(uri)] ++ kept type local names in response order ++ [local(hypernym)].
// Duplicates are kept.
inline std::vector<std::string> derive_tags(std::string_view uri, const std::vector<std::string>& type_iris,
                                            const std::optional<std::string>& hypernym_iri) {
  std::vector<std::string> tags;
  auto head = local_name(uri);
  if (head.empty()) return tags;
  tags.push_back(std::move(head));
  for (const auto& t : type_iris) {
    if (!is_tag_type(t)) continue;
    if (auto name = local_name(t); !name.empty()) tags.push_back(std::move(name));
  }
  if (hypernym_iri) {
    if (auto name = local_name(*hypernym_iri); !name.empty()) tags.push_back(std::move(name));
  }
  return tags;
}

struct EntityFacts {
  std::vector<std::string> types;  // distinct, first-occurrence order
  std::optional<std::string> hypernym;
  std::size_t rows = 0;
};

// Reads SPARQL 1.1 JSON results of the enrichment query.
inline EntityFacts parse_sparql_results(std::string_view body) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.byte, std::string("malformed SPARQL results: ") + e.what());
  }
  EntityFacts facts;
  const auto results = root.find("results");
  if (!root.is_object() || results == root.end() || !results->is_object()) return facts;
  const auto bindings = results->find("bindings");
  if (bindings == results->end() || !bindings->is_array()) return facts;
  auto value_of = [](const nlohmann::json& row, const char* var) -> std::optional<std::string> {
    const auto it = row.find(var);
    if (it == row.end() || !it->is_object()) return std::nullopt;
    const auto v = it->find("value");
    if (v == it->end() || !v->is_string()) return std::nullopt;
    return v->get<std::string>();
  };
  for (const auto& row : *bindings) {
    if (!row.is_object()) continue;
    ++facts.rows;
    if (auto t = value_of(row, "type"); t && std::find(facts.types.begin(), facts.types.end(), *t) == facts.types.end())
      facts.types.push_back(std::move(*t));
    if (!facts.hypernym) facts.hypernym = value_of(row, "hypernym");
  }
  return facts;
}

// URI -> tags, filled at most once per URI even under concurrent lookups.
class TagCache {
 public:
  template <typename Compute>
  std::vector<std::string> get_or_compute(const std::string& uri, Compute&& compute) {
    std::shared_future<std::vector<std::string>> fut;
    std::promise<std::vector<std::string>> promise;
    bool owner = false;
    {
      std::lock_guard lock(mu_);
      auto it = entries_.find(uri);
      if (it == entries_.end()) {
        fut = promise.get_future().share();
        entries_.emplace(uri, fut);
        owner = true;
      } else {
        fut = it->second;
      }
    }
    if (owner) {
      try {
        promise.set_value(compute());
      } catch (...) {
        {
          std::lock_guard lock(mu_);
          entries_.erase(uri);
        }
        promise.set_exception(std::current_exception());
        throw;
      }
    }
    return fut.get();
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
  }

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::shared_future<std::vector<std::string>>> entries_;
};

class Enricher {
 public:
  Enricher(const PipelineConfig& cfg, http::Transport& transport) : cfg_(cfg), transport_(transport) {}

  // Tags for one URI. An empty knowledge-base answer yields no tags; so does
  // an unreachable endpoint, after retries, with a warning.
  std::vector<std::string> tags_for(const std::string& uri, Warnings* warnings = nullptr) {
    return cache_.get_or_compute(uri, [&]() -> std::vector<std::string> {
      SparqlQuerySpec query;
      try {
        query = build_enrichment_query(uri);
      } catch (const ValidationError& e) {
        if (warnings) warnings->add(std::string("enrichment skipped: ") + e.what());
        return {};
      }
      http::Response resp;
      try {
        resp = http::send_with_retries(transport_, query.to_request(cfg_.sparql_endpoint),
                                       {cfg_.max_retries, cfg_.retry_backoff_ms});
      } catch (const NetworkError& e) {
        if (warnings) warnings->add("enrichment of " + uri + " failed: " + e.what());
        return {};
      }
      if (resp.status != 200) {
        if (warnings) warnings->add("enrichment of " + uri + ": HTTP " + std::to_string(resp.status));
        return {};
      }
      EntityFacts facts;
      try {
        facts = parse_sparql_results(resp.body);
      } catch (const ParseError& e) {
        if (warnings) warnings->add("enrichment of " + uri + ": " + e.what());
        return {};
      }
      if (facts.rows == 0) return {};
      return derive_tags(uri, facts.types, facts.hypernym);
    });
  }

  // One row per annotation, in input order.
  std::vector<EnrichedEntity> enrich(const AnnotationResult& anns, Warnings* warnings = nullptr) {
    std::vector<std::string> distinct;
    for (const auto& a : anns.annotations)
      if (std::find(distinct.begin(), distinct.end(), a.uri) == distinct.end()) distinct.push_back(a.uri);
    parallel_for(distinct.size(), cfg_.max_concurrency, [&](std::size_t i) { tags_for(distinct[i], warnings); });

    std::vector<EnrichedEntity> out;
    out.reserve(anns.annotations.size());
    for (const auto& a : anns.annotations) out.push_back({a.surface_form, a.uri, a.offset, tags_for(a.uri, warnings)});
    return out;
  }

  const TagCache& cache() const { return cache_; }

 private:
  const PipelineConfig& cfg_;
  http::Transport& transport_;
  TagCache cache_;
};

inline std::vector<EnrichedEntity> enrich(const AnnotationResult& anns, const PipelineConfig& cfg,
                                          http::Transport& transport, Warnings* warnings = nullptr) {
  Enricher enricher(cfg, transport);
  return enricher.enrich(anns, warnings);
}

}  // namespace semtopic
