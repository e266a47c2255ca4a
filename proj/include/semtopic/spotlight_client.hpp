#pragma once

// Entity recognition against a DBpedia-Spotlight-compatible `annotate`
// endpoint: request construction, lenient response parsing, and overlap
// resolution.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "semtopic/concurrency.hpp"
#include "semtopic/corpus_io.hpp"
#include "semtopic/error.hpp"
#include "semtopic/http.hpp"
#include "semtopic/unicode.hpp"

namespace semtopic {

struct EntityAnnotation {
  std::string uri;
  std::string surface_form;
  std::size_t offset = 0;  // scalar values into Document::normalized_text
  std::int64_t support = 0;
  std::string types_raw;
  std::optional<double> similarity_score;
  std::optional<double> percentage_of_second_rank;

  std::size_t length() const { return unicode::length(surface_form); }
  std::size_t end() const { return offset + length(); }

  friend bool operator==(const EntityAnnotation&, const EntityAnnotation&) = default;
};

struct AnnotationResult {
  std::string document_id;
  std::vector<EntityAnnotation> annotations;  // sorted by offset
};

// Shortest round-trip decimal that always carries a fractional part, so
// 1.0 prints as "1.0" and 0.5 as "0.5".
inline std::string format_decimal(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string out(buf, ptr);
  if (out.find_first_of(".eEn") == std::string::npos) out += ".0";
  return out;
}

inline http::RequestSpec build_annotate_request(const Document& doc, const PipelineConfig& cfg) {
  if (doc.normalized_text.empty()) throw InputError("cannot annotate an empty document");
  const std::size_t chars = unicode::length(doc.normalized_text);
  if (chars > cfg.max_text_chars)
    throw SizeError("document '" + doc.id + "' has " + std::to_string(chars) + " characters; the annotation cap is " +
                    std::to_string(cfg.max_text_chars));

  const http::Params params{{"text", doc.normalized_text},
                            {"confidence", format_decimal(cfg.confidence)},
                            {"support", std::to_string(cfg.support)}};
  http::RequestSpec req;
  req.headers.emplace_back("Accept", "application/json");
  if (chars > cfg.post_threshold_chars) {
    req.method = "POST";
    req.url = cfg.annotator_endpoint;
    req.headers.emplace_back("Content-Type", std::string(http::kFormContentType));
    req.body = http::encode_params(params);
  } else {
    req.method = "GET";
    req.url = cfg.annotator_endpoint + (cfg.annotator_endpoint.find('?') == std::string::npos ? "?" : "&") +
              http::encode_params(params);
  }
  return req;
}

namespace detail {

// Spotlight encodes numbers as JSON strings; newer builds use native numbers.
template <typename T>
std::optional<T> lenient_number(const nlohmann::json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (it->is_number()) {
    if constexpr (std::is_integral_v<T>) {
      if (it->is_number_float()) return std::nullopt;
    }
    return it->get<T>();
  }
  if (!it->is_string()) return std::nullopt;
  const auto& s = it->get_ref<const std::string&>();
  T out{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return out;
}

inline std::optional<std::string> string_field(const nlohmann::json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) return std::nullopt;
  return it->get<std::string>();
}

}  // namespace detail

// Extracts `@resources`. Resources missing @URI, @surfaceForm or a usable
// @offset are skipped with a warning. Output is sorted by offset.
inline AnnotationResult parse_annotation_response(std::string_view json_body, std::string document_id = {},
                                                  Warnings* warnings = nullptr) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(json_body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.byte, std::string("malformed annotation JSON: ") + e.what());
  }
  AnnotationResult result{std::move(document_id), {}};
  if (!root.is_object()) throw ParseError(0, "annotation response is not a JSON object");
  const auto it = root.find("@resources");
  if (it == root.end() || it->is_null()) return result;

  std::vector<nlohmann::json> resources;
  if (it->is_array()) {
    resources.assign(it->begin(), it->end());
  } else if (it->is_object()) {
    resources.push_back(*it);
  }

  auto warn = [&](std::size_t i, const std::string& why) {
    if (warnings) warnings->add("annotation resource #" + std::to_string(i) + " skipped: " + why);
  };
  for (std::size_t i = 0; i < resources.size(); ++i) {
    const auto& r = resources[i];
    if (!r.is_object()) {
      warn(i, "not an object");
      continue;
    }
    auto uri = detail::string_field(r, "@URI");
    auto surface = detail::string_field(r, "@surfaceForm");
    auto offset = detail::lenient_number<std::int64_t>(r, "@offset");
    if (!uri || uri->empty()) {
      warn(i, "missing @URI");
      continue;
    }
    if (!surface || surface->empty()) {
      warn(i, "missing @surfaceForm");
      continue;
    }
    if (!offset || *offset < 0) {
      warn(i, "missing or invalid @offset");
      continue;
    }
    EntityAnnotation ann;
    ann.uri = std::move(*uri);
    ann.surface_form = std::move(*surface);
    ann.offset = static_cast<std::size_t>(*offset);
    ann.support = std::max<std::int64_t>(0, detail::lenient_number<std::int64_t>(r, "@support").value_or(0));
    ann.types_raw = detail::string_field(r, "@types").value_or("");
    ann.similarity_score = detail::lenient_number<double>(r, "@similarityScore");
    ann.percentage_of_second_rank = detail::lenient_number<double>(r, "@percentageOfSecondRank");
    result.annotations.push_back(std::move(ann));
  }
  std::stable_sort(result.annotations.begin(), result.annotations.end(),
                   [](const auto& a, const auto& b) { return a.offset < b.offset; });
  return result;
}

// Field-preserving JSON form of a result, in the endpoint's own key names.
inline nlohmann::json to_json(const AnnotationResult& result) {
  nlohmann::json resources = nlohmann::json::array();
  for (const auto& a : result.annotations) {
    nlohmann::json r = {{"@URI", a.uri},
                        {"@surfaceForm", a.surface_form},
                        {"@offset", std::to_string(a.offset)},
                        {"@support", std::to_string(a.support)},
                        {"@types", a.types_raw}};
    if (a.similarity_score) r["@similarityScore"] = format_decimal(*a.similarity_score);
    if (a.percentage_of_second_rank) r["@percentageOfSecondRank"] = format_decimal(*a.percentage_of_second_rank);
    resources.push_back(std::move(r));
  }
  return {{"@resources", std::move(resources)}};
}

// Drops annotations whose surface form does not occur at the claimed offset.
inline std::vector<EntityAnnotation> check_offsets(std::vector<EntityAnnotation> anns, std::string_view text,
                                                   Warnings* warnings = nullptr) {
  const std::u32string chars = unicode::decode(text);
  std::vector<EntityAnnotation> kept;
  kept.reserve(anns.size());
  for (auto& a : anns) {
    const std::u32string surface = unicode::decode(a.surface_form);
    const bool ok = a.offset <= chars.size() && surface.size() <= chars.size() - a.offset &&
                    chars.compare(a.offset, surface.size(), surface) == 0;
    if (ok) {
      kept.push_back(std::move(a));
    } else if (warnings) {
      warnings->add("annotation '" + a.surface_form + "'@" + std::to_string(a.offset) +
                    " does not match the text; dropped");
    }
  }
  return kept;
}

// Keeps a pairwise-disjoint subset: higher support wins, then the longer
// surface form, then the lower offset. Output is sorted by offset.
inline std::vector<EntityAnnotation> resolve_overlaps(const std::vector<EntityAnnotation>& anns) {
  std::vector<std::size_t> order(anns.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<std::size_t> lengths(anns.size());
  for (std::size_t i = 0; i < anns.size(); ++i) lengths[i] = anns[i].length();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = anns[a];
    const auto& y = anns[b];
    if (x.support != y.support) return x.support > y.support;
    if (lengths[a] != lengths[b]) return lengths[a] > lengths[b];
    if (x.offset != y.offset) return x.offset < y.offset;
    return x.uri < y.uri;
  });

  std::vector<std::size_t> accepted;
  for (std::size_t i : order) {
    const std::size_t begin = anns[i].offset;
    const std::size_t end = begin + std::max<std::size_t>(lengths[i], 1);
    const bool clash = std::any_of(accepted.begin(), accepted.end(), [&](std::size_t j) {
      const std::size_t b2 = anns[j].offset;
      const std::size_t e2 = b2 + std::max<std::size_t>(lengths[j], 1);
      return begin < e2 && b2 < end;
    });
    if (!clash) accepted.push_back(i);
  }
  std::sort(accepted.begin(), accepted.end(),
            [&](std::size_t a, std::size_t b) { return anns[a].offset < anns[b].offset; });
  std::vector<EntityAnnotation> out;
  out.reserve(accepted.size());
  for (std::size_t i : accepted) out.push_back(anns[i]);
  return out;
}

// Full annotation step for one document: request, parse, offset check and
// overlap resolution.
inline AnnotationResult annotate(const Document& doc, const PipelineConfig& cfg, http::Transport& transport,
                                 Warnings* warnings = nullptr) {
  const auto req = build_annotate_request(doc, cfg);
  const auto resp = http::send_with_retries(transport, req, {cfg.max_retries, cfg.retry_backoff_ms});
  if (resp.status != 200)
    throw NetworkError("annotation endpoint answered HTTP " + std::to_string(resp.status) + " for '" + doc.id + "'");
  auto result = parse_annotation_response(resp.body, doc.id, warnings);
  result.annotations = resolve_overlaps(check_offsets(std::move(result.annotations), doc.normalized_text, warnings));
  return result;
}

// Annotates several documents with at most cfg.max_concurrency requests in
// flight. Results are in input order.
inline std::vector<AnnotationResult> annotate_all(const std::vector<Document>& docs, const PipelineConfig& cfg,
                                                  http::Transport& transport, Warnings* warnings = nullptr) {
  std::vector<AnnotationResult> out(docs.size());
  parallel_for(docs.size(), cfg.max_concurrency,
               [&](std::size_t i) { out[i] = annotate(docs[i], cfg, transport, warnings); });
  return out;
}

}  // namespace semtopic
