#pragma once

// Reading input text, whitespace normalization and the pipeline configuration.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include "semtopic/error.hpp"
#include "semtopic/lda_config.hpp"
#include "semtopic/unicode.hpp"

namespace semtopic {

struct Document {
  std::string id;
  std::string raw_text;
  std::string normalized_text;
};

enum class StopwordListId { english_default, file };
enum class FixtureMode { live, replay, record };

inline std::string_view to_string(FixtureMode m) {
  switch (m) {
    case FixtureMode::live: return "live";
    case FixtureMode::replay: return "replay";
    case FixtureMode::record: return "record";
  }
  return "live";
}

inline FixtureMode parse_fixture_mode(std::string_view s) {
  if (s == "live") return FixtureMode::live;
  if (s == "replay") return FixtureMode::replay;
  if (s == "record") return FixtureMode::record;
  throw ValidationError("unknown fixture mode '" + std::string(s) + "'");
}

struct PipelineConfig {
  double confidence = 0.5;
  int support = 0;
  std::string annotator_endpoint = "https://api.dbpedia-spotlight.org/en/annotate";
  std::string sparql_endpoint = "https://dbpedia.org/sparql";
  LdaConfig lda;
  StopwordListId stopword_list_id = StopwordListId::english_default;
  std::string stopword_file;
  FixtureMode fixture_mode = FixtureMode::live;
  std::string fixtures_dir;

  // Request shaping and network policy.
  std::size_t max_text_chars = 10000;
  std::size_t post_threshold_chars = 1500;
  int max_concurrency = 4;
  int max_retries = 3;
  int retry_backoff_ms = 200;
  int timeout_seconds = 30;

  void validate() const {
    if (!(confidence >= 0.0 && confidence <= 1.0))
      throw ValidationError("confidence must lie in [0, 1]");
    if (support < 0) throw ValidationError("support must be >= 0");
    if (max_concurrency < 1) throw ValidationError("max_concurrency must be >= 1");
    if (max_retries < 0) throw ValidationError("max_retries must be >= 0");
    if (stopword_list_id == StopwordListId::file && stopword_file.empty())
      throw ValidationError("stopword list 'file' requires stopword_file");
    if (fixture_mode != FixtureMode::live && fixtures_dir.empty())
      throw ValidationError("record/replay mode requires a fixtures directory");
    lda.validate();
  }
};

// Folds every run of ASCII whitespace (space, tab, CR, LF, VT, FF) into a
// single space and trims both ends. Nothing else is touched.
inline std::string normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (unicode::is_ascii_space(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c);
  }
  return out;
}

inline Document make_document(std::string id, std::string raw_text, bool allow_empty = false) {
  unicode::validate(raw_text);
  Document doc{std::move(id), std::move(raw_text), {}};
  doc.normalized_text = normalize(doc.raw_text);
  if (doc.normalized_text.empty() && !allow_empty)
    throw InputError("document '" + doc.id + "' is empty");
  return doc;
}

inline Document read_document(const std::filesystem::path& path, bool allow_empty = false) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read input file " + path.string());
  std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw InputError("error while reading " + path.string());
  try {
    return make_document(path.stem().string(), std::move(bytes), allow_empty);
  } catch (const EncodingError& e) {
    throw EncodingError(e.byte_offset(), path.string() + ": invalid UTF-8");
  }
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end)
    throw ValidationError("config key '" + key + "': not a number: " + value);
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ValidationError("config key '" + key + "': expected true/false");
}

}  // namespace detail

// Parses the flat TOML subset used for configuration: `key = value` lines,
// optional `[section]` headers (keys become `section.key`), `#` comments and
// double-quoted strings. Returns keys in sorted order.
inline std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::string section;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string line = raw;
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_string = !in_string;
      if (line[i] == '#' && !in_string) {
        line.resize(i);
        break;
      }
    }
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ValidationError("config line " + std::to_string(line_no) + ": bad section");
      section = detail::trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key = value");
    std::string key = detail::trim(std::string_view(line).substr(0, eq));
    std::string value = detail::trim(std::string_view(line).substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (!section.empty()) key = section + "." + key;
    out[key] = value;
  }
  return out;
}

// Applies one `key = value` override. Unknown keys are rejected.
inline void apply_config_value(PipelineConfig& cfg, const std::string& key, const std::string& value) {
  using detail::parse_number;
  if (key == "confidence") cfg.confidence = parse_number<double>(key, value);
  else if (key == "support") cfg.support = parse_number<int>(key, value);
  else if (key == "annotator_endpoint") cfg.annotator_endpoint = value;
  else if (key == "sparql_endpoint") cfg.sparql_endpoint = value;
  else if (key == "stopwords") {
    if (value == "english-default") {
      cfg.stopword_list_id = StopwordListId::english_default;
    } else if (value == "file") {
      cfg.stopword_list_id = StopwordListId::file;
    } else {
      throw ValidationError("stopwords must be 'english-default' or 'file'");
    }
  } else if (key == "stopword_file") cfg.stopword_file = value;
  else if (key == "fixture_mode") cfg.fixture_mode = parse_fixture_mode(value);
  else if (key == "fixtures") cfg.fixtures_dir = value;
  else if (key == "max_text_chars") cfg.max_text_chars = parse_number<std::size_t>(key, value);
  else if (key == "post_threshold_chars") cfg.post_threshold_chars = parse_number<std::size_t>(key, value);
  else if (key == "max_concurrency") cfg.max_concurrency = parse_number<int>(key, value);
  else if (key == "max_retries") cfg.max_retries = parse_number<int>(key, value);
  else if (key == "retry_backoff_ms") cfg.retry_backoff_ms = parse_number<int>(key, value);
  else if (key == "timeout_seconds") cfg.timeout_seconds = parse_number<int>(key, value);
  else if (key == "lda.topics") cfg.lda.num_topics = parse_number<int>(key, value);
  else if (key == "lda.alpha") cfg.lda.alpha = parse_number<double>(key, value);
  else if (key == "lda.beta") cfg.lda.beta = parse_number<double>(key, value);
  else if (key == "lda.iterations") cfg.lda.iterations = parse_number<int>(key, value);
  else if (key == "lda.burn_in") cfg.lda.burn_in = parse_number<int>(key, value);
  else if (key == "lda.seed") cfg.lda.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "lda.top_n") cfg.lda.top_n = parse_number<int>(key, value);
  else if (key == "lda.average_samples") cfg.lda.average_samples = detail::parse_bool(key, value);
  else throw ValidationError("unknown config key '" + key + "'");
}

inline PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read config file " + path.string());
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  PipelineConfig cfg;
  for (const auto& [key, value] : parse_key_values(text)) apply_config_value(cfg, key, value);
  // Relative paths in a config file resolve against the file's directory.
  const auto base = path.parent_path();
  if (!cfg.fixtures_dir.empty() && std::filesystem::path(cfg.fixtures_dir).is_relative())
    cfg.fixtures_dir = (base / cfg.fixtures_dir).lexically_normal().string();
  if (!cfg.stopword_file.empty() && std::filesystem::path(cfg.stopword_file).is_relative())
    cfg.stopword_file = (base / cfg.stopword_file).lexically_normal().string();
  return cfg;
}

}  // namespace semtopic
