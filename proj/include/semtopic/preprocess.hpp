#pragma once

// Cleaning chain feeding the topic model: tokenize, drop numbers, erase
// punctuation, drop stop words, fold case, stem.

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "semtopic/corpus_io.hpp"
#include "semtopic/english_stopwords.hpp"
#include "semtopic/error.hpp"
#include "semtopic/snowball_english.hpp"
#include "semtopic/text_tagger.hpp"
#include "semtopic/unicode.hpp"

namespace semtopic {

using Tokens = std::vector<std::string>;

struct TokenizedDoc {
  std::string document_id;
  Tokens tokens;
};

// Maximal runs of word characters (letters, digits, '_'). Everything else,
// including brackets and commas, separates tokens.
inline Tokens tokenize(std::string_view text) {
  Tokens out;
  std::string current;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t c = unicode::decode_one(text, pos);
    if (unicode::is_word_char(c)) {
      unicode::append_utf8(current, c);
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

// Digits with an optional leading sign and at most one decimal point.
inline bool is_number(std::string_view token) {
  const std::u32string s = unicode::decode(token);
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  bool digit = false;
  bool point = false;
  for (; i < s.size(); ++i) {
    if (unicode::is_decimal_digit(s[i])) {
      digit = true;
    } else if (s[i] == '.' && !point) {
      point = true;
    } else {
      return false;
    }
  }
  return digit;
}

inline Tokens filter_numbers(Tokens tokens) {
  std::erase_if(tokens, [](const std::string& t) { return is_number(t); });
  return tokens;
}

inline Tokens erase_punctuation(Tokens tokens) {
  Tokens out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    std::string kept;
    std::size_t pos = 0;
    while (pos < t.size()) {
      const char32_t c = unicode::decode_one(t, pos);
      if (c == '_' || !unicode::is_punctuation(c)) unicode::append_utf8(kept, c);
    }
    if (!kept.empty()) out.push_back(std::move(kept));
  }
  return out;
}

inline std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) unicode::append_utf8(out, unicode::to_lower(unicode::decode_one(s, pos)));
  return out;
}

class StopwordList {
 public:
  // One word per line, '#' comments; words are lowercased on load.
  static StopwordList parse(std::string_view text) {
    StopwordList list;
    std::istringstream in{std::string(text)};
    for (std::string line; std::getline(in, line);) {
      if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      std::istringstream words(line);
      for (std::string w; words >> w;) list.words_.insert(to_lower(w));
    }
    return list;
  }

  static const StopwordList& english_default() {
    static const StopwordList list = parse(kSnowballEnglishStopwords);
    return list;
  }

  static StopwordList from_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read stop-word list " + path.string());
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    unicode::validate(text);
    return parse(text);
  }

  static StopwordList from_config(const PipelineConfig& cfg) {
    return cfg.stopword_list_id == StopwordListId::file ? from_file(cfg.stopword_file) : english_default();
  }

  bool contains(std::string_view token) const { return words_.contains(to_lower(token)); }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

inline Tokens filter_stopwords(Tokens tokens, const StopwordList& list = StopwordList::english_default()) {
  std::erase_if(tokens, [&](const std::string& t) { return list.contains(t); });
  return tokens;
}

inline Tokens fold_case(Tokens tokens) {
  for (auto& t : tokens) t = to_lower(t);
  return tokens;
}

// Knowledge-base identifiers (anything containing '_') are left as they are.
inline Tokens stem(Tokens tokens) {
  for (auto& t : tokens)
    if (t.find('_') == std::string::npos) t = snowball::stem_english(t);
  return tokens;
}

inline Tokens clean_tokens(Tokens tokens, const StopwordList& stopwords) {
  return stem(fold_case(filter_stopwords(erase_punctuation(filter_numbers(std::move(tokens))), stopwords)));
}

// tokenize -> filter_numbers -> erase_punctuation -> filter_stopwords ->
// fold_case -> stem. The cleaning steps repeat until the token list stops
// changing, so the chain is idempotent even where a stem lands on a stop
// word or stems again.
inline TokenizedDoc run_chain(std::string document_id, std::string_view text,
                              const StopwordList& stopwords = StopwordList::english_default()) {
  constexpr int kMaxPasses = 32;
  Tokens tokens = clean_tokens(tokenize(text), stopwords);
  for (int pass = 1; pass < kMaxPasses; ++pass) {
    Tokens next = clean_tokens(tokens, stopwords);
    if (next == tokens) break;
    tokens = std::move(next);
  }
  return {std::move(document_id), std::move(tokens)};
}

inline TokenizedDoc run_chain(const TaggedDocument& tagged,
                              const StopwordList& stopwords = StopwordList::english_default()) {
  return run_chain(tagged.document_id, tagged.tagged_text, stopwords);
}

inline TokenizedDoc run_chain(const TaggedDocument& tagged, const PipelineConfig& cfg) {
  return run_chain(tagged, StopwordList::from_config(cfg));
}

}  // namespace semtopic
