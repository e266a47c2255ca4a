#pragma once

// Snowball English stemmer (the "Porter2" family, rule set of Snowball 3.x).
// Operates on lowercase input; characters outside a-z are non-vowels.

#include <algorithm>
#include <array>
#include <string>
#include <string_view>

#include "semtopic/unicode.hpp"

namespace semtopic::snowball {

namespace detail {

class EnglishStemmer {
 public:
  explicit EnglishStemmer(std::u32string word) : w_(std::move(word)) {}

  std::u32string run() {
    if (exception1()) return w_;
    if (w_.size() < 3) return w_;
    prelude();
    mark_regions();
    step_1a();
    step_1b();
    step_1c();
    step_2();
    step_3();
    step_4();
    step_5();
    if (y_found_) std::replace(w_.begin(), w_.end(), U'Y', U'y');
    return w_;
  }

 private:
  static bool is_v(char32_t c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y'; }
  static bool is_v_wxy(char32_t c) { return is_v(c) || c == 'w' || c == 'x' || c == 'Y'; }
  static bool is_valid_li(char32_t c) {
    return c == 'c' || c == 'd' || c == 'e' || c == 'g' || c == 'h' || c == 'k' || c == 'm' || c == 'n' ||
           c == 'r' || c == 't';
  }

  std::size_t size() const { return w_.size(); }

  bool ends_with(std::u32string_view s, std::size_t end) const {
    return s.size() <= end && std::u32string_view(w_).substr(end - s.size(), s.size()) == s;
  }
  bool ends_with(std::u32string_view s) const { return ends_with(s, size()); }

  // Longest entry of `table` that is a suffix of w_[0, end); -1 when none.
  template <std::size_t N>
  int longest_suffix(const std::array<std::u32string_view, N>& table, std::size_t end) const {
    int best = -1;
    for (std::size_t i = 0; i < N; ++i)
      if (ends_with(table[i], end) && (best < 0 || table[i].size() > table[best].size())) best = static_cast<int>(i);
    return best;
  }

  void replace_suffix(std::size_t from, std::u32string_view with) {
    w_.replace(from, size() - from, with);
  }

  bool exception1() {
    static constexpr std::array<std::pair<std::u32string_view, std::u32string_view>, 15> kExceptions = {{
        {U"skis", U"ski"},     {U"skies", U"sky"},   {U"idly", U"idl"},   {U"gently", U"gentl"},
        {U"ugly", U"ugli"},    {U"early", U"earli"}, {U"only", U"onli"},  {U"singly", U"singl"},
        {U"sky", U"sky"},      {U"news", U"news"},   {U"howe", U"howe"},  {U"atlas", U"atlas"},
        {U"cosmos", U"cosmos"}, {U"bias", U"bias"},  {U"andes", U"andes"},
    }};
    for (const auto& [from, to] : kExceptions) {
      if (w_ == from) {
        w_ = to;
        return true;
      }
    }
    return false;
  }

  void prelude() {
    if (!w_.empty() && w_[0] == '\'') w_.erase(0, 1);
    if (!w_.empty() && w_[0] == 'y') {
      w_[0] = 'Y';
      y_found_ = true;
    }
    for (std::size_t i = 0; i + 1 < size(); ++i) {
      if (is_v(w_[i]) && w_[i + 1] == 'y') {
        w_[i + 1] = 'Y';
        y_found_ = true;
      }
    }
  }

  // Position just past the first non-vowel that follows a vowel, at or after
  // `from`; size() when there is none.
  std::size_t after_vowel_consonant(std::size_t from) const {
    std::size_t i = from;
    while (i < size() && !is_v(w_[i])) ++i;
    if (i >= size()) return size();
    ++i;
    while (i < size() && is_v(w_[i])) ++i;
    if (i >= size()) return size();
    return i + 1;
  }

  void mark_regions() {
    static constexpr std::array<std::u32string_view, 9> kPrefixes = {
        U"arsen", U"commun", U"emerg", U"gener", U"inter", U"later", U"organ", U"past", U"univers"};
    p1_ = p2_ = size();
    std::size_t start = 0;
    bool matched = false;
    for (auto p : kPrefixes) {
      if (std::u32string_view(w_).starts_with(p)) {
        start = p.size();
        matched = true;
        break;
      }
    }
    p1_ = matched ? start : after_vowel_consonant(0);
    p2_ = after_vowel_consonant(p1_);
  }

  // Short syllable ending at `end`.
  bool short_v(std::size_t end) const {
    if (end >= 3 && !is_v_wxy(w_[end - 1]) && is_v(w_[end - 2]) && !is_v(w_[end - 3])) return true;
    if (end == 2 && !is_v(w_[1]) && is_v(w_[0])) return true;
    return ends_with(U"past", end);
  }

  void step_1a() {
    static constexpr std::array<std::u32string_view, 3> kApostrophe = {U"'", U"'s'", U"'s"};
    if (int i = longest_suffix(kApostrophe, size()); i >= 0) w_.resize(size() - kApostrophe[i].size());

    static constexpr std::array<std::u32string_view, 6> kSuffixes = {U"ied", U"s", U"ies", U"sses", U"ss", U"us"};
    const int i = longest_suffix(kSuffixes, size());
    if (i < 0) return;
    const auto suffix = kSuffixes[i];
    const std::size_t bra = size() - suffix.size();
    if (suffix == U"sses") {
      replace_suffix(bra, U"ss");
    } else if (suffix == U"ied" || suffix == U"ies") {
      replace_suffix(bra, bra >= 2 ? U"i" : U"ie");
    } else if (suffix == U"s") {
      // Delete when a vowel occurs before the letter preceding the s.
      if (bra == 0) return;
      const bool vowel = std::any_of(w_.begin(), w_.begin() + static_cast<std::ptrdiff_t>(bra - 1), is_v);
      if (vowel) w_.resize(bra);
    }
  }

  void step_1b() {
    static constexpr std::array<std::u32string_view, 6> kSuffixes = {U"ed",   U"eed",   U"ing",
                                                                     U"edly", U"eedly", U"ingly"};
    const int i = longest_suffix(kSuffixes, size());
    if (i < 0) return;
    const auto suffix = kSuffixes[i];
    const std::size_t bra = size() - suffix.size();

    if (suffix == U"eed" || suffix == U"eedly") {
      if (bra < p1_) return;
      static constexpr std::array<std::u32string_view, 3> kStems = {U"succ", U"proc", U"exc"};
      const int s = longest_suffix(kStems, bra);
      if (s >= 0 && bra == kStems[s].size()) return;
      replace_suffix(bra, U"ee");
      return;
    }
    if (suffix == U"ing") {
      static constexpr std::array<std::u32string_view, 7> kStems = {U"even", U"cann", U"inn", U"earr",
                                                                    U"herr", U"out",  U"y"};
      const int s = longest_suffix(kStems, bra);
      if (s >= 0) {
        const std::size_t stem_start = bra - kStems[s].size();
        if (kStems[s] == U"y") {
          if (stem_start == 1 && !is_v(w_[0])) {
            replace_suffix(stem_start, U"ie");
            return;
          }
        } else if (stem_start == 0) {
          return;
        }
      }
    }

    // ed, edly, ing, ingly: delete when the stem contains a vowel, then tidy.
    if (!std::any_of(w_.begin(), w_.begin() + static_cast<std::ptrdiff_t>(bra), is_v)) return;
    w_.resize(bra);

    static constexpr std::array<std::u32string_view, 12> kEndings = {
        U"bb", U"dd", U"ff", U"gg", U"bl", U"mm", U"nn", U"pp", U"rr", U"at", U"tt", U"iz"};
    const int e = longest_suffix(kEndings, size());
    if (e >= 0 && (kEndings[e] == U"bl" || kEndings[e] == U"at" || kEndings[e] == U"iz")) {
      w_ += U'e';
      return;
    }
    if (e >= 0) {
      // Double consonant: drop one unless the word is exactly a/e/o + double.
      const std::size_t before = size() - 2;
      const char32_t c = before > 0 ? w_[before - 1] : 0;
      if (before == 1 && (c == 'a' || c == 'e' || c == 'o')) return;
      w_.pop_back();
      return;
    }
    if (size() == p1_ && short_v(size())) w_ += U'e';
  }

  void step_1c() {
    if (size() < 1) return;
    const char32_t last = w_.back();
    if (last != 'y' && last != 'Y') return;
    if (size() < 3) return;
    if (is_v(w_[size() - 2])) return;
    w_.back() = 'i';
  }

  void step_2() {
    static constexpr std::array<std::pair<std::u32string_view, std::u32string_view>, 25> kRules = {{
        {U"tional", U"tion"}, {U"enci", U"ence"},  {U"anci", U"ance"},    {U"abli", U"able"},
        {U"entli", U"ent"},   {U"izer", U"ize"},   {U"ization", U"ize"},  {U"ational", U"ate"},
        {U"ation", U"ate"},   {U"ator", U"ate"},   {U"alism", U"al"},     {U"aliti", U"al"},
        {U"alli", U"al"},     {U"fulness", U"ful"}, {U"fulli", U"ful"},   {U"ousli", U"ous"},
        {U"ousness", U"ous"}, {U"iveness", U"ive"}, {U"iviti", U"ive"},   {U"biliti", U"ble"},
        {U"bli", U"ble"},     {U"ogist", U"og"},   {U"ogi", U"og"},       {U"lessli", U"less"},
        {U"li", U""},
    }};
    std::array<std::u32string_view, kRules.size()> suffixes{};
    for (std::size_t i = 0; i < kRules.size(); ++i) suffixes[i] = kRules[i].first;
    const int i = longest_suffix(suffixes, size());
    if (i < 0) return;
    const auto [suffix, with] = kRules[i];
    const std::size_t bra = size() - suffix.size();
    if (bra < p1_) return;
    if (suffix == U"ogi") {
      if (bra == 0 || w_[bra - 1] != 'l') return;
    } else if (suffix == U"li") {
      if (bra == 0 || !is_valid_li(w_[bra - 1])) return;
    }
    replace_suffix(bra, with);
  }

  void step_3() {
    static constexpr std::array<std::pair<std::u32string_view, std::u32string_view>, 9> kRules = {{
        {U"icate", U"ic"}, {U"ative", U""}, {U"alize", U"al"}, {U"iciti", U"ic"}, {U"ical", U"ic"},
        {U"tional", U"tion"}, {U"ational", U"ate"}, {U"ful", U""}, {U"ness", U""},
    }};
    std::array<std::u32string_view, kRules.size()> suffixes{};
    for (std::size_t i = 0; i < kRules.size(); ++i) suffixes[i] = kRules[i].first;
    const int i = longest_suffix(suffixes, size());
    if (i < 0) return;
    const auto [suffix, with] = kRules[i];
    const std::size_t bra = size() - suffix.size();
    if (bra < p1_) return;
    if (suffix == U"ative" && bra < p2_) return;
    replace_suffix(bra, with);
  }

  void step_4() {
    static constexpr std::array<std::u32string_view, 18> kSuffixes = {
        U"ic",  U"ance", U"ence", U"able", U"ible", U"ate", U"ive", U"ize",  U"iti",
        U"al",  U"ism",  U"ion",  U"er",   U"ous",  U"ant", U"ent", U"ment", U"ement"};
    const int i = longest_suffix(kSuffixes, size());
    if (i < 0) return;
    const std::size_t bra = size() - kSuffixes[i].size();
    if (bra < p2_) return;
    if (kSuffixes[i] == U"ion" && (bra == 0 || (w_[bra - 1] != 's' && w_[bra - 1] != 't'))) return;
    w_.resize(bra);
  }

  void step_5() {
    if (w_.empty()) return;
    const std::size_t bra = size() - 1;
    if (w_.back() == 'e') {
      if (bra >= p2_ || (bra >= p1_ && !short_v(bra))) w_.resize(bra);
    } else if (w_.back() == 'l') {
      if (bra >= p2_ && bra > 0 && w_[bra - 1] == 'l') w_.resize(bra);
    }
  }

  std::u32string w_;
  std::size_t p1_ = 0;
  std::size_t p2_ = 0;
  bool y_found_ = false;
};

}  // namespace detail

inline std::string stem_english(std::string_view word) {
  return unicode::encode(detail::EnglishStemmer(unicode::decode(word)).run());
}

}  // namespace semtopic::snowball
