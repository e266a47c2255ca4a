#pragma once

// Splices " [tag, tag, ...]" after each entity mention.

#include <string>
#include <vector>

#include "semtopic/corpus_io.hpp"
#include "semtopic/error.hpp"
#include "semtopic/kb_enricher.hpp"
#include "semtopic/unicode.hpp"

namespace semtopic {

struct Splice {
  std::size_t offset = 0;  // mention offset in the untagged text
  std::string surface_form;
  std::size_t inserted_length = 0;  // scalar values added after the mention

  friend bool operator==(const Splice&, const Splice&) = default;
};

struct TaggedDocument {
  std::string document_id;
  std::string tagged_text;
  std::vector<Splice> splice_log;  // ascending offset
};

inline std::string format_tag_list(const std::vector<std::string>& tags) {
  std::string out = " [";
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (i) out += ", ";
    out += tags[i];
  }
  out += "]";
  return out;
}

inline TaggedDocument tag_text(const Document& doc, const std::vector<EnrichedEntity>& entities) {
  std::u32string text = unicode::decode(doc.normalized_text);
  std::size_t prev_end = 0;
  for (std::size_t i = 0; i < entities.size(); ++i) {
    const auto& e = entities[i];
    const std::u32string surface = unicode::decode(e.surface_form);
    if (surface.empty()) throw ContractViolation("entity #" + std::to_string(i) + " has an empty surface form");
    if (e.offset > text.size() || surface.size() > text.size() - e.offset)
      throw ContractViolation("entity '" + e.surface_form + "'@" + std::to_string(e.offset) + " is out of range");
    if (i > 0 && e.offset < prev_end)
      throw ContractViolation("entity '" + e.surface_form + "'@" + std::to_string(e.offset) +
                              " overlaps or is out of order; resolve overlaps first");
    if (text.compare(e.offset, surface.size(), surface) != 0)
      throw ContractViolation("entity '" + e.surface_form + "' does not occur at offset " + std::to_string(e.offset));
    prev_end = e.offset + surface.size();
  }

  TaggedDocument out{doc.id, {}, {}};
  for (const auto& e : entities) {
    if (e.tags.empty()) continue;
    out.splice_log.push_back({e.offset, e.surface_form, unicode::length(format_tag_list(e.tags))});
  }
  // Highest offset first so earlier offsets stay valid.
  for (auto it = entities.rbegin(); it != entities.rend(); ++it) {
    if (it->tags.empty()) continue;
    const std::size_t at = it->offset + unicode::length(it->surface_form);
    text.insert(at, unicode::decode(format_tag_list(it->tags)));
  }
  out.tagged_text = unicode::encode(text);
  return out;
}

// Removes every recorded splice, verifying each one against the text.
inline std::string strip_tags(const TaggedDocument& tagged) {
  const std::u32string text = unicode::decode(tagged.tagged_text);
  std::u32string out;
  out.reserve(text.size());
  std::size_t cursor = 0;  // position in the tagged text
  std::size_t shift = 0;   // scalar values inserted before the cursor
  std::size_t prev_end = 0;
  for (std::size_t i = 0; i < tagged.splice_log.size(); ++i) {
    const auto& s = tagged.splice_log[i];
    const std::u32string surface = unicode::decode(s.surface_form);
    const std::size_t mention = s.offset + shift;
    const std::size_t insert_at = mention + surface.size();
    const auto fail = [&](const std::string& why) {
      throw IntegrityError("splice #" + std::to_string(i) + " ('" + s.surface_form + "'@" + std::to_string(s.offset) +
                           "): " + why);
    };
    if (i > 0 && s.offset < prev_end) fail("splice log is not sorted or overlaps");
    if (surface.empty() || s.inserted_length < 3) fail("malformed splice entry");
    if (insert_at > text.size() || s.inserted_length > text.size() - insert_at) fail("splice runs past the text");
    if (text.compare(mention, surface.size(), surface) != 0) fail("mention not found at recorded offset");
    if (text[insert_at] != U' ' || text[insert_at + 1] != U'[' || text[insert_at + s.inserted_length - 1] != U']')
      fail("no bracketed tag list after the mention");
    out.append(text, cursor, insert_at - cursor);
    cursor = insert_at + s.inserted_length;
    shift += s.inserted_length;
    prev_end = s.offset + surface.size();
  }
  out.append(text, cursor, std::u32string::npos);
  return unicode::encode(out);
}

}  // namespace semtopic
