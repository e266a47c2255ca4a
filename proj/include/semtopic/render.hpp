#pragma once

// Weighted-term table (TSV) and tag-cloud (SVG) output.

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "semtopic/error.hpp"
#include "semtopic/lda.hpp"
#include "semtopic/unicode.hpp"

namespace semtopic {

struct RenderSpec {
  int top_n = 15;
  double min_font = 10.0;
  double max_font = 48.0;
  int width = 800;
  int height = 600;
  std::uint64_t layout_seed = 0;  // reserved for jittered layouts; unused

  void validate() const {
    if (top_n < 0) throw ValidationError("top_n must be >= 0");
    if (!(min_font > 0.0) || !(max_font > min_font)) throw ValidationError("need max_font > min_font > 0");
    if (width <= 0 || height <= 0) throw ValidationError("canvas dimensions must be positive");
  }
};

namespace detail {

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

inline void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << bytes;
  out.flush();
  if (!out) throw IoError("error while writing " + path.string());
}

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace detail

inline std::string format_table(const TopicModel& model, std::size_t top_n) {
  std::string out = "topic\tterm\tweight\n";
  for (std::size_t k = 0; k < model.num_topics(); ++k) {
    for (const auto& [term, weight] : top_terms(model, k, top_n)) {
      out += std::to_string(k) + "\t" + term + "\t" + detail::fixed(weight, 6) + "\n";
    }
  }
  return out;
}

inline void write_table(const TopicModel& model, const std::filesystem::path& path, std::size_t top_n) {
  detail::write_file(path, format_table(model, top_n));
}

inline void write_table(const TopicModel& model, const std::filesystem::path& path) {
  write_table(model, path, static_cast<std::size_t>(model.config.top_n));
}

struct CloudTerm {
  std::string term;
  double weight = 0.0;
  std::size_t topic = 0;  // topic holding the maximum weight
  double font_size = 0.0;
  double x = 0.0;
  double y = 0.0;
};

// Pools every topic's top terms by maximum weight, sizes fonts linearly in
// weight and places terms in rows, heaviest first.
inline std::vector<CloudTerm> layout_tag_cloud(const TopicModel& model, const RenderSpec& spec) {
  spec.validate();
  std::map<std::string, CloudTerm> pooled;
  for (std::size_t k = 0; k < model.num_topics(); ++k) {
    for (const auto& [term, weight] : top_terms(model, k, static_cast<std::size_t>(spec.top_n))) {
      auto [it, inserted] = pooled.try_emplace(term, CloudTerm{term, weight, k});
      if (!inserted && weight > it->second.weight) {
        it->second.weight = weight;
        it->second.topic = k;
      }
    }
  }
  std::vector<CloudTerm> terms;
  for (auto& [_, t] : pooled) terms.push_back(std::move(t));
  std::stable_sort(terms.begin(), terms.end(), [](const CloudTerm& a, const CloudTerm& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.term < b.term;
  });
  if (terms.empty()) return terms;

  const double wmax = terms.front().weight;
  const double wmin = terms.back().weight;
  for (auto& t : terms) {
    t.font_size = wmax > wmin ? spec.min_font + (t.weight - wmin) / (wmax - wmin) * (spec.max_font - spec.min_font)
                              : spec.max_font;
  }

  constexpr double kMargin = 10.0;
  constexpr double kGap = 12.0;
  constexpr double kAdvance = 0.6;  // average glyph width as a fraction of the font size
  double x = kMargin;
  double row_top = kMargin;
  double row_font = 0.0;
  for (auto& t : terms) {
    const double w = kAdvance * t.font_size * static_cast<double>(unicode::length(t.term));
    if (x > kMargin && x + w > spec.width - kMargin) {
      row_top += row_font * 1.25;
      x = kMargin;
      row_font = 0.0;
    }
    if (row_font == 0.0) row_font = t.font_size;
    t.x = x;
    t.y = row_top + row_font;
    x += w + kGap;
  }
  return terms;
}

inline std::string format_tag_cloud(const TopicModel& model, const RenderSpec& spec) {
  static constexpr std::array<const char*, 10> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  const auto terms = layout_tag_cloud(model, spec);
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(spec.width) +
         "\" height=\"" + std::to_string(spec.height) + "\" viewBox=\"0 0 " + std::to_string(spec.width) + " " +
         std::to_string(spec.height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  for (const auto& t : terms) {
    out += "<text x=\"" + detail::fixed(t.x, 2) + "\" y=\"" + detail::fixed(t.y, 2) +
           "\" font-family=\"sans-serif\" font-size=\"" + detail::fixed(t.font_size, 2) + "\" fill=\"" +
           kPalette[t.topic % kPalette.size()] + "\" data-topic=\"" + std::to_string(t.topic) +
           "\" data-weight=\"" + detail::fixed(t.weight, 6) + "\">" + detail::xml_escape(t.term) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

inline void render_tag_cloud(const TopicModel& model, const RenderSpec& spec, const std::filesystem::path& path) {
  detail::write_file(path, format_tag_cloud(model, spec));
}

}  // namespace semtopic
