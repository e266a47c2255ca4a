#pragma once

// End-to-end orchestration: read -> annotate -> enrich -> tag -> preprocess
// -> fit -> render, plus the plain-versus-enriched model comparison.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "semtopic/corpus_io.hpp"
#include "semtopic/error.hpp"
#include "semtopic/fixture_store.hpp"
#include "semtopic/http.hpp"
#include "semtopic/kb_enricher.hpp"
#include "semtopic/lda.hpp"
#include "semtopic/preprocess.hpp"
#include "semtopic/render.hpp"
#include "semtopic/spotlight_client.hpp"
#include "semtopic/text_tagger.hpp"

namespace semtopic {

struct RunManifest {
  nlohmann::json config;
  std::map<std::string, std::string> input_hashes;  // path -> FNV-1a/64 of the bytes
  std::set<std::string> fixture_hashes;
  std::vector<std::string> outputs;
  std::map<std::string, double> stage_ms;
  std::vector<std::string> warnings;
  bool enriched = false;

  nlohmann::json to_json() const {
    return {{"config", config},           {"enriched", enriched},
            {"inputs", input_hashes},     {"fixtures", fixture_hashes},
            {"outputs", outputs},         {"stage_ms", stage_ms},
            {"warning_count", warnings.size()}, {"warnings", warnings}};
  }
};

inline nlohmann::json config_to_json(const PipelineConfig& cfg) {
  return {{"confidence", cfg.confidence},
          {"support", cfg.support},
          {"annotator_endpoint", cfg.annotator_endpoint},
          {"sparql_endpoint", cfg.sparql_endpoint},
          {"stopwords", cfg.stopword_list_id == StopwordListId::file ? "file" : "english-default"},
          {"stopword_file", cfg.stopword_file},
          {"fixture_mode", std::string(to_string(cfg.fixture_mode))},
          {"fixtures", cfg.fixtures_dir},
          {"lda",
           {{"topics", cfg.lda.num_topics},
            {"alpha", cfg.lda.alpha},
            {"beta", cfg.lda.beta},
            {"iterations", cfg.lda.iterations},
            {"burn_in", cfg.lda.burn_in},
            {"seed", cfg.lda.seed},
            {"top_n", cfg.lda.top_n},
            {"average_samples", cfg.lda.average_samples}}}};
}

// SEMTOPIC_ANNOTATOR_ENDPOINT and SEMTOPIC_SPARQL_ENDPOINT take precedence
// over the config file; command-line flags are applied afterwards.
inline void apply_env_overrides(PipelineConfig& cfg) {
  if (const char* v = std::getenv("SEMTOPIC_ANNOTATOR_ENDPOINT"); v && *v) cfg.annotator_endpoint = v;
  if (const char* v = std::getenv("SEMTOPIC_SPARQL_ENDPOINT"); v && *v) cfg.sparql_endpoint = v;
}

struct PipelineResult {
  RunManifest manifest;
  std::vector<Document> documents;
  std::vector<std::vector<EnrichedEntity>> entities;  // empty when not enriched
  std::vector<TaggedDocument> tagged;
  std::vector<TokenizedDoc> tokens;
  TopicModel model;
};

namespace detail {

class StageClock {
 public:
  explicit StageClock(RunManifest& m) : manifest_(m), start_(std::chrono::steady_clock::now()) {}
  void lap(const std::string& stage) {
    const auto now = std::chrono::steady_clock::now();
    manifest_.stage_ms[stage] = std::chrono::duration<double, std::milli>(now - start_).count();
    start_ = now;
  }

 private:
  RunManifest& manifest_;
  std::chrono::steady_clock::time_point start_;
};

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::string entity_table(const std::vector<EnrichedEntity>& entities) {
  std::string out = "surface_form\toffset\turi\ttags\n";
  for (const auto& e : entities) {
    std::string tags;
    for (std::size_t i = 0; i < e.tags.size(); ++i) tags += (i ? ", " : "") + e.tags[i];
    out += e.surface_form + "\t" + std::to_string(e.offset) + "\t" + e.uri + "\t" + tags + "\n";
  }
  return out;
}

}  // namespace detail

// `network` performs real HTTP in live and record mode; replay mode never
// touches it.
inline PipelineResult run_pipeline(const PipelineConfig& cfg, const std::vector<std::filesystem::path>& inputs,
                                   const std::filesystem::path& out_dir, bool enrich,
                                   std::shared_ptr<http::Transport> network = nullptr) {
  cfg.validate();
  if (inputs.empty()) throw InputError("no input files given");

  PipelineResult result;
  RunManifest& manifest = result.manifest;
  manifest.config = config_to_json(cfg);
  manifest.enriched = enrich;
  Warnings warnings;
  detail::StageClock clock(manifest);

  std::set<std::string> ids;
  for (const auto& path : inputs) {
    Document doc = read_document(path);
    manifest.input_hashes[path.string()] = detail::hex64(http::fnv1a64(doc.raw_text));
    std::string id = doc.id;
    for (int n = 2; ids.contains(id); ++n) id = doc.id + "-" + std::to_string(n);
    ids.insert(id);
    doc.id = id;
    result.documents.push_back(std::move(doc));
  }
  clock.lap("read");

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());
  auto emit = [&](const std::string& name, const std::string& bytes) {
    detail::write_file(out_dir / name, bytes);
    manifest.outputs.push_back(name);
  };

  if (enrich) {
    std::shared_ptr<http::Transport> transport;
    std::shared_ptr<http::ReplayTransport> replay;
    std::shared_ptr<http::RecordTransport> record;
    if (cfg.fixture_mode == FixtureMode::replay) {
      replay = std::make_shared<http::ReplayTransport>(std::make_shared<http::FixtureStore>(cfg.fixtures_dir));
      transport = replay;
    } else {
      if (!network) throw NetworkError("no network transport available for " + std::string(to_string(cfg.fixture_mode)) + " mode");
      if (cfg.fixture_mode == FixtureMode::record) {
        record = std::make_shared<http::RecordTransport>(std::make_shared<http::FixtureStore>(cfg.fixtures_dir), network);
        transport = record;
      } else {
        transport = network;
      }
    }

    const auto annotations = annotate_all(result.documents, cfg, *transport, &warnings);
    clock.lap("annotate");
    Enricher enricher(cfg, *transport);
    for (const auto& a : annotations) result.entities.push_back(enricher.enrich(a, &warnings));
    clock.lap("enrich");
    for (std::size_t i = 0; i < result.documents.size(); ++i) {
      result.tagged.push_back(tag_text(result.documents[i], result.entities[i]));
      emit(result.documents[i].id + ".entities.tsv", detail::entity_table(result.entities[i]));
      emit(result.documents[i].id + ".tagged.txt", result.tagged.back().tagged_text + "\n");
    }
    clock.lap("tag");
    if (replay) manifest.fixture_hashes = replay->used_hashes();
    if (record) manifest.fixture_hashes = record->used_hashes();
  } else {
    for (const auto& d : result.documents) result.tagged.push_back({d.id, d.normalized_text, {}});
  }

  const StopwordList stopwords = StopwordList::from_config(cfg);
  for (const auto& t : result.tagged) result.tokens.push_back(run_chain(t, stopwords));
  clock.lap("preprocess");

  result.model = fit(result.tokens, cfg.lda, &warnings);
  clock.lap("fit");

  emit("model.json", to_json(result.model).dump(2) + "\n");
  emit("topics.tsv", format_table(result.model, static_cast<std::size_t>(cfg.lda.top_n)));
  RenderSpec spec;
  spec.top_n = cfg.lda.top_n;
  emit("cloud.svg", format_tag_cloud(result.model, spec));
  clock.lap("render");

  manifest.warnings = warnings.snapshot();
  manifest.outputs.push_back("manifest.json");
  detail::write_file(out_dir / "manifest.json", manifest.to_json().dump(2) + "\n");
  return result;
}

struct ComparisonReport {
  std::vector<WeightedTerm> plain_top;     // pooled over topics
  std::vector<WeightedTerm> enriched_top;  // pooled over topics
  std::vector<std::string> enriched_only;  // in enriched_top, not in plain_top
  std::vector<std::string> kb_terms;       // enriched_only terms absent from the plain vocabulary
  std::vector<std::string> plain_outside_vocab;

  bool has_kb_terms() const { return !kb_terms.empty(); }

  nlohmann::json to_json() const {
    auto terms = [](const std::vector<WeightedTerm>& v) {
      nlohmann::json out = nlohmann::json::array();
      for (const auto& t : v) out.push_back({{"term", t.term}, {"weight", t.weight}});
      return out;
    };
    return {{"plain_top", terms(plain_top)},
            {"enriched_top", terms(enriched_top)},
            {"enriched_only", enriched_only},
            {"kb_terms", kb_terms},
            {"has_kb_terms", has_kb_terms()}};
  }
};

// Union of every topic's top-n terms, each at its largest weight, heaviest
// first.
inline std::vector<WeightedTerm> pooled_top_terms(const TopicModel& model, std::size_t n) {
  std::map<std::string, double> best;
  for (std::size_t k = 0; k < model.num_topics(); ++k)
    for (const auto& t : top_terms(model, k, n)) {
      auto [it, inserted] = best.try_emplace(t.term, t.weight);
      if (!inserted) it->second = std::max(it->second, t.weight);
    }
  std::vector<WeightedTerm> out;
  for (const auto& [term, w] : best) out.push_back({term, w});
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.weight > b.weight; });
  return out;
}

inline ComparisonReport compare_models(const TopicModel& plain, const TopicModel& enriched, std::size_t n) {
  ComparisonReport r;
  r.plain_top = pooled_top_terms(plain, n);
  r.enriched_top = pooled_top_terms(enriched, n);
  std::set<std::string> plain_terms;
  for (const auto& t : r.plain_top) plain_terms.insert(t.term);
  const std::set<std::string> plain_vocab(plain.vocab.begin(), plain.vocab.end());
  for (const auto& t : r.enriched_top) {
    if (plain_terms.contains(t.term)) continue;
    r.enriched_only.push_back(t.term);
    if (!plain_vocab.contains(t.term)) r.kb_terms.push_back(t.term);
  }
  for (const auto& t : r.plain_top)
    if (!plain_vocab.contains(t.term)) r.plain_outside_vocab.push_back(t.term);
  return r;
}

inline TopicModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read model file " + path.string());
  try {
    return model_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.byte, path.string() + ": " + e.what());
  }
}

}  // namespace semtopic
