// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "lda_oracle.hpp"
#include "semtopic/fixture_store.hpp"
#include "semtopic/pipeline.hpp"
#include "support.hpp"

using namespace semtopic;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

Outcome pass(std::string detail = {}) { return {true, std::move(detail)}; }
Outcome fail(std::string detail) { return {false, std::move(detail)}; }

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

std::shared_ptr<http::Transport> sample_replay() {
  return std::make_shared<http::ReplayTransport>(
      std::make_shared<http::FixtureStore>(testsupport::sample_fixtures()));
}

std::vector<EnrichedEntity> sample_entities() {
  const auto cfg = testsupport::sample_config();
  const auto doc = read_document(testsupport::sample_text_path());
  auto transport = sample_replay();
  Warnings w;
  const auto anns = annotate(doc, cfg, *transport, &w);
  return enrich(anns, cfg, *transport, &w);
}

Outcome annotation_parse() {
  const auto r = parse_annotation_response(testsupport::slurp(testsupport::data_dir() / "spotlight_response.json"));
  const std::vector<std::pair<std::string, std::size_t>> want = {{"Barack Obama", 0}, {"Germany", 37}, {"Europe", 60}};
  if (r.annotations.size() != want.size()) return fail(std::to_string(r.annotations.size()) + " annotations");
  for (std::size_t i = 0; i < want.size(); ++i)
    if (r.annotations[i].surface_form != want[i].first || r.annotations[i].offset != want[i].second)
      return fail("row " + std::to_string(i) + ": " + r.annotations[i].surface_form);
  return pass("3 annotations");
}

Outcome enrichment_rows() {
  const std::vector<std::pair<std::string, std::string>> want = {
      {"Barack Obama", "Barack_Obama, Politician, Agent, President, Person, Politician"},
      {"Germany", "Germany, Republic, Place, Country, Person, PopulatedPlace, Location"},
      {"Europe", "Europe, Continent, Location, PopulatedPlace, Place, Continent"},
      {"Angela Merkel", "Angela_Merkel, Politician, Agent, Person, OfficeHolder"},
      {"White House", "White_House, Residence, Location, Building, Place, ArchitecturalStructure"},
      {"chancellor", ""},
      {"Germany", "Germany, Republic, Place, Country, Person, PopulatedPlace, Location"},
  };
  const auto rows = sample_entities();
  if (rows.size() != want.size()) return fail(std::to_string(rows.size()) + " rows");
  for (std::size_t i = 0; i < want.size(); ++i) {
    const auto tags = join(rows[i].tags, ", ");
    if (rows[i].surface_form != want[i].first || tags != want[i].second)
      return fail("row " + std::to_string(i) + ": " + rows[i].surface_form + "\t" + tags);
  }
  return pass("7 rows");
}

Outcome tag_splicing() {
  const std::string prefix =
      "Barack Obama [Barack_Obama, Politician, Agent, President, Person, Politician] is only passing through Germany "
      "[Germany, Republic, Place, Country, ";
  const auto doc = read_document(testsupport::sample_text_path());
  const auto tagged = tag_text(doc, sample_entities());
  if (!tagged.tagged_text.starts_with(prefix)) return fail(tagged.tagged_text.substr(0, prefix.size()));
  if (strip_tags(tagged) != doc.normalized_text) return fail("strip_tags does not round-trip");
  return pass();
}

Outcome kb_terms_in_topics() {
  const auto cfg = testsupport::sample_config();
  const auto doc = read_document(testsupport::sample_text_path());
  const auto tagged = tag_text(doc, sample_entities());
  const std::vector<TokenizedDoc> plain_docs = {run_chain(doc.id, doc.normalized_text)};
  const std::vector<TokenizedDoc> enriched_docs = {run_chain(tagged, cfg)};

  int held = 0;
  std::set<std::string> seen;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    LdaConfig lda = cfg.lda;
    lda.num_topics = 2;
    lda.seed = seed;
    const auto report = compare_models(fit(plain_docs, lda), fit(enriched_docs, lda), 10);
    if (report.has_kb_terms() && report.plain_outside_vocab.empty()) ++held;
    seen.insert(report.kb_terms.begin(), report.kb_terms.end());
  }
  const auto detail = std::to_string(held) + "/20 seeds; kb terms seen: " +
                      join(std::vector<std::string>(seen.begin(), seen.end()), ",");
  return held >= 18 ? pass(detail) : fail(detail);
}

Outcome count_consistency() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> term(0, 59);
  Corpus corpus;
  for (int w = 0; w < 60; ++w) corpus.vocab.push_back("t" + std::to_string(w));
  for (int d = 0; d < 10; ++d) {
    corpus.doc_ids.push_back("d" + std::to_string(d));
    corpus.docs.emplace_back();
    for (int i = 0; i < 50; ++i) corpus.docs.back().push_back(term(rng));
  }
  corpus.total_tokens = 500;
  LdaConfig cfg;
  cfg.num_topics = 5;
  GibbsSampler sampler(corpus, cfg);
  if (!sampler.counts_consistent()) return fail("after initialisation");
  for (int s = 1; s <= 300; ++s) {
    sampler.sweep();
    if (!sampler.counts_consistent()) return fail("after sweep " + std::to_string(s));
  }
  return pass("300 sweeps, 500 tokens");
}

Outcome oracle_equivalence() {
  const oracle::TinyCorpus tiny{{{0, 1}}, 2};
  LdaConfig cfg;
  cfg.num_topics = 2;
  cfg.seed = 7;
  const auto exact = oracle::posterior(tiny, cfg.num_topics, cfg.alpha, cfg.beta);

  Corpus corpus;
  corpus.vocab = {"w0", "w1"};
  corpus.doc_ids = {"d0"};
  corpus.docs = {{0, 1}};
  corpus.total_tokens = 2;
  GibbsSampler sampler(corpus, cfg);
  for (int i = 0; i < 1000; ++i) sampler.sweep();
  constexpr int kSamples = 100000;
  std::vector<double> freq(exact.size(), 0.0);
  for (int i = 0; i < kSamples; ++i) {
    sampler.sweep();
    freq[oracle::encode_state(sampler.assignments(), cfg.num_topics)] += 1.0 / kSamples;
  }
  double worst = 0.0;
  std::ostringstream detail;
  for (std::size_t s = 0; s < exact.size(); ++s) {
    worst = std::max(worst, std::abs(freq[s] - exact[s]));
    detail << (s ? " " : "") << "state" << s << "=" << freq[s] << "/" << exact[s];
  }
  detail << " max|diff|=" << worst;
  return worst <= 0.02 ? pass(detail.str()) : fail(detail.str());
}

Outcome topic_separation() {
  TokenizedDoc a{"a", {}}, b{"b", {}};
  for (int r = 0; r < 30; ++r) {
    for (const char* w : {"a", "b", "c"}) a.tokens.emplace_back(w);
    for (const char* w : {"x", "y", "z"}) b.tokens.emplace_back(w);
  }
  const std::set<std::string> abc{"a", "b", "c"}, xyz{"x", "y", "z"};
  int pure = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    LdaConfig cfg;
    cfg.num_topics = 2;
    cfg.iterations = 500;
    cfg.seed = seed;
    const auto m = fit({a, b}, cfg);
    std::set<std::string> t0, t1;
    for (const auto& t : top_terms(m, 0, 3)) t0.insert(t.term);
    for (const auto& t : top_terms(m, 1, 3)) t1.insert(t.term);
    if ((t0 == abc && t1 == xyz) || (t0 == xyz && t1 == abc)) ++pure;
  }
  const auto detail = std::to_string(pure) + "/100 seeds";
  return pure >= 95 ? pass(detail) : fail(detail);
}

Outcome determinism() {
  testsupport::TempDir one, two;
  const auto cfg = testsupport::sample_config();
  const std::vector<fs::path> inputs = {testsupport::sample_text_path()};
  run_pipeline(cfg, inputs, one.path(), true);
  run_pipeline(cfg, inputs, two.path(), true);
  for (const char* name : {"model.json", "topics.tsv", "cloud.svg"}) {
    const auto a = testsupport::slurp(one / name);
    if (a.empty() || a != testsupport::slurp(two / name)) return fail(std::string(name) + " differs");
  }
  return pass("model.json, topics.tsv, cloud.svg identical");
}

Outcome stemmer_vectors() {
  std::istringstream in(testsupport::slurp(testsupport::data_dir() / "snowball_english_vectors.tsv"));
  std::size_t checked = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    const auto word = line.substr(0, tab);
    const auto got = snowball::stem_english(word);
    if (tab == std::string::npos || got != line.substr(tab + 1)) return fail(word + " -> " + got);
    ++checked;
  }
  const auto detail = std::to_string(checked) + " pairs";
  return checked >= 1000 ? pass(detail) : fail(detail);
}

Outcome idempotence() {
  constexpr int kRounds = 10000;
  std::mt19937_64 rng(99);
  for (int i = 0; i < kRounds; ++i) {
    const auto once = normalize(testsupport::random_ascii_text(rng, 60));
    if (normalize(once) != once) return fail("normalize: \"" + once + "\"");
  }
  for (int i = 0; i < kRounds; ++i) {
    const auto text = testsupport::random_words(rng, 20);
    const auto once = run_chain("r", text).tokens;
    if (run_chain("r", join(once, " ")).tokens != once) return fail("run_chain: \"" + text + "\"");
  }
  std::uniform_int_distribution<int> count(0, 10), off(0, 40), len(1, 8), sup(0, 4);
  for (int i = 0; i < kRounds; ++i) {
    std::vector<EntityAnnotation> in;
    const int n = count(rng);
    for (int j = 0; j < n; ++j) {
      EntityAnnotation a;
      a.uri = "u" + std::to_string(j);
      a.surface_form = std::string(static_cast<std::size_t>(len(rng)), 'x');
      a.offset = static_cast<std::size_t>(off(rng));
      a.support = sup(rng);
      in.push_back(a);
    }
    const auto once = resolve_overlaps(in);
    if (resolve_overlaps(once) != once) return fail("resolve_overlaps round " + std::to_string(i));
  }
  return pass("3 x 10000 inputs");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"annotation-parse", annotation_parse},
      {"enrichment-rows", enrichment_rows},
      {"tag-splicing", tag_splicing},
      {"kb-terms-in-topics", kb_terms_in_topics},
      {"sampler-count-consistency", count_consistency},
      {"sampler-oracle-equivalence", oracle_equivalence},
      {"topic-separation", topic_separation},
      {"determinism", determinism},
      {"stemmer-vectors", stemmer_vectors},
      {"idempotence", idempotence},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    if (!o.ok) ++failures;
    std::printf("%s %zu %s (%lld ms)%s%s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first,
                static_cast<long long>(ms), o.detail.empty() ? "" : ": ", o.detail.c_str());
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
