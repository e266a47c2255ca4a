#include <gtest/gtest.h>

#include <cstdlib>
#include <sys/wait.h>

#include "semtopic/pipeline.hpp"
#include "support.hpp"

using namespace semtopic;
using testsupport::TempDir;
namespace fs = std::filesystem;

namespace {

PipelineConfig fast_config() {
  auto cfg = testsupport::sample_config();
  cfg.lda.iterations = 200;
  return cfg;
}

const std::vector<fs::path> kInputs = {testsupport::sample_text_path()};

TopicModel single_term_model(const std::string& term) {
  TopicModel m;
  m.vocab = {term};
  m.topic_term_weights = {{1.0}};
  return m;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SEMTOPIC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(RunPipeline, EnrichedReplayWritesTaggedText) {
  TempDir out;
  const auto r = run_pipeline(fast_config(), kInputs, out.path(), true);
  const auto tagged = testsupport::slurp(out / "obama_merkel.tagged.txt");
  EXPECT_TRUE(tagged.starts_with(
      "Barack Obama [Barack_Obama, Politician, Agent, President, Person, Politician] is only passing through Germany "
      "[Germany, Republic, Place, Country, Person, PopulatedPlace, Location] on his trip to Europe"));
  EXPECT_NE(tagged.find("the chancellor as difficult and Germany [Germany, Republic"), std::string::npos);
  ASSERT_EQ(r.tagged.size(), 1u);
  EXPECT_EQ(strip_tags(r.tagged[0]), testsupport::kSampleText);
  EXPECT_EQ(r.manifest.fixture_hashes.size(), 7u);
  EXPECT_TRUE(r.manifest.warnings.empty());
  for (const auto& name : r.manifest.outputs) EXPECT_TRUE(fs::exists(out / name)) << name;
  for (const char* name : {"model.json", "topics.tsv", "cloud.svg", "manifest.json", "obama_merkel.entities.tsv"})
    EXPECT_TRUE(fs::exists(out / name)) << name;
}

TEST(RunPipeline, ManifestContents) {
  TempDir out;
  run_pipeline(fast_config(), kInputs, out.path(), true);
  const auto m = nlohmann::json::parse(testsupport::slurp(out / "manifest.json"));
  EXPECT_EQ(m.at("enriched"), true);
  EXPECT_EQ(m.at("config").at("confidence"), 0.5);
  EXPECT_EQ(m.at("config").at("fixture_mode"), "replay");
  EXPECT_EQ(m.at("inputs").size(), 1u);
  EXPECT_EQ(m.at("fixtures").size(), 7u);
  EXPECT_EQ(m.at("warning_count"), 0);
  for (const char* stage : {"read", "annotate", "enrich", "tag", "preprocess", "fit", "render"})
    EXPECT_TRUE(m.at("stage_ms").contains(stage)) << stage;
  for (const auto& o : m.at("outputs")) EXPECT_TRUE(fs::exists(out / o.get<std::string>()));
}

TEST(RunPipeline, PlainRunSkipsNetworkAndTaggedText) {
  TempDir out;
  auto cfg = fast_config();
  cfg.fixtures_dir = (out / "no-fixtures-here").string();
  const auto r = run_pipeline(cfg, kInputs, out.path() / "plain", false);
  EXPECT_FALSE(fs::exists(out.path() / "plain" / "obama_merkel.tagged.txt"));
  EXPECT_TRUE(fs::exists(out.path() / "plain" / "model.json"));
  EXPECT_TRUE(r.manifest.fixture_hashes.empty());
  EXPECT_EQ(std::count(r.model.vocab.begin(), r.model.vocab.end(), "politician"), 0);
}

TEST(RunPipeline, Errors) {
  TempDir out;
  EXPECT_THROW(run_pipeline(fast_config(), {}, out.path(), true), InputError);
  EXPECT_THROW(run_pipeline(fast_config(), {out / "missing.txt"}, out.path(), true), InputError);

  auto cfg = fast_config();
  cfg.fixtures_dir = (out / "empty-fixtures").string();
  try {
    run_pipeline(cfg, kInputs, out.path() / "o", true);
    FAIL();
  } catch (const FixtureMissError& e) {
    const auto doc = read_document(testsupport::sample_text_path());
    EXPECT_EQ(e.hash(), http::request_hash(build_annotate_request(doc, cfg)));
  }

  cfg = fast_config();
  cfg.fixture_mode = FixtureMode::live;
  EXPECT_THROW(run_pipeline(cfg, kInputs, out.path() / "o", true, nullptr), NetworkError);
}

TEST(RunPipeline, ReplayIsDeterministic) {
  TempDir a, b;
  run_pipeline(fast_config(), kInputs, a.path(), true);
  run_pipeline(fast_config(), kInputs, b.path(), true);
  for (const char* name : {"model.json", "topics.tsv", "cloud.svg", "obama_merkel.tagged.txt", "obama_merkel.entities.tsv"})
    EXPECT_EQ(testsupport::slurp(a / name), testsupport::slurp(b / name)) << name;
}

TEST(RunPipeline, RecordThenReplayMatches) {
  TempDir dir;
  // The "network" answers from the bundled fixtures.
  auto bundled = std::make_shared<http::ReplayTransport>(
      std::make_shared<http::FixtureStore>(testsupport::sample_fixtures()));

  auto cfg = fast_config();
  cfg.fixture_mode = FixtureMode::record;
  cfg.fixtures_dir = (dir / "recorded").string();
  run_pipeline(cfg, kInputs, dir.path() / "recorded-out", true, bundled);

  cfg.fixture_mode = FixtureMode::replay;
  run_pipeline(cfg, kInputs, dir.path() / "replayed-out", true);
  for (const char* name : {"model.json", "topics.tsv", "cloud.svg", "obama_merkel.tagged.txt"})
    EXPECT_EQ(testsupport::slurp(dir.path() / "recorded-out" / name), testsupport::slurp(dir.path() / "replayed-out" / name))
        << name;
  for (const auto& hash : bundled->used_hashes())
    EXPECT_EQ(testsupport::slurp(dir.path() / "recorded" / (hash + ".fixture")),
              testsupport::slurp(testsupport::sample_fixtures() / (hash + ".fixture")));
}

TEST(RunPipeline, DuplicateDocumentIdsAreDisambiguated) {
  TempDir dir;
  fs::create_directories(dir.path() / "x");
  testsupport::spit(dir.path() / "x" / "doc.txt", "alpha beta gamma");
  testsupport::spit(dir / "doc.txt", "delta epsilon zeta");
  auto cfg = fast_config();
  const auto r = run_pipeline(cfg, {dir.path() / "x" / "doc.txt", dir / "doc.txt"}, dir.path() / "out", false);
  EXPECT_EQ(r.model.doc_ids, (std::vector<std::string>{"doc", "doc-2"}));
}

TEST(CompareModels, IdenticalModelsHaveNoDifference) {
  const auto m = single_term_model("a");
  const auto r = compare_models(m, m, 10);
  EXPECT_TRUE(r.enriched_only.empty());
  EXPECT_FALSE(r.has_kb_terms());
}

TEST(CompareModels, DisjointSingleTermModels) {
  const auto r = compare_models(single_term_model("a"), single_term_model("b"), 10);
  EXPECT_EQ(r.enriched_only, std::vector<std::string>{"b"});
  EXPECT_EQ(r.kb_terms, std::vector<std::string>{"b"});
  EXPECT_TRUE(r.plain_outside_vocab.empty());
}

TEST(CompareModels, SampleEnrichedGainsPolitician) {
  TempDir dir;
  const auto enriched = run_pipeline(fast_config(), kInputs, dir.path() / "e", true).model;
  const auto plain = run_pipeline(fast_config(), kInputs, dir.path() / "p", false).model;
  const auto r = compare_models(plain, enriched, 10);
  EXPECT_NE(std::find(r.enriched_only.begin(), r.enriched_only.end(), "politician"), r.enriched_only.end());
  EXPECT_TRUE(r.has_kb_terms());
  EXPECT_TRUE(r.plain_outside_vocab.empty());
}

TEST(EnvOverrides, EndpointsFromEnvironment) {
  ::setenv("SEMTOPIC_ANNOTATOR_ENDPOINT", "http://localhost:2222/rest/annotate", 1);
  ::setenv("SEMTOPIC_SPARQL_ENDPOINT", "", 1);
  PipelineConfig cfg;
  apply_env_overrides(cfg);
  EXPECT_EQ(cfg.annotator_endpoint, "http://localhost:2222/rest/annotate");
  EXPECT_EQ(cfg.sparql_endpoint, "https://dbpedia.org/sparql");
  ::unsetenv("SEMTOPIC_ANNOTATOR_ENDPOINT");
  ::unsetenv("SEMTOPIC_SPARQL_ENDPOINT");
}

TEST(Cli, ExitCodes) {
  TempDir dir;
  const auto config = (testsupport::sample_dir() / "config.toml").string();
  const auto input = testsupport::sample_text_path().string();
  const auto out = (dir / "out").string();
  EXPECT_EQ(run_cli("run --config " + config + " --input " + input + " --out " + out + " --iters 50"), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "obama_merkel.tagged.txt"));
  EXPECT_EQ(run_cli("run --config " + config + " --input " + input + " --out " + out + "-plain --no-enrich --iters 50"), 0);
  EXPECT_FALSE(fs::exists(dir / "out-plain" / "obama_merkel.tagged.txt"));
  EXPECT_EQ(run_cli("compare --plain " + out + "-plain/model.json --enriched " + out + "/model.json -n 10"), 0);

  EXPECT_EQ(run_cli("run --config " + config + " --input " + (dir / "missing.txt").string() + " --out " + out), 2);
  EXPECT_EQ(run_cli("run --config " + config + " --input " + input + " --out " + out + " --topics 0"), 2);
  EXPECT_EQ(run_cli("bogus"), 2);
  fs::create_directories(dir / "empty");
  EXPECT_EQ(run_cli("run --config " + config + " --input " + input + " --out " + out + " --fixtures " +
                    (dir / "empty").string()),
            4);
  ::setenv("SEMTOPIC_ANNOTATOR_ENDPOINT", "http://127.0.0.1:1/annotate", 1);
  EXPECT_EQ(run_cli("run --config " + config + " --input " + input + " --out " + out + " --mode live"), 3);
  ::unsetenv("SEMTOPIC_ANNOTATOR_ENDPOINT");
}
