#include <exception>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semtopic/http_live.hpp"
#include "semtopic/pipeline.hpp"

namespace {

struct RunArgs {
  std::string config;
  std::vector<std::string> inputs;
  std::string out;
  bool enrich = true;
  std::optional<std::string> fixtures;
  std::optional<std::string> mode;
  std::optional<int> topics;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<int> iters;
  std::optional<std::uint64_t> seed;
  std::optional<int> top_n;
};

struct CompareArgs {
  std::string plain;
  std::string enriched;
  std::size_t n = 10;
};

int run(const RunArgs& a) {
  using namespace semtopic;
  PipelineConfig cfg = load_config(a.config);
  apply_env_overrides(cfg);
  if (a.fixtures) cfg.fixtures_dir = *a.fixtures;
  if (a.mode) cfg.fixture_mode = parse_fixture_mode(*a.mode);
  if (a.topics) cfg.lda.num_topics = *a.topics;
  if (a.alpha) cfg.lda.alpha = *a.alpha;
  if (a.beta) cfg.lda.beta = *a.beta;
  if (a.iters) cfg.lda.iterations = *a.iters;
  if (a.seed) cfg.lda.seed = *a.seed;
  if (a.top_n) cfg.lda.top_n = *a.top_n;

  std::vector<std::filesystem::path> inputs(a.inputs.begin(), a.inputs.end());
  auto network = std::make_shared<http::LiveTransport>(cfg.timeout_seconds);
  const auto result = run_pipeline(cfg, inputs, a.out, a.enrich, network);

  for (const auto& w : result.manifest.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& o : result.manifest.outputs) std::cout << (std::filesystem::path(a.out) / o).string() << "\n";
  return 0;
}

int compare(const CompareArgs& a) {
  using namespace semtopic;
  const auto report = compare_models(load_model(a.plain), load_model(a.enriched), a.n);
  std::cout << report.to_json().dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knowledge-base enriched topic modeling"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "annotate, enrich, tag, preprocess, fit and render");
  run_cmd->add_option("--config", run_args.config, "pipeline config (TOML subset)")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--input", run_args.inputs, "input text files")->required();
  run_cmd->add_option("--out", run_args.out, "output directory")->required();
  run_cmd->add_flag("--enrich,!--no-enrich", run_args.enrich, "splice knowledge-base tags (default on)");
  run_cmd->add_option("--fixtures", run_args.fixtures, "fixture directory for record/replay");
  run_cmd->add_option("--mode", run_args.mode, "live|record|replay")
      ->check(CLI::IsMember({"live", "record", "replay"}));
  run_cmd->add_option("--topics", run_args.topics, "number of topics K");
  run_cmd->add_option("--alpha", run_args.alpha, "document-topic prior");
  run_cmd->add_option("--beta", run_args.beta, "topic-term prior");
  run_cmd->add_option("--iters", run_args.iters, "Gibbs sweeps");
  run_cmd->add_option("--seed", run_args.seed, "sampler seed");
  run_cmd->add_option("--top-n", run_args.top_n, "terms per topic in the outputs");

  CompareArgs cmp_args;
  auto* cmp_cmd = app.add_subcommand("compare", "compare a plain and an enriched model");
  cmp_cmd->add_option("--plain", cmp_args.plain, "plain model JSON")->required()->check(CLI::ExistingFile);
  cmp_cmd->add_option("--enriched", cmp_args.enriched, "enriched model JSON")->required()->check(CLI::ExistingFile);
  cmp_cmd->add_option("-n", cmp_args.n, "pooled top-n terms per model");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(semtopic::ExitCode::input_error);
  }

  try {
    if (run_cmd->parsed()) return run(run_args);
    return compare(cmp_args);
  } catch (const semtopic::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(semtopic::ExitCode::contract_violation);
  }
}
