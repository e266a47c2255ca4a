#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "semtopic/corpus_io.hpp"
#include "semtopic/http.hpp"

namespace testsupport {

namespace fs = std::filesystem;

inline fs::path source_dir() { return SEMTOPIC_SOURCE_DIR; }
inline fs::path data_dir() { return source_dir() / "tests" / "data"; }
inline fs::path sample_dir() { return source_dir() / "examples" / "obama_merkel"; }
inline fs::path sample_text_path() { return sample_dir() / "obama_merkel.txt"; }
inline fs::path sample_fixtures() { return source_dir() / "fixtures" / "obama_merkel"; }

inline constexpr const char* kSampleText =
    "Barack Obama is only passing through Germany on his trip to Europe later this week and does not plan to hold "
    "substantial talks with Angela Merkel. The White House views the chancellor as difficult and Germany is "
    "increasingly being left out of the loop.";

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << bytes;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "semtopic") {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            (tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter.fetch_add(1)));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

// Replay configuration for the bundled example.
inline semtopic::PipelineConfig sample_config() {
  auto cfg = semtopic::load_config(sample_dir() / "config.toml");
  cfg.fixtures_dir = sample_fixtures().string();
  cfg.fixture_mode = semtopic::FixtureMode::replay;
  return cfg;
}

// Transport answering through a callback and logging every request.
class FakeTransport : public semtopic::http::Transport {
 public:
  using Handler = std::function<semtopic::http::Response(const semtopic::http::RequestSpec&)>;
  explicit FakeTransport(Handler h) : handler_(std::move(h)) {}

  semtopic::http::Response send(const semtopic::http::RequestSpec& req) override {
    {
      std::lock_guard lock(mu_);
      requests_.push_back(req);
    }
    return handler_(req);
  }

  std::vector<semtopic::http::RequestSpec> requests() const {
    std::lock_guard lock(mu_);
    return requests_;
  }

 private:
  Handler handler_;
  mutable std::mutex mu_;
  std::vector<semtopic::http::RequestSpec> requests_;
};

inline std::string random_ascii_text(std::mt19937_64& rng, std::size_t max_len) {
  static constexpr std::string_view kAlphabet = "ab cD\t\n\r  xyz.,;!?-_[]01 9\v\f";
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, kAlphabet.size() - 1);
  std::string s;
  const auto n = len(rng);
  for (std::size_t i = 0; i < n; ++i) s.push_back(kAlphabet[pick(rng)]);
  return s;
}

// Words that exercise stop words, numbers, stems that stem again, underscore
// identifiers, punctuation and non-ASCII letters.
inline std::string random_words(std::mt19937_64& rng, std::size_t max_words) {
  static const std::vector<std::string> kPool = {
      "Barack", "Obama", "Barack_Obama", "politician", "Politician", "agreed", "ares", "increasingly", "Germany",
      "GERMANY", "is", "only", "the", "The", "and", "2016", "-3.5", "B2B", "week", "weekly", "[", "]", ",", ".",
      "...", "Merkel.", "café", "Übergröße", "naïve", "генерал", "generalizations", "universities", "ies", "sses",
      "being", "left", "out", "loop", "White_House", "x_1", "_", "__init__", "ÀÉÎ", "dying", "skis", "news",
      "communism", "arsenal", "emerging", "organization", "pasted", "inning", "outing", "herring", "earring",
      "cannings", "tried", "cries", "hoping", "hopping", "fizzed", "conditional", "rational", "a", "I", "y",
      "yes", "sky", "skies", "feed", "agreement", "Lüdenscheid", "12ab", "٣٤", "don't", "it's", "mother-in-law"};
  std::uniform_int_distribution<std::size_t> len(0, max_words);
  std::uniform_int_distribution<std::size_t> pick(0, kPool.size() - 1);
  std::uniform_int_distribution<int> sep(0, 5);
  std::string s;
  const auto n = len(rng);
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += sep(rng) == 0 ? ", " : " ";
    s += kPool[pick(rng)];
  }
  return s;
}

}  // namespace testsupport
