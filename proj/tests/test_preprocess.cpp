#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "semtopic/preprocess.hpp"
#include "support.hpp"

using namespace semtopic;

namespace {

std::string join(const Tokens& t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) out += (i ? " " : "") + t[i];
  return out;
}

const std::string kTaggedSample =
    "Barack Obama [Barack_Obama, Politician, Agent, President, Person, Politician] is only passing through Germany "
    "[Germany, Republic, Place, Country, Person, PopulatedPlace, Location] on his trip to Europe [Europe, Continent, "
    "Location, PopulatedPlace, Place, Continent] later this week and does not plan to hold substantial talks with "
    "Angela Merkel [Angela_Merkel, Politician, Agent, Person, OfficeHolder]. The White House [White_House, Residence, "
    "Location, Building, Place, ArchitecturalStructure] views the chancellor as difficult and Germany [Germany, "
    "Republic, Place, Country, Person, PopulatedPlace, Location] is increasingly being left out of the loop.";

}  // namespace

TEST(Tokenize, TaggedPrefix) {
  EXPECT_EQ(tokenize("Barack Obama [Barack_Obama, Politician]"),
            (Tokens{"Barack", "Obama", "Barack_Obama", "Politician"}));
}

TEST(Tokenize, EdgeCases) {
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_EQ(tokenize("a,b"), (Tokens{"a", "b"}));
  EXPECT_EQ(tokenize("Merkel. 2016-10-15 B2B don't"), (Tokens{"Merkel", "2016", "10", "15", "B2B", "don", "t"}));
  EXPECT_EQ(tokenize("K\xC3\xB6ln\xE2\x80\x94M\xC3\xBCnchen"), (Tokens{"K\xC3\xB6ln", "M\xC3\xBCnchen"}));
  EXPECT_EQ(tokenize("\xD9\xA3\xD9\xA4 \xD0\xBC\xD0\xB8\xD1\x80"), (Tokens{"\xD9\xA3\xD9\xA4", "\xD0\xBC\xD0\xB8\xD1\x80"}));
}

TEST(FilterNumbers, Examples) {
  EXPECT_EQ(filter_numbers({"2016", "week"}), Tokens{"week"});
  EXPECT_TRUE(filter_numbers({}).empty());
  EXPECT_EQ(filter_numbers({"B2B"}), Tokens{"B2B"});
  EXPECT_EQ(filter_numbers({"-3.5", "+7", "1.2.3", "\xD9\xA3\xD9\xA4", ".", "-"}), (Tokens{"1.2.3", ".", "-"}));
}

TEST(ErasePunctuation, Examples) {
  EXPECT_EQ(erase_punctuation({"Merkel."}), Tokens{"Merkel"});
  EXPECT_TRUE(erase_punctuation({"..."}).empty());
  EXPECT_EQ(erase_punctuation({"Barack_Obama"}), Tokens{"Barack_Obama"});
  EXPECT_EQ(erase_punctuation({"\xC2\xBFqu\xC3\xA9?", "\xE2\x80\x9Cquoted\xE2\x80\x9D"}),
            (Tokens{"qu\xC3\xA9", "quoted"}));
}

TEST(Stopwords, SnowballExample) {
  EXPECT_EQ(filter_stopwords({"is", "only", "passing"}), Tokens{"passing"});
  EXPECT_TRUE(filter_stopwords({}).empty());
  EXPECT_EQ(filter_stopwords({"Germany"}), Tokens{"Germany"});
  EXPECT_EQ(filter_stopwords({"The", "THE", "the"}), Tokens{});
}

TEST(Stopwords, HeaderMatchesDataFile) {
  const auto from_file = StopwordList::from_file(testsupport::source_dir() / "data" / "english_stopwords.txt");
  const auto& builtin = StopwordList::english_default();
  EXPECT_EQ(from_file.size(), builtin.size());
  EXPECT_GE(builtin.size(), 170u);
  std::istringstream in{std::string(kSnowballEnglishStopwords)};
  for (std::string w; in >> w;) EXPECT_TRUE(from_file.contains(w)) << w;
}

TEST(Stopwords, CustomFileFromConfig) {
  testsupport::TempDir dir;
  testsupport::spit(dir / "stop.txt", "# custom\nGermany\nweek  # inline comment\n");
  PipelineConfig cfg;
  cfg.stopword_list_id = StopwordListId::file;
  cfg.stopword_file = (dir / "stop.txt").string();
  const auto list = StopwordList::from_config(cfg);
  EXPECT_EQ(list.size(), 2u);
  EXPECT_EQ(filter_stopwords({"germany", "the", "week"}, list), Tokens{"the"});
  cfg.stopword_file = (dir / "missing.txt").string();
  EXPECT_THROW(StopwordList::from_config(cfg), InputError);
}

TEST(FoldCase, Examples) {
  EXPECT_EQ(fold_case({"Germany"}), Tokens{"germany"});
  EXPECT_EQ(fold_case({"barack_obama"}), Tokens{"barack_obama"});
  EXPECT_TRUE(fold_case({}).empty());
  EXPECT_EQ(fold_case({"\xC3\x9C\x62\x65R", "\xD0\x9C\xD0\x98\xD0\xA0"}), (Tokens{"\xC3\xBC\x62\x65r", "\xD0\xBC\xD0\xB8\xD1\x80"}));
}

TEST(Stem, Examples) {
  EXPECT_EQ(stem({"passing"}), Tokens{"pass"});
  EXPECT_EQ(stem({"barack_obama"}), Tokens{"barack_obama"});
  EXPECT_EQ(stem({"politician"}), Tokens{"politician"});
}

TEST(Stem, SnowballVectors) {
  std::istringstream in(testsupport::slurp(testsupport::data_dir() / "snowball_english_vectors.tsv"));
  std::size_t checked = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    ASSERT_NE(tab, std::string::npos) << line;
    const auto word = line.substr(0, tab);
    const auto expected = line.substr(tab + 1);
    EXPECT_EQ(snowball::stem_english(word), expected) << word;
    ++checked;
  }
  EXPECT_GE(checked, 1000u);
}

TEST(RunChain, TaggedSampleHasThreePoliticians) {
  const auto out = run_chain("s5", kTaggedSample);
  EXPECT_EQ(std::count(out.tokens.begin(), out.tokens.end(), "politician"), 3);
  EXPECT_EQ(std::count(out.tokens.begin(), out.tokens.end(), "barack_obama"), 1);
  EXPECT_EQ(std::count(out.tokens.begin(), out.tokens.end(), "germani"), 4);
}

TEST(RunChain, PlainSampleHasNoPolitician) {
  const auto out = run_chain("s5", testsupport::kSampleText);
  EXPECT_EQ(std::count(out.tokens.begin(), out.tokens.end(), "politician"), 0);
  EXPECT_EQ(out.tokens.front(), "barack");
}

TEST(RunChain, EmptyDocument) { EXPECT_TRUE(run_chain("e", "").tokens.empty()); }

TEST(RunChain, TaggedDocumentOverloads) {
  const TaggedDocument t{"doc", "The Germany [Germany, Country]", {}};
  const auto a = run_chain(t);
  const auto b = run_chain(t, PipelineConfig{});
  EXPECT_EQ(a.document_id, "doc");
  EXPECT_EQ(a.tokens, (Tokens{"germani", "germani", "countri"}));
  EXPECT_EQ(a.tokens, b.tokens);
}

TEST(RunChain, StemsThatLandOnStopwordsOrStemAgainSettle) {
  // "ares" stems to the stop word "are"; "agreed" -> "agre" -> "agr".
  const auto once = run_chain("x", "ares agreed");
  EXPECT_EQ(run_chain("x", join(once.tokens)).tokens, once.tokens);
  EXPECT_EQ(std::count(once.tokens.begin(), once.tokens.end(), "are"), 0);
}

TEST(RunChain, RandomizedIdempotenceAndTokenShape) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    const auto text = testsupport::random_words(rng, 25);
    const auto out = run_chain("r", text);
    ASSERT_EQ(run_chain("r", join(out.tokens)).tokens, out.tokens) << text;
    for (const auto& tok : out.tokens) {
      ASSERT_FALSE(tok.empty());
      ASSERT_EQ(to_lower(tok), tok);
      const auto cps = unicode::decode(tok);
      for (char32_t c : cps) ASSERT_TRUE(unicode::is_word_char(c)) << tok;
      ASSERT_FALSE(is_number(tok)) << tok;
      ASSERT_FALSE(StopwordList::english_default().contains(tok)) << tok;
    }
  }
}
