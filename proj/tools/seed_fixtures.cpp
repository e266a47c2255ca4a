// Writes the replay fixtures for the bundled example text: one annotation
// response and one SPARQL result set per linked resource. Responses are
// synthesized to match the published annotation and tag tables, including
// off-namespace types (Wikidata, YAGO, DUL, owl:Thing) that the tag filter
// must drop.
//
// usage: semtopic_seed_fixtures CONFIG TEXT_FILE

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "semtopic/corpus_io.hpp"
#include "semtopic/fixture_store.hpp"
#include "semtopic/kb_enricher.hpp"
#include "semtopic/spotlight_client.hpp"
#include "semtopic/unicode.hpp"

namespace {

constexpr const char* kRes = "http://dbpedia.org/resource/";
constexpr const char* kOnt = "http://dbpedia.org/ontology/";
constexpr const char* kSchema = "http://schema.org/";

struct Mention {
  std::string surface;
  std::size_t occurrence;  // 0-based occurrence of the surface form in the text
  std::string resource;
  long support;
  std::string types_raw;
  double similarity;
};

struct Facts {
  std::string resource;
  std::vector<std::string> types;
  std::optional<std::string> hypernym;
};

const std::vector<Mention> kMentions = {
    {"Barack Obama", 0, "Barack_Obama", 25941, "http://xmlns.com/foaf/0.1/Person,Wikidata:Q82955,Wikidata:Q5,DBpedia:Politician",
     0.999976632883937},
    {"Germany", 0, "Germany", 216576, "Wikidata:Q6256,Schema:Place,Schema:Country,DBpedia:PopulatedPlace", 0.9993713390274306},
    {"Europe", 0, "Europe", 79651, "Schema:Place,Schema:Continent,DBpedia:PopulatedPlace,DBpedia:Place", 0.9999846},
    {"Angela Merkel", 0, "Angela_Merkel", 9472, "DBpedia:Person,Schema:Person,DBpedia:OfficeHolder", 0.9999998},
    {"White House", 0, "White_House", 12911, "DBpedia:Building,DBpedia:ArchitecturalStructure,DBpedia:Place", 0.9987622},
    {"chancellor", 0, "Chancellor_of_Germany", 1433, "", 0.7410036},
    {"Germany", 1, "Germany", 216576, "Wikidata:Q6256,Schema:Place,Schema:Country,DBpedia:PopulatedPlace", 0.9812245},
};

std::vector<Facts> kb_facts() {
  const std::string ont = kOnt, schema = kSchema, res = kRes;
  const std::string thing = "http://www.w3.org/2002/07/owl#Thing";
  const std::string wd = "http://www.wikidata.org/entity/";
  const std::string yago = "http://dbpedia.org/class/yago/";
  const std::string dul = "http://www.ontologydesignpatterns.org/ont/dul/DUL.owl#";
  return {
      {"Barack_Obama",
       {thing, ont + "Politician", wd + "Q82955", ont + "Agent", ont + "President", yago + "WikicatPresidentsOfTheUnitedStates",
        "http://xmlns.com/foaf/0.1/Person", dul + "NaturalPerson"},
       res + "Politician"},
      {"Germany",
       {ont + "Republic", thing, schema + "Place", schema + "Country", wd + "Q6256", ont + "Person", ont + "PopulatedPlace",
        yago + "Country108544813"},
       res + "Location"},
      {"Europe", {ont + "Continent", ont + "Location", thing, ont + "PopulatedPlace", ont + "Place", wd + "Q5107"}, res + "Continent"},
      {"Angela_Merkel", {ont + "Politician", ont + "Agent", dul + "Agent", ont + "Person", wd + "Q82955", ont + "OfficeHolder"}, std::nullopt},
      {"White_House",
       {ont + "Residence", ont + "Location", thing, ont + "Building", ont + "Place", ont + "ArchitecturalStructure", wd + "Q41176"},
       std::nullopt},
      {"Chancellor_of_Germany", {}, std::nullopt},
  };
}

// Code-point offset of the n-th occurrence of `needle`.
std::size_t offset_of(const std::string& text, const std::string& needle, std::size_t occurrence) {
  std::size_t pos = text.find(needle);
  for (std::size_t i = 0; i < occurrence && pos != std::string::npos; ++i) pos = text.find(needle, pos + 1);
  if (pos == std::string::npos) throw semtopic::InputError("surface form '" + needle + "' not found in text");
  return semtopic::unicode::length(std::string_view(text).substr(0, pos));
}

std::string spotlight_body(const semtopic::Document& doc, const semtopic::PipelineConfig& cfg) {
  nlohmann::ordered_json root;
  root["@text"] = doc.normalized_text;
  root["@confidence"] = semtopic::format_decimal(cfg.confidence);
  root["@support"] = std::to_string(cfg.support);
  root["@types"] = "";
  root["@sparql"] = "";
  root["@policy"] = "whitelist";
  auto& resources = root["@resources"] = nlohmann::ordered_json::array();
  for (const auto& m : kMentions) {
    nlohmann::ordered_json r;
    r["@URI"] = std::string(kRes) + m.resource;
    r["@support"] = std::to_string(m.support);
    r["@types"] = m.types_raw;
    r["@surfaceForm"] = m.surface;
    r["@offset"] = std::to_string(offset_of(doc.normalized_text, m.surface, m.occurrence));
    r["@similarityScore"] = std::to_string(m.similarity);
    r["@percentageOfSecondRank"] = "0.0";
    resources.push_back(std::move(r));
  }
  return root.dump(2) + "\n";
}

std::string sparql_body(const Facts& f) {
  nlohmann::ordered_json root;
  root["head"]["link"] = nlohmann::ordered_json::array();
  root["head"]["vars"] = {"type", "hypernym"};
  root["results"]["distinct"] = true;
  root["results"]["ordered"] = true;
  auto& bindings = root["results"]["bindings"] = nlohmann::ordered_json::array();
  for (const auto& t : f.types) {
    nlohmann::ordered_json row;
    row["type"] = {{"type", "uri"}, {"value", t}};
    if (f.hypernym) row["hypernym"] = {{"type", "uri"}, {"value", *f.hypernym}};
    bindings.push_back(std::move(row));
  }
  return root.dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: " << argv[0] << " CONFIG TEXT_FILE\n";
    return 2;
  }
  try {
    const auto cfg = semtopic::load_config(argv[1]);
    if (cfg.fixtures_dir.empty()) throw semtopic::ValidationError("config has no fixtures directory");
    const auto doc = semtopic::read_document(argv[2]);
    semtopic::http::FixtureStore store(cfg.fixtures_dir);

    const auto annotate = semtopic::build_annotate_request(doc, cfg);
    store.save(annotate, {200, "application/json", spotlight_body(doc, cfg)});
    std::cout << semtopic::http::request_hash(annotate) << "  annotate " << doc.id << "\n";

    for (const auto& f : kb_facts()) {
      const auto req = semtopic::build_enrichment_query(std::string(kRes) + f.resource).to_request(cfg.sparql_endpoint);
      store.save(req, {200, "application/sparql-results+json", sparql_body(f)});
      std::cout << semtopic::http::request_hash(req) << "  sparql " << f.resource << "\n";
    }
  } catch (const semtopic::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.exit_code());
  }
  return 0;
}
