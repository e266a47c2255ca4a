#pragma once

// Record/replay fixtures: one file per request, named `<hash>.fixture`, with
// a short header block followed by a blank line and the verbatim response
// bytes. `index.json` maps each hash to the request line for humans.
//
//   status: 200
//   content-type: application/json
//   request: GET https://example.org/annotate
//
//   {...body...}

#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "semtopic/error.hpp"
#include "semtopic/http.hpp"

namespace semtopic::http {

class FixtureStore {
 public:
  explicit FixtureStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& dir() const { return dir_; }

  std::filesystem::path path_for(const std::string& hash) const { return dir_ / (hash + ".fixture"); }

  std::optional<Response> load(const std::string& hash) const {
    std::ifstream in(path_for(hash), std::ios::binary);
    if (!in) return std::nullopt;
    std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return decode(bytes, hash);
  }

  void save(const RequestSpec& req, const Response& resp) {
    const auto hash = request_hash(req);
    std::lock_guard lock(mu_);
    std::filesystem::create_directories(dir_);
    {
      std::ofstream out(path_for(hash), std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot write fixture " + path_for(hash).string());
      out << encode(req, resp);
    }
    auto index = read_index();
    index[hash] = req.method + " " + split_url(req.url).origin + split_url(req.url).path;
    std::ofstream out(dir_ / "index.json", std::ios::binary | std::ios::trunc);
    out << nlohmann::json(index).dump(2) << '\n';
  }

  static std::string encode(const RequestSpec& req, const Response& resp) {
    std::string out = "status: " + std::to_string(resp.status) + "\n";
    out += "content-type: " + resp.content_type + "\n";
    out += "request: " + req.method + " " + req.url + "\n\n";
    out += resp.body;
    return out;
  }

  static Response decode(const std::string& bytes, const std::string& hash) {
    const auto sep = bytes.find("\n\n");
    if (sep == std::string::npos) throw IntegrityError("fixture " + hash + " has no header terminator");
    Response resp;
    std::size_t pos = 0;
    bool have_status = false;
    while (pos < sep) {
      auto eol = bytes.find('\n', pos);
      if (eol > sep) eol = sep;
      const std::string line = bytes.substr(pos, eol - pos);
      pos = eol + 1;
      const auto colon = line.find(": ");
      if (colon == std::string::npos) continue;
      const auto key = line.substr(0, colon);
      const auto value = line.substr(colon + 2);
      if (key == "status") {
        try {
          resp.status = std::stoi(value);
        } catch (const std::exception&) {
          throw IntegrityError("fixture " + hash + " has a bad status line");
        }
        have_status = true;
      } else if (key == "content-type") {
        resp.content_type = value;
      }
    }
    if (!have_status) throw IntegrityError("fixture " + hash + " lacks a status line");
    resp.body = bytes.substr(sep + 2);
    return resp;
  }

 private:
  std::map<std::string, std::string> read_index() const {
    std::ifstream in(dir_ / "index.json");
    if (!in) return {};
    try {
      return nlohmann::json::parse(in).get<std::map<std::string, std::string>>();
    } catch (const nlohmann::json::exception&) {
      return {};
    }
  }

  std::filesystem::path dir_;
  mutable std::mutex mu_;
};

// Serves responses from the store; an unknown request is a FixtureMissError.
class ReplayTransport : public Transport {
 public:
  explicit ReplayTransport(std::shared_ptr<const FixtureStore> store) : store_(std::move(store)) {}

  Response send(const RequestSpec& req) override {
    const auto hash = request_hash(req);
    {
      std::lock_guard lock(mu_);
      used_.insert(hash);
    }
    if (auto resp = store_->load(hash)) return *resp;
    throw FixtureMissError(hash);
  }

  std::set<std::string> used_hashes() const {
    std::lock_guard lock(mu_);
    return used_;
  }

 private:
  std::shared_ptr<const FixtureStore> store_;
  mutable std::mutex mu_;
  std::set<std::string> used_;
};

// Forwards to another transport and stores every response it gets back.
class RecordTransport : public Transport {
 public:
  RecordTransport(std::shared_ptr<FixtureStore> store, std::shared_ptr<Transport> inner)
      : store_(std::move(store)), inner_(std::move(inner)) {}

  Response send(const RequestSpec& req) override {
    auto resp = inner_->send(req);
    store_->save(req, resp);
    std::lock_guard lock(mu_);
    used_.insert(request_hash(req));
    return resp;
  }

  std::set<std::string> used_hashes() const {
    std::lock_guard lock(mu_);
    return used_;
  }

 private:
  std::shared_ptr<FixtureStore> store_;
  std::shared_ptr<Transport> inner_;
  mutable std::mutex mu_;
  std::set<std::string> used_;
};

}  // namespace semtopic::http
