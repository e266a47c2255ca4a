#pragma once

// Network transport backed by cpp-httplib. HTTPS endpoints need the including
// target to define CPPHTTPLIB_OPENSSL_SUPPORT and link OpenSSL.

#include <string>

#include <strings.h>

#include <httplib.h>

#include "semtopic/error.hpp"
#include "semtopic/http.hpp"

namespace semtopic::http {

class LiveTransport : public Transport {
 public:
  explicit LiveTransport(int timeout_seconds = 30) : timeout_seconds_(timeout_seconds) {}

  Response send(const RequestSpec& req) override {
    const auto url = split_url(req.url);
    httplib::Client client(url.origin);
    client.set_connection_timeout(timeout_seconds_, 0);
    client.set_read_timeout(timeout_seconds_, 0);
    client.set_follow_location(true);

    httplib::Headers headers;
    std::string content_type;
    for (const auto& [k, v] : req.headers) {
      if (strcasecmp(k.c_str(), "Content-Type") == 0) {
        content_type = v;
      } else {
        headers.emplace(k, v);
      }
    }
    const std::string target = url.query.empty() ? url.path : url.path + "?" + url.query;

    httplib::Result res = req.method == "POST"
                              ? client.Post(target, headers, req.body, content_type)
                              : client.Get(target, headers);
    if (!res)
      throw NetworkError(req.method + " " + url.origin + url.path + " failed: " + httplib::to_string(res.error()));
    Response out;
    out.status = res->status;
    out.content_type = res->get_header_value("Content-Type");
    out.body = res->body;
    return out;
  }

 private:
  int timeout_seconds_;
};

}  // namespace semtopic::http
