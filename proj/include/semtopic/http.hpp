#pragma once

// Plain-value HTTP request/response types, percent-encoding and the canonical
// request hash that names record/replay fixtures.

#include <algorithm>
#include <chrono>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "semtopic/error.hpp"

namespace semtopic::http {

using Param = std::pair<std::string, std::string>;
using Params = std::vector<Param>;

inline constexpr std::string_view kFormContentType = "application/x-www-form-urlencoded";

struct RequestSpec {
  std::string method = "GET";
  std::string url;  // including any query string
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;

  std::string header(std::string_view name) const {
    for (const auto& [k, v] : headers)
      if (std::equal(k.begin(), k.end(), name.begin(), name.end(),
                     [](char a, char b) { return std::tolower(a) == std::tolower(b); }))
        return v;
    return {};
  }

  friend bool operator==(const RequestSpec&, const RequestSpec&) = default;
};

struct Response {
  int status = 0;
  std::string content_type;
  std::string body;
};

// RFC 3986: everything outside the unreserved set is %XX-escaped.
inline std::string percent_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(s.size() * 3 / 2);
  for (unsigned char c : s) {
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' ||
        c == '.' || c == '_' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

// Decodes %XX escapes; `plus_is_space` applies form-encoding rules.
inline std::string percent_decode(std::string_view s, bool plus_is_space = false) {
  const auto hex = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size() && hex(s[i + 1]) >= 0 && hex(s[i + 2]) >= 0) {
      out.push_back(static_cast<char>(hex(s[i + 1]) * 16 + hex(s[i + 2])));
      i += 2;
    } else if (plus_is_space && s[i] == '+') {
      out.push_back(' ');
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

inline std::string encode_params(const Params& params) {
  std::string out;
  for (const auto& [k, v] : params) {
    if (!out.empty()) out.push_back('&');
    out += percent_encode(k);
    out.push_back('=');
    out += percent_encode(v);
  }
  return out;
}

inline Params decode_params(std::string_view query) {
  Params out;
  while (!query.empty()) {
    const auto amp = query.find('&');
    const auto pair = query.substr(0, amp);
    if (!pair.empty()) {
      const auto eq = pair.find('=');
      if (eq == std::string_view::npos) {
        out.emplace_back(percent_decode(pair, true), std::string{});
      } else {
        out.emplace_back(percent_decode(pair.substr(0, eq), true),
                         percent_decode(pair.substr(eq + 1), true));
      }
    }
    if (amp == std::string_view::npos) break;
    query.remove_prefix(amp + 1);
  }
  return out;
}

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // starts with '/'
  std::string query;   // without '?'
};

inline SplitUrl split_url(std::string_view url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) throw ValidationError("not an absolute URL: " + std::string(url));
  const auto path_start = url.find_first_of("/?", scheme_end + 3);
  SplitUrl out;
  out.origin = std::string(url.substr(0, path_start));
  if (path_start == std::string_view::npos) {
    out.path = "/";
    return out;
  }
  auto rest = url.substr(path_start);
  const auto q = rest.find('?');
  out.path = std::string(rest.substr(0, q));
  if (out.path.empty()) out.path = "/";
  if (q != std::string_view::npos) out.query = std::string(rest.substr(q + 1));
  return out;
}

// Canonical text of a request: method, URL without query, sorted decoded
// query parameters, then sorted form parameters or the raw body. Headers are
// not part of the identity.
inline std::string canonical_form(const RequestSpec& req) {
  const auto url = split_url(req.url);
  auto query = decode_params(url.query);
  std::sort(query.begin(), query.end());
  std::string out = req.method;
  out += '\n';
  out += url.origin + url.path;
  out += '\n';
  out += encode_params(query);
  out += '\n';
  if (req.header("Content-Type").starts_with(kFormContentType)) {
    auto form = decode_params(req.body);
    std::sort(form.begin(), form.end());
    out += encode_params(form);
  } else {
    out += req.body;
  }
  return out;
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// 16 lowercase hex digits of FNV-1a/64 over the canonical form.
inline std::string request_hash(const RequestSpec& req) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical_form(req))));
  return buf;
}

class Transport {
 public:
  virtual ~Transport() = default;
  // Throws NetworkError when no response could be obtained.
  virtual Response send(const RequestSpec& req) = 0;
};

struct RetryPolicy {
  int max_retries = 3;
  int backoff_ms = 200;  // doubled after every failed attempt
};

// Sends `req`, retrying transport failures and 429/5xx answers. Fixture
// misses are not retried. Throws NetworkError once the budget is spent.
inline Response send_with_retries(Transport& transport, const RequestSpec& req, const RetryPolicy& policy) {
  std::string last_error;
  int delay = policy.backoff_ms;
  for (int attempt = 0; attempt <= policy.max_retries; ++attempt) {
    if (attempt > 0 && delay > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(delay));
      delay *= 2;
    }
    try {
      auto resp = transport.send(req);
      if (resp.status == 429 || resp.status >= 500) {
        last_error = "HTTP status " + std::to_string(resp.status);
        continue;
      }
      return resp;
    } catch (const NetworkError& e) {
      last_error = e.what();
    }
  }
  throw NetworkError(req.method + " " + split_url(req.url).origin + split_url(req.url).path + ": giving up after " +
                     std::to_string(policy.max_retries + 1) + " attempts (" + last_error + ")");
}

}  // namespace semtopic::http
