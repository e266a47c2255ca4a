#pragma once

#include <cstddef>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace semtopic {

// Process exit codes used by the CLI.
enum class ExitCode : int {
  ok = 0,
  input_error = 2,
  network_error = 3,
  fixture_miss = 4,
  contract_violation = 5,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept { return ExitCode::input_error; }
};

class InputError : public Error {
 public:
  using Error::Error;
};

class EncodingError : public InputError {
 public:
  EncodingError(std::size_t byte_offset, const std::string& what)
      : InputError(what + " at byte offset " + std::to_string(byte_offset)),
        byte_offset_(byte_offset) {}
  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

class ParseError : public InputError {
 public:
  ParseError(std::size_t byte_position, const std::string& what)
      : InputError(what), byte_position_(byte_position) {}
  std::size_t byte_position() const noexcept { return byte_position_; }

 private:
  std::size_t byte_position_;
};

class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

class SizeError : public InputError {
 public:
  using InputError::InputError;
};

class IoError : public InputError {
 public:
  using InputError::InputError;
};

class NetworkError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::network_error; }
};

class FixtureMissError : public Error {
 public:
  explicit FixtureMissError(std::string hash)
      : Error("no recorded fixture for request " + hash), hash_(std::move(hash)) {}
  const std::string& hash() const noexcept { return hash_; }
  ExitCode exit_code() const noexcept override { return ExitCode::fixture_miss; }

 private:
  std::string hash_;
};

class ContractViolation : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::contract_violation; }
};

class IntegrityError : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

class IndexError : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

// Thread-safe collector for non-fatal problems (skipped resources, failed
// enrichment lookups, ...). Stages report here instead of aborting.
class Warnings {
 public:
  Warnings() = default;
  Warnings(const Warnings& other) : messages_(other.snapshot()) {}
  Warnings& operator=(const Warnings& other) {
    if (this != &other) {
      auto copy = other.snapshot();
      std::lock_guard lock(mu_);
      messages_ = std::move(copy);
    }
    return *this;
  }

  void add(std::string message) {
    std::lock_guard lock(mu_);
    messages_.push_back(std::move(message));
  }

  std::size_t count() const {
    std::lock_guard lock(mu_);
    return messages_.size();
  }

  std::vector<std::string> snapshot() const {
    std::lock_guard lock(mu_);
    return messages_;
  }

 private:
  mutable std::mutex mu_;
  std::vector<std::string> messages_;
};

}  // namespace semtopic
