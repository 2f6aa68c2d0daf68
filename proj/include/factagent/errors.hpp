#pragma once

#include <stdexcept>
#include <string>

namespace factagent {

/// Root of the library's error hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input text could not be parsed; carries the byte offset of the failure.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " (at offset " + std::to_string(position) + ")"), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A veracity label outside the recognized set.
class UnknownLabel : public Error {
 public:
  explicit UnknownLabel(const std::string& label)
      : Error("unknown veracity label: \"" + label + "\""), label_(label) {}

  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
};

/// Model output did not follow the expected reply protocol; keeps the raw text.
class UnparsableOutput : public Error {
 public:
  explicit UnparsableOutput(std::string raw,
                            const std::string& message = "model output has no recognizable verdict line")
      : Error(message), raw_(std::move(raw)) {}

  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

/// Network-level failure talking to a provider.
class TransportError : public Error {
 public:
  using Error::Error;
};

/// Provider answered with an application-level rejection (4xx semantics).
class ProviderRejection : public Error {
 public:
  explicit ProviderRejection(const std::string& message, int status = 400)
      : Error(message), status_(status) {}

  int status() const noexcept { return status_; }
  bool is_auth() const noexcept { return status_ == 401 || status_ == 403; }
  bool is_rate_limit() const noexcept { return status_ == 429; }

 private:
  int status_;
};

/// The per-claim LLM call budget ran out.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class MissingDomain : public Error {
 public:
  using Error::Error;
};

class SearchTransportError : public Error {
 public:
  using Error::Error;
};

class StoreError : public Error {
 public:
  using Error::Error;
};

class EmptyPlan : public Error {
 public:
  using Error::Error;
};

class EmptyObservations : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class InfeasibleConstraint : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace factagent
