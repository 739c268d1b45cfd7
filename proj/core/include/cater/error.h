#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace cater {

// Base of every error raised by the library. Subclasses are grouped so that
// callers (the CLI in particular) can map them onto distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric or structural precondition was violated by the caller.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// An EvaluationRequest cannot be evaluated (empty texts, zero word count).
class InvalidRequestError : public InvalidInputError {
 public:
  using InvalidInputError::InvalidInputError;
};

// Backend response could not be turned into a ParsedEvaluation.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what), position_(position) {}

  // Byte offset into the raw response where the problem was detected.
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class NoJsonFoundError : public ParseError {
 public:
  using ParseError::ParseError;
};

class SchemaViolationError : public ParseError {
 public:
  SchemaViolationError(const std::string& what, std::size_t position,
                       std::string pointer)
      : ParseError(what, position), pointer_(std::move(pointer)) {}

  // JSON pointer (RFC 6901) of the offending element, e.g. "/errors/0/category".
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

// Failures talking to a completion backend.
class BackendFailure : public Error {
 public:
  using Error::Error;
};

// API key missing from the environment, or rejected by the endpoint.
class AuthError : public BackendFailure {
 public:
  using BackendFailure::BackendFailure;
};

// Transient failures that persisted after every retry was spent.
class TransportError : public BackendFailure {
 public:
  using BackendFailure::BackendFailure;
};

// Non-retryable rejection (4xx other than 401/403/429) or malformed reply.
class BackendError : public BackendFailure {
 public:
  using BackendFailure::BackendFailure;
};

// Replay store has no response for the requested prompt hash.
class MissingFixtureError : public BackendFailure {
 public:
  MissingFixtureError(const std::string& what, std::string hash)
      : BackendFailure(what), hash_(std::move(hash)) {}

  const std::string& hash() const { return hash_; }

 private:
  std::string hash_;
};

}  // namespace cater
