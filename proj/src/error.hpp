#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace eae {

enum class ErrorCode {
  kInvalidArgument,
  kIo,
  kParse,
  kValidation,
  kUndefinedMetric,
  kTransport,
  kProtocol,
  kConfig,
  kUnsupported,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Malformed input. `locator` is e.g. "corpus.jsonl:12".
class ParseError : public Error {
 public:
  ParseError(const std::string& locator, const std::string& what)
      : Error(ErrorCode::kParse, locator + ": " + what), locator_(locator) {}

  const std::string& locator() const { return locator_; }

 private:
  std::string locator_;
};

// Aggregated invariant violations; every offending record is listed.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> issues)
      : Error(ErrorCode::kValidation, Summarize(issues)),
        issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const { return issues_; }

 private:
  static std::string Summarize(const std::vector<std::string>& issues) {
    std::string out = std::to_string(issues.size()) + " validation error(s)";
    for (const auto& issue : issues) out += "\n  " + issue;
    return out;
  }

  std::vector<std::string> issues_;
};

class UndefinedMetricError : public Error {
 public:
  explicit UndefinedMetricError(const std::string& what)
      : Error(ErrorCode::kUndefinedMetric, what) {}
};

}  // namespace eae
