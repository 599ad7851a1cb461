#pragma once

#include <stdexcept>
#include <string>

namespace carleson {

// Mirrors cl_status in the C API; keep the numeric values in sync.
enum class ErrorCode {
  kDomain = 1,
  kParameter = 2,
  kOutOfDepth = 3,
  kQuadrature = 4,
  kIo = 5,
  kUsage = 6,
  kEmptyRegion = 7,
  kDivergent = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCode::kDomain, what) {}
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what) : Error(ErrorCode::kParameter, what) {}
};

class OutOfDepthError : public Error {
 public:
  explicit OutOfDepthError(const std::string& what) : Error(ErrorCode::kOutOfDepth, what) {}
};

class QuadratureError : public Error {
 public:
  explicit QuadratureError(const std::string& what) : Error(ErrorCode::kQuadrature, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::kIo, what) {}
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorCode::kUsage, what) {}
};

// Raised when an average is requested over a set of zero measure.
class EmptyRegionError : public Error {
 public:
  explicit EmptyRegionError(const std::string& what) : Error(ErrorCode::kEmptyRegion, what) {}
};

class DivergentError : public Error {
 public:
  explicit DivergentError(const std::string& what) : Error(ErrorCode::kDivergent, what) {}
};

}  // namespace carleson
