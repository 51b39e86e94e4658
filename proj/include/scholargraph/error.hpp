#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scholargraph {

enum class ErrorCode {
  UnreadableFile,
  MalformedLine,
  DuplicatePosition,
  NotFound,
  VersionMismatch,
  CorruptSnapshot,
  EmptyQuery,
  InvalidSort,
  InvalidArgument,
  SameAuthor,
  Unauthorized,
  BodyInvalid,
  NoPath,
  Forbidden,
  NoRoute,
  MethodNotAllowed,
};

// Stable machine-readable name, e.g. "NOT_FOUND".
std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace scholargraph
