#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hseg {

// Numeric values double as the CLI exit codes and the C API status codes.
enum class ErrorCode : int {
  Io = 2,
  Parse = 3,
  InvalidArgument = 4,
  Consistency = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Netpbm or JSON decoding failure; `offset` is the byte position where the
/// decoder gave up.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : Error(ErrorCode::Parse,
              what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace hseg
