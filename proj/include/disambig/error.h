#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace disambig {

enum class ErrorCode {
  kInvalidArgument,
  kUnknownNode,
  kNoNeighbors,
  kNoEvents,
  kDuplicateId,
  kParse,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // True for errors that mean "this node cannot be scored" rather than
  // "the input is broken".
  bool unscorable() const noexcept {
    return code_ == ErrorCode::kNoNeighbors || code_ == ErrorCode::kNoEvents;
  }

 private:
  ErrorCode code_;
};

}  // namespace disambig
