#include "disambig/error.h"

namespace disambig {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid argument";
    case ErrorCode::kUnknownNode:
      return "unknown node";
    case ErrorCode::kNoNeighbors:
      return "unscorable: no neighbors";
    case ErrorCode::kNoEvents:
      return "unscorable: no events";
    case ErrorCode::kDuplicateId:
      return "duplicate id";
    case ErrorCode::kParse:
      return "parse error";
    case ErrorCode::kIo:
      return "i/o error";
  }
  return "unknown error";
}

}  // namespace disambig
