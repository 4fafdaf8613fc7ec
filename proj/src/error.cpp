#include "iconsift/error.hpp"

namespace iconsift {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::malformed_notation: return "MalformedNotation";
    case ErrorKind::format: return "FormatError";
    case ErrorKind::rule_format: return "RuleFormatError";
    case ErrorKind::duplicate_image_id: return "DuplicateImageId";
    case ErrorKind::unknown_code: return "UnknownCode";
    case ErrorKind::empty_label_set: return "EmptyLabelSet";
    case ErrorKind::empty_query: return "EmptyQuery";
    case ErrorKind::external_command: return "ExternalCommandFailure";
    case ErrorKind::detector: return "DetectorFailure";
    case ErrorKind::index_version: return "IndexVersionMismatch";
    case ErrorKind::io: return "IoError";
  }
  return "Unknown";
}

}  // namespace iconsift
