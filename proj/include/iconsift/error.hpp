#pragma once

#include <stdexcept>
#include <string>

namespace iconsift {

enum class ErrorKind {
  malformed_notation,
  format,
  rule_format,
  duplicate_image_id,
  unknown_code,
  empty_label_set,
  empty_query,
  external_command,
  detector,
  index_version,
  io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library. `stage` is filled in by the
/// pipeline when an error escapes one of its stages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& stage() const noexcept { return stage_; }

  Error with_stage(std::string stage) const {
    Error copy = *this;
    copy.stage_ = std::move(stage);
    return copy;
  }

 private:
  ErrorKind kind_;
  std::string stage_;
};

}  // namespace iconsift
