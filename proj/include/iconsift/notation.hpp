#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace iconsift {

/// One hierarchy step of an Iconclass notation.
struct Atom {
  enum class Kind { digit, letter, bracket_text, key_char };

  Kind kind;
  std::string value;  // single char, or the inner text of a "(...)" group

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// A parsed Iconclass notation such as "25F23(LION)(+12)".
///
/// The hierarchy path is the atom sequence followed by the key characters;
/// every proper prefix of that path is an ancestor. Two notations are equal
/// iff their canonical renderings are equal.
class Notation {
 public:
  /// Throws Error(malformed_notation) for anything outside the grammar:
  /// leading non-digit, unbalanced or nested brackets, empty "()" or "(+)",
  /// a key that is not the final segment, or a character that is neither
  /// 0-9 nor A-Z outside brackets.
  static Notation parse(std::string_view text);
  static std::optional<Notation> try_parse(std::string_view text) noexcept;

  const std::string& str() const noexcept { return raw_; }

  /// Atoms before the key segment.
  std::span<const Atom> atoms() const noexcept {
    return {path_.data(), key_begin_};
  }
  /// Key characters of the "(+...)" suffix, empty when there is none.
  std::span<const Atom> key() const noexcept {
    return std::span<const Atom>(path_).subspan(key_begin_);
  }
  /// Full hierarchy path: atoms then key characters.
  std::span<const Atom> path() const noexcept { return path_; }
  std::size_t depth() const noexcept { return path_.size(); }
  bool has_key() const noexcept { return key_begin_ < path_.size(); }

  /// Drops the last atom or key character; nullopt for a bare division digit.
  std::optional<Notation> parent() const;
  /// [parent, grandparent, ...], at most `max_depth` entries.
  std::vector<Notation> ancestors(std::size_t max_depth) const;
  /// Prefix of the hierarchy path with `length` steps (1 <= length <= depth).
  Notation prefix(std::size_t length) const;

  friend bool operator==(const Notation& a, const Notation& b) noexcept {
    return a.raw_ == b.raw_;
  }
  friend std::strong_ordering operator<=>(const Notation& a,
                                          const Notation& b) noexcept {
    return a.raw_ <=> b.raw_;
  }

 private:
  Notation(std::vector<Atom> path, std::size_t key_begin);

  std::vector<Atom> path_;
  std::size_t key_begin_ = 0;
  std::string raw_;
};

/// Renders a hierarchy path back to notation text.
std::string render(std::span<const Atom> path);

/// Length of the longest common prefix of two hierarchy paths.
std::size_t common_prefix_length(const Notation& a, const Notation& b) noexcept;

/// 1.0 identical, 0.5 when the nearest common ancestor is at most one step
/// from both, 0.25 when at most two steps, 0.0 otherwise (including codes
/// from different top divisions).
double hierarchy_relation(const Notation& a, const Notation& b) noexcept;

}  // namespace iconsift
