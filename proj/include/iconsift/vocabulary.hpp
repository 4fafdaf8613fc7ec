#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "iconsift/notation.hpp"
#include "iconsift/types.hpp"

namespace iconsift {

struct VocabEntry {
  Notation notation;
  std::string text;
  LabelSet keywords;
  std::string lang = "en";
};

enum class VocabFormat { jsonl, tsv };

VocabFormat parse_vocab_format(std::string_view name);

/// Outcome of a load: records skipped because their notation did not parse,
/// plus duplicate-notation warnings (last record wins).
struct LoadReport {
  std::size_t loaded = 0;
  std::size_t skipped = 0;
  std::vector<std::string> warnings;
};

/// Iconclass concepts with keyword indexes. Immutable once built.
class Vocabulary {
 public:
  using KeywordIndex = std::unordered_map<std::string, CodeSet>;
  using KeywordSetIndex = std::map<std::string, CodeSet>;

  Vocabulary() = default;
  /// Later entries replace earlier ones with the same notation.
  explicit Vocabulary(std::vector<VocabEntry> entries);

  /// Throws Error(format) on a record that cannot be read at all (bad JSON,
  /// missing fields, wrong TSV column count). Records with an invalid
  /// notation are skipped and counted in `report`.
  static Vocabulary load(std::istream& in, VocabFormat format,
                         LoadReport* report = nullptr);
  static Vocabulary load_file(const std::filesystem::path& path,
                              VocabFormat format, LoadReport* report = nullptr);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const VocabEntry* find(std::string_view code) const;
  const std::map<std::string, VocabEntry, std::less<>>& entries() const noexcept {
    return entries_;
  }
  const KeywordIndex& keyword_index() const noexcept { return keyword_index_; }
  const KeywordSetIndex& keyword_set_index() const noexcept {
    return keyword_set_index_;
  }

  /// Codes whose keyword set equals `keywords` exactly.
  CodeSet codes_with_keyword_set(const LabelSet& keywords) const;
  /// Codes whose keyword set contains every element of `keywords`.
  CodeSet codes_with_keywords_superset(const LabelSet& keywords) const;
  CodeSet codes_with_keyword(std::string_view keyword) const;
  /// Codes whose display text contains `term` as a whole word, ignoring case.
  CodeSet codes_with_text_containing(std::string_view term) const;

  /// Key used by keyword_set_index for a keyword set.
  static std::string keyword_set_key(const LabelSet& keywords);

 private:
  std::map<std::string, VocabEntry, std::less<>> entries_;
  KeywordIndex keyword_index_;
  KeywordSetIndex keyword_set_index_;
};

}  // namespace iconsift
