#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iconsift/types.hpp"
#include "iconsift/vocabulary.hpp"

namespace iconsift {

struct Detection {
  std::string label;
  double confidence = 0.0;
  double bbox[4] = {0, 0, 0, 0};  // x, y, w, h in pixels
};

/// Detector output for one image. Labels have set semantics.
struct LabelDocument {
  std::string image_id;
  LabelSet labels;
  std::vector<Detection> detections;
};

using AliasMap = std::map<std::string, std::string>;

enum class MatchPass { exact, subset, none };
const char* to_string(MatchPass pass) noexcept;

struct MatchResult {
  CodeSet codes;
  MatchPass pass_used = MatchPass::none;
  /// Per-label codes, only present when the singleton pass ran.
  std::optional<std::map<std::string, CodeSet>> singleton_codes;
};

/// Lowercase, trim, apply aliases (keys compared after normalization), dedup.
LabelSet normalize_labels(const std::vector<std::string>& raw, const AliasMap& aliases);

/// Keyword matching: exact keyword-set match, else labels-subset-of-keywords,
/// plus optional per-label lookups merged into `codes`.
/// Throws Error(empty_label_set).
MatchResult map_keywords(const LabelSet& labels, const Vocabulary& vocab,
                         bool run_singleton);

/// Description matching: codes whose text contains every label as a word;
/// with `run_singleton`, plus codes mentioning any single label.
/// Throws Error(empty_label_set).
CodeSet map_descriptions(const LabelSet& labels, const Vocabulary& vocab,
                         bool run_singleton = false);

CodeSet reduce_intersection(const CodeSet& a, const CodeSet& b);

/// For every label keeps the candidate with the shortest text mentioning it
/// (ties: smallest notation). Codes that mention no label are dropped.
CodeSet reduce_shortest_title(const CodeSet& codes, const LabelSet& labels,
                              const Vocabulary& vocab);

struct ExternalCommand {
  std::string command;
  std::chrono::milliseconds timeout{30000};
};

/// Hands the candidates to an external selector and keeps only the returned
/// codes that were among the candidates.
/// Throws Error(external_command) on spawn failure, nonzero exit, timeout or
/// malformed output.
CodeSet reduce_external(const CodeSet& codes, const ExternalCommand& cmd,
                        const Vocabulary& vocab,
                        std::vector<std::string>* warnings = nullptr);

}  // namespace iconsift
