#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iconsift/corpus_index.hpp"
#include "iconsift/matcher.hpp"
#include "iconsift/rules.hpp"
#include "iconsift/types.hpp"
#include "iconsift/vocabulary.hpp"

namespace iconsift {

enum class Reducer { none, intersection, shortest_title, external };
const char* to_string(Reducer reducer) noexcept;
Reducer parse_reducer(std::string_view name);

/// Environment variable naming the default JSON config file.
inline constexpr const char* kConfigEnvVar = "ICONSIFT_CONFIG";

struct PipelineConfig {
  std::filesystem::path vocab_path;
  VocabFormat vocab_format = VocabFormat::jsonl;
  std::optional<std::filesystem::path> rules_path;
  std::optional<std::filesystem::path> alias_map_path;
  std::optional<std::filesystem::path> corpus_index_path;
  bool run_singleton = false;
  Reducer reducer = Reducer::none;
  std::optional<std::string> external_cmd;
  std::chrono::milliseconds external_timeout{30000};
  double idf_impact = 1.0;
  std::optional<std::string> detector_cmd;
  std::chrono::milliseconds detector_timeout{300000};

  /// Throws Error(format) when reducer == external without a command, or
  /// idf_impact is negative.
  void validate() const;

  /// Keys mirror the field names; timeouts are given in seconds as
  /// "external_timeout_s" / "detector_timeout_s". Relative paths resolve
  /// against `base_dir`.
  static PipelineConfig from_json(std::string_view json_text,
                                  const std::filesystem::path& base_dir = {});
  static PipelineConfig from_file(const std::filesystem::path& path);
  std::string to_json() const;
};

struct PipelineReport {
  std::string image_id;
  LabelSet labels;
  CodeSet codes_detected;
  CodeSet codes_inferred;  // added by rules, disjoint from codes_detected
  CodeSet codes_final;
  std::map<Method, std::optional<Recommendation>> recommendations;
  std::vector<std::string> warnings;
};

/// Parses the detector JSON contract. Labels are lowercased and deduplicated;
/// detection labels missing from "labels" are added. Throws Error(format).
LabelDocument parse_label_document(std::string_view json_text);
std::string to_json(const LabelDocument& doc);

std::string to_json(const PipelineReport& report, int indent = 2);
std::string to_json(const Recommendation& rec, int indent = -1);

/// Loads an alias file: a JSON object mapping detector label to keyword.
AliasMap load_alias_map(const std::filesystem::path& path);

/// detect -> normalize -> map -> infer -> reduce -> recommend.
///
/// Reducers act on the mapped codes only; codes added by rules are merged
/// back afterwards, so codes_final = reduce(codes_detected) ∪ codes_inferred.
/// Errors escaping a stage carry its name in Error::stage().
class Pipeline {
 public:
  /// Loads every file named by the config.
  explicit Pipeline(PipelineConfig config);
  Pipeline(PipelineConfig config, Vocabulary vocab, RuleSet rules = {}, AliasMap aliases = {},
           std::optional<CorpusIndex> index = std::nullopt);

  const PipelineConfig& config() const noexcept { return config_; }
  const Vocabulary& vocabulary() const noexcept { return vocab_; }
  const std::optional<CorpusIndex>& index() const noexcept { return index_; }
  /// Warnings collected while loading the vocabulary.
  const std::vector<std::string>& load_warnings() const noexcept { return load_warnings_; }

  /// Runs the configured detector command on an image. Throws Error(detector).
  LabelDocument detect(const std::filesystem::path& image) const;

  /// Stages up to and including the reducer; recommendations stay empty.
  PipelineReport classify(const LabelDocument& input) const;
  /// classify, then recommend_all over codes_final when an index is loaded.
  PipelineReport classify_and_recommend(const LabelDocument& input) const;
  PipelineReport classify_and_recommend(const std::filesystem::path& image) const;

 private:
  PipelineConfig config_;
  Vocabulary vocab_;
  RuleSet rules_;
  AliasMap aliases_;
  std::optional<CorpusIndex> index_;
  std::vector<std::string> load_warnings_;
};

}  // namespace iconsift
