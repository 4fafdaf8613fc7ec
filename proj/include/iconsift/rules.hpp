#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "iconsift/types.hpp"

namespace iconsift {

/// if_labels ⊆ labels and if_codes ⊆ codes  =>  add then_codes.
struct Rule {
  std::string id;
  LabelSet if_labels;
  CodeSet if_codes;
  CodeSet then_codes;
  std::string note;
};

class RuleSet {
 public:
  RuleSet() = default;
  /// Validates every rule; throws Error(rule_format).
  explicit RuleSet(std::vector<Rule> rules);

  /// JSON array of {"id","if_labels","if_codes","then_codes","note"}.
  static RuleSet load(std::istream& in);
  static RuleSet load_file(const std::filesystem::path& path);

  const std::vector<Rule>& rules() const noexcept { return rules_; }
  std::size_t size() const noexcept { return rules_.size(); }
  bool empty() const noexcept { return rules_.empty(); }

 private:
  std::vector<Rule> rules_;
};

struct InferenceTrace {
  CodeSet codes;                    // input codes plus everything inferred
  std::vector<std::string> fired;   // rule ids in firing order
  std::size_t productive_rounds = 0;
};

/// Forward chaining to a fixpoint. Antecedent codes match by exact notation.
InferenceTrace infer_traced(const CodeSet& codes, const LabelSet& labels, const RuleSet& rules);

inline CodeSet infer(const CodeSet& codes, const LabelSet& labels, const RuleSet& rules) {
  return infer_traced(codes, labels, rules).codes;
}

}  // namespace iconsift
