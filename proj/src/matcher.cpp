#include "iconsift/matcher.hpp"

#include <json.hpp>

#include "iconsift/error.hpp"
#include "iconsift/subprocess.hpp"
#include "iconsift/text.hpp"

namespace iconsift {

using nlohmann::json;

const char* to_string(MatchPass pass) noexcept {
  switch (pass) {
    case MatchPass::exact: return "exact";
    case MatchPass::subset: return "subset";
    case MatchPass::none: return "none";
  }
  return "none";
}

LabelSet normalize_labels(const std::vector<std::string>& raw, const AliasMap& aliases) {
  LabelSet out;
  for (const auto& label : raw) {
    std::string norm = text::normalize_term(label);
    if (norm.empty()) continue;
    for (const auto& [from, to] : aliases) {
      if (text::normalize_term(from) == norm) {
        norm = text::normalize_term(to);
        break;
      }
    }
    if (!norm.empty()) out.insert(std::move(norm));
  }
  return out;
}

MatchResult map_keywords(const LabelSet& labels, const Vocabulary& vocab, bool run_singleton) {
  if (labels.empty()) throw Error(ErrorKind::empty_label_set, "label set is empty");
  MatchResult result;
  result.codes = vocab.codes_with_keyword_set(labels);
  if (!result.codes.empty()) {
    result.pass_used = MatchPass::exact;
  } else {
    result.codes = vocab.codes_with_keywords_superset(labels);
    if (!result.codes.empty()) result.pass_used = MatchPass::subset;
  }
  if (run_singleton) {
    auto& per_label = result.singleton_codes.emplace();
    for (const auto& label : labels) {
      CodeSet codes = vocab.codes_with_keyword(label);
      result.codes.insert(codes.begin(), codes.end());
      per_label.emplace(label, std::move(codes));
    }
  }
  return result;
}

CodeSet map_descriptions(const LabelSet& labels, const Vocabulary& vocab, bool run_singleton) {
  if (labels.empty()) throw Error(ErrorKind::empty_label_set, "label set is empty");
  std::vector<CodeSet> per_label;
  per_label.reserve(labels.size());
  for (const auto& label : labels) per_label.push_back(vocab.codes_with_text_containing(label));

  CodeSet result = per_label.front();
  for (std::size_t i = 1; i < per_label.size(); ++i)
    result = reduce_intersection(result, per_label[i]);
  if (run_singleton)
    for (const auto& codes : per_label) result.insert(codes.begin(), codes.end());
  return result;
}

CodeSet reduce_intersection(const CodeSet& a, const CodeSet& b) {
  CodeSet out;
  for (const auto& code : a)
    if (b.contains(code)) out.insert(code);
  return out;
}

CodeSet reduce_shortest_title(const CodeSet& codes, const LabelSet& labels,
                              const Vocabulary& vocab) {
  CodeSet out;
  for (const auto& label : labels) {
    const std::string* best = nullptr;
    std::size_t best_len = 0;
    // `codes` is ordered, so the first minimum is the smallest notation.
    for (const auto& code : codes) {
      const VocabEntry* entry = vocab.find(code);
      if (!entry || !text::contains_word(entry->text, label)) continue;
      if (!best || entry->text.size() < best_len) {
        best = &code;
        best_len = entry->text.size();
      }
    }
    if (best) out.insert(*best);
  }
  return out;
}

CodeSet reduce_external(const CodeSet& codes, const ExternalCommand& cmd,
                        const Vocabulary& vocab, std::vector<std::string>* warnings) {
  if (cmd.command.empty())
    throw Error(ErrorKind::external_command, "no external reducer command configured");
  json request = {{"candidates", json::array()}};
  for (const auto& code : codes) {
    const VocabEntry* entry = vocab.find(code);
    request["candidates"].push_back({{"code", code}, {"text", entry ? entry->text : ""}});
  }

  const CommandResult run = run_command(cmd.command, request.dump() + "\n", cmd.timeout);
  if (run.timed_out)
    throw Error(ErrorKind::external_command,
                "external reducer timed out after " + std::to_string(cmd.timeout.count()) + " ms");
  if (run.exit_status != 0)
    throw Error(ErrorKind::external_command,
                "external reducer exited with status " + std::to_string(run.exit_status));

  std::vector<std::string> selected;
  try {
    selected = json::parse(run.out).at("selected").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::external_command,
                std::string("external reducer produced invalid output: ") + e.what());
  }
  CodeSet out;
  for (const auto& code : selected) {
    if (codes.contains(code)) {
      out.insert(code);
    } else if (warnings) {
      warnings->push_back("external reducer returned code not among candidates: \"" + code + "\"");
    }
  }
  return out;
}

}  // namespace iconsift
