#include "iconsift/rules.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <unordered_set>

#include <json.hpp>

#include "iconsift/error.hpp"
#include "iconsift/notation.hpp"
#include "iconsift/text.hpp"

namespace iconsift {

using nlohmann::json;

namespace {

[[noreturn]] void rule_error(const std::string& why) {
  throw Error(ErrorKind::rule_format, why);
}

template <typename Set>
Set string_set(const json& obj, const char* field, const std::string& where, bool lower) {
  Set out;
  if (!obj.contains(field)) return out;
  const json& arr = obj.at(field);
  if (!arr.is_array()) rule_error(where + ": \"" + field + "\" must be an array");
  for (const json& item : arr) {
    if (!item.is_string()) rule_error(where + ": \"" + field + "\" must contain strings");
    std::string value = lower ? text::normalize_term(item.get<std::string>())
                              : text::trim(item.get<std::string>());
    if (value.empty()) rule_error(where + ": empty entry in \"" + field + "\"");
    out.insert(std::move(value));
  }
  return out;
}

}  // namespace

RuleSet::RuleSet(std::vector<Rule> rules) : rules_(std::move(rules)) {
  std::unordered_set<std::string> ids;
  for (const Rule& r : rules_) {
    const std::string where = "rule \"" + r.id + "\"";
    if (r.id.empty()) rule_error("rule with empty id");
    if (!ids.insert(r.id).second) rule_error("duplicate rule id \"" + r.id + "\"");
    if (r.if_labels.empty() && r.if_codes.empty())
      rule_error(where + ": needs at least one antecedent label or code");
    if (r.then_codes.empty()) rule_error(where + ": then_codes is empty");
    for (const auto& code : r.if_codes)
      if (!Notation::try_parse(code)) rule_error(where + ": invalid notation \"" + code + "\" in if_codes");
    for (const auto& code : r.then_codes)
      if (!Notation::try_parse(code)) rule_error(where + ": invalid notation \"" + code + "\" in then_codes");
  }
}

RuleSet RuleSet::load(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    rule_error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array()) rule_error("rule file must be a JSON array");
  std::vector<Rule> rules;
  std::size_t index = 0;
  for (const json& obj : doc) {
    const std::string where = "rule #" + std::to_string(index++);
    if (!obj.is_object()) rule_error(where + ": not an object");
    if (!obj.contains("id") || !obj.at("id").is_string()) rule_error(where + ": missing string \"id\"");
    if (!obj.contains("then_codes")) rule_error(where + ": missing \"then_codes\"");
    Rule r;
    r.id = obj.at("id").get<std::string>();
    r.if_labels = string_set<LabelSet>(obj, "if_labels", where, true);
    r.if_codes = string_set<CodeSet>(obj, "if_codes", where, false);
    r.then_codes = string_set<CodeSet>(obj, "then_codes", where, false);
    if (obj.contains("note")) {
      if (!obj.at("note").is_string()) rule_error(where + ": \"note\" must be a string");
      r.note = obj.at("note").get<std::string>();
    }
    rules.push_back(std::move(r));
  }
  return RuleSet(std::move(rules));
}

RuleSet RuleSet::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open rule file " + path.string());
  return load(in);
}

InferenceTrace infer_traced(const CodeSet& codes, const LabelSet& labels, const RuleSet& rules) {
  InferenceTrace trace;
  trace.codes = codes;
  auto subset = [](const auto& needles, const auto& hay) {
    return std::all_of(needles.begin(), needles.end(),
                       [&](const std::string& x) { return hay.contains(x); });
  };
  std::vector<bool> done(rules.size(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < rules.size(); ++i) {
      if (done[i]) continue;
      const Rule& r = rules.rules()[i];
      if (!subset(r.if_labels, labels) || !subset(r.if_codes, trace.codes)) continue;
      done[i] = true;
      trace.fired.push_back(r.id);
      for (const auto& code : r.then_codes)
        if (trace.codes.insert(code).second) changed = true;
    }
    if (changed) ++trace.productive_rounds;
  }
  return trace;
}

}  // namespace iconsift
