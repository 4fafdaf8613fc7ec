#include "iconsift/pipeline.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "iconsift/error.hpp"
#include "iconsift/subprocess.hpp"
#include "iconsift/text.hpp"

namespace iconsift {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <typename F>
auto run_stage(const char* stage, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    if (!e.stage().empty()) throw;
    throw e.with_stage(stage);
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

ordered_json recommendation_json(const Recommendation& rec) {
  ordered_json explanation = ordered_json::array();
  for (const auto& c : rec.explanation)
    explanation.push_back(
        {{"query_code", c.query_code}, {"matched_code", c.matched_code}, {"contribution", c.contribution}});
  return {{"method", to_string(rec.method)},
          {"image_id", rec.image_id},
          {"score", rec.score},
          {"explanation", std::move(explanation)}};
}

}  // namespace

const char* to_string(Reducer reducer) noexcept {
  switch (reducer) {
    case Reducer::none: return "none";
    case Reducer::intersection: return "intersection";
    case Reducer::shortest_title: return "shortest_title";
    case Reducer::external: return "external";
  }
  return "none";
}

Reducer parse_reducer(std::string_view name) {
  for (Reducer r : {Reducer::none, Reducer::intersection, Reducer::shortest_title, Reducer::external})
    if (name == to_string(r)) return r;
  throw Error(ErrorKind::format, "unknown reducer \"" + std::string(name) + "\"");
}

void PipelineConfig::validate() const {
  if (reducer == Reducer::external && (!external_cmd || external_cmd->empty()))
    throw Error(ErrorKind::format, "reducer \"external\" requires external_cmd");
  if (!(idf_impact >= 0.0)) throw Error(ErrorKind::format, "idf_impact must be >= 0");
}

PipelineConfig PipelineConfig::from_json(std::string_view json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::format, std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::format, "config: expected a JSON object");
  PipelineConfig cfg;
  try {
    if (j.contains("vocab_path")) cfg.vocab_path = resolve(base_dir, j.at("vocab_path").get<std::string>());
    if (j.contains("vocab_format")) cfg.vocab_format = parse_vocab_format(j.at("vocab_format").get<std::string>());
    auto opt_path = [&](const char* key, std::optional<std::filesystem::path>& out) {
      if (j.contains(key) && !j.at(key).is_null()) out = resolve(base_dir, j.at(key).get<std::string>());
    };
    opt_path("rules_path", cfg.rules_path);
    opt_path("alias_map_path", cfg.alias_map_path);
    opt_path("corpus_index_path", cfg.corpus_index_path);
    cfg.run_singleton = j.value("run_singleton", false);
    if (j.contains("reducer")) cfg.reducer = parse_reducer(j.at("reducer").get<std::string>());
    if (j.contains("external_cmd") && !j.at("external_cmd").is_null())
      cfg.external_cmd = j.at("external_cmd").get<std::string>();
    if (j.contains("external_timeout_s"))
      cfg.external_timeout = std::chrono::milliseconds(
          static_cast<long long>(j.at("external_timeout_s").get<double>() * 1000.0));
    cfg.idf_impact = j.value("idf_impact", 1.0);
    if (j.contains("detector_cmd") && !j.at("detector_cmd").is_null())
      cfg.detector_cmd = j.at("detector_cmd").get<std::string>();
    if (j.contains("detector_timeout_s"))
      cfg.detector_timeout = std::chrono::milliseconds(
          static_cast<long long>(j.at("detector_timeout_s").get<double>() * 1000.0));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::format, std::string("config: ") + e.what());
  }
  return cfg;
}

PipelineConfig PipelineConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str(), path.parent_path());
}

std::string PipelineConfig::to_json() const {
  ordered_json j;
  auto opt = [](const auto& o) -> ordered_json {
    if (!o) return nullptr;
    if constexpr (std::is_same_v<std::decay_t<decltype(*o)>, std::filesystem::path>)
      return o->string();
    else
      return *o;
  };
  j["vocab_path"] = vocab_path.string();
  j["vocab_format"] = vocab_format == VocabFormat::jsonl ? "jsonl" : "tsv";
  j["rules_path"] = opt(rules_path);
  j["alias_map_path"] = opt(alias_map_path);
  j["corpus_index_path"] = opt(corpus_index_path);
  j["run_singleton"] = run_singleton;
  j["reducer"] = to_string(reducer);
  j["external_cmd"] = opt(external_cmd);
  j["external_timeout_s"] = static_cast<double>(external_timeout.count()) / 1000.0;
  j["idf_impact"] = idf_impact;
  j["detector_cmd"] = opt(detector_cmd);
  j["detector_timeout_s"] = static_cast<double>(detector_timeout.count()) / 1000.0;
  return j.dump(2);
}

LabelDocument parse_label_document(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::format, std::string("label document: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::format, "label document: expected a JSON object");
  if (!j.contains("labels")) throw Error(ErrorKind::format, "label document: missing \"labels\"");
  LabelDocument doc;
  try {
    doc.image_id = j.value("image_id", "");
    for (const auto& label : j.at("labels").get<std::vector<std::string>>()) {
      std::string norm = text::normalize_term(label);
      if (!norm.empty()) doc.labels.insert(std::move(norm));
    }
    if (j.contains("detections")) {
      for (const json& d : j.at("detections")) {
        Detection det;
        det.label = text::normalize_term(d.at("label").get<std::string>());
        det.confidence = d.value("confidence", 0.0);
        if (det.confidence < 0.0 || det.confidence > 1.0)
          throw Error(ErrorKind::format, "label document: confidence outside [0, 1]");
        if (d.contains("bbox")) {
          const auto box = d.at("bbox").get<std::vector<double>>();
          if (box.size() != 4) throw Error(ErrorKind::format, "label document: bbox needs 4 numbers");
          std::copy(box.begin(), box.end(), det.bbox);
        }
        if (!det.label.empty()) doc.labels.insert(det.label);
        doc.detections.push_back(std::move(det));
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::format, std::string("label document: ") + e.what());
  }
  return doc;
}

std::string to_json(const LabelDocument& doc) {
  ordered_json j;
  j["image_id"] = doc.image_id;
  j["labels"] = doc.labels;
  ordered_json dets = ordered_json::array();
  for (const auto& d : doc.detections)
    dets.push_back({{"label", d.label},
                    {"confidence", d.confidence},
                    {"bbox", {d.bbox[0], d.bbox[1], d.bbox[2], d.bbox[3]}}});
  j["detections"] = std::move(dets);
  return j.dump();
}

std::string to_json(const Recommendation& rec, int indent) {
  return recommendation_json(rec).dump(indent);
}

std::string to_json(const PipelineReport& report, int indent) {
  ordered_json j;
  j["image_id"] = report.image_id;
  j["labels"] = report.labels;
  j["codes_detected"] = report.codes_detected;
  j["codes_inferred"] = report.codes_inferred;
  j["codes_final"] = report.codes_final;
  ordered_json recs = ordered_json::object();
  for (Method m : kAllMethods) {
    auto it = report.recommendations.find(m);
    recs[to_string(m)] = (it != report.recommendations.end() && it->second)
                             ? recommendation_json(*it->second)
                             : ordered_json(nullptr);
  }
  j["recommendations"] = std::move(recs);
  j["warnings"] = report.warnings;
  return j.dump(indent);
}

AliasMap load_alias_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open alias map " + path.string());
  try {
    json j = json::parse(in);
    if (!j.is_object()) throw Error(ErrorKind::format, "alias map must be a JSON object");
    return j.get<AliasMap>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::format, std::string("alias map: ") + e.what());
  }
}

Pipeline::Pipeline(PipelineConfig config) : config_(std::move(config)) {
  config_.validate();
  LoadReport report;
  vocab_ = run_stage("load", [&] { return Vocabulary::load_file(config_.vocab_path, config_.vocab_format, &report); });
  load_warnings_ = std::move(report.warnings);
  if (report.skipped > 0)
    load_warnings_.push_back("vocabulary: skipped " + std::to_string(report.skipped) + " record(s)");
  run_stage("load", [&] {
    if (config_.rules_path) rules_ = RuleSet::load_file(*config_.rules_path);
    if (config_.alias_map_path) aliases_ = load_alias_map(*config_.alias_map_path);
    if (config_.corpus_index_path) index_ = CorpusIndex::load_file(*config_.corpus_index_path);
  });
}

Pipeline::Pipeline(PipelineConfig config, Vocabulary vocab, RuleSet rules, AliasMap aliases,
                   std::optional<CorpusIndex> index)
    : config_(std::move(config)),
      vocab_(std::move(vocab)),
      rules_(std::move(rules)),
      aliases_(std::move(aliases)),
      index_(std::move(index)) {
  config_.validate();
}

LabelDocument Pipeline::detect(const std::filesystem::path& image) const {
  return run_stage("detect", [&] {
    if (!config_.detector_cmd || config_.detector_cmd->empty())
      throw Error(ErrorKind::detector, "no detector command configured");
    std::string cmd = *config_.detector_cmd;
    const std::string quoted = shell_quote(image.string());
    if (auto pos = cmd.find("{image}"); pos != std::string::npos)
      cmd.replace(pos, 7, quoted);
    else
      cmd += " --image " + quoted;
    CommandResult run;
    try {
      run = run_command(cmd, "", config_.detector_timeout);
    } catch (const Error& e) {
      throw Error(ErrorKind::detector, e.what());
    }
    if (run.timed_out) throw Error(ErrorKind::detector, "detector timed out");
    if (run.exit_status != 0)
      throw Error(ErrorKind::detector, "detector exited with status " + std::to_string(run.exit_status) +
                                           (run.out.empty() ? "" : ": " + text::trim(run.out)));
    LabelDocument doc;
    try {
      doc = parse_label_document(run.out);
    } catch (const Error& e) {
      throw Error(ErrorKind::detector, std::string("detector output: ") + e.what());
    }
    if (doc.image_id.empty()) doc.image_id = image.filename().string();
    return doc;
  });
}

PipelineReport Pipeline::classify(const LabelDocument& input) const {
  PipelineReport report;
  report.image_id = input.image_id;

  report.labels = run_stage("normalize", [&] {
    LabelSet labels = normalize_labels({input.labels.begin(), input.labels.end()}, aliases_);
    if (labels.empty()) throw Error(ErrorKind::empty_label_set, "no labels to classify");
    return labels;
  });

  report.codes_detected = run_stage("map", [&] {
    return map_keywords(report.labels, vocab_, config_.run_singleton).codes;
  });
  if (report.codes_detected.empty()) report.warnings.push_back("no vocabulary codes matched the labels");

  report.codes_inferred = run_stage("infer", [&] {
    CodeSet inferred = infer(report.codes_detected, report.labels, rules_);
    std::erase_if(inferred, [&](const std::string& c) { return report.codes_detected.contains(c); });
    return inferred;
  });

  CodeSet reduced = run_stage("reduce", [&]() -> CodeSet {
    switch (config_.reducer) {
      case Reducer::none:
        return report.codes_detected;
      case Reducer::intersection:
        return reduce_intersection(report.codes_detected, map_descriptions(report.labels, vocab_));
      case Reducer::shortest_title:
        if (report.codes_detected.empty()) return {};
        return reduce_shortest_title(report.codes_detected, report.labels, vocab_);
      case Reducer::external:
        if (report.codes_detected.empty()) return {};
        try {
          return reduce_external(report.codes_detected, {*config_.external_cmd, config_.external_timeout},
                                 vocab_, &report.warnings);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::external_command) throw;
          report.warnings.push_back(std::string("external reducer failed, keeping unreduced codes: ") + e.what());
          return report.codes_detected;
        }
    }
    return report.codes_detected;
  });
  report.codes_final = std::move(reduced);
  report.codes_final.insert(report.codes_inferred.begin(), report.codes_inferred.end());
  return report;
}

PipelineReport Pipeline::classify_and_recommend(const LabelDocument& input) const {
  PipelineReport report = classify(input);
  if (!index_) {
    report.warnings.push_back("no corpus index loaded; recommendations skipped");
    return report;
  }
  if (report.codes_final.empty()) {
    report.warnings.push_back("no codes to recommend from");
    return report;
  }
  report.recommendations = run_stage("recommend", [&] {
    return index_->recommend_all(report.codes_final, config_.idf_impact);
  });
  return report;
}

PipelineReport Pipeline::classify_and_recommend(const std::filesystem::path& image) const {
  return classify_and_recommend(detect(image));
}

}  // namespace iconsift
