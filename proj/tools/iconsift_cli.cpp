// Command-line front end. Talks to the library only through the C API.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "iconsift/iconsift.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitExternal = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(isf_status status) {
  switch (status) {
    case ISF_OK: return kExitOk;
    case ISF_ERR_INVALID_ARGUMENT: return kExitUsage;
    case ISF_ERR_EXTERNAL_COMMAND:
    case ISF_ERR_DETECTOR: return kExitExternal;
    default: return kExitData;
  }
}

int report_failure(isf_status status) {
  std::cerr << "error: " << isf_status_string(status);
  if (*isf_last_error_stage()) std::cerr << " (stage " << isf_last_error_stage() << ")";
  std::cerr << ": " << isf_last_error() << '\n';
  return exit_code_for(status);
}

struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { isf_string_free(ptr); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_warnings(const json& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w.get<std::string>() << '\n';
}

struct ClassifyOptions {
  std::string config_path;
  std::string labels_path;
  std::string image_path;
  std::string detector_cmd;
  std::string vocab_path;
  std::string vocab_format;
  std::string rules_path;
  std::string aliases_path;
  std::string index_path;
  bool singleton = false;
  std::string reducer;
  std::string external_cmd;
  std::optional<double> external_timeout;
  std::optional<double> idf_impact;
};

void add_classify_options(CLI::App* cmd, ClassifyOptions& o) {
  auto* labels = cmd->add_option("--labels", o.labels_path, "Label document JSON file");
  auto* image = cmd->add_option("--image", o.image_path, "Image file, run through --detector-cmd");
  labels->excludes(image);
  cmd->add_option("--detector-cmd", o.detector_cmd, "Detector command emitting a label document");
  cmd->add_option("--config", o.config_path, "JSON config file (default: $ICONSIFT_CONFIG)");
  cmd->add_option("--vocab", o.vocab_path, "Vocabulary file");
  cmd->add_option("--vocab-format", o.vocab_format, "jsonl or tsv")->check(CLI::IsMember({"jsonl", "tsv"}));
  cmd->add_option("--rules", o.rules_path, "Rule file (JSON)");
  cmd->add_option("--aliases", o.aliases_path, "Alias map (JSON object label -> keyword)");
  cmd->add_flag("--singleton", o.singleton, "Also look up every label on its own");
  cmd->add_option("--reducer", o.reducer, "none, intersection, shortest_title or external")
      ->check(CLI::IsMember({"none", "intersection", "shortest_title", "external"}));
  cmd->add_option("--external-cmd", o.external_cmd, "Selector command for --reducer external");
  cmd->add_option("--external-timeout", o.external_timeout, "Selector timeout in seconds");
}

std::string absolute(const std::string& p) { return fs::absolute(p).string(); }

/// Config file (explicit or from the environment) overlaid with flags.
std::pair<json, std::string> build_config(const ClassifyOptions& o) {
  json cfg = json::object();
  std::string base_dir;
  std::string config_path = o.config_path;
  if (config_path.empty())
    if (const char* env = std::getenv("ICONSIFT_CONFIG")) config_path = env;
  if (!config_path.empty()) {
    try {
      cfg = json::parse(read_file(config_path));
    } catch (const json::exception& e) {
      throw UsageError("config " + config_path + ": " + e.what());
    }
    if (!cfg.is_object()) throw UsageError("config " + config_path + ": expected a JSON object");
    base_dir = fs::absolute(config_path).parent_path().string();
  }
  if (!o.vocab_path.empty()) cfg["vocab_path"] = absolute(o.vocab_path);
  if (!o.vocab_format.empty()) cfg["vocab_format"] = o.vocab_format;
  if (!o.rules_path.empty()) cfg["rules_path"] = absolute(o.rules_path);
  if (!o.aliases_path.empty()) cfg["alias_map_path"] = absolute(o.aliases_path);
  if (!o.index_path.empty()) cfg["corpus_index_path"] = absolute(o.index_path);
  if (o.singleton) cfg["run_singleton"] = true;
  if (!o.reducer.empty()) cfg["reducer"] = o.reducer;
  if (!o.external_cmd.empty()) cfg["external_cmd"] = o.external_cmd;
  if (o.external_timeout) cfg["external_timeout_s"] = *o.external_timeout;
  if (o.idf_impact) cfg["idf_impact"] = *o.idf_impact;
  if (!o.detector_cmd.empty()) cfg["detector_cmd"] = o.detector_cmd;

  if (!cfg.contains("vocab_path")) throw UsageError("a vocabulary is required (--vocab or config vocab_path)");
  if (o.labels_path.empty() && o.image_path.empty()) throw UsageError("one of --labels or --image is required");
  if (!o.image_path.empty() && !cfg.contains("detector_cmd"))
    throw UsageError("--image requires --detector-cmd (or config detector_cmd)");
  if (cfg.value("reducer", "none") == "external" && !cfg.contains("external_cmd"))
    throw UsageError("--reducer external requires --external-cmd");
  return {cfg, base_dir};
}

int run_classify(const ClassifyOptions& o, bool recommend) {
  auto [cfg, base_dir] = build_config(o);
  if (recommend && !cfg.contains("corpus_index_path"))
    throw UsageError("pipeline requires --index (or config corpus_index_path)");

  isf_pipeline* pipeline = nullptr;
  if (isf_status s = isf_pipeline_create(cfg.dump().c_str(), base_dir.empty() ? nullptr : base_dir.c_str(),
                                         &pipeline);
      s != ISF_OK)
    return report_failure(s);
  std::unique_ptr<isf_pipeline, decltype(&isf_pipeline_free)> guard(pipeline, isf_pipeline_free);
  for (size_t i = 0; i < isf_pipeline_warning_count(pipeline); ++i)
    std::cerr << "warning: " << isf_pipeline_warning(pipeline, i) << '\n';

  std::string labels_json;
  if (!o.labels_path.empty()) {
    try {
      labels_json = read_file(o.labels_path);
    } catch (const std::exception& e) {
      std::cerr << "error: IoError: " << e.what() << '\n';
      return kExitData;
    }
  }
  OwnedString report;
  const isf_status s = isf_pipeline_run(pipeline, labels_json.empty() ? nullptr : labels_json.c_str(),
                                        o.image_path.empty() ? nullptr : o.image_path.c_str(),
                                        recommend ? 1 : 0, &report.ptr);
  if (s != ISF_OK) return report_failure(s);
  print_warnings(json::parse(report.ptr).at("warnings"));
  std::cout << report.ptr << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iconclass code mapping and artwork recommendation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(isf_version()));

  // index build
  auto* index_cmd = app.add_subcommand("index", "Corpus index operations");
  index_cmd->require_subcommand(1);
  auto* build_cmd = index_cmd->add_subcommand("build", "Build an index cache from a corpus");
  std::string corpus_path, corpus_format = "json-map", out_path;
  build_cmd->add_option("--corpus", corpus_path, "Corpus file")->required();
  build_cmd->add_option("--format", corpus_format, "json-map or tsv")
      ->check(CLI::IsMember({"json-map", "tsv"}));
  build_cmd->add_option("--out", out_path, "Index cache output file")->required();

  ClassifyOptions classify_opts;
  auto* classify_cmd = app.add_subcommand("classify", "Map labels to Iconclass codes");
  add_classify_options(classify_cmd, classify_opts);

  ClassifyOptions pipeline_opts;
  auto* pipeline_cmd = app.add_subcommand("pipeline", "Classify, then recommend related images");
  add_classify_options(pipeline_cmd, pipeline_opts);
  pipeline_cmd->add_option("--index", pipeline_opts.index_path, "Index cache file");
  pipeline_cmd->add_option("--idf-impact", pipeline_opts.idf_impact, "Exponent on per-code IDF")
      ->check(CLI::NonNegativeNumber);

  auto* recommend_cmd = app.add_subcommand("recommend", "Recommend images for a code set");
  std::string codes, index_path, method = "all", exclude;
  std::size_t top_k = 1;
  double idf_impact = 1.0;
  recommend_cmd->add_option("--codes", codes, "Codes separated by commas or spaces")->required();
  recommend_cmd->add_option("--index", index_path, "Index cache file")->required();
  recommend_cmd->add_option("--method", method, "all, hierarchy, idf or jaccard")
      ->check(CLI::IsMember({"all", "hierarchy", "idf", "jaccard"}));
  recommend_cmd->add_option("--top-k", top_k, "Results per method")->check(CLI::PositiveNumber);
  recommend_cmd->add_option("--idf-impact", idf_impact, "Exponent on per-code IDF")->check(CLI::NonNegativeNumber);
  recommend_cmd->add_option("--exclude", exclude, "Image id to leave out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*build_cmd) {
      isf_index* index = nullptr;
      if (isf_status s = isf_index_build(corpus_path.c_str(), corpus_format.c_str(), &index); s != ISF_OK)
        return report_failure(s);
      std::unique_ptr<isf_index, decltype(&isf_index_free)> guard(index, isf_index_free);
      for (size_t i = 0; i < isf_index_warning_count(index); ++i)
        std::cerr << "warning: " << isf_index_warning(index, i) << '\n';
      if (isf_status s = isf_index_save(index, out_path.c_str()); s != ISF_OK) return report_failure(s);
      json summary = {{"index", out_path},
                      {"docs", isf_index_size(index)},
                      {"codes", isf_index_code_count(index)},
                      {"warnings", isf_index_warning_count(index)}};
      std::cout << summary.dump(2) << '\n';
      return kExitOk;
    }
    if (*classify_cmd) return run_classify(classify_opts, false);
    if (*pipeline_cmd) return run_classify(pipeline_opts, true);
    if (*recommend_cmd) {
      isf_index* index = nullptr;
      if (isf_status s = isf_index_load(index_path.c_str(), &index); s != ISF_OK) return report_failure(s);
      std::unique_ptr<isf_index, decltype(&isf_index_free)> guard(index, isf_index_free);
      OwnedString out;
      const isf_status s = isf_recommend(index, codes.c_str(), method.c_str(), top_k, idf_impact,
                                         exclude.empty() ? nullptr : exclude.c_str(), &out.ptr);
      if (s != ISF_OK) return report_failure(s);
      std::cout << out.ptr << '\n';
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
