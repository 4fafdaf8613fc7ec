#include "iconsift/iconsift.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include <memory>
#include <optional>

#include <json.hpp>

#include "iconsift/corpus_index.hpp"
#include "iconsift/error.hpp"
#include "iconsift/notation.hpp"
#include "iconsift/pipeline.hpp"
#include "iconsift/text.hpp"

using namespace iconsift;
using nlohmann::ordered_json;

struct isf_index {
  CorpusIndex index;
  std::vector<std::string> warnings;
};

struct isf_pipeline {
  explicit isf_pipeline(PipelineConfig cfg) : pipeline(std::move(cfg)) {}
  Pipeline pipeline;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_stage;

isf_status status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::malformed_notation: return ISF_ERR_MALFORMED_NOTATION;
    case ErrorKind::format: return ISF_ERR_FORMAT;
    case ErrorKind::rule_format: return ISF_ERR_RULE_FORMAT;
    case ErrorKind::duplicate_image_id: return ISF_ERR_DUPLICATE_IMAGE_ID;
    case ErrorKind::unknown_code: return ISF_ERR_UNKNOWN_CODE;
    case ErrorKind::empty_label_set: return ISF_ERR_EMPTY_LABEL_SET;
    case ErrorKind::empty_query: return ISF_ERR_EMPTY_QUERY;
    case ErrorKind::external_command: return ISF_ERR_EXTERNAL_COMMAND;
    case ErrorKind::detector: return ISF_ERR_DETECTOR;
    case ErrorKind::index_version: return ISF_ERR_INDEX_VERSION;
    case ErrorKind::io: return ISF_ERR_IO;
  }
  return ISF_ERR_INTERNAL;
}

isf_status fail(isf_status status, std::string message, std::string stage = {}) {
  g_last_error = std::move(message);
  g_last_stage = std::move(stage);
  return status;
}

template <typename F>
isf_status guarded(F&& body) noexcept {
  try {
    g_last_error.clear();
    g_last_stage.clear();
    body();
    return ISF_OK;
  } catch (const Error& e) {
    return fail(status_for(e.kind()), e.what(), e.stage());
  } catch (const std::bad_alloc&) {
    return fail(ISF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ISF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(ISF_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define ISF_REQUIRE(cond, what) \
  if (!(cond)) return fail(ISF_ERR_INVALID_ARGUMENT, what)

ordered_json rec_json(const Recommendation& rec) {
  return ordered_json::parse(iconsift::to_json(rec));
}

}  // namespace

extern "C" {

const char* isf_version(void) { return "0.1.0"; }

const char* isf_status_string(isf_status status) {
  switch (status) {
    case ISF_OK: return "OK";
    case ISF_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case ISF_ERR_MALFORMED_NOTATION: return "MalformedNotation";
    case ISF_ERR_FORMAT: return "FormatError";
    case ISF_ERR_RULE_FORMAT: return "RuleFormatError";
    case ISF_ERR_DUPLICATE_IMAGE_ID: return "DuplicateImageId";
    case ISF_ERR_UNKNOWN_CODE: return "UnknownCode";
    case ISF_ERR_EMPTY_LABEL_SET: return "EmptyLabelSet";
    case ISF_ERR_EMPTY_QUERY: return "EmptyQuery";
    case ISF_ERR_EXTERNAL_COMMAND: return "ExternalCommandFailure";
    case ISF_ERR_DETECTOR: return "DetectorFailure";
    case ISF_ERR_INDEX_VERSION: return "IndexVersionMismatch";
    case ISF_ERR_IO: return "IoError";
    case ISF_ERR_INTERNAL: return "InternalError";
  }
  return "Unknown";
}

const char* isf_last_error(void) { return g_last_error.c_str(); }
const char* isf_last_error_stage(void) { return g_last_stage.c_str(); }

void isf_string_free(char* s) { std::free(s); }

isf_status isf_notation_canonical(const char* notation, char** out) {
  ISF_REQUIRE(notation && out, "notation and out must not be NULL");
  return guarded([&] { *out = dup_string(Notation::parse(notation).str()); });
}

isf_status isf_notation_parent(const char* notation, char** out) {
  ISF_REQUIRE(notation && out, "notation and out must not be NULL");
  return guarded([&] {
    auto parent = Notation::parse(notation).parent();
    *out = parent ? dup_string(parent->str()) : nullptr;
  });
}

isf_status isf_hierarchy_relation(const char* a, const char* b, double* out) {
  ISF_REQUIRE(a && b && out, "arguments must not be NULL");
  return guarded([&] { *out = hierarchy_relation(Notation::parse(a), Notation::parse(b)); });
}

isf_status isf_index_build(const char* corpus_path, const char* format, isf_index** out) {
  ISF_REQUIRE(corpus_path && out, "corpus_path and out must not be NULL");
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<isf_index>();
    auto docs = ingest_corpus_file(corpus_path, parse_corpus_format(format ? format : "json-map"),
                                   &handle->warnings);
    handle->index = CorpusIndex::build(std::move(docs));
    *out = handle.release();
  });
}

isf_status isf_index_load(const char* path, isf_index** out) {
  ISF_REQUIRE(path && out, "path and out must not be NULL");
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<isf_index>();
    handle->index = CorpusIndex::load_file(path);
    *out = handle.release();
  });
}

isf_status isf_index_save(const isf_index* index, const char* path) {
  ISF_REQUIRE(index && path, "index and path must not be NULL");
  return guarded([&] { index->index.save_file(path); });
}

size_t isf_index_size(const isf_index* index) { return index ? index->index.size() : 0; }

size_t isf_index_code_count(const isf_index* index) {
  return index ? index->index.idf_table().doc_freq.size() : 0;
}

size_t isf_index_warning_count(const isf_index* index) { return index ? index->warnings.size() : 0; }

const char* isf_index_warning(const isf_index* index, size_t i) {
  return index && i < index->warnings.size() ? index->warnings[i].c_str() : nullptr;
}

void isf_index_free(isf_index* index) { delete index; }

isf_status isf_recommend(const isf_index* index, const char* codes, const char* method, size_t top_k,
                         double idf_impact, const char* exclude, char** out_json) {
  ISF_REQUIRE(index && codes && method && out_json, "arguments must not be NULL");
  ISF_REQUIRE(top_k >= 1, "top_k must be >= 1");
  ISF_REQUIRE(idf_impact >= 0.0, "idf_impact must be >= 0");
  const std::string method_name = method;
  if (method_name != "all") {
    bool known = false;
    for (Method m : kAllMethods) known = known || method_name == to_string(m);
    ISF_REQUIRE(known, "method must be one of all, hierarchy, idf, jaccard");
  }
  *out_json = nullptr;
  return guarded([&] {
    CodeSet query;
    for (const auto& code : text::split_codes(codes, ", \t\n")) query.insert(Notation::parse(code).str());
    std::optional<std::string> excluded;
    if (exclude && *exclude) excluded = exclude;

    ordered_json j;
    j["query"] = query;
    j["method"] = method_name;
    j["idf_impact"] = idf_impact;
    if (method_name == "all") {
      ordered_json results = ordered_json::object();
      for (const auto& [m, rec] : index->index.recommend_all(query, idf_impact, excluded))
        results[to_string(m)] = rec ? rec_json(*rec) : ordered_json(nullptr);
      j["results"] = std::move(results);
    } else {
      ordered_json results = ordered_json::array();
      for (const auto& rec : index->index.recommend(query, parse_method(method_name),
                                                    RecommendOptions{top_k, idf_impact, excluded}))
        results.push_back(rec_json(rec));
      j["results"] = std::move(results);
    }
    *out_json = dup_string(j.dump(2));
  });
}

isf_status isf_pipeline_create(const char* config_json, const char* base_dir, isf_pipeline** out) {
  ISF_REQUIRE(config_json && out, "config_json and out must not be NULL");
  *out = nullptr;
  return guarded([&] {
    auto cfg = PipelineConfig::from_json(config_json, base_dir ? base_dir : "");
    if (cfg.vocab_path.empty()) throw Error(ErrorKind::format, "config: vocab_path is required");
    *out = new isf_pipeline(std::move(cfg));
  });
}

size_t isf_pipeline_warning_count(const isf_pipeline* pipeline) {
  return pipeline ? pipeline->pipeline.load_warnings().size() : 0;
}

const char* isf_pipeline_warning(const isf_pipeline* pipeline, size_t i) {
  if (!pipeline || i >= pipeline->pipeline.load_warnings().size()) return nullptr;
  return pipeline->pipeline.load_warnings()[i].c_str();
}

void isf_pipeline_free(isf_pipeline* pipeline) { delete pipeline; }

isf_status isf_pipeline_detect(const isf_pipeline* pipeline, const char* image_path, char** out_json) {
  ISF_REQUIRE(pipeline && image_path && out_json, "arguments must not be NULL");
  *out_json = nullptr;
  return guarded([&] { *out_json = dup_string(iconsift::to_json(pipeline->pipeline.detect(image_path))); });
}

isf_status isf_pipeline_run(const isf_pipeline* pipeline, const char* label_document_json,
                            const char* image_path, int recommend, char** out_report_json) {
  ISF_REQUIRE(pipeline && out_report_json, "pipeline and out_report_json must not be NULL");
  ISF_REQUIRE(label_document_json || image_path, "need a label document or an image path");
  *out_report_json = nullptr;
  return guarded([&] {
    const Pipeline& p = pipeline->pipeline;
    LabelDocument doc;
    if (label_document_json) {
      try {
        doc = parse_label_document(label_document_json);
      } catch (const Error& e) {
        throw e.with_stage("input");
      }
    } else {
      doc = p.detect(image_path);
    }
    PipelineReport report = recommend ? p.classify_and_recommend(doc) : p.classify(doc);
    *out_report_json = dup_string(iconsift::to_json(report));
  });
}

}  // extern "C"
