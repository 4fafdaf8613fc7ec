/*
 * iconsift C API.
 *
 * Opaque handles wrap the C++ core; every fallible call returns an
 * isf_status and leaves a message in a thread-local buffer readable through
 * isf_last_error(). Strings returned through `char**` out-parameters are
 * heap-allocated and must be released with isf_string_free().
 */
#ifndef ICONSIFT_ICONSIFT_H
#define ICONSIFT_ICONSIFT_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(ICONSIFT_BUILDING_LIBRARY)
#define ISF_API __declspec(dllexport)
#else
#define ISF_API __declspec(dllimport)
#endif
#else
#define ISF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum isf_status {
  ISF_OK = 0,
  ISF_ERR_INVALID_ARGUMENT = 1,
  ISF_ERR_MALFORMED_NOTATION = 2,
  ISF_ERR_FORMAT = 3,
  ISF_ERR_RULE_FORMAT = 4,
  ISF_ERR_DUPLICATE_IMAGE_ID = 5,
  ISF_ERR_UNKNOWN_CODE = 6,
  ISF_ERR_EMPTY_LABEL_SET = 7,
  ISF_ERR_EMPTY_QUERY = 8,
  ISF_ERR_EXTERNAL_COMMAND = 9,
  ISF_ERR_DETECTOR = 10,
  ISF_ERR_INDEX_VERSION = 11,
  ISF_ERR_IO = 12,
  ISF_ERR_INTERNAL = 99
} isf_status;

typedef struct isf_index isf_index;
typedef struct isf_pipeline isf_pipeline;

ISF_API const char* isf_version(void);
ISF_API const char* isf_status_string(isf_status status);

/* Message and pipeline stage ("" when none) of the last failure on this thread. */
ISF_API const char* isf_last_error(void);
ISF_API const char* isf_last_error_stage(void);

ISF_API void isf_string_free(char* s);

/* Canonical form of `notation`; fails with ISF_ERR_MALFORMED_NOTATION. */
ISF_API isf_status isf_notation_canonical(const char* notation, char** out);
/* Parent notation, or *out = NULL for a bare division digit. */
ISF_API isf_status isf_notation_parent(const char* notation, char** out);
/* 1.0, 0.5, 0.25 or 0.0. */
ISF_API isf_status isf_hierarchy_relation(const char* a, const char* b, double* out);

/* format: "json-map" or "tsv". Ingest warnings are kept on the handle. */
ISF_API isf_status isf_index_build(const char* corpus_path, const char* format, isf_index** out);
ISF_API isf_status isf_index_load(const char* path, isf_index** out);
ISF_API isf_status isf_index_save(const isf_index* index, const char* path);
ISF_API size_t isf_index_size(const isf_index* index);
ISF_API size_t isf_index_code_count(const isf_index* index);
ISF_API size_t isf_index_warning_count(const isf_index* index);
ISF_API const char* isf_index_warning(const isf_index* index, size_t i);
ISF_API void isf_index_free(isf_index* index);

/*
 * Recommends images for a code set.
 *
 * codes:   notations separated by commas or whitespace (outside brackets).
 * method:  "all", "hierarchy", "idf" or "jaccard".
 * exclude: image id to leave out, or NULL.
 *
 * *out_json receives {"query":[...],"method":...,"idf_impact":...,"results":R}
 * where R is an object method -> recommendation|null for "all" and a ranked
 * array of at most top_k recommendations otherwise.
 */
ISF_API isf_status isf_recommend(const isf_index* index, const char* codes, const char* method,
                                 size_t top_k, double idf_impact, const char* exclude,
                                 char** out_json);

/* config_json mirrors the pipeline configuration; relative paths resolve
 * against base_dir (may be NULL). Load warnings are kept on the handle. */
ISF_API isf_status isf_pipeline_create(const char* config_json, const char* base_dir,
                                       isf_pipeline** out);
ISF_API size_t isf_pipeline_warning_count(const isf_pipeline* pipeline);
ISF_API const char* isf_pipeline_warning(const isf_pipeline* pipeline, size_t i);
ISF_API void isf_pipeline_free(isf_pipeline* pipeline);

/* Runs the configured detector on an image; *out_json is a label document. */
ISF_API isf_status isf_pipeline_detect(const isf_pipeline* pipeline, const char* image_path,
                                       char** out_json);

/*
 * Classifies one label document (JSON text) or, when label_document_json is
 * NULL, the image at image_path via the configured detector. With
 * `recommend` nonzero the report also carries one recommendation per method.
 */
ISF_API isf_status isf_pipeline_run(const isf_pipeline* pipeline, const char* label_document_json,
                                    const char* image_path, int recommend, char** out_report_json);

#ifdef __cplusplus
}
#endif

#endif /* ICONSIFT_ICONSIFT_H */
