#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "iconsift/notation.hpp"
#include "iconsift/similarity.hpp"
#include "iconsift/types.hpp"

namespace iconsift {

struct CorpusDoc {
  std::string image_id;
  CodeSet codes;

  friend bool operator==(const CorpusDoc&, const CorpusDoc&) = default;
};

enum class CorpusFormat { json_map, tsv };
CorpusFormat parse_corpus_format(std::string_view name);

/// Reads {"img": ["code", ...]} or "img<TAB>code code ...". Invalid codes are
/// dropped and documents left without codes skipped, each with a warning.
/// Throws Error(format) when the input itself is unreadable.
std::vector<CorpusDoc> ingest_corpus(std::istream& in, CorpusFormat format,
                                     std::vector<std::string>* warnings = nullptr);
std::vector<CorpusDoc> ingest_corpus_file(const std::filesystem::path& path, CorpusFormat format,
                                          std::vector<std::string>* warnings = nullptr);

enum class Method { hierarchy, idf, jaccard };
inline constexpr Method kAllMethods[] = {Method::hierarchy, Method::idf, Method::jaccard};
const char* to_string(Method method) noexcept;
Method parse_method(std::string_view name);

struct Contribution {
  std::string query_code;
  std::string matched_code;
  double contribution = 0.0;
};

struct Recommendation {
  Method method = Method::hierarchy;
  std::string image_id;
  double score = 0.0;
  /// hierarchy: every pair with a nonzero relation; idf: each shared code and
  /// its weighted idf; jaccard: each shared code with 1/|q ∪ d|.
  std::vector<Contribution> explanation;
};

struct RecommendOptions {
  std::size_t top_k = 1;
  double idf_impact = 1.0;
  std::optional<std::string> exclude;
};

/// Image corpus with IDF statistics and posting lists. Documents are kept in
/// image_id order and referenced by their position.
class CorpusIndex {
 public:
  using DocId = std::uint32_t;
  using Postings = std::unordered_map<std::string, std::vector<DocId>>;

  static constexpr int kFormatVersion = 1;

  CorpusIndex() = default;
  /// Throws Error(duplicate_image_id) or Error(malformed_notation).
  static CorpusIndex build(std::vector<CorpusDoc> docs);

  void save(std::ostream& out) const;
  void save_file(const std::filesystem::path& path) const;
  /// Throws Error(index_version) on a foreign or mismatched cache file.
  static CorpusIndex load(std::istream& in);
  static CorpusIndex load_file(const std::filesystem::path& path);

  std::size_t size() const noexcept { return docs_.size(); }
  const std::vector<CorpusDoc>& docs() const noexcept { return docs_; }
  std::span<const Notation> parsed_codes(DocId id) const { return parsed_[id]; }
  const IdfTable& idf_table() const noexcept { return idf_; }
  /// Exact-code postings.
  const Postings& postings() const noexcept { return postings_; }
  /// Docs holding a code whose self, parent or grandparent is the key.
  const Postings& ancestor_postings() const noexcept { return ancestor_postings_; }
  std::optional<DocId> find(std::string_view image_id) const;

  /// Ranked by score descending, then image_id ascending; zero scores are
  /// never returned. Throws Error(empty_query).
  std::vector<Recommendation> recommend(const CodeSet& query, Method method,
                                        const RecommendOptions& options) const;
  /// Top-1 per method; absent when a method has no positive-score candidate.
  std::map<Method, std::optional<Recommendation>> recommend_all(
      const CodeSet& query, double idf_impact,
      const std::optional<std::string>& exclude = std::nullopt) const;

  friend bool operator==(const CorpusIndex& a, const CorpusIndex& b) {
    return a.docs_ == b.docs_ && a.idf_ == b.idf_ && a.postings_ == b.postings_ &&
           a.ancestor_postings_ == b.ancestor_postings_;
  }

 private:
  void parse_docs();

  std::vector<CorpusDoc> docs_;
  std::vector<std::vector<Notation>> parsed_;
  // Distinct codes of the corpus and, per doc, their positions in it.
  std::vector<Notation> distinct_;
  std::vector<std::vector<std::uint32_t>> doc_code_ids_;
  IdfTable idf_;
  Postings postings_;
  Postings ancestor_postings_;
};

}  // namespace iconsift
