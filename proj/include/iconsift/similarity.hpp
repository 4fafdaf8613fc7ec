#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "iconsift/notation.hpp"
#include "iconsift/types.hpp"

namespace iconsift {

/// Document frequencies of codes over a corpus of `n_docs` documents.
struct IdfTable {
  std::size_t n_docs = 0;
  std::unordered_map<std::string, std::size_t> doc_freq;
  /// Logarithm base; only rescales scores, rankings do not depend on it.
  double log_base = std::numbers::e;

  friend bool operator==(const IdfTable&, const IdfTable&) = default;
};

/// |a ∩ b| / |a ∪ b|; 0 when both are empty.
double jaccard(const CodeSet& a, const CodeSet& b);

/// log(N / n_c). Throws Error(unknown_code) when `code` has no document frequency.
double idf(const IdfTable& table, const std::string& code);

/// Sum over shared codes of idf(c)^impact. Shared codes missing from the
/// table contribute nothing and are reported through `warnings`.
double idf_overlap(const CodeSet& query, const CodeSet& doc, const IdfTable& table,
                   double impact, std::vector<std::string>* warnings = nullptr);

/// Sum of hierarchy_relation over all (query, doc) code pairs.
double hierarchy_score(std::span<const Notation> query, std::span<const Notation> doc);
/// Parses both sets first; throws Error(malformed_notation).
double hierarchy_score(const CodeSet& query, const CodeSet& doc);

std::vector<Notation> parse_codes(const CodeSet& codes);

}  // namespace iconsift
