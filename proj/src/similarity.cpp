#include "iconsift/similarity.hpp"

#include "iconsift/error.hpp"

namespace iconsift {

double jaccard(const CodeSet& a, const CodeSet& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t shared = 0;
  for (const auto& code : a) shared += b.contains(code) ? 1 : 0;
  const std::size_t united = a.size() + b.size() - shared;
  return static_cast<double>(shared) / static_cast<double>(united);
}

double idf(const IdfTable& table, const std::string& code) {
  auto it = table.doc_freq.find(code);
  if (it == table.doc_freq.end() || it->second == 0)
    throw Error(ErrorKind::unknown_code, "no document frequency for code \"" + code + "\"");
  const double ratio = static_cast<double>(table.n_docs) / static_cast<double>(it->second);
  if (table.log_base == std::numbers::e) return std::log(ratio);
  return std::log(ratio) / std::log(table.log_base);
}

double idf_overlap(const CodeSet& query, const CodeSet& doc, const IdfTable& table,
                   double impact, std::vector<std::string>* warnings) {
  double score = 0.0;
  for (const auto& code : query) {
    if (!doc.contains(code)) continue;
    if (!table.doc_freq.contains(code)) {
      if (warnings) warnings->push_back("code \"" + code + "\" has no document frequency; ignored");
      continue;
    }
    score += std::pow(idf(table, code), impact);
  }
  return score;
}

double hierarchy_score(std::span<const Notation> query, std::span<const Notation> doc) {
  double score = 0.0;
  for (const Notation& q : query)
    for (const Notation& d : doc) score += hierarchy_relation(q, d);
  return score;
}

std::vector<Notation> parse_codes(const CodeSet& codes) {
  std::vector<Notation> out;
  out.reserve(codes.size());
  for (const auto& code : codes) out.push_back(Notation::parse(code));
  return out;
}

double hierarchy_score(const CodeSet& query, const CodeSet& doc) {
  const auto q = parse_codes(query);
  const auto d = parse_codes(doc);
  return hierarchy_score(q, d);
}

}  // namespace iconsift
