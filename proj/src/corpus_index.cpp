#include "iconsift/corpus_index.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "iconsift/error.hpp"
#include "iconsift/text.hpp"

namespace iconsift {

using nlohmann::json;

namespace {

constexpr const char* kCacheFormatName = "iconsift-corpus-index";

std::optional<CorpusDoc> make_doc(std::string image_id, const std::vector<std::string>& raw,
                                  std::vector<std::string>* warnings) {
  CorpusDoc doc{std::move(image_id), {}};
  for (const auto& code : raw) {
    if (auto n = Notation::try_parse(text::trim(code))) {
      doc.codes.insert(n->str());
    } else if (warnings) {
      warnings->push_back("corpus doc \"" + doc.image_id + "\": dropped invalid code \"" + code + "\"");
    }
  }
  if (doc.codes.empty()) {
    if (warnings) warnings->push_back("corpus doc \"" + doc.image_id + "\": skipped, no valid codes");
    return std::nullopt;
  }
  return doc;
}

void add_posting(CorpusIndex::Postings& postings, const std::string& key, CorpusIndex::DocId id) {
  auto& list = postings[key];
  if (list.empty() || list.back() != id) list.push_back(id);
}

}  // namespace

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "json-map" || name == "json") return CorpusFormat::json_map;
  if (name == "tsv") return CorpusFormat::tsv;
  throw Error(ErrorKind::format, "unknown corpus format \"" + std::string(name) + "\"");
}

const char* to_string(Method method) noexcept {
  switch (method) {
    case Method::hierarchy: return "hierarchy";
    case Method::idf: return "idf";
    case Method::jaccard: return "jaccard";
  }
  return "hierarchy";
}

Method parse_method(std::string_view name) {
  for (Method m : kAllMethods)
    if (name == to_string(m)) return m;
  throw Error(ErrorKind::format, "unknown method \"" + std::string(name) + "\"");
}

std::vector<CorpusDoc> ingest_corpus(std::istream& in, CorpusFormat format,
                                     std::vector<std::string>* warnings) {
  std::vector<CorpusDoc> docs;
  if (format == CorpusFormat::json_map) {
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::format, std::string("corpus: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorKind::format, "corpus: expected a JSON object");
    for (const auto& [image_id, codes] : j.items()) {
      std::vector<std::string> raw;
      try {
        raw = codes.get<std::vector<std::string>>();
      } catch (const json::exception&) {
        throw Error(ErrorKind::format, "corpus doc \"" + image_id + "\": expected an array of strings");
      }
      if (auto doc = make_doc(image_id, raw, warnings)) docs.push_back(std::move(*doc));
    }
    return docs;
  }

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error(ErrorKind::format, "corpus line " + std::to_string(line_no) + ": missing TAB");
    std::string image_id = text::trim(std::string_view(line).substr(0, tab));
    if (image_id.empty())
      throw Error(ErrorKind::format, "corpus line " + std::to_string(line_no) + ": empty image id");
    const auto raw = text::split_codes(std::string_view(line).substr(tab + 1), " \t");
    if (auto doc = make_doc(std::move(image_id), raw, warnings)) docs.push_back(std::move(*doc));
  }
  if (in.bad()) throw Error(ErrorKind::io, "failed reading corpus stream");
  return docs;
}

std::vector<CorpusDoc> ingest_corpus_file(const std::filesystem::path& path, CorpusFormat format,
                                          std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open corpus file " + path.string());
  return ingest_corpus(in, format, warnings);
}

CorpusIndex CorpusIndex::build(std::vector<CorpusDoc> docs) {
  std::sort(docs.begin(), docs.end(),
            [](const CorpusDoc& a, const CorpusDoc& b) { return a.image_id < b.image_id; });
  for (std::size_t i = 1; i < docs.size(); ++i)
    if (docs[i].image_id == docs[i - 1].image_id)
      throw Error(ErrorKind::duplicate_image_id, "duplicate image id \"" + docs[i].image_id + "\"");

  CorpusIndex idx;
  idx.docs_ = std::move(docs);
  idx.parse_docs();
  idx.idf_.n_docs = idx.docs_.size();
  for (DocId id = 0; id < idx.docs_.size(); ++id) {
    for (const Notation& code : idx.parsed_[id]) {
      add_posting(idx.postings_, code.str(), id);
      const std::size_t depth = code.depth();
      for (std::size_t up = 0; up <= 2 && up < depth; ++up)
        add_posting(idx.ancestor_postings_, up == 0 ? code.str() : code.prefix(depth - up).str(), id);
    }
  }
  // Doc ids are visited in increasing order, so every list is sorted.
  for (const auto& [code, list] : idx.postings_) idx.idf_.doc_freq.emplace(code, list.size());
  return idx;
}

void CorpusIndex::parse_docs() {
  parsed_.clear();
  parsed_.reserve(docs_.size());
  for (const CorpusDoc& doc : docs_) parsed_.push_back(parse_codes(doc.codes));

  std::unordered_map<std::string, std::uint32_t> ids;
  distinct_.clear();
  doc_code_ids_.assign(docs_.size(), {});
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    for (const Notation& code : parsed_[d]) {
      auto [it, fresh] = ids.try_emplace(code.str(), static_cast<std::uint32_t>(distinct_.size()));
      if (fresh) distinct_.push_back(code);
      doc_code_ids_[d].push_back(it->second);
    }
  }
}

std::optional<CorpusIndex::DocId> CorpusIndex::find(std::string_view image_id) const {
  auto it = std::lower_bound(docs_.begin(), docs_.end(), image_id,
                             [](const CorpusDoc& d, std::string_view id) { return d.image_id < id; });
  if (it == docs_.end() || it->image_id != image_id) return std::nullopt;
  return static_cast<DocId>(it - docs_.begin());
}

namespace {

json postings_to_json(const CorpusIndex::Postings& postings) {
  // Sorted keys keep the cache byte-stable across runs.
  std::map<std::string, const std::vector<CorpusIndex::DocId>*> ordered;
  for (const auto& [k, v] : postings) ordered.emplace(k, &v);
  json out = json::object();
  for (const auto& [k, v] : ordered) out[k] = *v;
  return out;
}

CorpusIndex::Postings postings_from_json(const json& j, std::size_t n_docs) {
  CorpusIndex::Postings out;
  for (const auto& [k, v] : j.items()) {
    auto list = v.get<std::vector<CorpusIndex::DocId>>();
    for (auto id : list)
      if (id >= n_docs) throw Error(ErrorKind::format, "index cache: posting out of range");
    out.emplace(k, std::move(list));
  }
  return out;
}

}  // namespace

void CorpusIndex::save(std::ostream& out) const {
  json j;
  j["format"] = kCacheFormatName;
  j["version"] = kFormatVersion;
  j["n_docs"] = idf_.n_docs;
  json docs = json::array();
  for (const auto& doc : docs_) docs.push_back({{"id", doc.image_id}, {"codes", doc.codes}});
  j["docs"] = std::move(docs);
  std::map<std::string, std::size_t> freq(idf_.doc_freq.begin(), idf_.doc_freq.end());
  j["doc_freq"] = freq;
  j["postings"] = postings_to_json(postings_);
  j["ancestor_postings"] = postings_to_json(ancestor_postings_);
  out << j.dump() << '\n';
}

void CorpusIndex::save_file(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write index file " + path.string());
  save(out);
  if (!out) throw Error(ErrorKind::io, "failed writing index file " + path.string());
}

CorpusIndex CorpusIndex::load(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::format, std::string("index cache: invalid JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != kCacheFormatName)
    throw Error(ErrorKind::index_version, "not an iconsift index cache");
  if (!j.contains("version") || j.at("version") != kFormatVersion)
    throw Error(ErrorKind::index_version,
                "index cache version " + (j.contains("version") ? j.at("version").dump() : "?") +
                    " does not match supported version " + std::to_string(kFormatVersion));
  CorpusIndex idx;
  try {
    for (const auto& d : j.at("docs"))
      idx.docs_.push_back({d.at("id").get<std::string>(), d.at("codes").get<CodeSet>()});
    idx.idf_.n_docs = j.at("n_docs").get<std::size_t>();
    for (const auto& [k, v] : j.at("doc_freq").items()) idx.idf_.doc_freq.emplace(k, v.get<std::size_t>());
    idx.postings_ = postings_from_json(j.at("postings"), idx.docs_.size());
    idx.ancestor_postings_ = postings_from_json(j.at("ancestor_postings"), idx.docs_.size());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::format, std::string("index cache: ") + e.what());
  }
  if (idx.idf_.n_docs != idx.docs_.size())
    throw Error(ErrorKind::format, "index cache: n_docs does not match document count");
  idx.parse_docs();
  return idx;
}

CorpusIndex CorpusIndex::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open index file " + path.string());
  return load(in);
}

std::vector<Recommendation> CorpusIndex::recommend(const CodeSet& query, Method method,
                                                   const RecommendOptions& options) const {
  if (query.empty()) throw Error(ErrorKind::empty_query, "query code set is empty");
  const std::vector<Notation> parsed_query = parse_codes(query);

  std::vector<DocId> candidates;
  auto gather = [&](const Postings& postings, const std::string& key) {
    auto it = postings.find(key);
    if (it != postings.end()) candidates.insert(candidates.end(), it->second.begin(), it->second.end());
  };
  for (const Notation& code : parsed_query) {
    if (method == Method::hierarchy) {
      const std::size_t depth = code.depth();
      for (std::size_t up = 0; up <= 2 && up < depth; ++up)
        gather(ancestor_postings_, code.prefix(depth - up).str());
    } else {
      gather(postings_, code.str());
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  const std::optional<DocId> excluded = options.exclude ? find(*options.exclude) : std::nullopt;
  // Relation of each query code to each distinct corpus code, filled on first
  // use. Summing in the same order as hierarchy_score keeps scores identical.
  std::vector<std::vector<double>> relation;
  if (method == Method::hierarchy)
    relation.assign(parsed_query.size(), std::vector<double>(distinct_.size(), -1.0));
  auto cached_hierarchy_score = [&](DocId id) {
    double score = 0.0;
    for (std::size_t q = 0; q < parsed_query.size(); ++q) {
      for (std::uint32_t c : doc_code_ids_[id]) {
        double& r = relation[q][c];
        if (r < 0.0) r = hierarchy_relation(parsed_query[q], distinct_[c]);
        score += r;
      }
    }
    return score;
  };
  std::vector<std::pair<double, DocId>> scored;
  for (DocId id : candidates) {
    if (excluded && *excluded == id) continue;
    double score = 0.0;
    switch (method) {
      case Method::hierarchy: score = cached_hierarchy_score(id); break;
      case Method::idf: score = idf_overlap(query, docs_[id].codes, idf_, options.idf_impact); break;
      case Method::jaccard: score = jaccard(query, docs_[id].codes); break;
    }
    if (score > 0.0) scored.emplace_back(score, id);
  }
  const std::size_t k = std::min(options.top_k, scored.size());
  auto better = [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  };
  std::partial_sort(scored.begin(), scored.begin() + static_cast<long>(k), scored.end(), better);
  scored.resize(k);

  std::vector<Recommendation> out;
  out.reserve(k);
  for (const auto& [score, id] : scored) {
    Recommendation rec{method, docs_[id].image_id, score, {}};
    const CodeSet& doc_codes = docs_[id].codes;
    switch (method) {
      case Method::hierarchy:
        for (const Notation& q : parsed_query)
          for (const Notation& d : parsed_[id])
            if (double r = hierarchy_relation(q, d); r > 0.0) rec.explanation.push_back({q.str(), d.str(), r});
        break;
      case Method::idf:
        for (const auto& code : query)
          if (doc_codes.contains(code) && idf_.doc_freq.contains(code))
            rec.explanation.push_back({code, code, std::pow(idf(idf_, code), options.idf_impact)});
        break;
      case Method::jaccard: {
        std::size_t shared = 0;
        for (const auto& code : query) shared += doc_codes.contains(code) ? 1 : 0;
        const double share = 1.0 / static_cast<double>(query.size() + doc_codes.size() - shared);
        for (const auto& code : query)
          if (doc_codes.contains(code)) rec.explanation.push_back({code, code, share});
        break;
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::map<Method, std::optional<Recommendation>> CorpusIndex::recommend_all(
    const CodeSet& query, double idf_impact, const std::optional<std::string>& exclude) const {
  std::map<Method, std::optional<Recommendation>> out;
  const RecommendOptions options{1, idf_impact, exclude};
  for (Method m : kAllMethods) {
    auto ranked = recommend(query, m, options);
    out[m] = ranked.empty() ? std::nullopt : std::optional<Recommendation>(std::move(ranked.front()));
  }
  return out;
}

}  // namespace iconsift
