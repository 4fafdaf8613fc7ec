#include "iconsift/vocabulary.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <unordered_set>

#include <json.hpp>

#include "iconsift/error.hpp"
#include "iconsift/text.hpp"

namespace iconsift {

using nlohmann::json;

namespace {

LabelSet normalize_keywords(const std::vector<std::string>& raw) {
  LabelSet out;
  for (const auto& k : raw) {
    std::string norm = text::normalize_term(k);
    if (!norm.empty()) out.insert(std::move(norm));
  }
  return out;
}

[[noreturn]] void format_error(std::size_t line_no, const std::string& why) {
  throw Error(ErrorKind::format,
              "vocabulary line " + std::to_string(line_no) + ": " + why);
}

struct RawRecord {
  std::string notation;
  std::string text;
  std::vector<std::string> keywords;
  std::string lang = "en";
};

RawRecord parse_jsonl(const std::string& line, std::size_t line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    format_error(line_no, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) format_error(line_no, "record is not an object");
  for (const char* field : {"notation", "text", "keywords"})
    if (!j.contains(field)) format_error(line_no, std::string("missing field \"") + field + "\"");
  RawRecord r;
  try {
    r.notation = j.at("notation").get<std::string>();
    r.text = j.at("text").get<std::string>();
    r.keywords = j.at("keywords").get<std::vector<std::string>>();
    if (j.contains("lang")) r.lang = j.at("lang").get<std::string>();
  } catch (const json::exception& e) {
    format_error(line_no, std::string("wrong field type: ") + e.what());
  }
  return r;
}

RawRecord parse_tsv(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (std::size_t tab = line.find('\t'); tab != std::string::npos;
       tab = line.find('\t', start)) {
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  fields.push_back(line.substr(start));
  if (fields.size() != 3)
    format_error(line_no, "expected 3 tab-separated fields, got " +
                              std::to_string(fields.size()));
  RawRecord r;
  r.notation = fields[0];
  r.text = fields[1];
  std::size_t kw_start = 0;
  const std::string& kws = fields[2];
  while (kw_start <= kws.size()) {
    std::size_t comma = kws.find(',', kw_start);
    if (comma == std::string::npos) comma = kws.size();
    r.keywords.push_back(kws.substr(kw_start, comma - kw_start));
    kw_start = comma + 1;
  }
  return r;
}

}  // namespace

VocabFormat parse_vocab_format(std::string_view name) {
  if (name == "jsonl") return VocabFormat::jsonl;
  if (name == "tsv") return VocabFormat::tsv;
  throw Error(ErrorKind::format, "unknown vocabulary format \"" + std::string(name) + "\"");
}

Vocabulary::Vocabulary(std::vector<VocabEntry> entries) {
  for (auto& e : entries) {
    std::string key = e.notation.str();
    entries_.insert_or_assign(std::move(key), std::move(e));
  }
  for (const auto& [code, entry] : entries_) {
    for (const auto& kw : entry.keywords) keyword_index_[kw].insert(code);
    if (!entry.keywords.empty())
      keyword_set_index_[keyword_set_key(entry.keywords)].insert(code);
  }
}

std::string Vocabulary::keyword_set_key(const LabelSet& keywords) {
  std::string key;
  for (const auto& kw : keywords) {
    if (!key.empty()) key += '\x1f';
    key += kw;
  }
  return key;
}

Vocabulary Vocabulary::load(std::istream& in, VocabFormat format, LoadReport* report) {
  LoadReport local;
  LoadReport& rep = report ? *report : local;
  std::vector<VocabEntry> entries;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    if (format == VocabFormat::tsv && line.front() == '#') continue;

    RawRecord r = format == VocabFormat::jsonl ? parse_jsonl(line, line_no)
                                               : parse_tsv(line, line_no);
    auto notation = Notation::try_parse(text::trim(r.notation));
    if (!notation) {
      ++rep.skipped;
      rep.warnings.push_back("vocabulary line " + std::to_string(line_no) +
                             ": skipped invalid notation \"" + r.notation + "\"");
      continue;
    }
    if (!seen.insert(notation->str()).second)
      rep.warnings.push_back("vocabulary line " + std::to_string(line_no) +
                             ": duplicate notation \"" + notation->str() +
                             "\", last record wins");
    entries.push_back(VocabEntry{std::move(*notation), text::trim(r.text),
                                 normalize_keywords(r.keywords), r.lang});
  }
  if (in.bad()) throw Error(ErrorKind::io, "failed reading vocabulary stream");
  Vocabulary v(std::move(entries));
  rep.loaded = v.size();
  return v;
}

Vocabulary Vocabulary::load_file(const std::filesystem::path& path,
                                 VocabFormat format, LoadReport* report) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open vocabulary file " + path.string());
  return load(in, format, report);
}

const VocabEntry* Vocabulary::find(std::string_view code) const {
  auto it = entries_.find(code);
  return it == entries_.end() ? nullptr : &it->second;
}

CodeSet Vocabulary::codes_with_keyword_set(const LabelSet& keywords) const {
  auto it = keyword_set_index_.find(keyword_set_key(keywords));
  return it == keyword_set_index_.end() ? CodeSet{} : it->second;
}

CodeSet Vocabulary::codes_with_keywords_superset(const LabelSet& keywords) const {
  if (keywords.empty()) return {};
  std::vector<const CodeSet*> postings;
  for (const auto& kw : keywords) {
    auto it = keyword_index_.find(kw);
    if (it == keyword_index_.end()) return {};
    postings.push_back(&it->second);
  }
  std::sort(postings.begin(), postings.end(),
            [](const CodeSet* a, const CodeSet* b) { return a->size() < b->size(); });
  CodeSet result = *postings.front();
  for (std::size_t i = 1; i < postings.size() && !result.empty(); ++i) {
    std::erase_if(result, [&](const std::string& c) { return !postings[i]->contains(c); });
  }
  return result;
}

CodeSet Vocabulary::codes_with_keyword(std::string_view keyword) const {
  auto it = keyword_index_.find(std::string(keyword));
  return it == keyword_index_.end() ? CodeSet{} : it->second;
}

CodeSet Vocabulary::codes_with_text_containing(std::string_view term) const {
  CodeSet out;
  const std::string needle = text::trim(term);
  if (needle.empty()) return out;
  for (const auto& [code, entry] : entries_)
    if (text::contains_word(entry.text, needle)) out.insert(code);
  return out;
}

}  // namespace iconsift
