#include "iconsift/text.hpp"

#include <cctype>

namespace iconsift::text {

namespace {
bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
bool is_word_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) != 0 || u >= 0x80;
}
char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }
}  // namespace

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = lower(c);
  return out;
}

std::string normalize_term(std::string_view s) { return to_lower(trim(s)); }

bool contains_word(std::string_view haystack, std::string_view term) {
  if (term.empty() || term.size() > haystack.size()) return false;
  const std::string hay = to_lower(haystack);
  const std::string needle = to_lower(term);
  for (std::size_t pos = hay.find(needle); pos != std::string::npos;
       pos = hay.find(needle, pos + 1)) {
    const bool left_ok = pos == 0 || !is_word_byte(hay[pos - 1]);
    const std::size_t end = pos + needle.size();
    const bool right_ok = end == hay.size() || !is_word_byte(hay[end]);
    if (left_ok && right_ok) return true;
  }
  return false;
}

std::vector<std::string> split_codes(std::string_view s, std::string_view separators) {
  std::vector<std::string> out;
  std::string current;
  int depth = 0;
  auto flush = [&] {
    std::string piece = trim(current);
    if (!piece.empty()) out.push_back(std::move(piece));
    current.clear();
  };
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')' && depth > 0) --depth;
    if (depth == 0 && separators.find(c) != std::string_view::npos) {
      flush();
    } else {
      current += c;
    }
  }
  flush();
  return out;
}

}  // namespace iconsift::text
