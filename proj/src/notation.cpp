#include "iconsift/notation.hpp"

#include <algorithm>

#include "iconsift/error.hpp"

namespace iconsift {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_alnum(char c) {
  return is_digit(c) || is_upper(c) || (c >= 'a' && c <= 'z');
}

[[noreturn]] void malformed(std::string_view text, std::string_view why) {
  throw Error(ErrorKind::malformed_notation,
              "malformed notation \"" + std::string(text) + "\": " +
                  std::string(why));
}

}  // namespace

Notation::Notation(std::vector<Atom> path, std::size_t key_begin)
    : path_(std::move(path)), key_begin_(key_begin), raw_(render(path_)) {}

Notation Notation::parse(std::string_view text) {
  if (text.empty()) malformed(text, "empty");
  if (!is_digit(text.front())) malformed(text, "must start with a division digit");

  std::vector<Atom> path;
  std::size_t key_begin = std::string_view::npos;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (key_begin != std::string_view::npos)
      malformed(text, "key must be the final segment");
    if (is_digit(c)) {
      path.push_back({Atom::Kind::digit, std::string(1, c)});
      ++i;
    } else if (is_upper(c)) {
      path.push_back({Atom::Kind::letter, std::string(1, c)});
      ++i;
    } else if (c == '(') {
      const std::size_t close = text.find(')', i + 1);
      if (close == std::string_view::npos) malformed(text, "unbalanced '('");
      const std::string_view inner = text.substr(i + 1, close - i - 1);
      if (inner.find('(') != std::string_view::npos)
        malformed(text, "nested '('");
      if (!inner.empty() && inner.front() == '+') {
        const std::string_view chars = inner.substr(1);
        if (chars.empty()) malformed(text, "empty key");
        key_begin = path.size();
        for (char k : chars) {
          if (!is_alnum(k)) malformed(text, "key characters must be alphanumeric");
          path.push_back({Atom::Kind::key_char, std::string(1, k)});
        }
      } else {
        if (inner.empty()) malformed(text, "empty bracket text");
        path.push_back({Atom::Kind::bracket_text, std::string(inner)});
      }
      i = close + 1;
    } else if (c == ')') {
      malformed(text, "unbalanced ')'");
    } else {
      malformed(text, std::string("unexpected character '") + c + "'");
    }
  }
  if (key_begin == std::string_view::npos) key_begin = path.size();
  return Notation(std::move(path), key_begin);
}

std::optional<Notation> Notation::try_parse(std::string_view text) noexcept {
  try {
    return parse(text);
  } catch (const Error&) {
    return std::nullopt;
  }
}

Notation Notation::prefix(std::size_t length) const {
  length = std::clamp<std::size_t>(length, 1, path_.size());
  std::vector<Atom> sub(path_.begin(), path_.begin() + static_cast<long>(length));
  return Notation(std::move(sub), std::min(key_begin_, length));
}

std::optional<Notation> Notation::parent() const {
  if (path_.size() <= 1) return std::nullopt;
  return prefix(path_.size() - 1);
}

std::vector<Notation> Notation::ancestors(std::size_t max_depth) const {
  std::vector<Notation> out;
  const std::size_t n = std::min(max_depth, path_.size() - 1);
  out.reserve(n);
  for (std::size_t step = 1; step <= n; ++step)
    out.push_back(prefix(path_.size() - step));
  return out;
}

std::string render(std::span<const Atom> path) {
  std::string out;
  bool in_key = false;
  for (const Atom& atom : path) {
    switch (atom.kind) {
      case Atom::Kind::digit:
      case Atom::Kind::letter:
        out += atom.value;
        break;
      case Atom::Kind::bracket_text:
        out += '(';
        out += atom.value;
        out += ')';
        break;
      case Atom::Kind::key_char:
        if (!in_key) {
          out += "(+";
          in_key = true;
        }
        out += atom.value;
        break;
    }
  }
  if (in_key) out += ')';
  return out;
}

std::size_t common_prefix_length(const Notation& a, const Notation& b) noexcept {
  const auto pa = a.path();
  const auto pb = b.path();
  const std::size_t n = std::min(pa.size(), pb.size());
  std::size_t i = 0;
  while (i < n && pa[i] == pb[i]) ++i;
  return i;
}

double hierarchy_relation(const Notation& a, const Notation& b) noexcept {
  const std::size_t common = common_prefix_length(a, b);
  if (common == 0) return 0.0;
  const std::size_t up = std::max(a.depth(), b.depth()) - common;
  switch (up) {
    case 0: return 1.0;
    case 1: return 0.5;
    case 2: return 0.25;
    default: return 0.0;
  }
}

}  // namespace iconsift
