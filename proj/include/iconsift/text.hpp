#pragma once

#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared by the loaders and matchers. ASCII-only case
// folding; bytes >= 0x80 pass through untouched.
namespace iconsift::text {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
/// Lowercase + trim, the only normalization applied to keywords and labels.
std::string normalize_term(std::string_view s);

/// Case-insensitive whole-word search: `term` must be bounded on both sides
/// by a non-alphanumeric byte or the string edge.
bool contains_word(std::string_view haystack, std::string_view term);

/// Splits on any of `separators` that occur outside "(...)" groups; empty
/// pieces are dropped and the rest trimmed. Keeps codes such as
/// "11H(CRISPIN & CRISPINIAN)69" intact.
std::vector<std::string> split_codes(std::string_view s, std::string_view separators);

}  // namespace iconsift::text
