#pragma once

#include <set>
#include <string>

namespace iconsift {

/// Notation strings in canonical rendering. Ordered so that every output
/// (and every tie-break) is deterministic.
using CodeSet = std::set<std::string>;
/// Lowercased, trimmed detector labels or vocabulary keywords.
using LabelSet = std::set<std::string>;

}  // namespace iconsift
