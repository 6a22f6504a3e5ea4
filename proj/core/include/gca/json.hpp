#pragma once

// Single include point for the vendored nlohmann/json header.  All
// user-visible JSON goes through ordered_json so that emitted documents have
// a stable, insertion-ordered key layout (required for byte-identical runs).

#include <json.hpp>

namespace gca {

using Json = nlohmann::ordered_json;

}  // namespace gca
