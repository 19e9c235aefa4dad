#pragma once

#include <json.hpp> // vendored nlohmann/json single header

namespace pmsleuth {

// ordered_json keeps insertion order, which gives us stable key order in
// every serialized artifact (reports, caches, graph dumps).
using Json = nlohmann::ordered_json;

} // namespace pmsleuth
