#pragma once

// Internal JSON helpers. Parsing goes through nlohmann; dumping uses a
// small custom writer so floating-point values are always emitted with
// 17 significant digits (exact double round-trip, byte-stable output).

#include <string>

#include <nlohmann/json.hpp>

namespace osid::detail {

using ordered_json = nlohmann::ordered_json;

/// Formats a double with "%.17g". Throws on non-finite values, which are
/// never legal in serialized artifacts.
std::string format_double(double value);

/// Serializes a JSON tree compactly, doubles via format_double, object
/// keys in insertion order.
std::string dump_json(const ordered_json& j);

}  // namespace osid::detail
