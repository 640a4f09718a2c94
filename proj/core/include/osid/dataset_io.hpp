#pragma once

#include <string>
#include <utility>
#include <vector>

#include "osid/core.hpp"

namespace osid {

/// Parses the feature-table CSV (header "identity,image,f0,...,f{D-1}")
/// without validating dataset invariants. Throws ParseError with the line
/// number on malformed input.
Dataset parse_feature_table(const std::string& text);

/// Reads and fully validates a feature table; throws DataError naming the
/// first violation when the dataset invariants do not hold.
Dataset read_feature_table(const std::string& path);

/// Serializes a dataset back to the canonical CSV (17-significant-digit
/// floats). Round-trips byte-identically with parse_feature_table for
/// canonically formatted input.
std::string write_feature_table(const Dataset& d);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace osid
