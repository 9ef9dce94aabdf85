#pragma once

#include <filesystem>
#include <string>

#include "nlfi/certify.hpp"
#include "nlfi/document.hpp"
#include "nlfi/partition.hpp"
#include "nlfi/rb.hpp"

namespace nlfi {

/// JSON number, or null for NaN and infinities.
json json_number(double v);

json to_json(const Certificate& c);
json to_json(const PartitionReport& r);
json to_json(const JoinupReport& r);
json to_json(const SolveResult& r);

/// Writes `content` to a sibling temporary file and renames it over `target`.
void write_atomic(const std::filesystem::path& target, const std::string& content);
void write_json_atomic(const std::filesystem::path& target, const json& j);

}  // namespace nlfi
