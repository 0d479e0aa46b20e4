#pragma once

#include <filesystem>
#include <string>

namespace scm {

// Fixed decimal places; the formatting used for index points in outputs.
std::string format_fixed(double v, int decimals);

// Fixed significant digits; the formatting used for rates in outputs.
std::string format_sig(double v, int digits);

// Writes content to a temporary sibling and renames it into place, so an
// interrupted run never leaves a truncated file behind.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

// Current time as UTC ISO-8601, seconds resolution.
std::string iso_timestamp_utc();

}  // namespace scm
