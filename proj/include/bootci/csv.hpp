#pragma once

// Minimal CSV and number formatting shared by the emitters and the CLI.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace bootci {

/// 17 significant digits; infinities as inf / -inf.
std::string format_number(double x);

/// Parses a number written by format_number (also accepts +inf). Throws DataError.
double parse_number(std::string_view s);

/// Splits one line on commas. No quoting: none of our fields contain commas.
std::vector<std::string> split_csv_line(std::string_view line);

std::string join_csv(const std::vector<std::string>& fields);

/// Writes to a temporary sibling and renames, so a failed run leaves no partial file.
/// Throws std::runtime_error naming the path on failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Whole file as lines, trailing '\r' stripped. Throws DataError if unreadable.
std::vector<std::string> read_lines(const std::filesystem::path& path);

}  // namespace bootci
