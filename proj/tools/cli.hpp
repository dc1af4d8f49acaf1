#pragma once

// Command-line front end. run() is the whole program minus process exit, so
// tests can drive it with argument vectors and string streams.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace bootci::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInternal = 1;
inline constexpr int kConfig = 2;
inline constexpr int kData = 3;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Flat key=value file; '#' starts a comment. Throws ConfigError on malformed lines.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// One real per line; blank lines are skipped. Throws DataError naming the line.
std::vector<double> read_data_file(const std::filesystem::path& path);

}  // namespace bootci::cli
