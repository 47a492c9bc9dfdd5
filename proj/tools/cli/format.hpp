#ifndef RELAY_CLI_FORMAT_HPP
#define RELAY_CLI_FORMAT_HPP

#include <filesystem>
#include <string>

namespace relay::cli {

/// Shortest decimal that round-trips to the same double. Locale independent.
std::string format_double(double value);

/// Writes `contents` to a sibling temporary file and renames it over `path`,
/// so readers never observe a partially written file. Throws
/// std::runtime_error when the path is not writable.
void write_file_atomically(const std::filesystem::path& path, const std::string& contents);

/// Resolves a relative output path against RELAY_RATES_OUTPUT_DIR when that
/// variable is set.
std::filesystem::path resolve_output(const std::filesystem::path& path);

/// Directory used when a command writes several files and no --out is given.
std::filesystem::path default_output_dir();

inline constexpr const char* kOutputDirEnv = "RELAY_RATES_OUTPUT_DIR";

}  // namespace relay::cli

#endif  // RELAY_CLI_FORMAT_HPP
