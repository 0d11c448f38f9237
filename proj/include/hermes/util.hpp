#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hermes::util {

// ------------------------------------------------------------------ files

std::string read_file(const std::filesystem::path& path);

// Writes via a temporary file in the same directory followed by rename, so
// readers never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view data);

// ------------------------------------------------------------------- time

using Timestamp = std::chrono::system_clock::time_point;

// Current wall-clock time, truncated to whole seconds. Honors the
// SOURCE_DATE_EPOCH convention for reproducible pipeline runs.
Timestamp now_utc();

std::string format_utc(Timestamp t);                     // 2024-05-01T12:00:00Z
std::optional<Timestamp> parse_utc(std::string_view s);  // inverse of format_utc

// Strict calendar check for YYYY-MM-DD strings.
bool is_valid_date(std::string_view s);

// ------------------------------------------------------------ subprocess

struct ProcessResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

// Runs argv[0] with the given arguments, feeding stdin_data to the child and
// capturing both output streams. extra_env entries are added to the child's
// environment. Throws IoError when the child cannot be spawned at all; a
// nonzero exit is reported through exit_code, not thrown.
ProcessResult run_process(const std::vector<std::string>& argv,
                          std::string_view stdin_data = {},
                          const std::optional<std::filesystem::path>& cwd = std::nullopt,
                          const std::vector<std::pair<std::string, std::string>>& extra_env = {});

// ----------------------------------------------------------------- string

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
bool starts_with(std::string_view s, std::string_view prefix);

} // namespace hermes::util
