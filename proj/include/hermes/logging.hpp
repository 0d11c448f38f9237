#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace hermes {

enum class LogLevel {
    Debug,
    Info,
    Warning,
    Error,
};

// Plain-text logger writing timestamped "LEVEL module: message" lines to
// hermes.log in the working directory, mirroring INFO and above to standard
// output. Secrets registered via add_secret are masked everywhere.
class Logger {
public:
    Logger() = default;

    // Opens <working_dir>/hermes.log for appending. Falls back to standard
    // output only (with a warning) when the file cannot be opened.
    void configure(const std::filesystem::path& working_dir, bool verbose);

    // Library embedders may turn the standard-output mirror off; the CLI
    // always keeps it on.
    void set_mirror(bool mirror);

    void add_secret(const std::string& secret);

    void debug(std::string_view module, std::string_view message);
    void info(std::string_view module, std::string_view message);
    void warning(std::string_view module, std::string_view message);
    void error(std::string_view module, std::string_view message);

    // Replaces every registered secret with "***".
    std::string redact(std::string text) const;

    bool verbose() const { return verbose_; }
    const std::filesystem::path& log_path() const { return log_path_; }

private:
    void write(LogLevel level, std::string_view module, std::string_view message);

    mutable std::mutex mutex_;
    std::ofstream file_;
    std::filesystem::path log_path_;
    bool verbose_ = false;
    bool mirror_ = true;
    std::vector<std::string> secrets_;
};

// Process-wide logger used by the CLI; library embedders may hold their own.
Logger& global_logger();

} // namespace hermes
