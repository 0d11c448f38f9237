#include "hermes/logging.hpp"

#include "hermes/util.hpp"

#include <iostream>

namespace hermes {

namespace {

const char* level_name(LogLevel level) {
    switch (level) {
    case LogLevel::Debug:
        return "DEBUG";
    case LogLevel::Info:
        return "INFO";
    case LogLevel::Warning:
        return "WARNING";
    case LogLevel::Error:
        return "ERROR";
    }
    return "INFO";
}

std::string apply_redaction(std::string text, const std::vector<std::string>& secrets) {
    for (const std::string& secret : secrets) {
        size_t pos = 0;
        while ((pos = text.find(secret, pos)) != std::string::npos) {
            text.replace(pos, secret.size(), "***");
            pos += 3;
        }
    }
    return text;
}

} // namespace

void Logger::configure(const std::filesystem::path& working_dir, bool verbose) {
    std::lock_guard lock(mutex_);
    verbose_ = verbose;
    log_path_ = working_dir / "hermes.log";
    file_.open(log_path_, std::ios::app);
    if (!file_) {
        std::cout << "WARNING log: cannot write " << log_path_.string()
                  << ", logging to standard output only" << std::endl;
    }
}

void Logger::set_mirror(bool mirror) {
    std::lock_guard lock(mutex_);
    mirror_ = mirror;
}

void Logger::add_secret(const std::string& secret) {
    if (secret.empty()) {
        return;
    }
    std::lock_guard lock(mutex_);
    secrets_.push_back(secret);
}

std::string Logger::redact(std::string text) const {
    std::lock_guard lock(mutex_);
    return apply_redaction(std::move(text), secrets_);
}

void Logger::write(LogLevel level, std::string_view module, std::string_view message) {
    std::string line = util::format_utc(util::now_utc());
    line += ' ';
    line += level_name(level);
    line += ' ';
    line += module;
    line += ": ";
    line += message;

    std::lock_guard lock(mutex_);
    line = apply_redaction(std::move(line), secrets_);
    if (file_.is_open()) {
        file_ << line << '\n';
        file_.flush();
    }
    if (mirror_ && (level != LogLevel::Debug || verbose_)) {
        std::cout << line << std::endl;
    }
}

void Logger::debug(std::string_view module, std::string_view message) {
    write(LogLevel::Debug, module, message);
}

void Logger::info(std::string_view module, std::string_view message) {
    write(LogLevel::Info, module, message);
}

void Logger::warning(std::string_view module, std::string_view message) {
    write(LogLevel::Warning, module, message);
}

void Logger::error(std::string_view module, std::string_view message) {
    write(LogLevel::Error, module, message);
}

Logger& global_logger() {
    static Logger instance;
    return instance;
}

} // namespace hermes
