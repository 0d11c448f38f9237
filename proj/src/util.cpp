#include "hermes/util.hpp"

#include "hermes/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

namespace hermes::util {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FileNotFoundError("cannot open file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw IoError("error while reading: " + path.string());
    }
    return buf.str();
}

void write_file_atomic(const fs::path& path, std::string_view data) {
    fs::path dir = path.parent_path();
    if (dir.empty()) {
        dir = ".";
    }
    std::error_code ec;
    if (!fs::exists(dir, ec)) {
        throw IoError("directory does not exist: " + dir.string());
    }

    static std::mt19937_64 rng(std::random_device{}());
    fs::path tmp = dir / (path.filename().string() + ".tmp" + std::to_string(rng()));

    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot write to: " + tmp.string());
        }
        out.write(data.data(), static_cast<std::streamsize>(data.size()));
        out.flush();
        if (!out) {
            fs::remove(tmp, ec);
            throw IoError("short write to: " + tmp.string());
        }
    }

    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot replace " + path.string() + ": " + ec.message());
    }
}

Timestamp now_utc() {
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
        char* end = nullptr;
        long long v = std::strtoll(epoch, &end, 10);
        if (end && *end == '\0') {
            return std::chrono::system_clock::from_time_t(static_cast<std::time_t>(v));
        }
    }
    auto now = std::chrono::system_clock::now();
    return std::chrono::floor<std::chrono::seconds>(now);
}

std::string format_utc(Timestamp t) {
    std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ",
                  tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                  tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

std::optional<Timestamp> parse_utc(std::string_view s) {
    std::tm tm{};
    int y, mo, d, h, mi, sec;
    char z;
    std::string str(s);
    if (std::sscanf(str.c_str(), "%d-%d-%dT%d:%d:%d%c", &y, &mo, &d, &h, &mi, &sec, &z) != 7 ||
        z != 'Z') {
        return std::nullopt;
    }
    tm.tm_year = y - 1900;
    tm.tm_mon = mo - 1;
    tm.tm_mday = d;
    tm.tm_hour = h;
    tm.tm_min = mi;
    tm.tm_sec = sec;
    std::time_t tt = timegm(&tm);
    if (tt == -1) {
        return std::nullopt;
    }
    return std::chrono::system_clock::from_time_t(tt);
}

bool is_valid_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') {
        return false;
    }
    for (size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
            return false;
        }
    }
    int y = std::stoi(std::string(s.substr(0, 4)));
    int m = std::stoi(std::string(s.substr(5, 2)));
    int d = std::stoi(std::string(s.substr(8, 2)));
    if (m < 1 || m > 12 || d < 1) {
        return false;
    }
    static const int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int max_d = days[m - 1];
    bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    if (m == 2 && leap) {
        max_d = 29;
    }
    return d <= max_d;
}

namespace {

void read_all_fd(int fd, std::string& out) {
    char buf[4096];
    for (;;) {
        ssize_t n = ::read(fd, buf, sizeof(buf));
        if (n > 0) {
            out.append(buf, static_cast<size_t>(n));
        } else if (n == 0) {
            return;
        } else if (errno != EINTR) {
            return;
        }
    }
}

} // namespace

ProcessResult run_process(const std::vector<std::string>& argv,
                          std::string_view stdin_data,
                          const std::optional<fs::path>& cwd,
                          const std::vector<std::pair<std::string, std::string>>& extra_env) {
    if (argv.empty()) {
        throw IoError("run_process: empty argv");
    }

    int in_pipe[2], out_pipe[2], err_pipe[2];
    if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0 || pipe(err_pipe) != 0) {
        throw IoError("run_process: pipe() failed");
    }

    pid_t pid = fork();
    if (pid < 0) {
        throw IoError("run_process: fork() failed");
    }

    if (pid == 0) {
        dup2(in_pipe[0], STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        dup2(err_pipe[1], STDERR_FILENO);
        for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]}) {
            close(fd);
        }
        if (cwd && chdir(cwd->c_str()) != 0) {
            _exit(127);
        }
        for (const auto& [name, value] : extra_env) {
            setenv(name.c_str(), value.c_str(), 1);
        }
        std::vector<char*> args;
        args.reserve(argv.size() + 1);
        for (const auto& a : argv) {
            args.push_back(const_cast<char*>(a.c_str()));
        }
        args.push_back(nullptr);
        execvp(args[0], args.data());
        _exit(127);
    }

    close(in_pipe[0]);
    close(out_pipe[1]);
    close(err_pipe[1]);

    size_t written = 0;
    while (written < stdin_data.size()) {
        ssize_t n = ::write(in_pipe[1], stdin_data.data() + written, stdin_data.size() - written);
        if (n > 0) {
            written += static_cast<size_t>(n);
        } else if (errno != EINTR) {
            break;
        }
    }
    close(in_pipe[1]);

    ProcessResult result;
    read_all_fd(out_pipe[0], result.out);
    read_all_fd(err_pipe[0], result.err);
    close(out_pipe[0]);
    close(err_pipe[0]);

    int status = 0;
    while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    if (WIFEXITED(status)) {
        result.exit_code = WEXITSTATUS(status);
    } else {
        result.exit_code = -1;
    }
    return result;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
        ++b;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
        --e;
    }
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            parts.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return parts;
}

bool starts_with(std::string_view s, std::string_view prefix) {
    return s.substr(0, prefix.size()) == prefix;
}

} // namespace hermes::util
