#include "hermes/cache.hpp"

#include "hermes/errors.hpp"
#include "hermes/util.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstring>

#include <fcntl.h>
#include <unistd.h>

namespace hermes {

namespace fs = std::filesystem;

std::string phase_name(Phase phase) {
    switch (phase) {
    case Phase::Harvest:
        return "harvest";
    case Phase::Process:
        return "process";
    case Phase::Curate:
        return "curate";
    case Phase::Deposit:
        return "deposit";
    case Phase::Postprocess:
        return "postprocess";
    }
    return "harvest";
}

std::optional<Phase> phase_from_name(std::string_view name) {
    for (Phase p : all_phases()) {
        if (phase_name(p) == name) {
            return p;
        }
    }
    return std::nullopt;
}

std::vector<Phase> all_phases() {
    return {Phase::Harvest, Phase::Process, Phase::Curate, Phase::Deposit, Phase::Postprocess};
}

std::optional<Phase> required_predecessor(Phase phase) {
    switch (phase) {
    case Phase::Harvest:
        return std::nullopt;
    case Phase::Process:
        return Phase::Harvest;
    case Phase::Curate:
        return Phase::Process;
    case Phase::Deposit:
        return Phase::Process;  // curation is optional
    case Phase::Postprocess:
        return Phase::Deposit;
    }
    return std::nullopt;
}

namespace {

bool is_safe_artifact_name(std::string_view name) {
    if (name.empty() || name == "." || name == ".." || name[0] == '.') {
        return false;
    }
    return std::all_of(name.begin(), name.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '.' || c == '_' || c == '-';
    });
}

void check_name(std::string_view name) {
    if (!is_safe_artifact_name(name)) {
        throw NameInvalidError("artifact name not allowed: \"" + std::string(name) + "\"");
    }
}

} // namespace

CacheStore::CacheStore(fs::path working_dir) : root_(std::move(working_dir)) {
    root_ /= ".hermes";
}

fs::path CacheStore::phase_dir(Phase phase) const {
    return root_ / phase_name(phase);
}

fs::path CacheStore::marker_path(Phase phase) const {
    return phase_dir(phase) / (phase_name(phase) + ".marker");
}

void CacheStore::ensure_root() const {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) {
        throw IoError("cannot create cache directory " + root_.string() + ": " + ec.message());
    }
}

bool CacheStore::has_marker(Phase phase) const {
    return fs::exists(marker_path(phase));
}

void CacheStore::write_marker(Phase phase) const {
    std::error_code ec;
    fs::create_directories(phase_dir(phase), ec);
    util::write_file_atomic(marker_path(phase), "");
}

void CacheStore::remove_marker(Phase phase) const {
    std::error_code ec;
    fs::remove(marker_path(phase), ec);
}

void CacheStore::remove_markers_after(Phase phase) const {
    bool after = false;
    for (Phase p : all_phases()) {
        if (after) {
            remove_marker(p);
        }
        if (p == phase) {
            after = true;
        }
    }
}

void CacheStore::clear_phase(Phase phase) const {
    std::error_code ec;
    fs::remove_all(phase_dir(phase), ec);
    if (ec) {
        throw IoError("cannot clear phase directory " + phase_dir(phase).string() + ": " +
                      ec.message());
    }
}

void CacheStore::store_artifact(Phase phase, std::string_view name,
                                std::string_view bytes) const {
    check_name(name);
    std::error_code ec;
    fs::create_directories(phase_dir(phase), ec);
    if (ec) {
        throw IoError("cannot create " + phase_dir(phase).string() + ": " + ec.message());
    }
    util::write_file_atomic(phase_dir(phase) / std::string(name), bytes);
}

std::string CacheStore::load_artifact(Phase phase, std::string_view name) const {
    check_name(name);
    fs::path path = phase_dir(phase) / std::string(name);
    if (!fs::exists(path)) {
        throw ArtifactNotFoundError("no artifact \"" + std::string(name) + "\" for phase " +
                                    phase_name(phase));
    }
    return util::read_file(path);
}

bool CacheStore::has_artifact(Phase phase, std::string_view name) const {
    check_name(name);
    return fs::exists(phase_dir(phase) / std::string(name));
}

std::vector<std::string> CacheStore::list_artifacts(Phase phase) const {
    std::vector<std::string> names;
    std::error_code ec;
    fs::directory_iterator it(phase_dir(phase), ec);
    if (ec) {
        return names;
    }
    for (const auto& entry : it) {
        std::string name = entry.path().filename().string();
        if (entry.is_regular_file() && !name.ends_with(".marker")) {
            names.push_back(std::move(name));
        }
    }
    std::sort(names.begin(), names.end());
    return names;
}

void CacheStore::clean(const fs::path& working_dir) {
    fs::path root = working_dir / ".hermes";
    if (!fs::exists(root)) {
        return;
    }
    std::error_code ec;
    fs::remove_all(root, ec);
    if (ec) {
        throw IoError("cannot remove " + root.string() + ": " + ec.message());
    }
}

PipelineLock::PipelineLock(const CacheStore& cache) : path_(cache.root() / "lock") {
    cache.ensure_root();
    int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0) {
        if (errno == EEXIST) {
            throw ConcurrentRunError(
                "another pipeline run is active in this working directory (lock file " +
                path_.string() + " exists; remove it or run \"hermes clean\" if stale)");
        }
        throw IoError("cannot create lock file " + path_.string() + ": " +
                      std::strerror(errno));
    }
    std::string pid = std::to_string(::getpid()) + "\n";
    ssize_t n = ::write(fd, pid.data(), pid.size());
    (void)n;
    ::close(fd);
    held_ = true;
}

PipelineLock::~PipelineLock() {
    if (held_) {
        std::error_code ec;
        fs::remove(path_, ec);
    }
}

} // namespace hermes
