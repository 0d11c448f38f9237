#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hermes {

// The five pipeline phases, in their one legal execution order.
enum class Phase {
    Harvest,
    Process,
    Curate,
    Deposit,
    Postprocess,
};

std::string phase_name(Phase phase);
std::optional<Phase> phase_from_name(std::string_view name);
std::vector<Phase> all_phases();

// The phase whose marker must exist before the given phase may run. Curate
// is optional: Deposit requires Process, not Curate.
std::optional<Phase> required_predecessor(Phase phase);

// On-disk store for inter-phase artifacts under <working_dir>/.hermes/.
// Layout: one subdirectory per phase holding the phase's artifact files
// plus a <phase>.marker file whose presence certifies completion.
class CacheStore {
public:
    explicit CacheStore(std::filesystem::path working_dir);

    const std::filesystem::path& root() const { return root_; }
    std::filesystem::path phase_dir(Phase phase) const;

    void ensure_root() const;

    bool has_marker(Phase phase) const;
    // Written last, atomically, so an interrupted phase leaves no marker.
    void write_marker(Phase phase) const;
    void remove_marker(Phase phase) const;
    // Invalidates every phase after the given one.
    void remove_markers_after(Phase phase) const;

    // Removes the phase's artifacts (markers included). Used when a phase
    // re-runs and replaces its previous output.
    void clear_phase(Phase phase) const;

    void store_artifact(Phase phase, std::string_view name, std::string_view bytes) const;
    std::string load_artifact(Phase phase, std::string_view name) const;
    bool has_artifact(Phase phase, std::string_view name) const;
    // Artifact names in the phase directory (markers excluded), sorted.
    std::vector<std::string> list_artifacts(Phase phase) const;

    // Removes the cache directory entirely. Missing cache is a no-op.
    static void clean(const std::filesystem::path& working_dir);

private:
    std::filesystem::path marker_path(Phase phase) const;

    std::filesystem::path root_;
};

// Exclusive per-working-directory lock guarding against concurrent pipeline
// runs. Throws ConcurrentRunError when the lock is already held.
class PipelineLock {
public:
    explicit PipelineLock(const CacheStore& cache);
    ~PipelineLock();

    PipelineLock(const PipelineLock&) = delete;
    PipelineLock& operator=(const PipelineLock&) = delete;

private:
    std::filesystem::path path_;
    bool held_ = false;
};

} // namespace hermes
