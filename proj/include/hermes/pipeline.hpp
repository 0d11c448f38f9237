#pragma once

#include "hermes/cache.hpp"
#include "hermes/config.hpp"
#include "hermes/logging.hpp"
#include "hermes/plugins.hpp"
#include "hermes/receipt.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace hermes {

struct PluginOutcome {
    std::string plugin;
    bool ok = false;
    std::string message;
};

struct PhaseReport {
    Phase phase = Phase::Harvest;
    std::vector<PluginOutcome> outcomes;

    bool all_ok() const;
};

// Drives the five phases over one working directory: enforces phase order
// through cache markers, holds the pipeline lock while a phase runs, and
// invalidates downstream markers whenever an earlier phase re-runs.
class Pipeline {
public:
    Pipeline(PipelineConfig config, std::filesystem::path working_dir, Invocation invocation,
             Logger& logger);

    PhaseReport run_phase(Phase phase);

    PluginRegistry& registry() { return registry_; }
    const PipelineConfig& config() const { return config_; }
    CacheStore& cache() { return cache_; }

    // Artifact names used between phases.
    static constexpr const char* kCollatedArtifact = "collated.json";
    static constexpr const char* kReportArtifact = "report.json";
    static constexpr const char* kCuratedArtifact = "curated.json";

    // The most recent deposit receipt in the cache.
    DepositReceipt latest_receipt() const;

private:
    PhaseReport run_harvest(ExecutionContext& ctx);
    PhaseReport run_process(ExecutionContext& ctx);
    PhaseReport run_curate(ExecutionContext& ctx);
    PhaseReport run_deposit(ExecutionContext& ctx);
    PhaseReport run_postprocess(ExecutionContext& ctx);

    PipelineConfig config_;
    std::filesystem::path working_dir_;
    Invocation invocation_;
    Logger& logger_;
    CacheStore cache_;
    PluginRegistry registry_;
};

} // namespace hermes
