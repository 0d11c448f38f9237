#include "hermes/pipeline.hpp"

#include "hermes/errors.hpp"
#include "hermes/process.hpp"
#include "hermes/util.hpp"

#include <algorithm>

namespace hermes {

bool PhaseReport::all_ok() const {
    return std::all_of(outcomes.begin(), outcomes.end(),
                       [](const PluginOutcome& o) { return o.ok; });
}

Pipeline::Pipeline(PipelineConfig config, std::filesystem::path working_dir,
                   Invocation invocation, Logger& logger)
    : config_(std::move(config)),
      working_dir_(std::move(working_dir)),
      invocation_(invocation),
      logger_(logger),
      cache_(working_dir_),
      registry_(PluginRegistry::with_builtins()) {
    register_configured_external_plugins(registry_, config_);
}

PhaseReport Pipeline::run_phase(Phase phase) {
    cache_.ensure_root();
    PipelineLock lock(cache_);

    if (auto predecessor = required_predecessor(phase)) {
        if (!cache_.has_marker(*predecessor)) {
            throw PhaseOrderViolation("cannot run phase \"" + phase_name(phase) +
                                          "\": phase \"" + phase_name(*predecessor) +
                                          "\" has not completed in this working directory",
                                      phase_name(*predecessor));
        }
    }

    // Anything downstream is stale from this moment on.
    cache_.remove_markers_after(phase);
    cache_.remove_marker(phase);
    if (phase != Phase::Deposit) {
        // Deposit receipts accumulate; every other phase replaces its output.
        cache_.clear_phase(phase);
    }

    registry_.validate_settings(config_);

    ExecutionContext ctx(config_, cache_, working_dir_, invocation_, logger_,
                         util::now_utc());

    PhaseReport report;
    switch (phase) {
    case Phase::Harvest:
        report = run_harvest(ctx);
        break;
    case Phase::Process:
        report = run_process(ctx);
        break;
    case Phase::Curate:
        report = run_curate(ctx);
        break;
    case Phase::Deposit:
        report = run_deposit(ctx);
        break;
    case Phase::Postprocess:
        report = run_postprocess(ctx);
        break;
    }

    if (!report.all_ok()) {
        std::string failed;
        for (const PluginOutcome& outcome : report.outcomes) {
            if (!outcome.ok) {
                if (!failed.empty()) {
                    failed += ", ";
                }
                failed += outcome.plugin;
            }
        }
        throw PluginFailure("phase \"" + phase_name(phase) + "\" failed in plugin(s): " +
                            failed);
    }

    cache_.write_marker(phase);
    logger_.info("pipeline", "phase \"" + phase_name(phase) + "\" completed");
    return report;
}

PhaseReport Pipeline::run_harvest(ExecutionContext& ctx) {
    PhaseReport report;
    report.phase = Phase::Harvest;

    if (config_.harvest_sources.empty()) {
        throw ConfigError("no sources configured: set harvest.sources in " +
                          (config_.config_path.empty() ? std::string(kDefaultConfigFile)
                                                       : config_.config_path.string()));
    }

    for (const std::string& source : config_.harvest_sources) {
        const PluginDescriptor& descriptor = registry_.lookup(ExtensionGroup::Harvest, source);
        PluginOutcome outcome;
        outcome.plugin = source;
        try {
            std::unique_ptr<Plugin> plugin = descriptor.make();
            auto& harvester = dynamic_cast<HarvestPlugin&>(*plugin);
            ExecutionContext scoped = ctx.scoped(ExtensionGroup::Harvest, source);
            HarvestResult result = harvester.harvest(scoped);

            if (result.metadata.context() != kCodeMetaContext) {
                throw Error("harvester returned a record with a foreign context");
            }

            Json envelope = Json::object();
            envelope["source"] = source;
            envelope["collectedAt"] = util::format_utc(util::now_utc());
            envelope["metadata"] = Json::parse(serialize(result.metadata));
            envelope["meta"] = result.meta;
            cache_.store_artifact(Phase::Harvest, source + ".json", envelope.dump(2) + "\n");

            outcome.ok = true;
            outcome.message = std::to_string(result.metadata.fields().size()) + " term(s)";
            logger_.info("harvest", "source \"" + source + "\" collected " + outcome.message);
        } catch (const std::exception& e) {
            outcome.ok = false;
            outcome.message = e.what();
            // Plugin errors must be plainly visible on standard output.
            logger_.error("harvest." + source, e.what());
        }
        report.outcomes.push_back(std::move(outcome));
    }
    return report;
}

PhaseReport Pipeline::run_process(ExecutionContext& ctx) {
    PhaseReport report;
    report.phase = Phase::Process;
    PluginOutcome outcome;
    outcome.plugin = "collate";

    std::vector<CollationInput> inputs;
    for (const std::string& source : config_.harvest_sources) {
        std::string artifact = source + ".json";
        if (!cache_.has_artifact(Phase::Harvest, artifact)) {
            throw PluginFailure("harvest output for source \"" + source +
                                "\" is missing; re-run the harvest phase");
        }
        Json envelope = Json::parse(cache_.load_artifact(Phase::Harvest, artifact));

        HarvestResult result;
        ParsedRecord parsed = deserialize(envelope["metadata"].dump());
        result.metadata = std::move(parsed.record);
        if (envelope.contains("meta") && envelope["meta"].is_object()) {
            result.meta = envelope["meta"];
        }

        util::Timestamp collected_at = ctx.pipeline_start();
        if (auto t = util::parse_utc(envelope.value("collectedAt", ""))) {
            collected_at = *t;
        }
        if (collected_at > ctx.pipeline_start()) {
            throw PluginFailure("harvest artifact for \"" + source +
                                "\" is stamped in the future; clean and re-run");
        }
        inputs.push_back(CollationInput::from_result(source, std::move(result), collected_at));
    }

    auto [record, collation] = collate(inputs);
    MetadataRecord with_provenance = attach_provenance(record, collation);

    cache_.store_artifact(Phase::Process, kCollatedArtifact, serialize(with_provenance));
    cache_.store_artifact(Phase::Process, kReportArtifact, collation.to_json().dump(2) + "\n");

    outcome.ok = true;
    outcome.message = std::to_string(record.fields().size()) + " term(s), " +
                      std::to_string(collation.conflicts.size()) + " conflict(s)";
    logger_.info("process", "collated " + std::to_string(inputs.size()) + " source(s) into " +
                                outcome.message);
    report.outcomes.push_back(std::move(outcome));
    return report;
}

PhaseReport Pipeline::run_curate(ExecutionContext& ctx) {
    (void)ctx;
    PhaseReport report;
    report.phase = Phase::Curate;
    PluginOutcome outcome;
    outcome.plugin = "curate";

    if (!cache_.has_artifact(Phase::Process, kCollatedArtifact)) {
        throw MissingProcessOutputError(
            "no collated record in the cache; run the process phase first");
    }
    // The curation contract: output equals input, byte for byte.
    std::string bytes = cache_.load_artifact(Phase::Process, kCollatedArtifact);
    cache_.store_artifact(Phase::Curate, kCuratedArtifact, bytes);

    outcome.ok = true;
    outcome.message = "record marked curated";
    logger_.info("curate", "collated record approved unchanged");
    report.outcomes.push_back(std::move(outcome));
    return report;
}

PhaseReport Pipeline::run_deposit(ExecutionContext& ctx) {
    PhaseReport report;
    report.phase = Phase::Deposit;

    if (config_.deposit_target.empty()) {
        throw ConfigError("no deposit target configured: set deposit.target");
    }
    const std::string& target = config_.deposit_target;
    const PluginDescriptor& descriptor = registry_.lookup(ExtensionGroup::Deposit, target);

    bool curated = cache_.has_marker(Phase::Curate) &&
                   cache_.has_artifact(Phase::Curate, kCuratedArtifact);
    std::string bytes = curated ? cache_.load_artifact(Phase::Curate, kCuratedArtifact)
                                : cache_.load_artifact(Phase::Process, kCollatedArtifact);
    MetadataRecord record = deserialize(bytes).record;

    PluginOutcome outcome;
    outcome.plugin = target;
    try {
        std::unique_ptr<Plugin> plugin = descriptor.make();
        auto& depositor = dynamic_cast<DepositPlugin&>(*plugin);
        ExecutionContext scoped = ctx.scoped(ExtensionGroup::Deposit, target);
        DepositReceipt receipt = depositor.deposit(scoped, record, bytes, curated);

        int number = 1;
        while (cache_.has_artifact(Phase::Deposit,
                                   "receipt-" + std::to_string(number) + ".json")) {
            ++number;
        }
        cache_.store_artifact(Phase::Deposit, "receipt-" + std::to_string(number) + ".json",
                              receipt.to_json().dump(2) + "\n");

        outcome.ok = true;
        outcome.message = receipt.pid.value_or("deposited");
        report.outcomes.push_back(std::move(outcome));
    } catch (const DepositError& e) {
        // Straight to the caller: deposit failures have their own exit code.
        logger_.error("deposit." + target, e.what());
        throw;
    } catch (const std::exception& e) {
        outcome.ok = false;
        outcome.message = e.what();
        logger_.error("deposit." + target, e.what());
        report.outcomes.push_back(std::move(outcome));
    }
    return report;
}

DepositReceipt Pipeline::latest_receipt() const {
    int number = 0;
    while (cache_.has_artifact(Phase::Deposit,
                               "receipt-" + std::to_string(number + 1) + ".json")) {
        ++number;
    }
    if (number == 0) {
        throw ArtifactNotFoundError("no deposit receipt in the cache");
    }
    Json doc = Json::parse(
        cache_.load_artifact(Phase::Deposit, "receipt-" + std::to_string(number) + ".json"));
    return DepositReceipt::from_json(doc);
}

PhaseReport Pipeline::run_postprocess(ExecutionContext& ctx) {
    PhaseReport report;
    report.phase = Phase::Postprocess;

    DepositReceipt receipt = latest_receipt();

    for (const std::string& name : config_.postprocess_execute) {
        const PluginDescriptor& descriptor =
            registry_.lookup(ExtensionGroup::Postprocess, name);
        PluginOutcome outcome;
        outcome.plugin = name;
        try {
            std::unique_ptr<Plugin> plugin = descriptor.make();
            auto& task = dynamic_cast<PostprocessPlugin&>(*plugin);
            ExecutionContext scoped = ctx.scoped(ExtensionGroup::Postprocess, name);
            task.run(scoped, receipt);
            outcome.ok = true;
        } catch (const std::exception& e) {
            outcome.ok = false;
            outcome.message = e.what();
            logger_.error("postprocess." + name, e.what());
        }
        report.outcomes.push_back(std::move(outcome));
    }
    return report;
}

} // namespace hermes
