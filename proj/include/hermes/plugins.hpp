#pragma once

#include "hermes/cache.hpp"
#include "hermes/config.hpp"
#include "hermes/logging.hpp"
#include "hermes/model.hpp"
#include "hermes/receipt.hpp"
#include "hermes/toml.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hermes {

// One extension-point group per phase, rendered as "hermes.<group>".
enum class ExtensionGroup {
    Harvest,
    Process,
    Curate,
    Deposit,
    Postprocess,
};

std::string group_name(ExtensionGroup group);            // "harvest"
std::string entry_point_name(ExtensionGroup group);      // "hermes.harvest"
std::optional<ExtensionGroup> group_from_name(std::string_view name);
ExtensionGroup group_for_phase(Phase phase);

enum class Invocation {
    Cli,
    Library,
};

// Everything a plugin may see while running. Settings access is scoped: a
// plugin reads only the global configuration and its own subsection.
class ExecutionContext {
public:
    ExecutionContext(const PipelineConfig& config, CacheStore& cache,
                     std::filesystem::path working_dir, Invocation invocation, Logger& logger,
                     util::Timestamp pipeline_start);

    const PipelineConfig& config() const { return config_; }
    CacheStore& cache() { return cache_; }
    const std::filesystem::path& working_dir() const { return working_dir_; }
    Invocation invocation() const { return invocation_; }
    Logger& log() { return logger_; }
    util::Timestamp pipeline_start() const { return pipeline_start_; }

    // A copy of this context scoped to one plugin's settings subsection.
    ExecutionContext scoped(ExtensionGroup group, std::string plugin_name) const;

    // The running plugin's own subsection (empty table when absent).
    const toml::Table& plugin_settings() const { return own_settings_; }

    // Settings of (group, name); rejects every subsection other than the
    // running plugin's own.
    const toml::Table& settings_for(ExtensionGroup group, std::string_view name) const;

private:
    const PipelineConfig& config_;
    CacheStore& cache_;
    std::filesystem::path working_dir_;
    Invocation invocation_;
    Logger& logger_;
    util::Timestamp pipeline_start_;

    std::optional<ExtensionGroup> own_group_;
    std::string own_name_;
    toml::Table own_settings_;
};

class Plugin {
public:
    virtual ~Plugin() = default;
    virtual ExtensionGroup contract() const = 0;
};

class HarvestPlugin : public Plugin {
public:
    ExtensionGroup contract() const final { return ExtensionGroup::Harvest; }
    virtual HarvestResult harvest(ExecutionContext& ctx) = 0;
};

// Record in, record out. Kept minimal on purpose: nothing ships in this
// group yet and the contract may still grow.
class ProcessPlugin : public Plugin {
public:
    ExtensionGroup contract() const final { return ExtensionGroup::Process; }
    virtual MetadataRecord process(ExecutionContext& ctx, MetadataRecord record) = 0;
};

class CuratePlugin : public Plugin {
public:
    ExtensionGroup contract() const final { return ExtensionGroup::Curate; }
    virtual MetadataRecord curate(ExecutionContext& ctx, MetadataRecord record) = 0;
};

class DepositPlugin : public Plugin {
public:
    ExtensionGroup contract() const final { return ExtensionGroup::Deposit; }
    // record_bytes is the exact artifact being deposited; targets that write
    // files must preserve it byte for byte.
    virtual DepositReceipt deposit(ExecutionContext& ctx, const MetadataRecord& record,
                                   const std::string& record_bytes, bool curated) = 0;
};

class PostprocessPlugin : public Plugin {
public:
    ExtensionGroup contract() const final { return ExtensionGroup::Postprocess; }
    virtual void run(ExecutionContext& ctx, const DepositReceipt& receipt) = 0;
};

// Declarative description of a plugin's settings keys, validated against
// the plugin's config subsection before any phase runs.
struct SettingSpec {
    enum class Type { String, Boolean, Integer, StringList, Table, Date };

    std::string key;
    Type type = Type::String;
    bool required = false;
};

using SettingsSchema = std::vector<SettingSpec>;

struct PluginDescriptor {
    ExtensionGroup group;
    std::string name;
    SettingsSchema settings_schema;
    std::function<std::unique_ptr<Plugin>()> make;
};

// Name-indexed plugin registry; built once at startup, immutable afterwards.
class PluginRegistry {
public:
    // Rejects duplicate (group, name) pairs and factories whose product
    // declares a different contract than the descriptor's group.
    void register_plugin(PluginDescriptor descriptor);

    const PluginDescriptor& lookup(ExtensionGroup group, std::string_view name) const;

    std::vector<std::string> names(ExtensionGroup group) const;
    std::vector<const PluginDescriptor*> group(ExtensionGroup group) const;

    bool contains(ExtensionGroup group, std::string_view name) const;

    // Checks every configured plugin's subsection against its schema.
    void validate_settings(const PipelineConfig& config) const;

    // All built-in plugins registered.
    static PluginRegistry with_builtins();

private:
    std::map<std::string, PluginDescriptor> plugins_;  // key: "<group>/<name>"
};

void register_builtins(PluginRegistry& registry);

// Registers an external-process harvest plugin: the executable receives its
// config subsection as JSON on standard input and must print a serialized
// HarvestResult ({"metadata": ..., "meta": ...}) on standard output.
void register_external_plugin(PluginRegistry& registry, ExtensionGroup group,
                              const std::string& name, const std::string& command);

// Scans the configuration for subsections carrying a "command" key and
// registers them as external plugins when the name is not already taken.
void register_configured_external_plugins(PluginRegistry& registry,
                                          const PipelineConfig& config);

Json toml_to_json(const toml::Value& value);
Json toml_table_to_json(const toml::Table& table);

} // namespace hermes
