#include "hermes/plugins.hpp"

#include "hermes/deposit.hpp"
#include "hermes/errors.hpp"
#include "hermes/harvest.hpp"
#include "hermes/postprocess.hpp"
#include "hermes/util.hpp"

#include <algorithm>
#include <sstream>

namespace hermes {

std::string group_name(ExtensionGroup group) {
    switch (group) {
    case ExtensionGroup::Harvest:
        return "harvest";
    case ExtensionGroup::Process:
        return "process";
    case ExtensionGroup::Curate:
        return "curate";
    case ExtensionGroup::Deposit:
        return "deposit";
    case ExtensionGroup::Postprocess:
        return "postprocess";
    }
    return "harvest";
}

std::string entry_point_name(ExtensionGroup group) {
    return "hermes." + group_name(group);
}

std::optional<ExtensionGroup> group_from_name(std::string_view name) {
    for (ExtensionGroup g : {ExtensionGroup::Harvest, ExtensionGroup::Process,
                             ExtensionGroup::Curate, ExtensionGroup::Deposit,
                             ExtensionGroup::Postprocess}) {
        if (group_name(g) == name) {
            return g;
        }
    }
    return std::nullopt;
}

ExtensionGroup group_for_phase(Phase phase) {
    switch (phase) {
    case Phase::Harvest:
        return ExtensionGroup::Harvest;
    case Phase::Process:
        return ExtensionGroup::Process;
    case Phase::Curate:
        return ExtensionGroup::Curate;
    case Phase::Deposit:
        return ExtensionGroup::Deposit;
    case Phase::Postprocess:
        return ExtensionGroup::Postprocess;
    }
    return ExtensionGroup::Harvest;
}

// ---------------------------------------------------------------- context

ExecutionContext::ExecutionContext(const PipelineConfig& config, CacheStore& cache,
                                   std::filesystem::path working_dir, Invocation invocation,
                                   Logger& logger, util::Timestamp pipeline_start)
    : config_(config),
      cache_(cache),
      working_dir_(std::move(working_dir)),
      invocation_(invocation),
      logger_(logger),
      pipeline_start_(pipeline_start) {}

ExecutionContext ExecutionContext::scoped(ExtensionGroup group, std::string plugin_name) const {
    ExecutionContext ctx(config_, cache_, working_dir_, invocation_, logger_, pipeline_start_);
    ctx.own_group_ = group;
    ctx.own_name_ = std::move(plugin_name);
    if (const toml::Table* section =
            config_.plugin_section(group_name(group), ctx.own_name_)) {
        ctx.own_settings_ = *section;
    }
    return ctx;
}

const toml::Table& ExecutionContext::settings_for(ExtensionGroup group,
                                                  std::string_view name) const {
    if (!own_group_ || *own_group_ != group || own_name_ != name) {
        throw SettingsAccessError("plugin \"" + own_name_ + "\" may not read settings of " +
                                  group_name(group) + "." + std::string(name));
    }
    return own_settings_;
}

// --------------------------------------------------------------- registry

namespace {

std::string registry_key(ExtensionGroup group, std::string_view name) {
    return group_name(group) + "/" + std::string(name);
}

} // namespace

void PluginRegistry::register_plugin(PluginDescriptor descriptor) {
    if (descriptor.name.empty()) {
        throw Error("plugin name must not be empty");
    }
    if (!descriptor.make) {
        throw Error("plugin \"" + descriptor.name + "\" has no factory");
    }
    std::string key = registry_key(descriptor.group, descriptor.name);
    if (plugins_.count(key)) {
        throw DuplicatePluginError("plugin already registered: " +
                                   entry_point_name(descriptor.group) + " \"" +
                                   descriptor.name + "\"");
    }
    // The factory's product must honor the group's execution contract.
    std::unique_ptr<Plugin> probe = descriptor.make();
    if (!probe || probe->contract() != descriptor.group) {
        throw Error("plugin \"" + descriptor.name + "\" declares contract " +
                    group_name(probe ? probe->contract() : descriptor.group) +
                    " but is registered for group " + group_name(descriptor.group));
    }
    plugins_.emplace(std::move(key), std::move(descriptor));
}

const PluginDescriptor& PluginRegistry::lookup(ExtensionGroup group,
                                               std::string_view name) const {
    auto it = plugins_.find(registry_key(group, name));
    if (it == plugins_.end()) {
        std::ostringstream msg;
        msg << "no plugin \"" << name << "\" in group " << entry_point_name(group)
            << " (available:";
        for (const std::string& n : names(group)) {
            msg << " " << n;
        }
        msg << ")";
        throw UnknownPluginError(msg.str());
    }
    return it->second;
}

std::vector<std::string> PluginRegistry::names(ExtensionGroup group) const {
    std::vector<std::string> out;
    std::string prefix = group_name(group) + "/";
    for (const auto& [key, descriptor] : plugins_) {
        if (util::starts_with(key, prefix)) {
            out.push_back(descriptor.name);
        }
    }
    return out;
}

std::vector<const PluginDescriptor*> PluginRegistry::group(ExtensionGroup group) const {
    std::vector<const PluginDescriptor*> out;
    std::string prefix = group_name(group) + "/";
    for (const auto& [key, descriptor] : plugins_) {
        if (util::starts_with(key, prefix)) {
            out.push_back(&descriptor);
        }
    }
    return out;
}

bool PluginRegistry::contains(ExtensionGroup group, std::string_view name) const {
    return plugins_.count(registry_key(group, name)) > 0;
}

namespace {

bool setting_matches(const toml::Value& value, SettingSpec::Type type) {
    switch (type) {
    case SettingSpec::Type::String:
        return value.is_string();
    case SettingSpec::Type::Boolean:
        return value.is_boolean();
    case SettingSpec::Type::Integer:
        return value.is_integer();
    case SettingSpec::Type::StringList:
        return value.is_array() &&
               std::all_of(value.array().begin(), value.array().end(),
                           [](const toml::Value& v) { return v.is_string(); });
    case SettingSpec::Type::Table:
        return value.is_table();
    case SettingSpec::Type::Date:
        return value.is_date() || value.is_string();
    }
    return false;
}

std::string type_label(SettingSpec::Type type) {
    switch (type) {
    case SettingSpec::Type::String:
        return "string";
    case SettingSpec::Type::Boolean:
        return "boolean";
    case SettingSpec::Type::Integer:
        return "integer";
    case SettingSpec::Type::StringList:
        return "list of strings";
    case SettingSpec::Type::Table:
        return "table";
    case SettingSpec::Type::Date:
        return "date";
    }
    return "value";
}

void validate_plugin_settings(const PluginDescriptor& descriptor, const PipelineConfig& config) {
    const std::string section_path = group_name(descriptor.group) + "." + descriptor.name;
    const toml::Table* section =
        config.plugin_section(group_name(descriptor.group), descriptor.name);
    for (const SettingSpec& spec : descriptor.settings_schema) {
        const toml::Value* value = nullptr;
        if (section) {
            auto it = section->find(spec.key);
            if (it != section->end()) {
                value = &it->second;
            }
        }
        if (!value) {
            if (spec.required) {
                throw SchemaError(section_path + "." + spec.key + ": required setting missing");
            }
            continue;
        }
        if (!setting_matches(*value, spec.type)) {
            throw SchemaError(section_path + "." + spec.key + ": expected " +
                              type_label(spec.type) + ", got " + value->kind_name());
        }
    }
    // Keys the schema does not know stay untouched: plugins own their section.
}

} // namespace

void PluginRegistry::validate_settings(const PipelineConfig& config) const {
    for (const std::string& name : config.harvest_sources) {
        if (contains(ExtensionGroup::Harvest, name)) {
            validate_plugin_settings(lookup(ExtensionGroup::Harvest, name), config);
        }
    }
    if (!config.deposit_target.empty() &&
        contains(ExtensionGroup::Deposit, config.deposit_target)) {
        validate_plugin_settings(lookup(ExtensionGroup::Deposit, config.deposit_target), config);
    }
    for (const std::string& name : config.postprocess_execute) {
        if (contains(ExtensionGroup::Postprocess, name)) {
            validate_plugin_settings(lookup(ExtensionGroup::Postprocess, name), config);
        }
    }
}

// ----------------------------------------------------------- toml -> json

Json toml_to_json(const toml::Value& value) {
    switch (value.kind()) {
    case toml::Value::Kind::String:
        return value.str();
    case toml::Value::Kind::Integer:
        return value.integer();
    case toml::Value::Kind::Float:
        return value.number();
    case toml::Value::Kind::Boolean:
        return value.boolean();
    case toml::Value::Kind::Date:
        return value.date_text();
    case toml::Value::Kind::Array: {
        Json arr = Json::array();
        for (const toml::Value& item : value.array()) {
            arr.push_back(toml_to_json(item));
        }
        return arr;
    }
    case toml::Value::Kind::Table:
        return toml_table_to_json(value.table());
    }
    return nullptr;
}

Json toml_table_to_json(const toml::Table& table) {
    Json out = Json::object();
    for (const auto& [key, value] : table) {
        out[key] = toml_to_json(value);
    }
    return out;
}

// --------------------------------------------------------------- external

namespace {

// Bridges an executable into the harvest contract: settings subsection in
// as JSON, HarvestResult out as JSON, nonzero exit is a failure.
class ExternalHarvestPlugin : public HarvestPlugin {
public:
    ExternalHarvestPlugin(std::string name, std::string command)
        : name_(std::move(name)), command_(std::move(command)) {}

    HarvestResult harvest(ExecutionContext& ctx) override {
        Json stdin_doc = toml_table_to_json(ctx.plugin_settings());
        util::ProcessResult proc =
            util::run_process({command_}, stdin_doc.dump(2), ctx.working_dir());
        if (proc.exit_code != 0) {
            std::string detail = util::trim(proc.err.empty() ? proc.out : proc.err);
            throw PluginFailure("external plugin \"" + name_ + "\" exited with code " +
                                std::to_string(proc.exit_code) +
                                (detail.empty() ? "" : ": " + detail));
        }
        Json doc;
        try {
            doc = Json::parse(proc.out);
        } catch (const Json::exception& e) {
            throw PluginFailure("external plugin \"" + name_ +
                                "\" produced invalid output: " + e.what());
        }
        if (!doc.is_object() || !doc.contains("metadata")) {
            throw PluginFailure("external plugin \"" + name_ +
                                "\" output must be an object with a \"metadata\" key");
        }
        HarvestResult result;
        ParsedRecord parsed = deserialize(doc["metadata"].dump());
        result.metadata = std::move(parsed.record);
        if (doc.contains("meta") && doc["meta"].is_object()) {
            result.meta = doc["meta"];
        }
        return result;
    }

private:
    std::string name_;
    std::string command_;
};

} // namespace

void register_external_plugin(PluginRegistry& registry, ExtensionGroup group,
                              const std::string& name, const std::string& command) {
    if (group != ExtensionGroup::Harvest) {
        throw Error("external plugins are only supported in group " +
                    entry_point_name(ExtensionGroup::Harvest));
    }
    PluginDescriptor descriptor;
    descriptor.group = group;
    descriptor.name = name;
    descriptor.settings_schema = {{"command", SettingSpec::Type::String, true}};
    descriptor.make = [name, command]() -> std::unique_ptr<Plugin> {
        return std::make_unique<ExternalHarvestPlugin>(name, command);
    };
    registry.register_plugin(std::move(descriptor));
}

void register_configured_external_plugins(PluginRegistry& registry,
                                          const PipelineConfig& config) {
    for (const std::string& name : config.harvest_sources) {
        if (registry.contains(ExtensionGroup::Harvest, name)) {
            continue;
        }
        const toml::Table* section = config.plugin_section("harvest", name);
        if (!section) {
            continue;
        }
        auto it = section->find("command");
        if (it != section->end() && it->second.is_string()) {
            register_external_plugin(registry, ExtensionGroup::Harvest, name, it->second.str());
        }
    }
}

// --------------------------------------------------------------- builtins

void register_builtins(PluginRegistry& registry) {
    auto add = [&registry](ExtensionGroup group, std::string name, SettingsSchema schema,
                           std::function<std::unique_ptr<Plugin>()> make) {
        PluginDescriptor d;
        d.group = group;
        d.name = std::move(name);
        d.settings_schema = std::move(schema);
        d.make = std::move(make);
        registry.register_plugin(std::move(d));
    };

    add(ExtensionGroup::Harvest, "git", {{"branch", SettingSpec::Type::String, false}},
        [] { return std::make_unique<GitHarvestPlugin>(); });
    add(ExtensionGroup::Harvest, "cff",
        {{"enable_validation", SettingSpec::Type::Boolean, false}},
        [] { return std::make_unique<CffHarvestPlugin>(); });
    add(ExtensionGroup::Harvest, "codemeta", {},
        [] { return std::make_unique<CodemetaHarvestPlugin>(); });
    add(ExtensionGroup::Harvest, "manifest", {},
        [] { return std::make_unique<ManifestHarvestPlugin>(); });
    add(ExtensionGroup::Harvest, "funding", {{"grant_id", SettingSpec::Type::String, false}},
        [] { return std::make_unique<FundingHarvestPlugin>(); });

    SettingsSchema invenio_schema = {
        {"site_url", SettingSpec::Type::String, false},
        {"communities", SettingSpec::Type::StringList, false},
        {"access_right", SettingSpec::Type::String, false},
        {"embargo_date", SettingSpec::Type::Date, false},
        {"access_conditions", SettingSpec::Type::String, false},
        {"api_paths", SettingSpec::Type::Table, false},
        {"auth_token", SettingSpec::Type::String, false},
        {"files", SettingSpec::Type::StringList, false},
        {"record_id", SettingSpec::Type::Integer, false},
        {"doi", SettingSpec::Type::String, false},
    };
    add(ExtensionGroup::Deposit, "file", {{"filename", SettingSpec::Type::String, false}},
        [] { return std::make_unique<FileDepositPlugin>(); });
    add(ExtensionGroup::Deposit, "invenio", invenio_schema,
        [] { return std::make_unique<InvenioDepositPlugin>(InvenioFlavor::Legacy); });
    add(ExtensionGroup::Deposit, "invenio_rdm", invenio_schema,
        [] { return std::make_unique<InvenioDepositPlugin>(InvenioFlavor::Rdm); });

    add(ExtensionGroup::Postprocess, "config_record_id", {},
        [] { return std::make_unique<ConfigRecordIdPlugin>(); });
    add(ExtensionGroup::Postprocess, "cff_doi", {},
        [] { return std::make_unique<CffDoiPlugin>(); });
}

PluginRegistry PluginRegistry::with_builtins() {
    PluginRegistry registry;
    register_builtins(registry);
    return registry;
}

} // namespace hermes
