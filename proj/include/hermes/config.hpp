#pragma once

#include "hermes/toml.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hermes {

// Environment variables override file settings using this prefix, with dots
// replaced by double underscore: HERMES_HARVEST__GIT__BRANCH.
inline constexpr const char* kEnvPrefix = "HERMES_";

inline constexpr const char* kDefaultConfigFile = "hermes.toml";

// Settings of the two repository deposit targets (the legacy and the RDM
// flavor share one schema).
struct InvenioSettings {
    std::string site_url;
    std::vector<std::string> communities;
    std::string access_right = "open";
    std::optional<std::string> embargo_date;       // required iff embargoed
    std::optional<std::string> access_conditions;  // required iff restricted
    std::map<std::string, std::string> api_paths;  // keyword -> path override
    std::string auth_token;
    std::vector<std::string> files;
    std::optional<std::int64_t> record_id;
    std::optional<std::string> doi;
};

// The layered pipeline configuration. Resolved once per run, read-only
// afterwards; precedence: command line > environment > file > defaults.
struct PipelineConfig {
    std::vector<std::string> harvest_sources;
    bool cff_enable_validation = true;
    std::optional<std::string> git_branch;

    std::string deposit_target;  // empty when not configured
    std::string deposit_file_filename = "codemeta.json";
    InvenioSettings invenio;
    InvenioSettings invenio_rdm;

    std::vector<std::string> postprocess_execute;

    // Network timeout for repository calls; set from the command line.
    int timeout_seconds = 30;

    // Full merged tree; plugin sections keep keys the core does not know.
    toml::Table tree;
    // The file layer alone, kept so overrides can be re-applied.
    toml::Table file_tree;

    std::filesystem::path config_path;  // file the config was loaded from

    // Subsection <group>.<name>, or nullptr when absent.
    const toml::Table* plugin_section(std::string_view group, std::string_view name) const;

    const InvenioSettings& invenio_settings(std::string_view target) const;

    // Secret values that must never reach logs or rendered output.
    std::vector<std::string> secrets() const;

    // Key = value dump for diagnostics with secrets masked.
    std::string render_redacted() const;
};

// Loads and validates hermes.toml. Unknown keys inside plugin sections pass
// through; unknown top-level sections are rejected.
PipelineConfig load_config(const std::filesystem::path& path);

// Applies environment and command line overrides on top of a loaded
// configuration and re-validates. Both maps use dotted keys; environment
// names are translated via env_to_dotted_key first.
PipelineConfig resolve(const PipelineConfig& base,
                       const std::map<std::string, std::string>& env,
                       const std::map<std::string, std::string>& cli_overrides);

// HERMES_HARVEST__GIT__BRANCH -> harvest.git.branch; empty when the name is
// not a pipeline variable.
std::optional<std::string> env_to_dotted_key(std::string_view name);

// Validates a merged tree and produces the typed view. Exposed for tests.
PipelineConfig validate_tree(toml::Table tree);

} // namespace hermes
