#pragma once

#include "hermes/model.hpp"
#include "hermes/plugins.hpp"
#include "hermes/util.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hermes {

// One merged identity from the Git history (merge key: lowercase email).
struct GitIdentity {
    std::string name;
    std::string email;
    int commits_as_author = 0;
    int commits_as_committer = 0;
    util::Timestamp first_seen{};
    util::Timestamp last_seen{};
};

// Collects authors and committers from the repository history of the given
// branch (current branch when omitted). Identities sharing an email merge;
// the most frequent name spelling wins, ties broken by most recent use.
// Bot accounts are kept out of the record and reported in the meta map.
HarvestResult harvest_git(ExecutionContext& ctx, const std::filesystem::path& repo,
                          const std::optional<std::string>& branch);

// Maps a CITATION.cff file (CFF 1.2.0) onto CodeMeta terms. When
// enable_validation is set, structural validation runs before mapping.
HarvestResult harvest_cff(ExecutionContext& ctx, const std::filesystem::path& path,
                          bool enable_validation);

// Structural CFF checks; throws CffValidationError naming the offending key.
void validate_cff_text(const std::string& yaml_text);

// Reads an existing CodeMeta file; foreign contexts are tolerated and
// reported through the meta map.
HarvestResult harvest_codemeta(ExecutionContext& ctx, const std::filesystem::path& path);

// Reads a declarative project manifest (TOML, [project] table).
HarvestResult harvest_manifest(ExecutionContext& ctx, const std::filesystem::path& path);

// Adds the configured grant id as funding metadata. The meta map records
// whether a value was added.
HarvestResult harvest_funding(ExecutionContext& ctx);

// ------------------------------------------------------- plugin adapters

class GitHarvestPlugin : public HarvestPlugin {
public:
    HarvestResult harvest(ExecutionContext& ctx) override;
};

class CffHarvestPlugin : public HarvestPlugin {
public:
    HarvestResult harvest(ExecutionContext& ctx) override;
};

class CodemetaHarvestPlugin : public HarvestPlugin {
public:
    HarvestResult harvest(ExecutionContext& ctx) override;
};

class ManifestHarvestPlugin : public HarvestPlugin {
public:
    HarvestResult harvest(ExecutionContext& ctx) override;
};

class FundingHarvestPlugin : public HarvestPlugin {
public:
    HarvestResult harvest(ExecutionContext& ctx) override;
};

} // namespace hermes
