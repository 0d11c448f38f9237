#include "hermes/errors.hpp"
#include "hermes/harvest.hpp"
#include "hermes/toml.hpp"
#include "hermes/util.hpp"

#include <algorithm>
#include <set>

namespace hermes {

namespace {

bool is_repository_url_key(const std::string& key) {
    static const std::set<std::string> kRepoKeys = {"repository", "repo", "source",
                                                    "source code", "sourcecode", "github",
                                                    "gitlab"};
    return kRepoKeys.count(util::to_lower(key)) > 0;
}

std::optional<PersonRef> person_from_manifest(const toml::Value& entry) {
    if (!entry.is_table()) {
        return std::nullopt;
    }
    PersonRef p;
    auto name = entry.table().find("name");
    if (name != entry.table().end() && name->second.is_string()) {
        p.full_name = name->second.str();
    }
    auto email = entry.table().find("email");
    if (email != entry.table().end() && email->second.is_string()) {
        p.email = email->second.str();
    }
    if (!p.full_name && !p.email) {
        return std::nullopt;
    }
    p.roles = {Role::Author};
    return p;
}

} // namespace

HarvestResult harvest_manifest(ExecutionContext& ctx, const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw FileNotFoundError("cannot open file: " + path.string());
    }
    toml::Table doc = toml::parse_file(path);

    auto project_it = doc.find("project");
    if (project_it == doc.end() || !project_it->second.is_table()) {
        throw MissingProjectTableError("manifest has no [project] table: " + path.string());
    }
    const toml::Table& project = project_it->second.table();

    HarvestResult result;
    result.metadata = new_record();
    MetadataRecord& record = result.metadata;

    std::vector<std::string> unmapped;
    bool license_missing = true;

    for (const auto& [key, value] : project) {
        if (key == "name" && value.is_string()) {
            record.set("name", value.str());
        } else if (key == "version" && value.is_string()) {
            record.set("version", value.str());
        } else if (key == "description" && value.is_string()) {
            record.set("description", value.str());
        } else if (key == "authors" && value.is_array()) {
            ValueList authors;
            for (const toml::Value& entry : value.array()) {
                if (auto person = person_from_manifest(entry)) {
                    authors.emplace_back(std::move(*person));
                }
            }
            if (!authors.empty()) {
                record.set("author", Value(std::move(authors)));
            }
        } else if (key == "license") {
            // Either a plain SPDX string or a table with a "text" key; a
            // "file" reference cannot be resolved to a license term.
            if (value.is_string()) {
                record.set("license", value.str());
                license_missing = false;
            } else if (value.is_table()) {
                auto text = value.table().find("text");
                if (text != value.table().end() && text->second.is_string()) {
                    record.set("license", text->second.str());
                    license_missing = false;
                } else {
                    unmapped.push_back("license");
                }
            } else {
                unmapped.push_back("license");
            }
        } else if (key == "keywords" && value.is_array()) {
            ValueList keywords;
            for (const toml::Value& kw : value.array()) {
                if (kw.is_string()) {
                    keywords.emplace_back(kw.str());
                }
            }
            if (!keywords.empty()) {
                record.set("keywords", Value(std::move(keywords)));
            }
        } else if (key == "urls" && value.is_table()) {
            for (const auto& [url_key, url_value] : value.table()) {
                if (is_repository_url_key(url_key) && url_value.is_string() &&
                    !record.has("codeRepository")) {
                    record.set("codeRepository", url_value.str());
                } else {
                    unmapped.push_back("urls." + url_key);
                }
            }
        } else {
            unmapped.push_back(key);
        }
    }

    std::sort(unmapped.begin(), unmapped.end());
    result.meta["path"] = path.string();
    result.meta["unmapped"] = unmapped;
    // The absence of license metadata must be visible downstream, not silent.
    result.meta["license_missing"] = license_missing;

    if (license_missing) {
        ctx.log().warning("harvest.manifest", path.string() + ": no license metadata found");
    }
    return result;
}

HarvestResult ManifestHarvestPlugin::harvest(ExecutionContext& ctx) {
    return harvest_manifest(ctx, ctx.working_dir() / "pyproject.toml");
}

} // namespace hermes
