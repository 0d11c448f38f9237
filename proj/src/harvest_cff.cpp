#include "hermes/errors.hpp"
#include "hermes/harvest.hpp"
#include "hermes/util.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <set>

namespace hermes {

namespace {

bool is_doi_shaped(const std::string& s) {
    if (!util::starts_with(s, "10.")) {
        return false;
    }
    size_t slash = s.find('/');
    if (slash == std::string::npos || slash < 4 || slash + 1 >= s.size()) {
        return false;
    }
    for (size_t i = 3; i < slash; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
            return false;
        }
    }
    return s.find(' ') == std::string::npos;
}

std::string normalize_orcid(const std::string& raw) {
    if (is_valid_orcid(raw)) {
        return raw;
    }
    std::string candidate = "https://orcid.org/" + raw;
    if (is_valid_orcid(candidate)) {
        return candidate;
    }
    return raw;
}

[[noreturn]] void invalid(const std::string& key, const std::string& why) {
    throw CffValidationError("citation file invalid at \"" + key + "\": " + why);
}

void require_scalar(const YAML::Node& node, const std::string& key) {
    if (!node.IsScalar()) {
        invalid(key, "expected a scalar value");
    }
}

YAML::Node load_yaml(const std::string& text) {
    try {
        return YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw YamlParseError(std::string("not valid YAML: ") + e.what());
    }
}

} // namespace

void validate_cff_text(const std::string& yaml_text) {
    YAML::Node doc = load_yaml(yaml_text);
    if (!doc.IsMap()) {
        throw CffValidationError("citation file must be a YAML mapping");
    }

    for (const char* key : {"cff-version", "message", "title", "authors"}) {
        if (!doc[key]) {
            invalid(key, "mandatory key is missing");
        }
    }
    require_scalar(doc["cff-version"], "cff-version");
    require_scalar(doc["message"], "message");
    if (doc["message"].as<std::string>().empty()) {
        invalid("message", "must not be empty");
    }
    require_scalar(doc["title"], "title");

    const YAML::Node& authors = doc["authors"];
    if (!authors.IsSequence() || authors.size() == 0) {
        invalid("authors", "expected a non-empty list");
    }
    for (size_t i = 0; i < authors.size(); ++i) {
        const std::string where = "authors[" + std::to_string(i) + "]";
        const YAML::Node& a = authors[i];
        if (!a.IsMap()) {
            invalid(where, "expected a mapping");
        }
        if (!a["family-names"] && !a["given-names"] && !a["name"] && !a["alias"]) {
            invalid(where, "needs one of family-names, given-names, name, alias");
        }
        if (a["orcid"]) {
            require_scalar(a["orcid"], where + ".orcid");
            if (!is_valid_orcid(normalize_orcid(a["orcid"].as<std::string>()))) {
                invalid(where + ".orcid", "not an ORCID URI");
            }
        }
    }

    if (doc["version"]) {
        require_scalar(doc["version"], "version");
    }
    if (doc["doi"]) {
        require_scalar(doc["doi"], "doi");
        if (!is_doi_shaped(doc["doi"].as<std::string>())) {
            invalid("doi", "not a DOI");
        }
    }
    if (doc["date-released"]) {
        require_scalar(doc["date-released"], "date-released");
        if (!util::is_valid_date(doc["date-released"].as<std::string>())) {
            invalid("date-released", "expected YYYY-MM-DD");
        }
    }
    if (doc["keywords"]) {
        if (!doc["keywords"].IsSequence()) {
            invalid("keywords", "expected a list");
        }
        for (const auto& kw : doc["keywords"]) {
            if (!kw.IsScalar()) {
                invalid("keywords", "entries must be scalars");
            }
        }
    }
    if (doc["identifiers"]) {
        if (!doc["identifiers"].IsSequence()) {
            invalid("identifiers", "expected a list");
        }
        for (size_t i = 0; i < doc["identifiers"].size(); ++i) {
            const YAML::Node& entry = doc["identifiers"][i];
            const std::string where = "identifiers[" + std::to_string(i) + "]";
            if (!entry.IsMap() || !entry["type"] || !entry["value"]) {
                invalid(where, "entries need type and value");
            }
            static const std::set<std::string> kTypes = {"doi", "url", "swh", "other"};
            if (!kTypes.count(entry["type"].as<std::string>())) {
                invalid(where + ".type", "must be doi, url, swh or other");
            }
        }
    }
    if (doc["license"]) {
        const YAML::Node& lic = doc["license"];
        if (lic.IsSequence()) {
            for (const auto& l : lic) {
                if (!l.IsScalar()) {
                    invalid("license", "entries must be scalars");
                }
            }
        } else if (!lic.IsScalar()) {
            invalid("license", "expected a scalar or list");
        }
    }
    for (const char* key : {"url", "repository-code", "repository-artifact"}) {
        if (doc[key]) {
            require_scalar(doc[key], key);
        }
    }
}

namespace {

PersonRef person_from_cff(const YAML::Node& node) {
    PersonRef p;
    if (node["given-names"]) {
        p.given_names = node["given-names"].as<std::string>();
    }
    if (node["family-names"]) {
        p.family_names = node["family-names"].as<std::string>();
    }
    if (node["name"]) {
        p.full_name = node["name"].as<std::string>();
    } else if (node["alias"] && !node["given-names"] && !node["family-names"]) {
        p.full_name = node["alias"].as<std::string>();
    }
    if (node["email"]) {
        p.email = node["email"].as<std::string>();
    }
    if (node["orcid"]) {
        std::string orcid = normalize_orcid(node["orcid"].as<std::string>());
        if (is_valid_orcid(orcid)) {
            p.orcid = orcid;
        }
    }
    p.roles = {Role::Author};
    return p;
}

std::string spdx_license_url(const std::string& id) {
    if (util::starts_with(id, "http://") || util::starts_with(id, "https://")) {
        return id;
    }
    return "https://spdx.org/licenses/" + id;
}

} // namespace

HarvestResult harvest_cff(ExecutionContext& ctx, const std::filesystem::path& path,
                          bool enable_validation) {
    std::string text = util::read_file(path);  // FileNotFoundError when absent

    if (enable_validation) {
        validate_cff_text(text);
    }
    YAML::Node doc = load_yaml(text);
    if (!doc.IsMap()) {
        throw YamlParseError("citation file must be a YAML mapping: " + path.string());
    }

    HarvestResult result;
    result.metadata = new_record();
    MetadataRecord& record = result.metadata;

    std::vector<std::string> unmapped;
    ValueList identifier_values;

    for (const auto& entry : doc) {
        const std::string key = entry.first.as<std::string>();
        const YAML::Node& node = entry.second;

        if (key == "cff-version" || key == "message") {
            continue;  // citation-file plumbing, no record content
        }
        if (key == "title" && node.IsScalar()) {
            record.set("name", node.as<std::string>());
        } else if (key == "version" && node.IsScalar()) {
            record.set("version", node.as<std::string>());
        } else if (key == "abstract" && node.IsScalar()) {
            record.set("description", node.as<std::string>());
        } else if (key == "doi" && node.IsScalar()) {
            identifier_values.emplace_back("https://doi.org/" + node.as<std::string>());
        } else if (key == "identifiers" && node.IsSequence()) {
            for (const auto& id : node) {
                if (!id.IsMap() || !id["type"] || !id["value"]) {
                    continue;
                }
                std::string type = id["type"].as<std::string>();
                std::string value = id["value"].as<std::string>();
                identifier_values.emplace_back(type == "doi" ? "https://doi.org/" + value
                                                             : value);
            }
        } else if (key == "keywords" && node.IsSequence()) {
            ValueList keywords;
            for (const auto& kw : node) {
                keywords.emplace_back(kw.as<std::string>());
            }
            record.set("keywords", Value(std::move(keywords)));
        } else if (key == "license" && node.IsScalar()) {
            record.set("license", spdx_license_url(node.as<std::string>()));
        } else if (key == "license" && node.IsSequence()) {
            ValueList licenses;
            for (const auto& l : node) {
                licenses.emplace_back(spdx_license_url(l.as<std::string>()));
            }
            record.set("license", Value(std::move(licenses)));
        } else if (key == "repository-code" && node.IsScalar()) {
            record.set("codeRepository", node.as<std::string>());
        } else if (key == "repository-artifact" && node.IsScalar()) {
            record.set("downloadUrl", node.as<std::string>());
        } else if (key == "url" && node.IsScalar()) {
            record.set("url", node.as<std::string>());
        } else if (key == "date-released" && node.IsScalar()) {
            record.set("datePublished", node.as<std::string>());
        } else if (key == "authors" && node.IsSequence()) {
            ValueList authors;
            for (const auto& a : node) {
                if (a.IsMap()) {
                    authors.emplace_back(person_from_cff(a));
                }
            }
            if (!authors.empty()) {
                record.set("author", Value(std::move(authors)));
            }
        } else {
            unmapped.push_back(key);
        }
    }

    if (identifier_values.size() == 1) {
        record.set("identifier", identifier_values[0]);
    } else if (!identifier_values.empty()) {
        record.set("identifier", Value(std::move(identifier_values)));
    }

    std::sort(unmapped.begin(), unmapped.end());
    result.meta["path"] = path.string();
    result.meta["validation"] = enable_validation ? "validated" : "unvalidated";
    result.meta["unmapped"] = unmapped;

    ctx.log().debug("harvest.cff", "mapped " + std::to_string(record.fields().size()) +
                                       " terms from " + path.string());
    return result;
}

HarvestResult CffHarvestPlugin::harvest(ExecutionContext& ctx) {
    return harvest_cff(ctx, ctx.working_dir() / "CITATION.cff",
                       ctx.config().cff_enable_validation);
}

} // namespace hermes
