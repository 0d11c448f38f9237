#include "hermes/config.hpp"

#include "hermes/errors.hpp"
#include "hermes/util.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace hermes {

namespace {

const std::set<std::string> kPhaseSections = {"harvest", "process", "curate", "deposit",
                                              "postprocess"};

const std::set<std::string> kAccessRights = {"open", "embargoed", "restricted", "closed"};

[[noreturn]] void type_error(const std::string& path, const toml::Value& value,
                             const std::string& expected) {
    throw SchemaError(path + ": expected " + expected + ", got " + value.kind_name());
}

std::string get_string(const toml::Value& v, const std::string& path) {
    if (!v.is_string()) {
        type_error(path, v, "string");
    }
    return v.str();
}

bool get_bool(const toml::Value& v, const std::string& path) {
    if (!v.is_boolean()) {
        type_error(path, v, "boolean");
    }
    return v.boolean();
}

std::int64_t get_integer(const toml::Value& v, const std::string& path) {
    if (!v.is_integer()) {
        type_error(path, v, "integer");
    }
    return v.integer();
}

std::vector<std::string> get_string_list(const toml::Value& v, const std::string& path) {
    if (!v.is_array()) {
        type_error(path, v, "list of strings");
    }
    std::vector<std::string> out;
    for (const toml::Value& item : v.array()) {
        if (!item.is_string()) {
            type_error(path, item, "list of strings");
        }
        out.push_back(item.str());
    }
    return out;
}

InvenioSettings parse_invenio_section(const toml::Table& section, const std::string& prefix) {
    InvenioSettings s;
    for (const auto& [key, value] : section) {
        const std::string path = prefix + "." + key;
        if (key == "site_url") {
            s.site_url = get_string(value, path);
        } else if (key == "communities") {
            s.communities = get_string_list(value, path);
        } else if (key == "access_right") {
            s.access_right = get_string(value, path);
        } else if (key == "embargo_date") {
            if (value.is_string() || value.is_date()) {
                s.embargo_date = value.as_text();
            } else {
                type_error(path, value, "date");
            }
        } else if (key == "access_conditions") {
            s.access_conditions = get_string(value, path);
        } else if (key == "api_paths") {
            if (!value.is_table()) {
                type_error(path, value, "table of strings");
            }
            for (const auto& [kw, pv] : value.table()) {
                s.api_paths[kw] = get_string(pv, path + "." + kw);
            }
        } else if (key == "auth_token") {
            s.auth_token = get_string(value, path);
        } else if (key == "files") {
            s.files = get_string_list(value, path);
        } else if (key == "record_id") {
            s.record_id = get_integer(value, path);
        } else if (key == "doi") {
            s.doi = get_string(value, path);
        }
        // Other keys pass through untouched for downstream tooling.
    }

    if (!kAccessRights.count(s.access_right)) {
        throw EnumError(prefix + ".access_right: must be one of \"open\", \"embargoed\", "
                        "\"restricted\", \"closed\" (got \"" +
                        s.access_right + "\")");
    }
    if (s.access_right == "embargoed") {
        if (!s.embargo_date) {
            throw SchemaError(prefix + ".embargo_date: required when access_right is "
                              "\"embargoed\"");
        }
        if (!util::is_valid_date(*s.embargo_date)) {
            throw SchemaError(prefix + ".embargo_date: not a calendar date: " + *s.embargo_date);
        }
    } else if (s.embargo_date) {
        throw SchemaError(prefix + ".embargo_date: only allowed when access_right is "
                          "\"embargoed\"");
    }
    if (s.access_right == "restricted") {
        if (!s.access_conditions || s.access_conditions->empty()) {
            throw SchemaError(prefix + ".access_conditions: required when access_right is "
                              "\"restricted\"");
        }
    } else if (s.access_conditions) {
        throw SchemaError(prefix + ".access_conditions: only allowed when access_right is "
                          "\"restricted\"");
    }
    return s;
}

void render_table(std::ostringstream& out, const toml::Table& table, const std::string& prefix,
                  const std::vector<std::string>& secrets) {
    for (const auto& [key, value] : table) {
        std::string path = prefix.empty() ? key : prefix + "." + key;
        if (value.is_table()) {
            render_table(out, value.table(), path, secrets);
            continue;
        }
        std::string text;
        if (value.is_array()) {
            text = "[";
            for (size_t i = 0; i < value.array().size(); ++i) {
                if (i > 0) {
                    text += ", ";
                }
                text += value.array()[i].as_text();
            }
            text += "]";
        } else {
            text = value.as_text();
        }
        if (key == "auth_token" ||
            std::find(secrets.begin(), secrets.end(), text) != secrets.end()) {
            text = "***";
        }
        out << path << " = " << text << "\n";
    }
}

} // namespace

const toml::Table* PipelineConfig::plugin_section(std::string_view group,
                                                  std::string_view name) const {
    const toml::Value* section =
        toml::find(tree, std::string(group) + "." + std::string(name));
    if (section && section->is_table()) {
        return &section->table();
    }
    return nullptr;
}

const InvenioSettings& PipelineConfig::invenio_settings(std::string_view target) const {
    return target == "invenio" ? invenio : invenio_rdm;
}

std::vector<std::string> PipelineConfig::secrets() const {
    std::vector<std::string> out;
    if (!invenio.auth_token.empty()) {
        out.push_back(invenio.auth_token);
    }
    if (!invenio_rdm.auth_token.empty()) {
        out.push_back(invenio_rdm.auth_token);
    }
    return out;
}

std::string PipelineConfig::render_redacted() const {
    std::ostringstream out;
    render_table(out, tree, "", secrets());
    return out.str();
}

PipelineConfig validate_tree(toml::Table tree) {
    PipelineConfig config;

    for (const auto& [key, value] : tree) {
        if (!kPhaseSections.count(key)) {
            throw SchemaError("unknown top-level section: " + key);
        }
        if (!value.is_table()) {
            type_error(key, value, "table");
        }
    }

    if (const toml::Value* harvest = toml::find(tree, "harvest")) {
        for (const auto& [key, value] : harvest->table()) {
            const std::string path = "harvest." + key;
            if (key == "sources") {
                config.harvest_sources = get_string_list(value, path);
            } else if (!value.is_table()) {
                throw SchemaError(path + ": unknown setting (plugin settings belong in [" +
                                  path + "] sections)");
            }
        }
        if (const toml::Value* v = toml::find(tree, "harvest.cff.enable_validation")) {
            config.cff_enable_validation = get_bool(*v, "harvest.cff.enable_validation");
        }
        if (const toml::Value* v = toml::find(tree, "harvest.git.branch")) {
            config.git_branch = get_string(*v, "harvest.git.branch");
        }
    }

    if (const toml::Value* deposit = toml::find(tree, "deposit")) {
        for (const auto& [key, value] : deposit->table()) {
            const std::string path = "deposit." + key;
            if (key == "target") {
                config.deposit_target = get_string(value, path);
            } else if (!value.is_table()) {
                throw SchemaError(path + ": unknown setting (plugin settings belong in [" +
                                  path + "] sections)");
            }
        }
        if (const toml::Value* v = toml::find(tree, "deposit.file.filename")) {
            config.deposit_file_filename = get_string(*v, "deposit.file.filename");
        }
        if (const toml::Value* v = toml::find(tree, "deposit.invenio")) {
            config.invenio = parse_invenio_section(v->table(), "deposit.invenio");
        }
        if (const toml::Value* v = toml::find(tree, "deposit.invenio_rdm")) {
            config.invenio_rdm = parse_invenio_section(v->table(), "deposit.invenio_rdm");
        }
    }

    if (const toml::Value* postprocess = toml::find(tree, "postprocess")) {
        for (const auto& [key, value] : postprocess->table()) {
            const std::string path = "postprocess." + key;
            if (key == "execute") {
                config.postprocess_execute = get_string_list(value, path);
            } else if (!value.is_table()) {
                throw SchemaError(path + ": unknown setting (plugin settings belong in [" +
                                  path + "] sections)");
            }
        }
    }

    config.tree = std::move(tree);
    return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    toml::Table file_tree = toml::parse_file(path);
    PipelineConfig config = validate_tree(file_tree);
    config.file_tree = std::move(file_tree);
    config.config_path = path;
    return config;
}

std::optional<std::string> env_to_dotted_key(std::string_view name) {
    if (!util::starts_with(name, kEnvPrefix)) {
        return std::nullopt;
    }
    std::string_view rest = name.substr(std::string_view(kEnvPrefix).size());
    if (rest.empty()) {
        return std::nullopt;
    }
    std::string dotted;
    size_t i = 0;
    while (i < rest.size()) {
        if (rest[i] == '_' && i + 1 < rest.size() && rest[i + 1] == '_') {
            dotted += '.';
            i += 2;
        } else {
            dotted += static_cast<char>(std::tolower(static_cast<unsigned char>(rest[i])));
            ++i;
        }
    }
    return dotted;
}

PipelineConfig resolve(const PipelineConfig& base,
                       const std::map<std::string, std::string>& env,
                       const std::map<std::string, std::string>& cli_overrides) {
    toml::Table merged = base.file_tree;

    // Environment layer. Names sort deterministically in the map; precedence
    // between layers is fixed regardless of application order within one.
    for (const auto& [name, raw] : env) {
        if (auto dotted = env_to_dotted_key(name)) {
            toml::set_path(merged, *dotted, toml::parse_scalar_lenient(raw));
        }
    }

    // Command line layer wins over everything.
    for (const auto& [dotted, raw] : cli_overrides) {
        if (dotted.empty()) {
            throw SchemaError("override key must not be empty");
        }
        toml::set_path(merged, dotted, toml::parse_scalar_lenient(raw));
    }

    PipelineConfig config = validate_tree(std::move(merged));
    config.file_tree = base.file_tree;
    config.config_path = base.config_path;
    config.timeout_seconds = base.timeout_seconds;
    return config;
}

} // namespace hermes
