#include "hermes/postprocess.hpp"

#include "hermes/errors.hpp"
#include "hermes/harvest.hpp"
#include "hermes/toml.hpp"
#include "hermes/util.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>

#include <unistd.h>

namespace hermes {

namespace fs = std::filesystem;

namespace {

// Lines including their trailing newline; a missing final newline is kept
// missing so untouched files round-trip byte for byte.
std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    size_t start = 0;
    while (start < text.size()) {
        size_t nl = text.find('\n', start);
        if (nl == std::string::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, nl - start + 1));
        start = nl + 1;
    }
    return lines;
}

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (const std::string& line : lines) {
        out += line;
    }
    return out;
}

std::string strip_eol(const std::string& line) {
    std::string out = line;
    while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) {
        out.pop_back();
    }
    return out;
}

void require_writable(const fs::path& path) {
    if (::access(path.c_str(), W_OK) != 0) {
        throw IoError("file is not writable: " + path.string());
    }
}

bool is_blank(const std::string& line) {
    return util::trim(strip_eol(line)).empty();
}

} // namespace

// ------------------------------------------------------- configuration edit

namespace {

bool is_section_header(const std::string& line, const std::string& section) {
    std::string t = util::trim(strip_eol(line));
    std::string expected = "[" + section + "]";
    if (!util::starts_with(t, expected)) {
        return false;
    }
    std::string rest = util::trim(t.substr(expected.size()));
    return rest.empty() || rest[0] == '#';
}

bool is_any_section_header(const std::string& line) {
    std::string t = util::trim(strip_eol(line));
    return !t.empty() && t[0] == '[';
}

// Splits "  record_id = 111  # note" around the value token; false when the
// line does not assign the given key.
struct KeyValueLine {
    std::string before_value;  // up to and including '=' and following spaces
    std::string value;
    std::string after_value;  // trailing spaces, comment, newline
};

std::optional<KeyValueLine> match_key_line(const std::string& line, const std::string& key) {
    std::string body = strip_eol(line);
    size_t i = 0;
    while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) {
        ++i;
    }
    if (body.compare(i, key.size(), key) != 0) {
        return std::nullopt;
    }
    size_t after_key = i + key.size();
    size_t j = after_key;
    while (j < body.size() && std::isspace(static_cast<unsigned char>(body[j]))) {
        ++j;
    }
    if (j >= body.size() || body[j] != '=') {
        return std::nullopt;
    }
    ++j;
    while (j < body.size() && std::isspace(static_cast<unsigned char>(body[j]))) {
        ++j;
    }
    size_t value_end = body.size();
    size_t comment = body.find('#', j);
    if (comment != std::string::npos) {
        value_end = comment;
    }
    while (value_end > j && std::isspace(static_cast<unsigned char>(body[value_end - 1]))) {
        --value_end;
    }
    KeyValueLine out;
    out.before_value = body.substr(0, j);
    out.value = body.substr(j, value_end - j);
    out.after_value = body.substr(value_end) + line.substr(body.size());
    return out;
}

std::string render_record_id(const std::string& record_id) {
    bool digits = !record_id.empty() &&
                  std::all_of(record_id.begin(), record_id.end(),
                              [](unsigned char c) { return std::isdigit(c); });
    return digits ? record_id : "\"" + record_id + "\"";
}

} // namespace

void store_record_id(const fs::path& config_path, const DepositReceipt& receipt) {
    if (receipt.record_id.empty()) {
        throw ConfigEditError("deposit receipt carries no record id");
    }
    if (receipt.target.empty()) {
        throw ConfigEditError("deposit receipt carries no target name");
    }
    std::string text = util::read_file(config_path);  // FileNotFoundError when absent

    const std::string section = "deposit." + receipt.target;
    const std::string rendered = render_record_id(receipt.record_id);

    std::vector<std::string> lines = split_lines(text);

    // Locate the target section and, within it, the record_id line.
    size_t section_start = lines.size();
    size_t section_end = lines.size();
    for (size_t i = 0; i < lines.size(); ++i) {
        if (is_section_header(lines[i], section)) {
            section_start = i;
            section_end = lines.size();
            for (size_t j = i + 1; j < lines.size(); ++j) {
                if (is_any_section_header(lines[j])) {
                    section_end = j;
                    break;
                }
            }
            break;
        }
    }

    bool changed = false;
    if (section_start == lines.size()) {
        // No such section yet: append one.
        if (!lines.empty() && !lines.back().ends_with("\n")) {
            lines.back() += "\n";
        }
        if (!lines.empty() && !is_blank(lines.back())) {
            lines.push_back("\n");
        }
        lines.push_back("[" + section + "]\n");
        lines.push_back("record_id = " + rendered + "\n");
        changed = true;
    } else {
        size_t key_line = lines.size();
        for (size_t i = section_start + 1; i < section_end; ++i) {
            if (match_key_line(lines[i], "record_id")) {
                key_line = i;
                break;
            }
        }
        if (key_line < lines.size()) {
            KeyValueLine kv = *match_key_line(lines[key_line], "record_id");
            if (kv.value != rendered) {
                lines[key_line] = kv.before_value + rendered + kv.after_value;
                changed = true;
            }
        } else {
            // Insert after the last non-blank line of the section.
            size_t insert_at = section_start + 1;
            for (size_t i = section_start + 1; i < section_end; ++i) {
                if (!is_blank(lines[i])) {
                    insert_at = i + 1;
                }
            }
            if (insert_at > 0 && !lines[insert_at - 1].ends_with("\n")) {
                lines[insert_at - 1] += "\n";
            }
            lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(insert_at),
                         "record_id = " + rendered + "\n");
            changed = true;
        }
    }

    if (!changed) {
        return;  // value already present: the file stays byte-identical
    }

    std::string edited = join_lines(lines);
    try {
        toml::parse(edited);
    } catch (const TomlParseError& e) {
        throw ConfigEditError(std::string("record id edit would corrupt the file: ") + e.what());
    }
    require_writable(config_path);
    util::write_file_atomic(config_path, edited);
}

// ------------------------------------------------------------ citation edit

std::optional<std::string> normalize_doi(const std::string& pid) {
    std::string doi = pid;
    for (const char* prefix : {"https://doi.org/", "http://doi.org/", "doi:"}) {
        if (util::starts_with(doi, prefix)) {
            doi = doi.substr(std::string(prefix).size());
            break;
        }
    }
    if (!util::starts_with(doi, "10.")) {
        return std::nullopt;
    }
    size_t slash = doi.find('/');
    if (slash == std::string::npos || slash < 4 || slash + 1 >= doi.size()) {
        return std::nullopt;
    }
    for (size_t i = 3; i < slash; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(doi[i]))) {
            return std::nullopt;
        }
    }
    if (doi.find(' ') != std::string::npos) {
        return std::nullopt;
    }
    return doi;
}

namespace {

std::string yaml_quote_if_needed(const std::string& value) {
    bool needs_quote = value.empty();
    for (size_t i = 0; i < value.size() && !needs_quote; ++i) {
        char c = value[i];
        if (c == '#' || (c == ':' && (i + 1 == value.size() || value[i + 1] == ' '))) {
            needs_quote = true;
        }
    }
    if (!needs_quote && (std::isspace(static_cast<unsigned char>(value.front())) ||
                         std::isspace(static_cast<unsigned char>(value.back())))) {
        needs_quote = true;
    }
    if (!needs_quote) {
        return value;
    }
    std::string quoted = "'";
    for (char c : value) {
        quoted += c;
        if (c == '\'') {
            quoted += '\'';
        }
    }
    quoted += "'";
    return quoted;
}

std::vector<std::string> existing_doi_identifiers(const YAML::Node& doc) {
    std::vector<std::string> out;
    if (doc["identifiers"] && doc["identifiers"].IsSequence()) {
        for (const auto& entry : doc["identifiers"]) {
            if (entry.IsMap() && entry["type"] && entry["value"] &&
                entry["type"].as<std::string>() == "doi") {
                out.push_back(entry["value"].as<std::string>());
            }
        }
    }
    return out;
}

} // namespace

void insert_doi_cff(const fs::path& cff_path, const DepositReceipt& receipt) {
    if (!receipt.pid) {
        throw InvalidDoiError("deposit receipt carries no persistent identifier");
    }
    std::optional<std::string> doi = normalize_doi(*receipt.pid);
    if (!doi) {
        throw InvalidDoiError("persistent identifier is not a DOI: " + *receipt.pid);
    }

    std::string text = util::read_file(cff_path);  // FileNotFoundError when absent
    YAML::Node doc;
    try {
        doc = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw YamlParseError(std::string("not valid YAML: ") + e.what());
    }
    if (!doc.IsMap()) {
        throw YamlParseError("citation file must be a YAML mapping: " + cff_path.string());
    }

    bool was_valid_cff = true;
    try {
        validate_cff_text(text);
    } catch (const Error&) {
        was_valid_cff = false;
    }

    std::optional<std::string> current_doi;
    if (doc["doi"] && doc["doi"].IsScalar()) {
        current_doi = doc["doi"].as<std::string>();
    }
    std::vector<std::string> listed = existing_doi_identifiers(doc);
    auto is_listed = [&listed](const std::string& d) {
        return std::find(listed.begin(), listed.end(), d) != listed.end();
    };

    // Version DOIs accumulate: the previous DOI moves into identifiers, the
    // new one goes both into identifiers and the doi key.
    std::vector<std::string> to_append;
    if (current_doi && *current_doi != *doi && !is_listed(*current_doi)) {
        to_append.push_back(*current_doi);
    }
    if (!is_listed(*doi)) {
        to_append.push_back(*doi);
    }
    bool doi_key_update = !current_doi || *current_doi != *doi;

    if (!doi_key_update && to_append.empty()) {
        return;  // nothing to do: the file stays byte-identical
    }

    std::vector<std::string> lines = split_lines(text);

    if (doi_key_update) {
        size_t doi_line = lines.size();
        for (size_t i = 0; i < lines.size(); ++i) {
            if (!lines[i].empty() && !std::isspace(static_cast<unsigned char>(lines[i][0]))) {
                std::string body = strip_eol(lines[i]);
                if (util::starts_with(body, "doi:")) {
                    doi_line = i;
                    break;
                }
            }
        }
        std::string rendered = yaml_quote_if_needed(*doi);
        if (doi_line < lines.size()) {
            std::string body = strip_eol(lines[doi_line]);
            std::string eol = lines[doi_line].substr(body.size());
            size_t value_start = 4;  // after "doi:"
            while (value_start < body.size() &&
                   std::isspace(static_cast<unsigned char>(body[value_start]))) {
                ++value_start;
            }
            size_t value_end = body.size();
            size_t comment = body.find(" #", value_start);
            if (comment != std::string::npos) {
                value_end = comment;
            }
            while (value_end > value_start &&
                   std::isspace(static_cast<unsigned char>(body[value_end - 1]))) {
                --value_end;
            }
            lines[doi_line] = body.substr(0, value_start) + rendered + body.substr(value_end) +
                              eol;
            if (value_start == 4 && value_start == body.size()) {
                lines[doi_line] = "doi: " + rendered + eol;
            }
        } else {
            if (!lines.empty() && !lines.back().ends_with("\n")) {
                lines.back() += "\n";
            }
            lines.push_back("doi: " + rendered + "\n");
        }
    }

    if (!to_append.empty()) {
        size_t block_line = lines.size();
        for (size_t i = 0; i < lines.size(); ++i) {
            std::string body = strip_eol(lines[i]);
            if (util::starts_with(body, "identifiers:")) {
                block_line = i;
                break;
            }
        }

        std::string item_indent = "  ";
        size_t insert_at;
        if (block_line == lines.size()) {
            if (!lines.empty() && !lines.back().ends_with("\n")) {
                lines.back() += "\n";
            }
            lines.push_back("identifiers:\n");
            insert_at = lines.size();
        } else {
            insert_at = block_line + 1;
            for (size_t i = block_line + 1; i < lines.size(); ++i) {
                const std::string& line = lines[i];
                if (is_blank(line)) {
                    continue;
                }
                if (!std::isspace(static_cast<unsigned char>(line[0]))) {
                    break;
                }
                std::string body = strip_eol(line);
                size_t indent_end = body.find_first_not_of(" \t");
                if (indent_end != std::string::npos && body[indent_end] == '-') {
                    item_indent = body.substr(0, indent_end);
                }
                insert_at = i + 1;
            }
        }

        std::vector<std::string> entry_lines;
        for (const std::string& value : to_append) {
            entry_lines.push_back(item_indent + "- type: doi\n");
            entry_lines.push_back(item_indent + "  value: " + yaml_quote_if_needed(value) +
                                  "\n");
        }
        if (insert_at > 0 && !lines[insert_at - 1].ends_with("\n")) {
            lines[insert_at - 1] += "\n";
        }
        lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(insert_at),
                     entry_lines.begin(), entry_lines.end());
    }

    std::string edited = join_lines(lines);
    try {
        YAML::Load(edited);
    } catch (const YAML::Exception& e) {
        throw ConfigEditError(std::string("DOI edit would corrupt the file: ") + e.what());
    }
    if (was_valid_cff) {
        validate_cff_text(edited);  // edited output must stay a valid citation file
    }
    require_writable(cff_path);
    util::write_file_atomic(cff_path, edited);
}

// ---------------------------------------------------------------- plugins

void ConfigRecordIdPlugin::run(ExecutionContext& ctx, const DepositReceipt& receipt) {
    const fs::path& config_path = ctx.config().config_path;
    if (config_path.empty()) {
        throw ConfigEditError("no configuration file to record the id in");
    }
    store_record_id(config_path, receipt);
    ctx.log().info("postprocess.config_record_id",
                   "stored record id " + receipt.record_id + " in " + config_path.string());
}

void CffDoiPlugin::run(ExecutionContext& ctx, const DepositReceipt& receipt) {
    fs::path cff_path = ctx.working_dir() / "CITATION.cff";
    insert_doi_cff(cff_path, receipt);
    ctx.log().info("postprocess.cff_doi",
                   "recorded DOI " + receipt.pid.value_or("") + " in " + cff_path.string());
}

} // namespace hermes
