#include "hermes/deposit.hpp"
#include "hermes/errors.hpp"
#include "hermes/util.hpp"

#include <algorithm>

namespace hermes {

namespace {

std::vector<PersonRef> record_persons(const MetadataRecord& record, const std::string& term) {
    std::vector<PersonRef> out;
    if (!record.has(term)) {
        return out;
    }
    const Value& value = record.get(term);
    if (value.is_person()) {
        out.push_back(value.person());
    } else if (value.is_list()) {
        for (const Value& entry : value.list()) {
            if (entry.is_person()) {
                out.push_back(entry.person());
            }
        }
    }
    return out;
}

std::string orcid_digits(const std::string& uri) {
    constexpr std::string_view prefix = "https://orcid.org/";
    return util::starts_with(uri, prefix) ? uri.substr(prefix.size()) : uri;
}

std::optional<std::string> record_text(const MetadataRecord& record, const std::string& term) {
    if (record.has(term) && record.get(term).is_text()) {
        return record.get(term).text();
    }
    return std::nullopt;
}

std::string publication_date(const MetadataRecord& record) {
    if (auto released = record_text(record, "datePublished")) {
        return *released;
    }
    return util::format_utc(util::now_utc()).substr(0, 10);
}

// "https://spdx.org/licenses/Apache-2.0" -> "apache-2.0"; unrecognized
// license texts fall through unchanged.
std::optional<std::string> spdx_id(const MetadataRecord& record) {
    auto license = record_text(record, "license");
    if (!license) {
        return std::nullopt;
    }
    constexpr std::string_view prefix = "https://spdx.org/licenses/";
    std::string id = util::starts_with(*license, prefix)
                         ? license->substr(prefix.size())
                         : *license;
    return util::to_lower(id);
}

std::vector<std::string> missing_mandatory_terms(const MetadataRecord& record) {
    std::vector<std::string> missing;
    if (!record_text(record, "name")) {
        missing.push_back("name");
    }
    if (record_persons(record, "author").empty()) {
        missing.push_back("author");
    }
    return missing;
}

[[noreturn]] void throw_missing(const std::vector<std::string>& missing) {
    std::string joined;
    for (const std::string& term : missing) {
        if (!joined.empty()) {
            joined += ", ";
        }
        joined += term;
    }
    throw ProjectError("record lacks mandatory terms for a repository deposit: " + joined);
}

Json related_identifiers(const MetadataRecord& record) {
    Json out = Json::array();
    if (!record.has("identifier")) {
        return out;
    }
    ValueList ids;
    const Value& value = record.get("identifier");
    if (value.is_list()) {
        ids = value.list();
    } else {
        ids.push_back(value);
    }
    for (const Value& id : ids) {
        if (!id.is_text()) {
            continue;
        }
        Json entry = Json::object();
        entry["identifier"] = id.text();
        entry["scheme"] =
            id.text().find("doi.org/") != std::string::npos ? "doi" : "url";
        out.push_back(std::move(entry));
    }
    return out;
}

} // namespace

TargetRecordPayload project_to_invenio(const MetadataRecord& record,
                                       const InvenioSettings& cfg) {
    std::vector<std::string> missing = missing_mandatory_terms(record);
    if (!missing.empty()) {
        throw_missing(missing);
    }

    Json metadata = Json::object();
    metadata["resource_type"] = Json{{"id", "software"}};
    metadata["title"] = *record_text(record, "name");
    metadata["publication_date"] = publication_date(record);
    if (auto version = record_text(record, "version")) {
        metadata["version"] = *version;
    }
    if (auto description = record_text(record, "description")) {
        metadata["description"] = *description;
    }

    Json creators = Json::array();
    for (const PersonRef& person : record_persons(record, "author")) {
        Json person_or_org = Json::object();
        person_or_org["type"] = "personal";
        if (person.family_names) {
            person_or_org["family_name"] = *person.family_names;
        }
        if (person.given_names) {
            person_or_org["given_name"] = *person.given_names;
        }
        person_or_org["name"] = person.display_name();
        if (person.orcid) {
            person_or_org["identifiers"] =
                Json::array({Json{{"scheme", "orcid"}, {"identifier", orcid_digits(*person.orcid)}}});
        }
        creators.push_back(Json{{"person_or_org", std::move(person_or_org)}});
    }
    metadata["creators"] = std::move(creators);

    if (auto rights = spdx_id(record)) {
        metadata["rights"] = Json::array({Json{{"id", *rights}}});
    }
    if (record.has("keywords") && record.get("keywords").is_list()) {
        Json subjects = Json::array();
        for (const Value& kw : record.get("keywords").list()) {
            if (kw.is_text()) {
                subjects.push_back(Json{{"subject", kw.text()}});
            }
        }
        if (!subjects.empty()) {
            metadata["subjects"] = std::move(subjects);
        }
    }
    Json related = related_identifiers(record);
    if (!related.empty()) {
        metadata["related_identifiers"] = std::move(related);
    }

    Json access = Json::object();
    bool open = cfg.access_right == "open";
    access["record"] = open ? "public" : "restricted";
    access["files"] = open ? "public" : "restricted";
    if (cfg.access_right == "embargoed") {
        Json embargo = Json::object();
        embargo["active"] = true;
        embargo["until"] = cfg.embargo_date.value_or("");
        access["embargo"] = std::move(embargo);
    }
    if (cfg.access_right == "restricted" && cfg.access_conditions) {
        access["conditions"] = *cfg.access_conditions;
    }

    TargetRecordPayload payload;
    payload.body["access"] = std::move(access);
    payload.body["files"] = Json{{"enabled", !cfg.files.empty()}};
    payload.body["metadata"] = std::move(metadata);
    if (!cfg.communities.empty()) {
        Json ids = Json::array();
        for (const std::string& community : cfg.communities) {
            ids.push_back(community);
        }
        payload.body["communities"] = Json{{"ids", std::move(ids)}};
    }
    if (cfg.doi) {
        payload.body["pids"] =
            Json{{"doi", Json{{"identifier", *cfg.doi}, {"provider", "external"}}}};
    }
    return payload;
}

TargetRecordPayload project_to_invenio_legacy(const MetadataRecord& record,
                                              const InvenioSettings& cfg) {
    std::vector<std::string> missing = missing_mandatory_terms(record);
    if (!missing.empty()) {
        throw_missing(missing);
    }

    Json metadata = Json::object();
    metadata["upload_type"] = "software";
    metadata["title"] = *record_text(record, "name");
    metadata["publication_date"] = publication_date(record);
    if (auto version = record_text(record, "version")) {
        metadata["version"] = *version;
    }
    if (auto description = record_text(record, "description")) {
        metadata["description"] = *description;
    }

    Json creators = Json::array();
    for (const PersonRef& person : record_persons(record, "author")) {
        Json creator = Json::object();
        if (person.family_names && person.given_names) {
            creator["name"] = *person.family_names + ", " + *person.given_names;
        } else {
            creator["name"] = person.display_name();
        }
        if (person.orcid) {
            creator["orcid"] = orcid_digits(*person.orcid);
        }
        creators.push_back(std::move(creator));
    }
    metadata["creators"] = std::move(creators);

    if (auto rights = spdx_id(record)) {
        metadata["license"] = *rights;
    }
    if (record.has("keywords") && record.get("keywords").is_list()) {
        Json keywords = Json::array();
        for (const Value& kw : record.get("keywords").list()) {
            if (kw.is_text()) {
                keywords.push_back(kw.text());
            }
        }
        if (!keywords.empty()) {
            metadata["keywords"] = std::move(keywords);
        }
    }

    metadata["access_right"] = cfg.access_right;
    if (cfg.access_right == "embargoed") {
        metadata["embargo_date"] = cfg.embargo_date.value_or("");
    }
    if (cfg.access_right == "restricted" && cfg.access_conditions) {
        metadata["access_conditions"] = *cfg.access_conditions;
    }
    if (!cfg.communities.empty()) {
        Json communities = Json::array();
        for (const std::string& community : cfg.communities) {
            communities.push_back(Json{{"identifier", community}});
        }
        metadata["communities"] = std::move(communities);
    }
    if (cfg.doi) {
        metadata["doi"] = *cfg.doi;
    }

    TargetRecordPayload payload;
    payload.body["metadata"] = std::move(metadata);
    return payload;
}

// ----------------------------------------------------------------- plugin

DepositReceipt InvenioDepositPlugin::deposit(ExecutionContext& ctx,
                                             const MetadataRecord& record,
                                             const std::string& record_bytes, bool curated) {
    (void)record_bytes;
    const std::string target = flavor_ == InvenioFlavor::Rdm ? "invenio_rdm" : "invenio";
    const InvenioSettings& cfg = ctx.config().invenio_settings(target);

    // Token and URL problems must surface before any request leaves the host.
    if (cfg.auth_token.empty()) {
        throw AuthError("deposit." + target +
                        ".auth_token is not set; refusing to contact the repository");
    }
    if (cfg.site_url.empty()) {
        throw CreateError("deposit." + target + ".site_url is not configured");
    }

    TargetRecordPayload payload = flavor_ == InvenioFlavor::Rdm
                                      ? project_to_invenio(record, cfg)
                                      : project_to_invenio_legacy(record, cfg);

    InvenioClient client(cfg.site_url, cfg.auth_token, flavor_,
                         ApiPaths::defaults(flavor_).with_overrides(cfg.api_paths),
                         ctx.config().timeout_seconds);

    std::string draft_id;
    try {
        if (cfg.record_id) {
            std::string existing = std::to_string(*cfg.record_id);
            client.get_record(existing);
            draft_id = client.new_version(existing);
            client.update_draft(draft_id, payload);
            ctx.log().info("deposit." + target,
                           "creating new version of record " + existing);
        } else {
            draft_id = client.create_draft(payload);
            ctx.log().info("deposit." + target, "created draft " + draft_id);
        }
    } catch (const AuthError&) {
        throw;
    } catch (const DepositError& e) {
        throw CreateError(std::string("create step failed: ") + e.what());
    }

    DepositReceipt receipt;
    receipt.target = target;
    receipt.curated = curated;

    if (cfg.files.empty()) {
        ctx.log().warning("deposit." + target,
                          "no files configured; depositing metadata only");
    }
    try {
        for (const std::string& file : cfg.files) {
            std::filesystem::path path = file;
            if (path.is_relative()) {
                path = ctx.working_dir() / path;
            }
            client.upload_file(draft_id, path);
            receipt.uploaded_files.emplace_back(path.string(),
                                                std::filesystem::file_size(path));
        }
    } catch (const DepositError& e) {
        throw UploadError(std::string("upload step failed: ") + e.what());
    }

    try {
        auto [record_id, pid] = client.publish(draft_id);
        receipt.record_id = record_id;
        receipt.pid = pid;
        receipt.record_url = cfg.site_url +
                             (flavor_ == InvenioFlavor::Rdm ? "/records/" : "/record/") +
                             record_id;
    } catch (const DepositError& e) {
        throw PublishError(std::string("publish step failed: ") + e.what());
    }

    receipt.published_at = util::now_utc();
    ctx.log().info("deposit." + target, "published record " + receipt.record_id + " with PID " +
                                            receipt.pid.value_or("none"));
    return receipt;
}

} // namespace hermes
