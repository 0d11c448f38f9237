#include "hermes/deposit.hpp"
#include "hermes/errors.hpp"
#include "hermes/util.hpp"

#include <httplib.h>

#include <chrono>
#include <thread>

namespace hermes {

namespace {

std::string expand_id(std::string path_template, const std::string& id) {
    size_t pos = path_template.find("{id}");
    if (pos != std::string::npos) {
        path_template.replace(pos, 4, id);
    }
    return path_template;
}

std::string body_excerpt(const std::string& body) {
    constexpr size_t kMax = 200;
    std::string trimmed = util::trim(body);
    if (trimmed.size() > kMax) {
        trimmed = trimmed.substr(0, kMax) + "...";
    }
    return trimmed;
}

} // namespace

ApiPaths ApiPaths::defaults(InvenioFlavor flavor) {
    if (flavor == InvenioFlavor::Rdm) {
        return {
            "/api/records",
            "/api/records/{id}/draft/files",
            "/api/records/{id}/draft/actions/publish",
            "/api/records/{id}/versions",
        };
    }
    return {
        "/api/deposit/depositions",
        "/api/deposit/depositions/{id}/files",
        "/api/deposit/depositions/{id}/actions/publish",
        "/api/deposit/depositions/{id}/actions/newversion",
    };
}

ApiPaths ApiPaths::with_overrides(const std::map<std::string, std::string>& overrides) const {
    ApiPaths out = *this;
    for (const auto& [keyword, path] : overrides) {
        if (keyword == "records") {
            out.records = path;
        } else if (keyword == "draft_files") {
            out.draft_files = path;
        } else if (keyword == "publish") {
            out.publish = path;
        } else if (keyword == "versions") {
            out.versions = path;
        }
        // Unknown keywords are left for site-specific tooling.
    }
    return out;
}

InvenioClient::InvenioClient(std::string site_url, std::string auth_token, InvenioFlavor flavor,
                             ApiPaths paths, int timeout_seconds)
    : site_url_(std::move(site_url)),
      auth_token_(std::move(auth_token)),
      flavor_(flavor),
      paths_(std::move(paths)),
      timeout_seconds_(timeout_seconds) {
    while (!site_url_.empty() && site_url_.back() == '/') {
        site_url_.pop_back();
    }
}

Json InvenioClient::request_json(const std::string& method, const std::string& path,
                                 const std::string& body, const std::string& content_type,
                                 bool idempotent) {
    const int max_attempts = idempotent ? 4 : 1;  // one try plus three retries

    httplib::Result res;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        httplib::Client client(site_url_);
        client.set_connection_timeout(timeout_seconds_, 0);
        client.set_read_timeout(timeout_seconds_, 0);
        client.set_write_timeout(timeout_seconds_, 0);
        httplib::Headers headers = {{"Authorization", "Bearer " + auth_token_}};

        call_log_.push_back(method + " " + path);
        if (method == "GET") {
            res = client.Get(path, headers);
        } else if (method == "POST") {
            res = client.Post(path, headers, body, content_type);
        } else if (method == "PUT") {
            res = client.Put(path, headers, body, content_type);
        } else {
            throw ProtocolError("unsupported method " + method);
        }

        bool transient = !res || res->status >= 500;
        if (transient && idempotent && attempt < max_attempts) {
            std::this_thread::sleep_for(std::chrono::milliseconds(50 << (attempt - 1)));
            continue;
        }
        break;
    }

    if (!res) {
        throw HttpError("cannot reach " + site_url_ + " (" + httplib::to_string(res.error()) +
                            ") for " + method + " " + path,
                        0);
    }
    if (res->status == 401 || res->status == 403) {
        throw HttpError("authentication failed (HTTP " + std::to_string(res->status) + ") for " +
                            method + " " + path +
                            ": check the configured auth_token. Server said: " +
                            body_excerpt(res->body),
                        res->status);
    }
    if (res->status >= 400) {
        throw HttpError("HTTP " + std::to_string(res->status) + " for " + method + " " + path +
                            ": " + body_excerpt(res->body),
                        res->status);
    }
    if (res->body.empty()) {
        return Json::object();
    }
    try {
        return Json::parse(res->body);
    } catch (const Json::exception& e) {
        throw ProtocolError("unexpected response body for " + method + " " + path + ": " +
                            e.what());
    }
}

namespace {

std::string extract_id(const Json& doc, const std::string& what) {
    if (!doc.contains("id")) {
        throw ProtocolError(what + ": response carries no record id");
    }
    const Json& id = doc["id"];
    if (id.is_string()) {
        return id.get<std::string>();
    }
    if (id.is_number_integer()) {
        return std::to_string(id.get<std::int64_t>());
    }
    throw ProtocolError(what + ": record id has an unexpected shape");
}

} // namespace

std::string InvenioClient::create_draft(const TargetRecordPayload& payload) {
    Json doc = request_json("POST", paths_.records, payload.body.dump(), "application/json",
                            false);
    return extract_id(doc, "create draft");
}

std::string InvenioClient::new_version(const std::string& record_id) {
    Json doc = request_json("POST", expand_id(paths_.versions, record_id), "",
                            "application/json", false);
    return extract_id(doc, "new version");
}

void InvenioClient::update_draft(const std::string& draft_id,
                                 const TargetRecordPayload& payload) {
    std::string path = flavor_ == InvenioFlavor::Rdm
                           ? expand_id(paths_.records + "/{id}/draft", draft_id)
                           : expand_id(paths_.records + "/{id}", draft_id);
    request_json("PUT", path, payload.body.dump(), "application/json", false);
}

void InvenioClient::upload_file(const std::string& draft_id,
                                const std::filesystem::path& path) {
    std::string bytes;
    try {
        bytes = util::read_file(path);
    } catch (const FileNotFoundError& e) {
        throw UploadError(std::string("cannot read upload: ") + e.what());
    }
    const std::string name = path.filename().string();
    const std::string base = expand_id(paths_.draft_files, draft_id);

    if (flavor_ == InvenioFlavor::Rdm) {
        // Register, send content, commit.
        Json registration = Json::array({Json{{"key", name}}});
        request_json("POST", base, registration.dump(), "application/json", false);
        request_json("PUT", base + "/" + name + "/content", bytes,
                     "application/octet-stream", false);
        request_json("POST", base + "/" + name + "/commit", "", "application/json", false);
        return;
    }

    httplib::Client client(site_url_);
    client.set_connection_timeout(timeout_seconds_, 0);
    client.set_read_timeout(timeout_seconds_, 0);
    httplib::Headers headers = {{"Authorization", "Bearer " + auth_token_}};
    httplib::MultipartFormDataItems items = {
        {"file", bytes, name, "application/octet-stream"},
        {"name", name, "", ""},
    };
    call_log_.push_back("POST " + base);
    httplib::Result res = client.Post(base, headers, items);
    if (!res) {
        throw HttpError("cannot reach " + site_url_ + " (" + httplib::to_string(res.error()) +
                            ") for POST " + base,
                        0);
    }
    if (res->status == 401 || res->status == 403) {
        throw HttpError("authentication failed (HTTP " + std::to_string(res->status) +
                            ") for POST " + base + ": check the configured auth_token",
                        res->status);
    }
    if (res->status >= 400) {
        throw HttpError("HTTP " + std::to_string(res->status) + " for POST " + base + ": " +
                            body_excerpt(res->body),
                        res->status);
    }
}

std::pair<std::string, std::string> InvenioClient::publish(const std::string& draft_id) {
    Json doc = request_json("POST", expand_id(paths_.publish, draft_id), "",
                            "application/json", false);
    std::string record_id = extract_id(doc, "publish");

    std::string doi;
    if (flavor_ == InvenioFlavor::Rdm) {
        if (doc.contains("pids") && doc["pids"].contains("doi") &&
            doc["pids"]["doi"].contains("identifier")) {
            doi = doc["pids"]["doi"]["identifier"].get<std::string>();
        }
    } else if (doc.contains("doi") && doc["doi"].is_string()) {
        doi = doc["doi"].get<std::string>();
    }
    if (doi.empty()) {
        throw ProtocolError("publish: response carries no DOI");
    }
    return {record_id, doi};
}

Json InvenioClient::get_record(const std::string& record_id) {
    return request_json("GET", expand_id(paths_.records + "/{id}", record_id), "", "", true);
}

} // namespace hermes
