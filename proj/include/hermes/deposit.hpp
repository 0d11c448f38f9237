#pragma once

#include "hermes/config.hpp"
#include "hermes/model.hpp"
#include "hermes/plugins.hpp"
#include "hermes/receipt.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <utility>

namespace hermes {

// Record payload projected onto the target repository's schema.
struct TargetRecordPayload {
    Json body = Json::object();
};

// Builds the record-API payload: name -> title, version -> version, author
// PersonRefs -> creators (ORCID as identifier), description, license ->
// rights, plus access settings and communities from the configuration.
// Throws ProjectError listing the missing mandatory terms.
TargetRecordPayload project_to_invenio(const MetadataRecord& record, const InvenioSettings& cfg);

// Same projection onto the legacy deposition-API schema.
TargetRecordPayload project_to_invenio_legacy(const MetadataRecord& record,
                                              const InvenioSettings& cfg);

// Writes the record to a local file, atomically, preserving the exact bytes
// of the artifact being deposited.
DepositReceipt deposit_file(const std::string& record_bytes,
                            const std::filesystem::path& filename);

enum class InvenioFlavor {
    Rdm,     // record API: /api/records
    Legacy,  // deposition API: /api/deposit/depositions
};

// The four path keywords the client understands; "{id}" expands to the
// draft or record id.
struct ApiPaths {
    std::string records;
    std::string draft_files;
    std::string publish;
    std::string versions;

    static ApiPaths defaults(InvenioFlavor flavor);
    ApiPaths with_overrides(const std::map<std::string, std::string>& overrides) const;
};

// Thin HTTP client for the repository's REST API. Bearer-token auth; GETs
// retry up to three times with backoff on 5xx and timeouts, mutating calls
// never retry. Throws HttpError (401/403 name authentication explicitly)
// or ProtocolError on unexpected response bodies.
class InvenioClient {
public:
    InvenioClient(std::string site_url, std::string auth_token, InvenioFlavor flavor,
                  ApiPaths paths, int timeout_seconds);

    std::string create_draft(const TargetRecordPayload& payload);
    std::string new_version(const std::string& record_id);
    void update_draft(const std::string& draft_id, const TargetRecordPayload& payload);
    void upload_file(const std::string& draft_id, const std::filesystem::path& path);
    // Returns (record_id, pid).
    std::pair<std::string, std::string> publish(const std::string& draft_id);
    Json get_record(const std::string& record_id);

    const std::vector<std::string>& call_log() const { return call_log_; }

private:
    Json request_json(const std::string& method, const std::string& path,
                      const std::string& body, const std::string& content_type,
                      bool idempotent);

    std::string site_url_;
    std::string auth_token_;
    InvenioFlavor flavor_;
    ApiPaths paths_;
    int timeout_seconds_;
    std::vector<std::string> call_log_;
};

// ------------------------------------------------------- plugin adapters

class FileDepositPlugin : public DepositPlugin {
public:
    DepositReceipt deposit(ExecutionContext& ctx, const MetadataRecord& record,
                           const std::string& record_bytes, bool curated) override;
};

class InvenioDepositPlugin : public DepositPlugin {
public:
    explicit InvenioDepositPlugin(InvenioFlavor flavor) : flavor_(flavor) {}

    DepositReceipt deposit(ExecutionContext& ctx, const MetadataRecord& record,
                           const std::string& record_bytes, bool curated) override;

private:
    InvenioFlavor flavor_;
};

} // namespace hermes
