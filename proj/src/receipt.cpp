#include "hermes/receipt.hpp"

namespace hermes {

Json DepositReceipt::to_json() const {
    Json out = Json::object();
    out["target"] = target;
    out["recordId"] = record_id;
    if (pid) {
        out["pid"] = *pid;
    }
    if (record_url) {
        out["recordUrl"] = *record_url;
    }
    Json files = Json::array();
    for (const auto& [path, bytes] : uploaded_files) {
        Json f = Json::object();
        f["path"] = path;
        f["bytes"] = bytes;
        files.push_back(std::move(f));
    }
    out["uploadedFiles"] = std::move(files);
    out["publishedAt"] = util::format_utc(published_at);
    out["curated"] = curated;
    return out;
}

DepositReceipt DepositReceipt::from_json(const Json& j) {
    DepositReceipt receipt;
    receipt.target = j.value("target", "");
    receipt.record_id = j.value("recordId", "");
    if (j.contains("pid")) {
        receipt.pid = j["pid"].get<std::string>();
    }
    if (j.contains("recordUrl")) {
        receipt.record_url = j["recordUrl"].get<std::string>();
    }
    if (j.contains("uploadedFiles")) {
        for (const auto& f : j["uploadedFiles"]) {
            receipt.uploaded_files.emplace_back(f.value("path", ""),
                                                f.value("bytes", std::uint64_t{0}));
        }
    }
    if (auto t = util::parse_utc(j.value("publishedAt", ""))) {
        receipt.published_at = *t;
    }
    receipt.curated = j.value("curated", false);
    return receipt;
}

} // namespace hermes
