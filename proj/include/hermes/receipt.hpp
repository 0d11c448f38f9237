#pragma once

#include "hermes/model.hpp"
#include "hermes/util.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hermes {

// Outcome of one deposit run. Repository targets carry both a record id and
// a PID after a successful publish; the file target carries neither.
struct DepositReceipt {
    std::string target;
    std::string record_id;
    std::optional<std::string> pid;  // DOI or other persistent identifier
    std::optional<std::string> record_url;
    std::vector<std::pair<std::string, std::uint64_t>> uploaded_files;  // path, bytes
    util::Timestamp published_at{};
    bool curated = false;

    Json to_json() const;
    static DepositReceipt from_json(const Json& j);

    bool operator==(const DepositReceipt&) const = default;
};

} // namespace hermes
