#pragma once

#include "hermes/model.hpp"
#include "hermes/util.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hermes {

// One harvester's contribution to a collation run, in harvest.sources order.
struct CollationInput {
    std::string source;
    HarvestResult result;
    util::Timestamp collected_at{};
    std::optional<std::string> local_path;
    bool added = false;

    // Builds an input from a harvest result, lifting the conventional
    // "path" and "added" meta keys into the provenance fields.
    static CollationInput from_result(std::string source, HarvestResult result,
                                      util::Timestamp collected_at);
};

struct CollationReport {
    struct Conflict {
        std::string term;
        std::string losing_source;
        Value losing_value;

        bool operator==(const Conflict&) const = default;
    };

    std::map<std::string, ProvenanceTag> field_provenance;
    std::vector<Conflict> conflicts;
    int merged_person_count = 0;

    Json to_json() const;
    static CollationReport from_json(const Json& j);
};

// Collates the per-source results into one record. Scalar conflicts go to
// the earliest source; person lists merge by identity (email, else exact
// name) with role union; other lists union preserving first-seen order.
// Deterministic: same inputs, same output bytes.
std::pair<MetadataRecord, CollationReport> collate(const std::vector<CollationInput>& inputs);

// Embeds the report under the provenance extension term. Removing that term
// again recovers the input record exactly.
MetadataRecord attach_provenance(const MetadataRecord& record, const CollationReport& report);

MetadataRecord strip_provenance(const MetadataRecord& record);

// Tag constructor enforcing that collection never postdates the run.
ProvenanceTag make_provenance_tag(std::string source, util::Timestamp collected_at,
                                  util::Timestamp pipeline_start,
                                  std::optional<std::string> local_path, bool added);

} // namespace hermes
