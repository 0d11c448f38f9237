#include "hermes/process.hpp"

#include "hermes/errors.hpp"

#include <algorithm>
#include <set>

namespace hermes {

namespace {

bool is_person_list_term(const std::string& term) {
    return term == "author" || term == "contributor" || term == "maintainer";
}

// Identity key: lowercase email when present, else the display name.
std::string person_key(const PersonRef& p) {
    if (p.email && !p.email->empty()) {
        return "email:" + util::to_lower(*p.email);
    }
    return "name:" + p.display_name();
}

// Fills gaps in the established person from the newcomer; the first-seen
// spelling and fields always win, roles union.
void merge_person(PersonRef& established, const PersonRef& incoming) {
    if (!established.given_names && incoming.given_names) {
        established.given_names = incoming.given_names;
    }
    if (!established.family_names && incoming.family_names) {
        established.family_names = incoming.family_names;
    }
    if (!established.full_name && incoming.full_name) {
        established.full_name = incoming.full_name;
    }
    if (!established.email && incoming.email) {
        established.email = incoming.email;
    }
    if (!established.orcid && incoming.orcid) {
        established.orcid = incoming.orcid;
    }
    established.roles.insert(incoming.roles.begin(), incoming.roles.end());
}

// Union of two person lists. The established list keeps its order; new
// entries append in incoming order.
int merge_person_lists(ValueList& established, const ValueList& incoming) {
    int merges = 0;
    for (const Value& entry : incoming) {
        if (!entry.is_person()) {
            if (std::find(established.begin(), established.end(), entry) == established.end()) {
                established.push_back(entry);
            }
            continue;
        }
        const PersonRef& person = entry.person();
        bool matched = false;
        for (Value& existing : established) {
            if (!existing.is_person()) {
                continue;
            }
            const PersonRef& candidate = existing.person();
            bool same = person_key(candidate) == person_key(person);
            if (!same && !candidate.display_name().empty()) {
                same = candidate.display_name() == person.display_name();
            }
            if (same) {
                PersonRef merged = candidate;
                merge_person(merged, person);
                existing = Value(std::move(merged));
                matched = true;
                ++merges;
                break;
            }
        }
        if (!matched) {
            established.push_back(entry);
        }
    }
    return merges;
}

// Set union preserving first-seen order.
void merge_plain_lists(ValueList& established, const ValueList& incoming) {
    for (const Value& entry : incoming) {
        if (std::find(established.begin(), established.end(), entry) == established.end()) {
            established.push_back(entry);
        }
    }
}

} // namespace

ProvenanceTag make_provenance_tag(std::string source, util::Timestamp collected_at,
                                  util::Timestamp pipeline_start,
                                  std::optional<std::string> local_path, bool added) {
    if (collected_at > pipeline_start) {
        throw MalformedValueError("provenance timestamp for \"" + source +
                                  "\" lies in the future of the pipeline run");
    }
    ProvenanceTag tag;
    tag.source = std::move(source);
    tag.collected_at = collected_at;
    tag.local_path = std::move(local_path);
    tag.added = added;
    return tag;
}

CollationInput CollationInput::from_result(std::string source, HarvestResult result,
                                           util::Timestamp collected_at) {
    CollationInput input;
    input.source = std::move(source);
    input.collected_at = collected_at;
    if (result.meta.contains("path") && result.meta["path"].is_string()) {
        input.local_path = result.meta["path"].get<std::string>();
    }
    if (result.meta.contains("added") && result.meta["added"].is_boolean()) {
        input.added = result.meta["added"].get<bool>();
    }
    input.result = std::move(result);
    return input;
}

std::pair<MetadataRecord, CollationReport> collate(const std::vector<CollationInput>& inputs) {
    if (inputs.empty()) {
        throw EmptyInputError("collation needs at least one harvest result");
    }

    MetadataRecord out = new_record();
    CollationReport report;

    for (const CollationInput& input : inputs) {
        ProvenanceTag tag;
        tag.source = input.source;
        tag.collected_at = input.collected_at;
        tag.local_path = input.local_path;
        tag.added = input.added;

        for (const auto& [term, value] : input.result.metadata.fields()) {
            if (!out.has(term)) {
                out.set(term, value);
                report.field_provenance[term] = tag;
                continue;
            }

            const Value& established = out.get(term);
            if (established.is_list() && value.is_list()) {
                ValueList merged = established.list();
                if (is_person_list_term(term)) {
                    report.merged_person_count += merge_person_lists(merged, value.list());
                } else {
                    merge_plain_lists(merged, value.list());
                }
                out.set(term, Value(std::move(merged)));
                continue;
            }
            if (established.is_list() != value.is_list()) {
                throw IncompatibleTypesError(
                    "term \"" + term + "\" is a " +
                    (established.is_list() ? "list" : "single value") + " from source \"" +
                    report.field_provenance.at(term).source + "\" but a " +
                    (value.is_list() ? "list" : "single value") + " from source \"" +
                    input.source + "\"");
            }
            // Single-valued conflict: the earliest source already won; only
            // disagreements are worth reporting.
            if (!(established == value)) {
                report.conflicts.push_back({term, input.source, value});
            }
        }
    }

    return {std::move(out), std::move(report)};
}

MetadataRecord attach_provenance(const MetadataRecord& record, const CollationReport& report) {
    for (const auto& [term, value] : record.fields()) {
        if (term == kProvenanceTerm) {
            continue;
        }
        if (!report.field_provenance.count(term)) {
            throw IncompleteReportError("no provenance recorded for term \"" + term + "\"");
        }
    }

    ValueObject provenance;
    for (const auto& [term, tag] : report.field_provenance) {
        if (!record.has(term)) {
            continue;  // stale entry, e.g. a term later stripped
        }
        ValueObject entry;
        entry.items.emplace("source", Value(tag.source));
        entry.items.emplace("collectedAt", Value(util::format_utc(tag.collected_at)));
        if (tag.local_path) {
            entry.items.emplace("localPath", Value(*tag.local_path));
        }
        entry.items.emplace("added", Value(tag.added));
        provenance.items.emplace(term, Value(std::move(entry)));
    }

    MetadataRecord out = record;
    out.set(kProvenanceTerm, Value(std::move(provenance)));
    return out;
}

MetadataRecord strip_provenance(const MetadataRecord& record) {
    MetadataRecord out = record;
    out.remove(kProvenanceTerm);
    return out;
}

Json CollationReport::to_json() const {
    Json provenance = Json::object();
    for (const auto& [term, tag] : field_provenance) {
        Json entry = Json::object();
        entry["source"] = tag.source;
        entry["collectedAt"] = util::format_utc(tag.collected_at);
        if (tag.local_path) {
            entry["localPath"] = *tag.local_path;
        }
        entry["added"] = tag.added;
        provenance[term] = std::move(entry);
    }

    Json conflict_list = Json::array();
    for (const Conflict& conflict : conflicts) {
        Json entry = Json::object();
        entry["term"] = conflict.term;
        entry["losingSource"] = conflict.losing_source;
        entry["losingValue"] = value_to_json(conflict.losing_value);
        conflict_list.push_back(std::move(entry));
    }

    Json out = Json::object();
    out["fieldProvenance"] = std::move(provenance);
    out["conflicts"] = std::move(conflict_list);
    out["mergedPersonCount"] = merged_person_count;
    return out;
}

CollationReport CollationReport::from_json(const Json& j) {
    CollationReport report;
    if (j.contains("fieldProvenance")) {
        for (const auto& [term, entry] : j["fieldProvenance"].items()) {
            ProvenanceTag tag;
            tag.source = entry.value("source", "");
            if (auto t = util::parse_utc(entry.value("collectedAt", ""))) {
                tag.collected_at = *t;
            }
            if (entry.contains("localPath")) {
                tag.local_path = entry["localPath"].get<std::string>();
            }
            tag.added = entry.value("added", false);
            report.field_provenance[term] = std::move(tag);
        }
    }
    if (j.contains("conflicts")) {
        for (const auto& entry : j["conflicts"]) {
            Conflict conflict;
            conflict.term = entry.value("term", "");
            conflict.losing_source = entry.value("losingSource", "");
            if (entry.contains("losingValue")) {
                conflict.losing_value = value_from_json(entry["losingValue"]);
            }
            report.conflicts.push_back(std::move(conflict));
        }
    }
    report.merged_person_count = j.value("mergedPersonCount", 0);
    return report;
}

} // namespace hermes
