#pragma once

#include "hermes/util.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hermes {

// Insertion-ordered JSON. All serialization in the pipeline goes through
// this alias so key order is always deliberate and reproducible.
using Json = nlohmann::ordered_json;

// The one JSON-LD context every record in the pipeline is bound to. It is an
// opaque constant: no context resolution or expansion happens anywhere.
inline constexpr const char* kCodeMetaContext = "https://doi.org/10.5063/schema/codemeta-2.0";

inline constexpr const char* kRootType = "SoftwareSourceCode";

// Extension term that carries per-field provenance inside a record.
inline constexpr const char* kProvenanceTerm = "hermes:provenance";

// Maximum nesting depth a value tree may have before it is rejected.
inline constexpr int kMaxValueDepth = 32;

enum class Role {
    Author,
    Contributor,
    Maintainer,
};

std::string role_name(Role role);
std::optional<Role> role_from_name(std::string_view name);

// A person or organisation referenced from a record (author, contributor,
// maintainer). Requires at least one of full_name / given+family / email.
struct PersonRef {
    std::optional<std::string> given_names;
    std::optional<std::string> family_names;
    std::optional<std::string> full_name;
    std::optional<std::string> email;
    std::optional<std::string> orcid;  // https://orcid.org/XXXX-XXXX-XXXX-XXXX
    std::set<Role> roles;

    // Human-readable name: full_name if present, else "given family".
    std::string display_name() const;

    bool operator==(const PersonRef&) const = default;
};

bool is_valid_orcid(std::string_view s);

class Value;

using ValueList = std::vector<Value>;

// Nested term->value mapping, optionally typed (rendered as "@type").
struct ValueObject {
    std::string type;  // empty when untyped
    std::map<std::string, Value> items;

    bool operator==(const ValueObject&) const = default;
};

// One CodeMeta term value: text, integer, boolean, list, nested object, or
// a person reference. Immutable by convention once stored in a record.
class Value {
public:
    Value() : data_(std::string{}) {}
    Value(const char* text) : data_(std::string(text)) {}
    Value(std::string text) : data_(std::move(text)) {}
    Value(std::int64_t number) : data_(number) {}
    Value(int number) : data_(static_cast<std::int64_t>(number)) {}
    Value(bool flag) : data_(flag) {}
    Value(ValueList list) : data_(std::move(list)) {}
    Value(ValueObject object) : data_(std::move(object)) {}
    Value(PersonRef person) : data_(std::move(person)) {}

    bool is_text() const { return std::holds_alternative<std::string>(data_); }
    bool is_integer() const { return std::holds_alternative<std::int64_t>(data_); }
    bool is_boolean() const { return std::holds_alternative<bool>(data_); }
    bool is_list() const { return std::holds_alternative<ValueList>(data_); }
    bool is_object() const { return std::holds_alternative<ValueObject>(data_); }
    bool is_person() const { return std::holds_alternative<PersonRef>(data_); }
    bool is_scalar() const { return is_text() || is_integer() || is_boolean(); }

    const std::string& text() const { return std::get<std::string>(data_); }
    std::int64_t integer() const { return std::get<std::int64_t>(data_); }
    bool boolean() const { return std::get<bool>(data_); }
    const ValueList& list() const { return std::get<ValueList>(data_); }
    ValueList& list() { return std::get<ValueList>(data_); }
    const ValueObject& object() const { return std::get<ValueObject>(data_); }
    const PersonRef& person() const { return std::get<PersonRef>(data_); }

    // Throws MalformedValueError when nesting exceeds kMaxValueDepth, a
    // nested key is empty or reserved, or a PersonRef misses all name fields.
    void validate() const;

    bool operator==(const Value&) const = default;

private:
    std::variant<std::string, std::int64_t, bool, ValueList, ValueObject, PersonRef> data_;
};

// CodeMeta-derived record: the single exchange format between phases.
class MetadataRecord {
public:
    MetadataRecord() = default;

    const std::string& context() const { return context_; }
    const std::string& record_type() const { return record_type_; }
    const std::map<std::string, Value>& fields() const { return fields_; }

    bool has(std::string_view term) const;
    const Value& get(std::string_view term) const;  // throws std::out_of_range

    // Stores term -> value. Throws ReservedTermError for empty or "@"-keys
    // and MalformedValueError when the value fails validation.
    void set(const std::string& term, Value value);

    void remove(const std::string& term);

    bool empty() const { return fields_.empty(); }

    bool operator==(const MetadataRecord&) const = default;

private:
    friend struct RecordCodec;

    std::string context_ = kCodeMetaContext;
    std::string record_type_ = kRootType;
    std::map<std::string, Value> fields_;
};

// Per-field origin annotation.
struct ProvenanceTag {
    std::string source;                     // plugin name that produced the value
    util::Timestamp collected_at{};         // UTC, never in the future of the run
    std::optional<std::string> local_path;  // file / repository the value came from
    bool added = false;                     // true when synthesized by the plugin

    bool operator==(const ProvenanceTag&) const = default;
};

// What each harvester returns: the terms it found plus free-form
// meta-metadata (not bound to any schema).
struct HarvestResult {
    MetadataRecord metadata;
    Json meta = Json::object();
};

MetadataRecord new_record();

// Deterministic serialization: fixed 2-space indentation, "@context" and
// "@type" first, remaining terms in lexicographic order. Equal records
// produce identical bytes.
std::string serialize(const MetadataRecord& record);

struct ParsedRecord {
    MetadataRecord record;
    // Set when the input carries a different (or no) context, or when
    // unknown "@" keys had to be dropped. Tolerated: third-party CodeMeta
    // files vary too much to make this fatal.
    bool context_warning = false;
    std::vector<std::string> warnings;
};

// Throws ParseError for malformed input. Foreign contexts and stray "@"
// keys are reported through ParsedRecord, not as errors.
ParsedRecord deserialize(std::string_view bytes);

// Same terms, same values; list order significant, map key order not.
bool canonical_equal(const MetadataRecord& a, const MetadataRecord& b);

// JSON bridges used by the cache envelopes and reports.
Json value_to_json(const Value& value);
Value value_from_json(const Json& j, int depth = 1);

} // namespace hermes
