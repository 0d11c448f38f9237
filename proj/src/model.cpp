#include "hermes/model.hpp"

#include "hermes/errors.hpp"

#include <cctype>

namespace hermes {

std::string role_name(Role role) {
    switch (role) {
    case Role::Author:
        return "author";
    case Role::Contributor:
        return "contributor";
    case Role::Maintainer:
        return "maintainer";
    }
    return "author";
}

std::optional<Role> role_from_name(std::string_view name) {
    if (name == "author") {
        return Role::Author;
    }
    if (name == "contributor") {
        return Role::Contributor;
    }
    if (name == "maintainer") {
        return Role::Maintainer;
    }
    return std::nullopt;
}

std::string PersonRef::display_name() const {
    if (full_name && !full_name->empty()) {
        return *full_name;
    }
    std::string name;
    if (given_names) {
        name = *given_names;
    }
    if (family_names) {
        if (!name.empty()) {
            name += ' ';
        }
        name += *family_names;
    }
    if (name.empty() && email) {
        name = *email;
    }
    return name;
}

bool is_valid_orcid(std::string_view s) {
    constexpr std::string_view prefix = "https://orcid.org/";
    if (!util::starts_with(s, prefix)) {
        return false;
    }
    std::string_view rest = s.substr(prefix.size());
    if (rest.size() != 19) {
        return false;
    }
    for (size_t i = 0; i < rest.size(); ++i) {
        if (i == 4 || i == 9 || i == 14) {
            if (rest[i] != '-') {
                return false;
            }
        } else if (i == 18) {
            if (!std::isdigit(static_cast<unsigned char>(rest[i])) && rest[i] != 'X') {
                return false;
            }
        } else if (!std::isdigit(static_cast<unsigned char>(rest[i]))) {
            return false;
        }
    }
    return true;
}

namespace {

bool person_has_identity(const PersonRef& p) {
    auto set = [](const std::optional<std::string>& v) { return v && !v->empty(); };
    return set(p.full_name) || set(p.given_names) || set(p.family_names) || set(p.email);
}

void validate_value(const Value& value, int depth) {
    if (depth > kMaxValueDepth) {
        throw MalformedValueError("value nesting exceeds depth limit of " +
                                  std::to_string(kMaxValueDepth));
    }
    if (value.is_list()) {
        for (const Value& item : value.list()) {
            validate_value(item, depth + 1);
        }
    } else if (value.is_object()) {
        for (const auto& [key, item] : value.object().items) {
            if (key.empty()) {
                throw MalformedValueError("empty key in nested object");
            }
            if (key[0] == '@') {
                throw MalformedValueError("reserved key in nested object: " + key);
            }
            validate_value(item, depth + 1);
        }
    } else if (value.is_person()) {
        const PersonRef& p = value.person();
        if (!person_has_identity(p)) {
            throw MalformedValueError("person without name or email");
        }
        if (p.orcid && !is_valid_orcid(*p.orcid)) {
            throw MalformedValueError("not an ORCID URI: " + *p.orcid);
        }
    }
}

} // namespace

void Value::validate() const {
    validate_value(*this, 1);
}

bool MetadataRecord::has(std::string_view term) const {
    return fields_.find(std::string(term)) != fields_.end();
}

const Value& MetadataRecord::get(std::string_view term) const {
    return fields_.at(std::string(term));
}

void MetadataRecord::set(const std::string& term, Value value) {
    if (term.empty()) {
        throw ReservedTermError("term must be a non-empty string");
    }
    if (term[0] == '@') {
        throw ReservedTermError("term is reserved: " + term);
    }
    value.validate();
    fields_[term] = std::move(value);
}

void MetadataRecord::remove(const std::string& term) {
    fields_.erase(term);
}

MetadataRecord new_record() {
    return MetadataRecord{};
}

// ------------------------------------------------------------- serialization

Json value_to_json(const Value& value) {
    if (value.is_text()) {
        return value.text();
    }
    if (value.is_integer()) {
        return value.integer();
    }
    if (value.is_boolean()) {
        return value.boolean();
    }
    if (value.is_list()) {
        Json arr = Json::array();
        for (const Value& item : value.list()) {
            arr.push_back(value_to_json(item));
        }
        return arr;
    }
    if (value.is_object()) {
        const ValueObject& obj = value.object();
        Json out = Json::object();
        if (!obj.type.empty()) {
            out["@type"] = obj.type;
        }
        for (const auto& [key, item] : obj.items) {  // std::map: already sorted
            out[key] = value_to_json(item);
        }
        return out;
    }
    const PersonRef& p = value.person();
    Json out = Json::object();
    if (p.orcid) {
        out["@id"] = *p.orcid;
    }
    out["@type"] = "Person";
    if (p.email) {
        out["email"] = *p.email;
    }
    if (p.family_names) {
        out["familyName"] = *p.family_names;
    }
    if (p.given_names) {
        out["givenName"] = *p.given_names;
    }
    if (p.full_name) {
        out["name"] = *p.full_name;
    }
    if (!p.roles.empty()) {
        Json roles = Json::array();
        for (Role r : p.roles) {
            roles.push_back(role_name(r));
        }
        out["roles"] = roles;
    }
    return out;
}

std::string serialize(const MetadataRecord& record) {
    Json out = Json::object();
    out["@context"] = record.context();
    out["@type"] = record.record_type();
    for (const auto& [term, value] : record.fields()) {  // std::map: sorted terms
        out[term] = value_to_json(value);
    }
    return out.dump(2) + "\n";
}

// ------------------------------------------------------------ deserialization

namespace {

std::optional<PersonRef> person_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("@type") || !j["@type"].is_string() ||
        j["@type"].get<std::string>() != "Person") {
        return std::nullopt;
    }
    PersonRef p;
    for (const auto& [key, item] : j.items()) {
        if (key == "@type") {
            continue;
        }
        if (key == "@id") {
            if (!item.is_string() || !is_valid_orcid(item.get<std::string>())) {
                return std::nullopt;  // unknown identifier scheme: keep generic
            }
            p.orcid = item.get<std::string>();
        } else if (key == "givenName" && item.is_string()) {
            p.given_names = item.get<std::string>();
        } else if (key == "familyName" && item.is_string()) {
            p.family_names = item.get<std::string>();
        } else if (key == "name" && item.is_string()) {
            p.full_name = item.get<std::string>();
        } else if (key == "email" && item.is_string()) {
            p.email = item.get<std::string>();
        } else if (key == "roles" && item.is_array()) {
            for (const auto& r : item) {
                if (r.is_string()) {
                    if (auto role = role_from_name(r.get<std::string>())) {
                        p.roles.insert(*role);
                    }
                }
            }
        } else {
            return std::nullopt;  // unknown person key: keep generic
        }
    }
    if (!person_has_identity(p)) {
        return std::nullopt;
    }
    return p;
}

Value value_from_json_impl(const Json& j, int depth, std::vector<std::string>* warnings) {
    if (depth > kMaxValueDepth) {
        throw ParseError("value nesting exceeds depth limit of " +
                         std::to_string(kMaxValueDepth));
    }
    if (j.is_string()) {
        return Value(j.get<std::string>());
    }
    if (j.is_boolean()) {
        return Value(j.get<bool>());
    }
    if (j.is_number_integer()) {
        return Value(j.get<std::int64_t>());
    }
    if (j.is_number()) {
        // Non-integer numbers are outside the value universe; keep the text.
        return Value(j.dump());
    }
    if (j.is_array()) {
        ValueList list;
        list.reserve(j.size());
        for (const auto& item : j) {
            list.push_back(value_from_json_impl(item, depth + 1, warnings));
        }
        return Value(std::move(list));
    }
    if (j.is_object()) {
        if (auto person = person_from_json(j)) {
            return Value(std::move(*person));
        }
        ValueObject obj;
        for (const auto& [key, item] : j.items()) {
            if (key == "@type" && item.is_string()) {
                obj.type = item.get<std::string>();
                continue;
            }
            if (key.empty() || key[0] == '@') {
                if (warnings) {
                    warnings->push_back("dropped reserved key in nested object: " + key);
                }
                continue;
            }
            if (item.is_null()) {
                continue;
            }
            obj.items.emplace(key, value_from_json_impl(item, depth + 1, warnings));
        }
        return Value(std::move(obj));
    }
    throw ParseError("unsupported value of type " + std::string(j.type_name()));
}

} // namespace

Value value_from_json(const Json& j, int depth) {
    return value_from_json_impl(j, depth, nullptr);
}

struct RecordCodec {
    static ParsedRecord parse(std::string_view bytes) {
        Json doc;
        try {
            doc = Json::parse(bytes);
        } catch (const Json::exception& e) {
            throw ParseError(std::string("not valid JSON: ") + e.what());
        }
        if (!doc.is_object()) {
            throw ParseError("top level must be a single object");
        }

        ParsedRecord result;
        MetadataRecord& record = result.record;

        if (doc.contains("@context") && doc["@context"].is_string() &&
            doc["@context"].get<std::string>() == kCodeMetaContext) {
            // canonical context
        } else if (doc.contains("@context")) {
            result.context_warning = true;
            result.warnings.push_back("foreign @context kept out of the record: " +
                                      doc["@context"].dump());
        } else {
            result.context_warning = true;
            result.warnings.push_back("input carries no @context");
        }

        if (doc.contains("@type") && doc["@type"].is_string()) {
            record.record_type_ = doc["@type"].get<std::string>();
        }

        for (const auto& [key, item] : doc.items()) {
            if (key == "@context" || key == "@type") {
                continue;
            }
            if (key.empty() || key[0] == '@') {
                result.context_warning = true;
                result.warnings.push_back("dropped reserved key: " + key);
                continue;
            }
            if (item.is_null()) {
                continue;
            }
            Value value = value_from_json_impl(item, 1, &result.warnings);
            try {
                value.validate();
            } catch (const MalformedValueError& e) {
                throw ParseError(std::string("invalid value for \"") + key + "\": " + e.what());
            }
            record.fields_[key] = std::move(value);
        }
        return result;
    }
};

ParsedRecord deserialize(std::string_view bytes) {
    return RecordCodec::parse(bytes);
}

bool canonical_equal(const MetadataRecord& a, const MetadataRecord& b) {
    return a == b;
}

} // namespace hermes
