#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hermes::toml {

class Value;

using Array = std::vector<Value>;
using Table = std::map<std::string, Value>;

// One TOML value. Dates and times keep their source text: the pipeline only
// ever needs them as calendar strings.
class Value {
public:
    enum class Kind { String, Integer, Float, Boolean, Date, Array, Table };

    Value() : data_(std::string{}) {}
    Value(std::string s) : data_(std::move(s)) {}
    Value(const char* s) : data_(std::string(s)) {}
    Value(std::int64_t i) : data_(i) {}
    Value(int i) : data_(static_cast<std::int64_t>(i)) {}
    Value(double d) : data_(d) {}
    Value(bool b) : data_(b) {}
    Value(Array a) : data_(std::move(a)) {}
    Value(Table t) : data_(std::move(t)) {}

    static Value date(std::string text) {
        Value v;
        v.data_ = DateText{std::move(text)};
        return v;
    }

    Kind kind() const;
    std::string kind_name() const;

    bool is_string() const { return kind() == Kind::String; }
    bool is_integer() const { return kind() == Kind::Integer; }
    bool is_float() const { return kind() == Kind::Float; }
    bool is_boolean() const { return kind() == Kind::Boolean; }
    bool is_date() const { return kind() == Kind::Date; }
    bool is_array() const { return kind() == Kind::Array; }
    bool is_table() const { return kind() == Kind::Table; }

    const std::string& str() const { return std::get<std::string>(data_); }
    std::int64_t integer() const { return std::get<std::int64_t>(data_); }
    double number() const;
    bool boolean() const { return std::get<bool>(data_); }
    const std::string& date_text() const { return std::get<DateText>(data_).text; }
    const Array& array() const { return std::get<Array>(data_); }
    Array& array() { return std::get<Array>(data_); }
    const Table& table() const { return std::get<Table>(data_); }
    Table& table() { return std::get<Table>(data_); }

    // String view of the value for settings that accept dates or strings.
    std::string as_text() const;

    bool operator==(const Value&) const = default;

private:
    struct DateText {
        std::string text;
        bool operator==(const DateText&) const = default;
    };

    std::variant<std::string, std::int64_t, double, bool, DateText, Array, Table> data_;
};

// Parses a complete TOML document. Throws TomlParseError with line/column
// information on malformed input.
Table parse(std::string_view text);

Table parse_file(const std::filesystem::path& path);

// Parses a single TOML value ("true", "42", "[\"a\"]", ...). Inputs that do
// not parse as a TOML value are returned as plain strings; used for
// environment and command line overrides.
Value parse_scalar_lenient(std::string_view text);

// Dotted-path helpers. find returns nullptr when any path segment is
// missing; set_path creates intermediate tables as needed.
const Value* find(const Table& table, std::string_view dotted_key);
void set_path(Table& table, std::string_view dotted_key, Value value);

// Recursively overlays updates onto base: tables merge key-wise, any other
// value replaces the one beneath it.
void merge(Table& base, const Table& updates);

} // namespace hermes::toml
