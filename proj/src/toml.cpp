#include "hermes/toml.hpp"

#include "hermes/errors.hpp"
#include "hermes/util.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <set>

namespace hermes::toml {

Value::Kind Value::kind() const {
    switch (data_.index()) {
    case 0:
        return Kind::String;
    case 1:
        return Kind::Integer;
    case 2:
        return Kind::Float;
    case 3:
        return Kind::Boolean;
    case 4:
        return Kind::Date;
    case 5:
        return Kind::Array;
    default:
        return Kind::Table;
    }
}

std::string Value::kind_name() const {
    switch (kind()) {
    case Kind::String:
        return "string";
    case Kind::Integer:
        return "integer";
    case Kind::Float:
        return "float";
    case Kind::Boolean:
        return "boolean";
    case Kind::Date:
        return "date";
    case Kind::Array:
        return "array";
    case Kind::Table:
        return "table";
    }
    return "value";
}

double Value::number() const {
    if (is_integer()) {
        return static_cast<double>(integer());
    }
    return std::get<double>(data_);
}

std::string Value::as_text() const {
    switch (kind()) {
    case Kind::String:
        return str();
    case Kind::Date:
        return date_text();
    case Kind::Integer:
        return std::to_string(integer());
    case Kind::Boolean:
        return boolean() ? "true" : "false";
    case Kind::Float: {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%g", number());
        return buf;
    }
    default:
        return kind_name();
    }
}

namespace {

bool is_bare_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Table parse_document() {
        Table root;
        current_ = &root;
        current_path_.clear();

        skip_whitespace_and_comments(true);
        while (!at_end()) {
            if (peek() == '[') {
                parse_table_header(root);
            } else {
                parse_key_value(*current_, current_path_);
            }
            expect_line_end();
            skip_whitespace_and_comments(true);
        }
        return root;
    }

    Value parse_single_value() {
        skip_ws();
        Value v = parse_value();
        skip_ws();
        if (!at_end()) {
            fail("trailing characters after value");
        }
        return v;
    }

private:
    std::string_view text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Table* current_ = nullptr;
    std::vector<std::string> current_path_;
    std::set<std::string> defined_tables_;
    std::set<std::string> defined_keys_;

    [[noreturn]] void fail(const std::string& msg) const {
        throw TomlParseError("line " + std::to_string(line_) + ", column " +
                             std::to_string(col_) + ": " + msg);
    }

    bool at_end() const { return pos_ >= text_.size(); }

    char peek(size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }

    char advance() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_ws() {
        while (!at_end() && (peek() == ' ' || peek() == '\t')) {
            advance();
        }
    }

    void skip_comment() {
        if (!at_end() && peek() == '#') {
            while (!at_end() && peek() != '\n') {
                advance();
            }
        }
    }

    void skip_whitespace_and_comments(bool cross_lines) {
        for (;;) {
            skip_ws();
            skip_comment();
            if (cross_lines && !at_end() && (peek() == '\n' || peek() == '\r')) {
                if (peek() == '\r' && peek(1) == '\n') {
                    advance();
                }
                advance();
                continue;
            }
            return;
        }
    }

    void expect_line_end() {
        skip_ws();
        skip_comment();
        if (at_end()) {
            return;
        }
        if (peek() == '\r' && peek(1) == '\n') {
            advance();
        }
        if (peek() == '\n') {
            advance();
            return;
        }
        fail("expected end of line");
    }

    // ------------------------------------------------------------ keys

    std::string parse_key_part() {
        if (peek() == '"') {
            return parse_basic_string(false);
        }
        if (peek() == '\'') {
            return parse_literal_string(false);
        }
        std::string key;
        while (!at_end() && is_bare_key_char(peek())) {
            key += advance();
        }
        if (key.empty()) {
            fail("expected key");
        }
        return key;
    }

    std::vector<std::string> parse_dotted_key() {
        std::vector<std::string> parts;
        parts.push_back(parse_key_part());
        skip_ws();
        while (!at_end() && peek() == '.') {
            advance();
            skip_ws();
            parts.push_back(parse_key_part());
            skip_ws();
        }
        return parts;
    }

    static std::string joined(const std::vector<std::string>& parts) {
        std::string out;
        for (const auto& p : parts) {
            if (!out.empty()) {
                out += '.';
            }
            out += p;
        }
        return out;
    }

    // --------------------------------------------------------- headers

    void parse_table_header(Table& root) {
        advance();  // '['
        bool is_array = false;
        if (peek() == '[') {
            advance();
            is_array = true;
        }
        skip_ws();
        std::vector<std::string> parts = parse_dotted_key();
        skip_ws();
        if (peek() != ']') {
            fail("expected ']' to close table header");
        }
        advance();
        if (is_array) {
            if (peek() != ']') {
                fail("expected ']]' to close array-of-tables header");
            }
            advance();
        }

        Table* node = &root;
        for (size_t i = 0; i + 1 < parts.size(); ++i) {
            node = &descend(*node, parts[i]);
        }
        const std::string& last = parts.back();
        std::string full = joined(parts);

        if (is_array) {
            auto it = node->find(last);
            if (it == node->end()) {
                Array arr;
                arr.emplace_back(Table{});
                (*node)[last] = Value(std::move(arr));
            } else if (it->second.is_array()) {
                it->second.array().emplace_back(Table{});
            } else {
                fail("cannot extend non-array key [[" + full + "]]");
            }
            current_ = &(*node)[last].array().back().table();
        } else {
            if (!defined_tables_.insert(full).second) {
                fail("table [" + full + "] defined twice");
            }
            current_ = &descend(*node, last);
        }
        current_path_ = parts;
    }

    Table& descend(Table& node, const std::string& key) {
        auto it = node.find(key);
        if (it == node.end()) {
            it = node.emplace(key, Value(Table{})).first;
        }
        if (it->second.is_array()) {
            // [[x]] followed by [x.y]: descend into the latest element.
            if (it->second.array().empty() || !it->second.array().back().is_table()) {
                fail("key \"" + key + "\" is not a table");
            }
            return it->second.array().back().table();
        }
        if (!it->second.is_table()) {
            fail("key \"" + key + "\" is not a table");
        }
        return it->second.table();
    }

    // ----------------------------------------------------- key = value

    void parse_key_value(Table& target, const std::vector<std::string>& prefix) {
        std::vector<std::string> parts = parse_dotted_key();
        if (peek() != '=') {
            fail("expected '=' after key");
        }
        advance();
        skip_ws();
        Value value = parse_value();

        std::vector<std::string> full_parts = prefix;
        full_parts.insert(full_parts.end(), parts.begin(), parts.end());
        std::string full = joined(full_parts);
        if (!defined_keys_.insert(full).second) {
            fail("duplicate key \"" + full + "\"");
        }

        Table* node = &target;
        for (size_t i = 0; i + 1 < parts.size(); ++i) {
            node = &descend(*node, parts[i]);
        }
        const std::string& last = parts.back();
        if (node->count(last)) {
            fail("duplicate key \"" + full + "\"");
        }
        (*node)[last] = std::move(value);
    }

    // ------------------------------------------------------------ values

    Value parse_value() {
        if (at_end()) {
            fail("expected a value");
        }
        char c = peek();
        if (c == '"') {
            if (peek(1) == '"' && peek(2) == '"') {
                return Value(parse_multiline_basic_string());
            }
            return Value(parse_basic_string(true));
        }
        if (c == '\'') {
            if (peek(1) == '\'' && peek(2) == '\'') {
                return Value(parse_multiline_literal_string());
            }
            return Value(parse_literal_string(true));
        }
        if (c == '[') {
            return parse_array();
        }
        if (c == '{') {
            return parse_inline_table();
        }
        return parse_scalar_token();
    }

    std::string parse_basic_string(bool expect_open_quote) {
        if (expect_open_quote || peek() == '"') {
            if (peek() != '"') {
                fail("expected '\"'");
            }
            advance();
        }
        std::string out;
        for (;;) {
            if (at_end() || peek() == '\n') {
                fail("unterminated string");
            }
            char c = advance();
            if (c == '"') {
                return out;
            }
            if (c == '\\') {
                out += parse_escape();
            } else {
                out += c;
            }
        }
    }

    std::string parse_literal_string(bool expect_open_quote) {
        (void)expect_open_quote;
        if (peek() != '\'') {
            fail("expected \"'\"");
        }
        advance();
        std::string out;
        for (;;) {
            if (at_end() || peek() == '\n') {
                fail("unterminated literal string");
            }
            char c = advance();
            if (c == '\'') {
                return out;
            }
            out += c;
        }
    }

    std::string parse_multiline_basic_string() {
        advance();
        advance();
        advance();
        if (peek() == '\r') {
            advance();
        }
        if (peek() == '\n') {
            advance();
        }
        std::string out;
        for (;;) {
            if (at_end()) {
                fail("unterminated multi-line string");
            }
            if (peek() == '"' && peek(1) == '"' && peek(2) == '"') {
                advance();
                advance();
                advance();
                return out;
            }
            char c = advance();
            if (c == '\\') {
                // Line-ending backslash eats all following whitespace.
                if (peek() == '\n' || peek() == '\r' || peek() == ' ' || peek() == '\t') {
                    while (!at_end() &&
                           (peek() == '\n' || peek() == '\r' || peek() == ' ' || peek() == '\t')) {
                        advance();
                    }
                    continue;
                }
                out += parse_escape();
            } else {
                out += c;
            }
        }
    }

    std::string parse_multiline_literal_string() {
        advance();
        advance();
        advance();
        if (peek() == '\r') {
            advance();
        }
        if (peek() == '\n') {
            advance();
        }
        std::string out;
        for (;;) {
            if (at_end()) {
                fail("unterminated multi-line literal string");
            }
            if (peek() == '\'' && peek(1) == '\'' && peek(2) == '\'') {
                advance();
                advance();
                advance();
                return out;
            }
            out += advance();
        }
    }

    std::string parse_escape() {
        if (at_end()) {
            fail("dangling escape");
        }
        char c = advance();
        switch (c) {
        case 'b':
            return "\b";
        case 't':
            return "\t";
        case 'n':
            return "\n";
        case 'f':
            return "\f";
        case 'r':
            return "\r";
        case '"':
            return "\"";
        case '\\':
            return "\\";
        case 'u':
            return parse_unicode_escape(4);
        case 'U':
            return parse_unicode_escape(8);
        default:
            fail(std::string("invalid escape \\") + c);
        }
    }

    std::string parse_unicode_escape(int digits) {
        std::uint32_t cp = 0;
        for (int i = 0; i < digits; ++i) {
            if (at_end() || !std::isxdigit(static_cast<unsigned char>(peek()))) {
                fail("invalid unicode escape");
            }
            char c = advance();
            cp = cp * 16 + static_cast<std::uint32_t>(
                               std::isdigit(static_cast<unsigned char>(c))
                                   ? c - '0'
                                   : std::tolower(static_cast<unsigned char>(c)) - 'a' + 10);
        }
        // UTF-8 encode.
        std::string out;
        if (cp < 0x80) {
            out += static_cast<char>(cp);
        } else if (cp < 0x800) {
            out += static_cast<char>(0xC0 | (cp >> 6));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else if (cp < 0x10000) {
            out += static_cast<char>(0xE0 | (cp >> 12));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else {
            out += static_cast<char>(0xF0 | (cp >> 18));
            out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        }
        return out;
    }

    Value parse_array() {
        advance();  // '['
        Array arr;
        for (;;) {
            skip_whitespace_and_comments(true);
            if (at_end()) {
                fail("unterminated array");
            }
            if (peek() == ']') {
                advance();
                return Value(std::move(arr));
            }
            arr.push_back(parse_value());
            skip_whitespace_and_comments(true);
            if (peek() == ',') {
                advance();
            } else if (peek() != ']') {
                fail("expected ',' or ']' in array");
            }
        }
    }

    Value parse_inline_table() {
        advance();  // '{'
        Table table;
        skip_ws();
        if (peek() == '}') {
            advance();
            return Value(std::move(table));
        }
        for (;;) {
            skip_ws();
            std::vector<std::string> parts = parse_dotted_key();
            if (peek() != '=') {
                fail("expected '=' in inline table");
            }
            advance();
            skip_ws();
            Value value = parse_value();
            Table* node = &table;
            for (size_t i = 0; i + 1 < parts.size(); ++i) {
                node = &descend(*node, parts[i]);
            }
            if (node->count(parts.back())) {
                fail("duplicate key in inline table");
            }
            (*node)[parts.back()] = std::move(value);
            skip_ws();
            if (peek() == ',') {
                advance();
                continue;
            }
            if (peek() == '}') {
                advance();
                return Value(std::move(table));
            }
            fail("expected ',' or '}' in inline table");
        }
    }

    Value parse_scalar_token() {
        std::string token;
        while (!at_end()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == ',' || c == ']' ||
                c == '}' || c == '#') {
                break;
            }
            token += advance();
        }
        if (token.empty()) {
            fail("expected a value");
        }
        if (token == "true") {
            return Value(true);
        }
        if (token == "false") {
            return Value(false);
        }
        if (looks_like_date_or_time(token)) {
            // Offset date-times may contain a space before the time part in
            // TOML; that form is rare in configs and not supported here.
            return Value::date(token);
        }
        if (auto i = parse_integer_token(token)) {
            return Value(*i);
        }
        if (auto d = parse_float_token(token)) {
            return Value(*d);
        }
        fail("cannot parse value \"" + token + "\"");
    }

    static bool looks_like_date_or_time(const std::string& t) {
        // YYYY-MM-DD at minimum, optional time suffix.
        if (t.size() >= 10 && std::isdigit(static_cast<unsigned char>(t[0])) &&
            std::isdigit(static_cast<unsigned char>(t[1])) &&
            std::isdigit(static_cast<unsigned char>(t[2])) &&
            std::isdigit(static_cast<unsigned char>(t[3])) && t[4] == '-') {
            return true;
        }
        // HH:MM:SS local time.
        return t.size() >= 8 && std::isdigit(static_cast<unsigned char>(t[0])) &&
               std::isdigit(static_cast<unsigned char>(t[1])) && t[2] == ':';
    }

    static std::optional<std::int64_t> parse_integer_token(std::string token) {
        std::string cleaned;
        for (size_t i = 0; i < token.size(); ++i) {
            if (token[i] == '_') {
                bool ok = i > 0 && i + 1 < token.size() &&
                          std::isalnum(static_cast<unsigned char>(token[i - 1])) &&
                          std::isalnum(static_cast<unsigned char>(token[i + 1]));
                if (!ok) {
                    return std::nullopt;
                }
                continue;
            }
            cleaned += token[i];
        }
        int base = 10;
        std::string_view digits = cleaned;
        bool negative = false;
        if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) {
            negative = digits[0] == '-';
            digits.remove_prefix(1);
        }
        if (digits.size() > 2 && digits[0] == '0') {
            if (digits[1] == 'x') {
                base = 16;
                digits.remove_prefix(2);
            } else if (digits[1] == 'o') {
                base = 8;
                digits.remove_prefix(2);
            } else if (digits[1] == 'b') {
                base = 2;
                digits.remove_prefix(2);
            }
        }
        if (digits.empty()) {
            return std::nullopt;
        }
        std::int64_t value = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value, base);
        if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
            return std::nullopt;
        }
        return negative ? -value : value;
    }

    static std::optional<double> parse_float_token(std::string token) {
        std::string cleaned;
        for (char c : token) {
            if (c != '_') {
                cleaned += c;
            }
        }
        std::string_view sv = cleaned;
        double sign = 1.0;
        if (!sv.empty() && (sv[0] == '+' || sv[0] == '-')) {
            sign = sv[0] == '-' ? -1.0 : 1.0;
            sv.remove_prefix(1);
        }
        if (sv == "inf") {
            return sign * std::numeric_limits<double>::infinity();
        }
        if (sv == "nan") {
            return std::numeric_limits<double>::quiet_NaN();
        }
        char* end = nullptr;
        double value = std::strtod(cleaned.c_str(), &end);
        if (end != cleaned.c_str() + cleaned.size() || cleaned.empty()) {
            return std::nullopt;
        }
        return value;
    }
};

} // namespace

Table parse(std::string_view text) {
    Parser parser(text);
    return parser.parse_document();
}

Table parse_file(const std::filesystem::path& path) {
    std::string text;
    try {
        text = util::read_file(path);
    } catch (const FileNotFoundError&) {
        throw ConfigFileNotFoundError("configuration file not found: " + path.string());
    }
    try {
        return parse(text);
    } catch (const TomlParseError& e) {
        throw TomlParseError(path.string() + ": " + e.what());
    }
}

Value parse_scalar_lenient(std::string_view text) {
    try {
        Parser parser(text);
        return parser.parse_single_value();
    } catch (const TomlParseError&) {
        return Value(std::string(text));
    }
}

const Value* find(const Table& table, std::string_view dotted_key) {
    const Table* node = &table;
    std::vector<std::string> parts = util::split(dotted_key, '.');
    for (size_t i = 0; i < parts.size(); ++i) {
        auto it = node->find(parts[i]);
        if (it == node->end()) {
            return nullptr;
        }
        if (i + 1 == parts.size()) {
            return &it->second;
        }
        if (!it->second.is_table()) {
            return nullptr;
        }
        node = &it->second.table();
    }
    return nullptr;
}

void set_path(Table& table, std::string_view dotted_key, Value value) {
    Table* node = &table;
    std::vector<std::string> parts = util::split(dotted_key, '.');
    for (size_t i = 0; i + 1 < parts.size(); ++i) {
        auto it = node->find(parts[i]);
        if (it == node->end() || !it->second.is_table()) {
            it = node->insert_or_assign(parts[i], Value(Table{})).first;
        }
        node = &it->second.table();
    }
    (*node)[parts.back()] = std::move(value);
}

void merge(Table& base, const Table& updates) {
    for (const auto& [key, value] : updates) {
        auto it = base.find(key);
        if (it != base.end() && it->second.is_table() && value.is_table()) {
            merge(it->second.table(), value.table());
        } else {
            base.insert_or_assign(key, value);
        }
    }
}

} // namespace hermes::toml
