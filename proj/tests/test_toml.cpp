#include "hermes/errors.hpp"
#include "hermes/toml.hpp"

#include <doctest.h>

using namespace hermes;

TEST_SUITE("toml") {

TEST_CASE("basic document") {
    toml::Table t = toml::parse(R"(
# comment
title = "example"
count = 42
ratio = 0.5
flag = true

[owner]
name = "Alice"

[owner.contact]
email = "a@example.org"
)");
    CHECK(toml::find(t, "title")->str() == "example");
    CHECK(toml::find(t, "count")->integer() == 42);
    CHECK(toml::find(t, "ratio")->number() == doctest::Approx(0.5));
    CHECK(toml::find(t, "flag")->boolean());
    CHECK(toml::find(t, "owner.name")->str() == "Alice");
    CHECK(toml::find(t, "owner.contact.email")->str() == "a@example.org");
    CHECK(toml::find(t, "owner.missing") == nullptr);
}

TEST_CASE("strings: escapes, literals, multiline") {
    toml::Table t = toml::parse(R"(a = "line\nbreak \"quoted\" \u00e9"
b = 'C:\path\no\escape'
c = """
multi
line"""
d = '''raw '' text'''
)");
    CHECK(toml::find(t, "a")->str() == "line\nbreak \"quoted\" \xc3\xa9");
    CHECK(toml::find(t, "b")->str() == "C:\\path\\no\\escape");
    CHECK(toml::find(t, "c")->str() == "multi\nline");
    CHECK(toml::find(t, "d")->str() == "raw '' text");
}

TEST_CASE("arrays and inline tables") {
    toml::Table t = toml::parse(R"(
sources = ["cff", "git", "codemeta"]
mixed = [1, "two", true]
multiline = [
  "a",
  "b",  # trailing comment
]
authors = [{name = "Alice", email = "a@x"}, {name = "Bob"}]
paths = {records = "/api/records", publish = "/api/publish"}
)");
    REQUIRE(toml::find(t, "sources")->is_array());
    CHECK(toml::find(t, "sources")->array().size() == 3);
    CHECK(toml::find(t, "sources")->array()[1].str() == "git");
    CHECK(toml::find(t, "mixed")->array().size() == 3);
    CHECK(toml::find(t, "multiline")->array().size() == 2);
    CHECK(toml::find(t, "authors")->array()[0].table().at("name").str() == "Alice");
    CHECK(toml::find(t, "paths.records")->str() == "/api/records");
}

TEST_CASE("integers in all notations") {
    toml::Table t = toml::parse(R"(
plain = 123
negative = -7
sep = 1_000_000
hex = 0xff
oct = 0o17
bin = 0b1010
)");
    CHECK(toml::find(t, "plain")->integer() == 123);
    CHECK(toml::find(t, "negative")->integer() == -7);
    CHECK(toml::find(t, "sep")->integer() == 1000000);
    CHECK(toml::find(t, "hex")->integer() == 255);
    CHECK(toml::find(t, "oct")->integer() == 15);
    CHECK(toml::find(t, "bin")->integer() == 10);
}

TEST_CASE("dates keep their text") {
    toml::Table t = toml::parse("when = 2024-05-01\nstamp = 2024-05-01T10:00:00Z\n");
    CHECK(toml::find(t, "when")->is_date());
    CHECK(toml::find(t, "when")->date_text() == "2024-05-01");
    CHECK(toml::find(t, "stamp")->date_text() == "2024-05-01T10:00:00Z");
}

TEST_CASE("dotted keys") {
    toml::Table t = toml::parse("a.b.c = 1\na.b.d = 2\n");
    CHECK(toml::find(t, "a.b.c")->integer() == 1);
    CHECK(toml::find(t, "a.b.d")->integer() == 2);
}

TEST_CASE("array of tables") {
    toml::Table t = toml::parse(R"(
[[step]]
name = "one"
[[step]]
name = "two"
)");
    REQUIRE(toml::find(t, "step")->is_array());
    CHECK(toml::find(t, "step")->array().size() == 2);
    CHECK(toml::find(t, "step")->array()[1].table().at("name").str() == "two");
}

TEST_CASE("parse errors carry line information") {
    CHECK_THROWS_AS(toml::parse("a = "), TomlParseError);
    CHECK_THROWS_AS(toml::parse("= 3"), TomlParseError);
    CHECK_THROWS_AS(toml::parse("a = \"unterminated"), TomlParseError);
    CHECK_THROWS_AS(toml::parse("[table\na = 1"), TomlParseError);
    CHECK_THROWS_AS(toml::parse("a = 1 trailing"), TomlParseError);
    try {
        toml::parse("ok = 1\nbad = zzz\n");
        FAIL("expected TomlParseError");
    } catch (const TomlParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("duplicate keys and tables are rejected") {
    CHECK_THROWS_AS(toml::parse("a = 1\na = 2\n"), TomlParseError);
    CHECK_THROWS_AS(toml::parse("[t]\na = 1\n[t]\nb = 2\n"), TomlParseError);
}

TEST_CASE("lenient scalar parsing for overrides") {
    CHECK(toml::parse_scalar_lenient("true").boolean());
    CHECK(toml::parse_scalar_lenient("42").integer() == 42);
    CHECK(toml::parse_scalar_lenient("\"quoted\"").str() == "quoted");
    CHECK(toml::parse_scalar_lenient("[\"a\",\"b\"]").array().size() == 2);
    // Not valid TOML: falls back to the raw string.
    CHECK(toml::parse_scalar_lenient("develop").str() == "develop");
    CHECK(toml::parse_scalar_lenient("a b c").str() == "a b c");
}

TEST_CASE("set_path and merge") {
    toml::Table t;
    toml::set_path(t, "deposit.invenio_rdm.site_url", toml::Value("https://x"));
    CHECK(toml::find(t, "deposit.invenio_rdm.site_url")->str() == "https://x");

    toml::Table overlay;
    toml::set_path(overlay, "deposit.invenio_rdm.auth_token", toml::Value("s3cret"));
    toml::set_path(overlay, "deposit.target", toml::Value("invenio_rdm"));
    toml::merge(t, overlay);
    CHECK(toml::find(t, "deposit.invenio_rdm.site_url")->str() == "https://x");
    CHECK(toml::find(t, "deposit.invenio_rdm.auth_token")->str() == "s3cret");
    CHECK(toml::find(t, "deposit.target")->str() == "invenio_rdm");
}

} // TEST_SUITE
