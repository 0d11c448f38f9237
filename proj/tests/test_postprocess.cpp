#include "hermes/errors.hpp"
#include "hermes/harvest.hpp"
#include "hermes/postprocess.hpp"

#include "support/fixtures.hpp"

#include <doctest.h>

using namespace hermes;

namespace {

DepositReceipt receipt_with(const std::string& target, const std::string& record_id,
                            std::optional<std::string> pid = std::nullopt) {
    DepositReceipt r;
    r.target = target;
    r.record_id = record_id;
    r.pid = std::move(pid);
    r.published_at = util::now_utc();
    return r;
}

} // namespace

TEST_SUITE("postprocess.config_record_id") {

TEST_CASE("inserts record_id into the target section") {
    testsupport::TempDir dir;
    auto path = dir.path() / "hermes.toml";
    testsupport::write_file(path, "[deposit]\ntarget = \"invenio_rdm\"\n\n"
                                  "[deposit.invenio_rdm]\nsite_url = \"https://x\"\n");

    store_record_id(path, receipt_with("invenio_rdm", "98765"));

    PipelineConfig reloaded = load_config(path);
    CHECK(reloaded.invenio_rdm.record_id == 98765);
}

TEST_CASE("replaces a stale id, preserving comments and layout") {
    // Golden before/after pair: only the record_id line changes.
    testsupport::TempDir dir;
    auto path = dir.path() / "hermes.toml";
    const std::string before = "# pipeline configuration\n"
                               "[deposit]\n"
                               "target = \"invenio_rdm\"  # our repository\n"
                               "\n"
                               "[deposit.invenio_rdm]\n"
                               "site_url = \"https://x\"\n"
                               "record_id = 111  # previous publication\n"
                               "communities = [\"c\"]\n";
    const std::string after = "# pipeline configuration\n"
                              "[deposit]\n"
                              "target = \"invenio_rdm\"  # our repository\n"
                              "\n"
                              "[deposit.invenio_rdm]\n"
                              "site_url = \"https://x\"\n"
                              "record_id = 98765  # previous publication\n"
                              "communities = [\"c\"]\n";
    testsupport::write_file(path, before);

    store_record_id(path, receipt_with("invenio_rdm", "98765"));
    CHECK(util::read_file(path) == after);
}

TEST_CASE("no-op edit leaves the file byte-identical") {
    testsupport::TempDir dir;
    auto path = dir.path() / "hermes.toml";
    const std::string text = "[deposit.invenio_rdm]\nrecord_id = 42 # keep me\n";
    testsupport::write_file(path, text);
    store_record_id(path, receipt_with("invenio_rdm", "42"));
    CHECK(util::read_file(path) == text);
}

TEST_CASE("creates the section when absent") {
    testsupport::TempDir dir;
    auto path = dir.path() / "hermes.toml";
    testsupport::write_file(path, "[harvest]\nsources = [\"cff\"]\n");
    store_record_id(path, receipt_with("invenio", "7"));
    PipelineConfig reloaded = load_config(path);
    CHECK(reloaded.invenio.record_id == 7);
    // Original content is untouched.
    CHECK(util::read_file(path).find("sources = [\"cff\"]") != std::string::npos);
}

TEST_CASE("errors: no record id, missing file, read-only file") {
    testsupport::TempDir dir;
    auto path = dir.path() / "hermes.toml";
    testsupport::write_file(path, "");

    CHECK_THROWS_AS(store_record_id(path, receipt_with("invenio_rdm", "")),
                    ConfigEditError);
    CHECK_THROWS_AS(store_record_id(dir.path() / "nope.toml",
                                    receipt_with("invenio_rdm", "1")),
                    FileNotFoundError);

    std::filesystem::permissions(path, std::filesystem::perms::owner_read);
    CHECK_THROWS_AS(store_record_id(path, receipt_with("invenio_rdm", "1")), IoError);
    std::filesystem::permissions(path, std::filesystem::perms::owner_all);
}

} // TEST_SUITE

TEST_SUITE("postprocess.cff_doi") {

TEST_CASE("adds doi key and identifiers entry") {
    // Golden pair checked line by line; validity re-checked by the
    // citation-file validator.
    testsupport::TempDir dir;
    auto path = dir.path() / "CITATION.cff";
    testsupport::write_file(path, testsupport::sample_cff());

    insert_doi_cff(path, receipt_with("invenio_rdm", "123",
                                      std::string("10.5281/zenodo.123")));

    std::string edited = util::read_file(path);
    CHECK(edited.find("doi: 10.5281/zenodo.123") != std::string::npos);
    CHECK(edited.find("- type: doi") != std::string::npos);
    CHECK(edited.find("value: 10.5281/zenodo.123") != std::string::npos);
    CHECK_NOTHROW(validate_cff_text(edited));
    // The old DOI from the doi key is preserved in identifiers.
    CHECK(edited.find("value: 10.5281/zenodo.1234") != std::string::npos);
}

TEST_CASE("existing doi key is replaced and retained in identifiers") {
    testsupport::TempDir dir;
    auto path = dir.path() / "CITATION.cff";
    const std::string before = "cff-version: 1.2.0\n"
                               "message: please cite\n"
                               "title: T\n"
                               "doi: 10.5281/zenodo.100\n"
                               "authors:\n"
                               "  - family-names: Person\n";
    testsupport::write_file(path, before);

    insert_doi_cff(path, receipt_with("invenio_rdm", "200",
                                      std::string("10.5281/zenodo.200")));
    std::string edited = util::read_file(path);
    CHECK(edited == "cff-version: 1.2.0\n"
                    "message: please cite\n"
                    "title: T\n"
                    "doi: 10.5281/zenodo.200\n"
                    "authors:\n"
                    "  - family-names: Person\n"
                    "identifiers:\n"
                    "  - type: doi\n"
                    "    value: 10.5281/zenodo.100\n"
                    "  - type: doi\n"
                    "    value: 10.5281/zenodo.200\n");
    CHECK_NOTHROW(validate_cff_text(edited));
}

TEST_CASE("no-op edit is byte-identical") {
    testsupport::TempDir dir;
    auto path = dir.path() / "CITATION.cff";
    testsupport::write_file(path, testsupport::sample_cff());
    insert_doi_cff(path, receipt_with("invenio_rdm", "1",
                                      std::string("10.5281/zenodo.500")));
    std::string once = util::read_file(path);
    insert_doi_cff(path, receipt_with("invenio_rdm", "1",
                                      std::string("10.5281/zenodo.500")));
    CHECK(util::read_file(path) == once);
}

TEST_CASE("url-shaped pids are normalized, others rejected") {
    CHECK(normalize_doi("https://doi.org/10.5281/zenodo.9") == "10.5281/zenodo.9");
    CHECK(normalize_doi("doi:10.1/x") == "10.1/x");  // prefix accepted, shape checked
    CHECK_FALSE(normalize_doi("hdl:123").has_value());
    CHECK_FALSE(normalize_doi("10.x/y").has_value());
    CHECK_FALSE(normalize_doi("not a doi").has_value());

    testsupport::TempDir dir;
    auto path = dir.path() / "CITATION.cff";
    testsupport::write_file(path, testsupport::sample_cff());
    CHECK_THROWS_AS(insert_doi_cff(path, receipt_with("x", "1", std::string("hdl:123"))),
                    InvalidDoiError);
}

TEST_CASE("errors: missing or unparsable citation file") {
    testsupport::TempDir dir;
    CHECK_THROWS_AS(insert_doi_cff(dir.path() / "CITATION.cff",
                                   receipt_with("x", "1", std::string("10.1/x"))),
                    FileNotFoundError);
    auto path = dir.path() / "CITATION.cff";
    testsupport::write_file(path, "title: [broken\n  - ");
    CHECK_THROWS_AS(insert_doi_cff(path, receipt_with("x", "1", std::string("10.1/x"))),
                    YamlParseError);
}

TEST_CASE("existing identifiers block gains entries at its end") {
    testsupport::TempDir dir;
    auto path = dir.path() / "CITATION.cff";
    testsupport::write_file(path, "cff-version: 1.2.0\n"
                                  "message: m\n"
                                  "title: T\n"
                                  "authors:\n"
                                  "  - family-names: P\n"
                                  "identifiers:\n"
                                  "  - type: url\n"
                                  "    value: https://example.org\n"
                                  "version: 1.0.0\n");
    insert_doi_cff(path, receipt_with("x", "1", std::string("10.5/abc")));
    std::string edited = util::read_file(path);
    // New entry sits inside the identifiers block, before "version:".
    size_t url_pos = edited.find("value: https://example.org");
    size_t doi_pos = edited.find("value: 10.5/abc");
    size_t version_pos = edited.find("version: 1.0.0");
    REQUIRE(url_pos != std::string::npos);
    REQUIRE(doi_pos != std::string::npos);
    REQUIRE(version_pos != std::string::npos);
    CHECK(url_pos < doi_pos);
    CHECK(doi_pos < version_pos);
    CHECK_NOTHROW(validate_cff_text(edited));
}

} // TEST_SUITE
