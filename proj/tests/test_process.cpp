#include "hermes/errors.hpp"
#include "hermes/process.hpp"

#include "support/fixtures.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace hermes;

namespace {

CollationInput input_for(const std::string& source, MetadataRecord record) {
    HarvestResult result;
    result.metadata = std::move(record);
    return CollationInput::from_result(source, std::move(result), util::now_utc());
}

PersonRef person(const std::string& name, const std::string& email,
                 std::set<Role> roles = {Role::Author}) {
    PersonRef p;
    p.full_name = name;
    if (!email.empty()) {
        p.email = email;
    }
    p.roles = std::move(roles);
    return p;
}

} // namespace

TEST_SUITE("process") {

TEST_CASE("single source collates to itself") {
    MetadataRecord r = new_record();
    r.set("name", Value("tool"));
    r.set("version", Value("1.0.0"));

    auto [out, report] = collate({input_for("cff", r)});
    CHECK(canonical_equal(out, r));
    CHECK(report.conflicts.empty());
    CHECK(report.field_provenance.at("name").source == "cff");
}

TEST_CASE("earliest source wins scalar conflicts; losers recorded") {
    // Oracle: precedence rule applied by hand. sources = [cff, manifest],
    // cff says 1.0.0 and manifest says 1.0.1 -> version 1.0.0, one conflict.
    MetadataRecord cff = new_record();
    cff.set("version", Value("1.0.0"));
    MetadataRecord manifest = new_record();
    manifest.set("version", Value("1.0.1"));

    auto [out, report] = collate({input_for("cff", cff), input_for("manifest", manifest)});
    CHECK(out.get("version").text() == "1.0.0");
    REQUIRE(report.conflicts.size() == 1);
    CHECK(report.conflicts[0].term == "version");
    CHECK(report.conflicts[0].losing_source == "manifest");
    CHECK(report.conflicts[0].losing_value.text() == "1.0.1");
}

TEST_CASE("agreeing values are not conflicts") {
    MetadataRecord a = new_record();
    a.set("name", Value("same"));
    MetadataRecord b = new_record();
    b.set("name", Value("same"));
    auto [out, report] = collate({input_for("x", a), input_for("y", b)});
    CHECK(report.conflicts.empty());
    CHECK(report.field_provenance.at("name").source == "x");
}

TEST_CASE("person lists merge by email with role union") {
    // Oracle: brute-force identity merge on the fixture. git has Alice
    // (author); cff has Alice (by email) and Bob. Union: {Alice, Bob},
    // Alice's roles merge.
    MetadataRecord git = new_record();
    git.set("author", Value(ValueList{Value(person("Alice Person", "alice@example.org",
                                                   {Role::Author, Role::Contributor}))}));
    MetadataRecord cff = new_record();
    cff.set("author", Value(ValueList{Value(person("A. Person", "alice@example.org")),
                                      Value(person("Bob Dev", "bob@example.org"))}));

    auto [out, report] = collate({input_for("git", git), input_for("cff", cff)});
    REQUIRE(out.get("author").list().size() == 2);
    const PersonRef& alice = out.get("author").list()[0].person();
    CHECK(alice.full_name == "Alice Person");  // winning source's spelling
    CHECK(alice.roles == std::set<Role>{Role::Author, Role::Contributor});
    CHECK(out.get("author").list()[1].person().full_name == "Bob Dev");
    CHECK(report.merged_person_count == 1);
    CHECK(report.conflicts.empty());
}

TEST_CASE("persons merge by exact name when no email is present") {
    MetadataRecord a = new_record();
    a.set("author", Value(ValueList{Value(person("Carol Writer", ""))}));
    MetadataRecord b = new_record();
    PersonRef carol = person("Carol Writer", "carol@example.org");
    carol.orcid = "https://orcid.org/0000-0002-1825-0097";
    b.set("author", Value(ValueList{Value(carol)}));

    auto [out, report] = collate({input_for("a", a), input_for("b", b)});
    REQUIRE(out.get("author").list().size() == 1);
    const PersonRef& merged = out.get("author").list()[0].person();
    CHECK(merged.email == "carol@example.org");  // gap filled from later source
    CHECK(merged.orcid == "https://orcid.org/0000-0002-1825-0097");
}

TEST_CASE("keyword lists union preserving first-seen order") {
    MetadataRecord a = new_record();
    a.set("keywords", Value(ValueList{Value("alpha"), Value("beta")}));
    MetadataRecord b = new_record();
    b.set("keywords", Value(ValueList{Value("beta"), Value("gamma")}));

    auto [out, report] = collate({input_for("a", a), input_for("b", b)});
    const ValueList& keywords = out.get("keywords").list();
    REQUIRE(keywords.size() == 3);
    CHECK(keywords[0].text() == "alpha");
    CHECK(keywords[1].text() == "beta");
    CHECK(keywords[2].text() == "gamma");
}

TEST_CASE("scalar against list is a typed error naming both sources") {
    MetadataRecord a = new_record();
    a.set("keywords", Value("just-one"));
    MetadataRecord b = new_record();
    b.set("keywords", Value(ValueList{Value("many")}));

    try {
        collate({input_for("cff", a), input_for("manifest", b)});
        FAIL("expected IncompatibleTypesError");
    } catch (const IncompatibleTypesError& e) {
        std::string msg = e.what();
        CHECK(msg.find("cff") != std::string::npos);
        CHECK(msg.find("manifest") != std::string::npos);
        CHECK(msg.find("keywords") != std::string::npos);
    }
}

TEST_CASE("empty input is rejected") {
    CHECK_THROWS_AS(collate({}), EmptyInputError);
}

TEST_CASE("attach and strip provenance are inverse") {
    MetadataRecord r = new_record();
    r.set("name", Value("tool"));
    r.set("version", Value("1.0.0"));
    r.set("description", Value("text"));

    auto [out, report] = collate({input_for("cff", r)});
    MetadataRecord attached = attach_provenance(out, report);

    REQUIRE(attached.has(kProvenanceTerm));
    CHECK(attached.get(kProvenanceTerm).object().items.size() == 3);  // one per field
    CHECK(canonical_equal(strip_provenance(attached), out));

    // Round-trip through bytes preserves the provenance term.
    ParsedRecord back = deserialize(serialize(attached));
    CHECK(canonical_equal(back.record, attached));
}

TEST_CASE("incomplete report is rejected") {
    MetadataRecord r = new_record();
    r.set("name", Value("tool"));
    CollationReport empty_report;
    CHECK_THROWS_AS(attach_provenance(r, empty_report), IncompleteReportError);
}

TEST_CASE("provenance tags refuse future timestamps") {
    auto now = util::now_utc();
    CHECK_THROWS_AS(
        make_provenance_tag("cff", now + std::chrono::hours(1), now, std::nullopt, false),
        MalformedValueError);
    CHECK_NOTHROW(make_provenance_tag("cff", now, now, std::nullopt, false));
}

TEST_CASE("collation report round-trips through JSON") {
    MetadataRecord a = new_record();
    a.set("version", Value("1.0.0"));
    MetadataRecord b = new_record();
    b.set("version", Value("2.0.0"));
    auto [out, report] = collate({input_for("x", a), input_for("y", b)});

    CollationReport back = CollationReport::from_json(report.to_json());
    CHECK(back.field_provenance.at("version").source == "x");
    REQUIRE(back.conflicts.size() == 1);
    CHECK(back.conflicts[0].losing_source == "y");
    CHECK(back.conflicts[0].losing_value == report.conflicts[0].losing_value);
}

TEST_CASE("determinism: same inputs give identical bytes") {
    std::mt19937 rng(99);
    for (int i = 0; i < 100; ++i) {
        auto inputs = testsupport::random_collation_inputs(rng);
        auto [r1, rep1] = collate(inputs);
        auto [r2, rep2] = collate(inputs);
        CHECK(serialize(r1) == serialize(r2));
        CHECK(rep1.to_json().dump() == rep2.to_json().dump());
    }
}

TEST_CASE("property: permutation changes winners only; idempotence; completeness") {
    std::mt19937 rng(20240101);
    int cases = 0;
    for (int i = 0; i < 400 || cases < 250; ++i) {
        REQUIRE(i < 4000);  // generator sanity bound
        auto inputs = testsupport::random_collation_inputs(rng);
        auto [record, report] = collate(inputs);
        ++cases;

        // Provenance completeness: every term has exactly one tag.
        for (const auto& [term, value] : record.fields()) {
            CHECK(report.field_provenance.count(term) == 1);
        }

        // Permutation: the set of terms never changes, only conflict winners.
        std::vector<CollationInput> reversed(inputs.rbegin(), inputs.rend());
        auto [permuted, permuted_report] = collate(reversed);
        CHECK(permuted.fields().size() == record.fields().size());
        for (const auto& [term, value] : record.fields()) {
            CHECK(permuted.has(term));
        }

        // Idempotence: collating the collated record is the identity.
        HarvestResult merged;
        merged.metadata = record;
        auto [again, again_report] = collate({CollationInput::from_result(
            "merged", std::move(merged), util::now_utc())});
        CHECK(canonical_equal(again, record));
        CHECK(again_report.conflicts.empty());
    }
}

} // TEST_SUITE
