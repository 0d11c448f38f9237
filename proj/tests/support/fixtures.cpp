#include "support/fixtures.hpp"

#include "hermes/errors.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace testsupport {

namespace fs = std::filesystem;
using hermes::util::run_process;

TempDir::TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = fs::temp_directory_path() /
            ("hermes-test-" + std::to_string(rng()));
    fs::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

void write_file(const fs::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("fixture: cannot write " + path.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

// -------------------------------------------------------------------- git

void git_init(const fs::path& repo) {
    auto res = run_process({"git", "init", "-q", "-b", "main", repo.string()});
    if (res.exit_code != 0) {
        throw std::runtime_error("fixture: git init failed: " + res.err);
    }
}

void git_commit(const fs::path& repo, const std::string& author_name,
                const std::string& author_email, const std::string& committer_name,
                const std::string& committer_email, const std::string& iso_date,
                const std::string& message) {
    std::vector<std::pair<std::string, std::string>> env = {
        {"GIT_AUTHOR_NAME", author_name},       {"GIT_AUTHOR_EMAIL", author_email},
        {"GIT_AUTHOR_DATE", iso_date},          {"GIT_COMMITTER_NAME", committer_name},
        {"GIT_COMMITTER_EMAIL", committer_email}, {"GIT_COMMITTER_DATE", iso_date},
    };
    auto res = run_process({"git", "-C", repo.string(), "commit", "-q", "--allow-empty",
                            "--no-gpg-sign", "-m", message},
                           {}, std::nullopt, env);
    if (res.exit_code != 0) {
        throw std::runtime_error("fixture: git commit failed: " + res.err);
    }
}

void build_standard_repo(const fs::path& repo) {
    git_init(repo);
    git_commit(repo, "Alice Person", "alice@example.org", "Alice Person", "alice@example.org",
               "2024-01-01T10:00:00Z", "first");
    git_commit(repo, "Bob Dev", "bob@example.org", "Bob Dev", "bob@example.org",
               "2024-01-02T10:00:00Z", "second");
    // Email alias: same address, different case and name spelling.
    git_commit(repo, "A. Person", "ALICE@example.org", "Alice Person", "alice@example.org",
               "2024-01-03T10:00:00Z", "third");
    // Carol's patch merged by Bob: she authored, he committed.
    git_commit(repo, "Carol Writer", "carol@example.org", "Bob Dev", "bob@example.org",
               "2024-01-04T10:00:00Z", "fourth");
    git_commit(repo, "dependabot[bot]", "49699333+dependabot[bot]@users.noreply.github.com",
               "dependabot[bot]", "49699333+dependabot[bot]@users.noreply.github.com",
               "2024-01-05T10:00:00Z", "bump deps");
}

// ------------------------------------------------------------------ files

std::string sample_cff() {
    return R"(cff-version: 1.2.0
message: "If you use this software, please cite it as below."
title: Fixture Tool
version: 1.0.0
doi: 10.5281/zenodo.1234
date-released: 2024-01-15
license: Apache-2.0
repository-code: https://example.org/fixture/repo
authors:
  - family-names: Person
    given-names: Alice
    email: alice@example.org
    orcid: https://orcid.org/0000-0002-1825-0097
keywords:
  - research
  - metadata
)";
}

std::string sample_manifest() {
    return R"([project]
name = "fixture-tool"
version = "1.0.1"
description = "A fixture project"
keywords = ["research", "fixtures"]
license = {text = "Apache-2.0"}
authors = [
    {name = "Alice Person", email = "alice@example.org"},
    {name = "Carol Writer", email = "carol@example.org"},
]

[project.urls]
Repository = "https://example.org/fixture/repo"
Homepage = "https://example.org/fixture"
)";
}

std::string sample_codemeta() {
    return R"({
  "@context": "https://doi.org/10.5063/schema/codemeta-2.0",
  "@type": "SoftwareSourceCode",
  "description": "A fixture project harvested from an existing record",
  "name": "fixture-tool",
  "version": "1.0.2"
}
)";
}

std::string sample_config() {
    return R"(# pipeline configuration for the fixture project
[harvest]
sources = ["cff", "git", "manifest"]

[harvest.cff]
enable_validation = true

[deposit]
target = "file"

[deposit.file]
filename = "codemeta.json"

[postprocess]
execute = []
)";
}

void build_standard_working_dir(const fs::path& dir) {
    fs::create_directories(dir);
    build_standard_repo(dir);
    write_file(dir / "CITATION.cff", sample_cff());
    write_file(dir / "pyproject.toml", sample_manifest());
    write_file(dir / "hermes.toml", sample_config());
}

TestContext::TestContext(const std::string& config_text) : cache_(dir_.path()) {
    logger_.set_mirror(false);
    auto config_path = dir_.path() / "hermes.toml";
    write_file(config_path, config_text);
    config_ = hermes::load_config(config_path);
    ctx_ = std::make_unique<hermes::ExecutionContext>(config_, cache_, dir_.path(),
                                                      hermes::Invocation::Library, logger_,
                                                      hermes::util::now_utc());
}

// ------------------------------------------------------------- generators

namespace {

const std::vector<std::string> kWords = {
    "alpha", "beta",  "gamma", "delta",  "epsilon", "zeta", "tool",
    "data",  "model", "probe", "sensor", "archive", "index",
};

const std::vector<std::string> kNames = {
    "Alice Person", "Bob Dev", "Carol Writer", "Dan Coder", "Eve Tester",
};

const std::vector<std::string> kEmails = {
    "alice@example.org", "bob@example.org", "carol@example.org",
    "dan@example.org",   "eve@example.org",
};

std::string random_word(std::mt19937& rng) {
    return kWords[rng() % kWords.size()];
}

std::string random_text(std::mt19937& rng) {
    std::string out = random_word(rng);
    int extra = static_cast<int>(rng() % 3);
    for (int i = 0; i < extra; ++i) {
        out += " " + random_word(rng);
    }
    return out;
}

} // namespace

hermes::PersonRef random_person(std::mt19937& rng) {
    hermes::PersonRef p;
    size_t idx = rng() % kNames.size();
    switch (rng() % 3) {
    case 0:
        p.full_name = kNames[idx];
        break;
    case 1: {
        std::string name = kNames[idx];
        size_t space = name.find(' ');
        p.given_names = name.substr(0, space);
        p.family_names = name.substr(space + 1);
        break;
    }
    default:
        p.full_name = kNames[idx];
        p.email = kEmails[idx];
        break;
    }
    if (rng() % 2) {
        p.email = kEmails[idx];
    }
    if (rng() % 4 == 0) {
        p.orcid = "https://orcid.org/0000-0002-1825-0097";
    }
    p.roles.insert(hermes::Role::Author);
    if (rng() % 3 == 0) {
        p.roles.insert(hermes::Role::Contributor);
    }
    return p;
}

hermes::Value random_scalar(std::mt19937& rng) {
    switch (rng() % 3) {
    case 0:
        return hermes::Value(random_text(rng));
    case 1:
        return hermes::Value(static_cast<std::int64_t>(rng() % 1000));
    default:
        return hermes::Value(rng() % 2 == 0);
    }
}

// Every term keeps one fixed shape so collation inputs never mix lists and
// scalars for the same term.
hermes::MetadataRecord random_record(std::mt19937& rng) {
    hermes::MetadataRecord record = hermes::new_record();

    if (rng() % 2) {
        record.set("name", random_text(rng));
    }
    if (rng() % 2) {
        record.set("version",
                   std::to_string(rng() % 10) + "." + std::to_string(rng() % 10) + ".0");
    }
    if (rng() % 2) {
        record.set("description", random_text(rng));
    }
    if (rng() % 2) {
        record.set("url", "https://example.org/" + random_word(rng));
    }
    if (rng() % 3 == 0) {
        record.set("funding", random_word(rng));
    }
    if (rng() % 2) {
        hermes::ValueList keywords;
        size_t n = 1 + rng() % 4;
        for (size_t i = 0; i < n; ++i) {
            keywords.emplace_back(random_word(rng));
        }
        record.set("keywords", hermes::Value(std::move(keywords)));
    }
    if (rng() % 2) {
        hermes::ValueList authors;
        size_t n = 1 + rng() % 3;
        for (size_t i = 0; i < n; ++i) {
            authors.emplace_back(random_person(rng));
        }
        record.set("author", hermes::Value(std::move(authors)));
    }
    if (rng() % 3 == 0) {
        hermes::ValueList contributors;
        size_t n = 1 + rng() % 2;
        for (size_t i = 0; i < n; ++i) {
            contributors.emplace_back(random_person(rng));
        }
        record.set("contributor", hermes::Value(std::move(contributors)));
    }
    if (rng() % 3 == 0) {
        hermes::ValueObject extras;
        extras.type = rng() % 2 ? "CreativeWork" : "";
        extras.items.emplace("label", hermes::Value(random_word(rng)));
        extras.items.emplace("count", hermes::Value(static_cast<std::int64_t>(rng() % 50)));
        record.set("supportingData", hermes::Value(std::move(extras)));
    }
    return record;
}

hermes::HarvestResult random_harvest_result(std::mt19937& rng) {
    hermes::HarvestResult result;
    result.metadata = random_record(rng);
    if (rng() % 2) {
        result.meta["path"] = random_word(rng) + ".toml";
    }
    if (rng() % 3 == 0) {
        result.meta["added"] = true;
    }
    return result;
}

std::vector<hermes::CollationInput> random_collation_inputs(std::mt19937& rng) {
    size_t n = 1 + rng() % 4;
    std::vector<hermes::CollationInput> inputs;
    auto stamp = hermes::util::now_utc();
    for (size_t i = 0; i < n; ++i) {
        inputs.push_back(hermes::CollationInput::from_result(
            "source" + std::to_string(i), random_harvest_result(rng), stamp));
    }
    return inputs;
}

// ------------------------------------------------------------- CLI runner

namespace {
std::string g_cli_binary;
}

void set_cli_binary(const std::string& path) {
    g_cli_binary = path;
}

const std::string& cli_binary() {
    if (g_cli_binary.empty()) {
        if (const char* env = std::getenv("HERMES_CLI")) {
            g_cli_binary = env;
        }
    }
    if (g_cli_binary.empty()) {
        throw std::runtime_error("fixture: path to the pipeline binary is not set "
                                 "(pass it as argv[1] or set HERMES_CLI)");
    }
    return g_cli_binary;
}

CliResult run_cli(const fs::path& working_dir, std::vector<std::string> args,
                  const std::vector<std::pair<std::string, std::string>>& extra_env) {
    std::vector<std::string> argv = {cli_binary(), "--working-dir", working_dir.string()};
    argv.insert(argv.end(), args.begin(), args.end());
    auto res = run_process(argv, {}, std::nullopt, extra_env);
    return {res.exit_code, res.out, res.err};
}

} // namespace testsupport
