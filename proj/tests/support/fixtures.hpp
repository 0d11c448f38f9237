#pragma once

#include "hermes/model.hpp"
#include "hermes/plugins.hpp"
#include "hermes/process.hpp"
#include "hermes/util.hpp"

#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace testsupport {

// Unique directory under the system temp root, removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();

    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

void write_file(const std::filesystem::path& path, std::string_view content);

// ------------------------------------------------------------ git fixtures

void git_init(const std::filesystem::path& repo);

void git_commit(const std::filesystem::path& repo, const std::string& author_name,
                const std::string& author_email, const std::string& committer_name,
                const std::string& committer_email, const std::string& iso_date,
                const std::string& message);

// Five commits, three human identities (one email-alias pair for Alice),
// one bot. Expected lists, hand-computed:
//   authors:      Alice Person <alice@example.org>,
//                 Bob Dev <bob@example.org>,
//                 Carol Writer <carol@example.org>
//   contributors: Alice Person, Bob Dev
void build_standard_repo(const std::filesystem::path& repo);

// --------------------------------------------------------- file fixtures

std::string sample_cff();
std::string sample_manifest();
std::string sample_codemeta();
std::string sample_config();

// Complete working directory: git repo + citation file + manifest + config.
void build_standard_working_dir(const std::filesystem::path& dir);

// Temp working directory with a loaded configuration and an execution
// context ready for driving plugins directly.
class TestContext {
public:
    explicit TestContext(const std::string& config_text = "");

    const std::filesystem::path& dir() const { return dir_.path(); }
    hermes::ExecutionContext& ctx() { return *ctx_; }
    hermes::ExecutionContext scoped(hermes::ExtensionGroup group, const std::string& name) {
        return ctx_->scoped(group, name);
    }
    const hermes::PipelineConfig& config() const { return config_; }
    hermes::CacheStore& cache() { return cache_; }
    hermes::Logger& logger() { return logger_; }

private:
    TempDir dir_;
    hermes::PipelineConfig config_;
    hermes::CacheStore cache_;
    hermes::Logger logger_;
    std::unique_ptr<hermes::ExecutionContext> ctx_;
};

// ------------------------------------------------------------- generators

hermes::PersonRef random_person(std::mt19937& rng);
hermes::Value random_scalar(std::mt19937& rng);
hermes::MetadataRecord random_record(std::mt19937& rng);
hermes::HarvestResult random_harvest_result(std::mt19937& rng);
std::vector<hermes::CollationInput> random_collation_inputs(std::mt19937& rng);

// ------------------------------------------------------------- CLI runner

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

// Runs the pipeline binary (path from set_cli_binary / HERMES_CLI) in the
// given working directory.
void set_cli_binary(const std::string& path);
const std::string& cli_binary();

CliResult run_cli(const std::filesystem::path& working_dir, std::vector<std::string> args,
                  const std::vector<std::pair<std::string, std::string>>& extra_env = {});

} // namespace testsupport
