#include "hermes/cache.hpp"
#include "hermes/config.hpp"
#include "hermes/errors.hpp"
#include "hermes/logging.hpp"
#include "hermes/pipeline.hpp"
#include "hermes/util.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

extern char** environ;

namespace {

// Exit code contract. CI scripts depend on these staying stable.
enum ExitCode {
    kOk = 0,
    kUsageError = 1,
    kConfigError = 2,
    kPhaseOrderViolation = 3,
    kPluginFailure = 4,
    kDepositFailure = 5,
};

constexpr const char* kExitCodeHelp =
    "Exit codes:\n"
    "  0  success\n"
    "  1  usage error\n"
    "  2  configuration error\n"
    "  3  phase order violation\n"
    "  4  plugin failure\n"
    "  5  deposit or network failure\n"
    "\n"
    "Settings can also come from HERMES_* environment variables\n"
    "(dots become double underscores, e.g. HERMES_HARVEST__GIT__BRANCH)\n"
    "and from repeated -O dotted.key=value overrides, which win over\n"
    "both the environment and hermes.toml.";

std::map<std::string, std::string> environment_variables() {
    std::map<std::string, std::string> env;
    for (char** entry = environ; entry && *entry; ++entry) {
        std::string text(*entry);
        size_t eq = text.find('=');
        if (eq != std::string::npos) {
            env.emplace(text.substr(0, eq), text.substr(eq + 1));
        }
    }
    return env;
}

std::map<std::string, std::string> parse_overrides(const std::vector<std::string>& raw) {
    std::map<std::string, std::string> overrides;
    for (const std::string& item : raw) {
        size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw CLI::ValidationError("-O expects dotted.key=value, got \"" + item + "\"");
        }
        overrides[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return overrides;
}

int run_phase_command(hermes::Phase phase, const std::filesystem::path& working_dir,
                      const std::filesystem::path& config_path,
                      const std::map<std::string, std::string>& cli_overrides,
                      int timeout_seconds) {
    hermes::Logger& log = hermes::global_logger();

    hermes::PipelineConfig config = hermes::load_config(config_path);
    config = hermes::resolve(config, environment_variables(), cli_overrides);
    config.timeout_seconds = timeout_seconds;
    for (const std::string& secret : config.secrets()) {
        log.add_secret(secret);
    }

    hermes::Pipeline pipeline(std::move(config), working_dir, hermes::Invocation::Cli, log);
    pipeline.run_phase(phase);
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hermes - automated software publication with rich metadata"};
    app.footer(kExitCodeHelp);

    std::string config_file = hermes::kDefaultConfigFile;
    std::string working_dir = ".";
    bool verbose = false;
    int timeout_seconds = 30;
    std::vector<std::string> raw_overrides;

    app.add_option("--config", config_file, "Configuration file")
        ->capture_default_str();
    app.add_option("--working-dir", working_dir, "Directory to run the pipeline in")
        ->capture_default_str();
    app.add_flag("-v,--verbose", verbose, "Enable debug logging");
    app.add_option("--timeout-seconds", timeout_seconds, "Network timeout for deposits")
        ->capture_default_str();
    app.add_option("-O", raw_overrides,
                   "Override a setting, e.g. -O deposit.target=file (repeatable)");

    CLI::App* cmd_help = app.add_subcommand("help", "Show help page and exit.");
    CLI::App* cmd_clean =
        app.add_subcommand("clean", "Clean up caches from previous hermes runs.");
    CLI::App* cmd_harvest =
        app.add_subcommand("harvest", "Harvest metadata from configured sources.");
    CLI::App* cmd_process =
        app.add_subcommand("process", "Process the collected metadata into a common dataset.");
    CLI::App* cmd_curate =
        app.add_subcommand("curate", "Curate the unified metadata before deposition.");
    CLI::App* cmd_deposit =
        app.add_subcommand("deposit", "Deposit the curated metadata to repositories.");
    CLI::App* cmd_postprocess = app.add_subcommand(
        "postprocess", "Post-process the published metadata after deposition.");
    app.require_subcommand(0, 1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints help, exits 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    // app.help() would delegate to the parsed subcommand; always render the
    // top-level page with all sub-commands.
    std::string top_help =
        app.get_formatter()->make_help(&app, app.get_name(), CLI::AppFormatMode::Normal);
    if (cmd_help->parsed()) {
        std::cout << top_help << std::endl;
        return kOk;
    }
    if (app.get_subcommands().empty()) {
        std::cout << top_help << std::endl;
        return kUsageError;
    }

    std::filesystem::path work_dir(working_dir);
    std::filesystem::path config_path(config_file);
    if (config_path.is_relative()) {
        config_path = work_dir / config_path;
    }

    hermes::Logger& log = hermes::global_logger();
    log.configure(work_dir, verbose);

    try {
        if (cmd_clean->parsed()) {
            hermes::CacheStore::clean(work_dir);
            log.info("clean", "cache removed");
            return kOk;
        }

        std::map<std::string, std::string> overrides = parse_overrides(raw_overrides);
        hermes::Phase phase = hermes::Phase::Harvest;
        if (cmd_harvest->parsed()) {
            phase = hermes::Phase::Harvest;
        } else if (cmd_process->parsed()) {
            phase = hermes::Phase::Process;
        } else if (cmd_curate->parsed()) {
            phase = hermes::Phase::Curate;
        } else if (cmd_deposit->parsed()) {
            phase = hermes::Phase::Deposit;
        } else if (cmd_postprocess->parsed()) {
            phase = hermes::Phase::Postprocess;
        }
        return run_phase_command(phase, work_dir, config_path, overrides, timeout_seconds);
    } catch (const CLI::ValidationError& e) {
        log.error("cli", e.what());
        return kUsageError;
    } catch (const hermes::PhaseOrderViolation& e) {
        log.error("cli", e.what());
        return kPhaseOrderViolation;
    } catch (const hermes::DepositError& e) {
        log.error("cli", e.what());
        return kDepositFailure;
    } catch (const hermes::ConfigError& e) {
        log.error("cli", e.what());
        return kConfigError;
    } catch (const hermes::ConcurrentRunError& e) {
        log.error("cli", e.what());
        return kConfigError;
    } catch (const hermes::Error& e) {
        log.error("cli", e.what());
        return kPluginFailure;
    } catch (const std::exception& e) {
        log.error("cli", e.what());
        return kPluginFailure;
    }
}
