#include "hermes/errors.hpp"
#include "hermes/harvest.hpp"
#include "hermes/util.hpp"

#include <algorithm>
#include <map>

namespace hermes {

namespace {

constexpr char kFieldSep = '\x1f';
constexpr char kRecordSep = '\x1e';

struct Commit {
    std::string author_name;
    std::string author_email;
    util::Timestamp author_date;
    std::string committer_name;
    std::string committer_email;
    util::Timestamp committer_date;
};

struct IdentityAccumulator {
    std::map<std::string, int> spellings;                  // name -> uses
    std::map<std::string, util::Timestamp> last_spelling;  // name -> most recent use
    std::string email;                                     // original case of first use
    int as_author = 0;
    int as_committer = 0;
    util::Timestamp first_seen{};
    util::Timestamp last_seen{};
    bool seen = false;

    void record(const std::string& name, const std::string& raw_email, util::Timestamp when,
                bool author) {
        if (!seen) {
            email = raw_email;
            first_seen = when;
            last_seen = when;
            seen = true;
        } else {
            first_seen = std::min(first_seen, when);
            last_seen = std::max(last_seen, when);
        }
        ++spellings[name];
        auto it = last_spelling.find(name);
        if (it == last_spelling.end() || it->second < when) {
            last_spelling[name] = when;
        }
        if (author) {
            ++as_author;
        } else {
            ++as_committer;
        }
    }

    // Most frequent spelling; ties go to the most recently used one.
    std::string best_name() const {
        std::string best;
        int best_count = -1;
        util::Timestamp best_when{};
        for (const auto& [name, count] : spellings) {
            util::Timestamp when = last_spelling.at(name);
            if (count > best_count || (count == best_count && when > best_when)) {
                best = name;
                best_count = count;
                best_when = when;
            }
        }
        return best;
    }
};

bool looks_like_bot(const std::string& name, const std::string& email) {
    std::string lname = util::to_lower(name);
    std::string lemail = util::to_lower(email);
    if (lname.find("[bot]") != std::string::npos || lemail.find("[bot]") != std::string::npos) {
        return true;
    }
    return lemail.find("noreply") != std::string::npos ||
           lemail.find("no-reply") != std::string::npos;
}

std::string git_or_throw(const std::filesystem::path& repo, std::vector<std::string> args,
                         const std::string& what) {
    std::vector<std::string> argv = {"git", "-C", repo.string()};
    argv.insert(argv.end(), args.begin(), args.end());
    util::ProcessResult proc = util::run_process(argv);
    if (proc.exit_code != 0) {
        throw Error(what + ": " + util::trim(proc.err));
    }
    return proc.out;
}

} // namespace

HarvestResult harvest_git(ExecutionContext& ctx, const std::filesystem::path& repo,
                          const std::optional<std::string>& branch) {
    {
        util::ProcessResult probe =
            util::run_process({"git", "-C", repo.string(), "rev-parse", "--git-dir"});
        if (probe.exit_code != 0) {
            throw NotARepositoryError("not a Git repository: " + repo.string());
        }
    }

    std::string ref;
    if (branch && !branch->empty()) {
        util::ProcessResult probe = util::run_process(
            {"git", "-C", repo.string(), "rev-parse", "--verify", "--quiet",
             "refs/heads/" + *branch});
        if (probe.exit_code != 0) {
            throw UnknownBranchError("branch does not exist: \"" + *branch + "\"");
        }
        ref = *branch;
    } else {
        util::ProcessResult head =
            util::run_process({"git", "-C", repo.string(), "symbolic-ref", "--short", "-q",
                               "HEAD"});
        ref = head.exit_code == 0 ? util::trim(head.out) : "HEAD";
    }

    util::ProcessResult log = util::run_process(
        {"git", "-C", repo.string(), "log",
         std::string("--format=%an") + kFieldSep + "%ae" + kFieldSep + "%at" + kFieldSep +
             "%cn" + kFieldSep + "%ce" + kFieldSep + "%ct" + kRecordSep,
         ref, "--"});
    if (log.exit_code != 0) {
        std::string err = util::to_lower(log.err);
        if (err.find("does not have any commits") != std::string::npos ||
            err.find("unknown revision") != std::string::npos ||
            err.find("bad revision") != std::string::npos) {
            throw EmptyHistoryError("repository has no commits on \"" + ref + "\": " +
                                    repo.string());
        }
        throw Error("git log failed: " + util::trim(log.err));
    }

    std::vector<Commit> commits;
    for (const std::string& chunk : util::split(log.out, kRecordSep)) {
        std::string entry = util::trim(chunk);
        if (entry.empty()) {
            continue;
        }
        std::vector<std::string> fields = util::split(entry, kFieldSep);
        if (fields.size() != 6) {
            continue;
        }
        Commit c;
        c.author_name = fields[0];
        c.author_email = fields[1];
        c.author_date = std::chrono::system_clock::from_time_t(std::stoll(fields[2]));
        c.committer_name = fields[3];
        c.committer_email = fields[4];
        c.committer_date = std::chrono::system_clock::from_time_t(std::stoll(fields[5]));
        commits.push_back(std::move(c));
    }
    if (commits.empty()) {
        throw EmptyHistoryError("repository has no commits on \"" + ref + "\": " +
                                repo.string());
    }

    std::string head_commit =
        util::trim(git_or_throw(repo, {"rev-parse", ref}, "cannot resolve " + ref));

    // Merge identities by lowercase email; iteration over the log is
    // chronological (newest first) but the accumulator is order independent.
    std::map<std::string, IdentityAccumulator> identities;
    for (const Commit& c : commits) {
        identities[util::to_lower(c.author_email)].record(c.author_name, c.author_email,
                                                          c.author_date, true);
        identities[util::to_lower(c.committer_email)].record(c.committer_name, c.committer_email,
                                                             c.committer_date, false);
    }

    std::vector<GitIdentity> people;
    std::vector<GitIdentity> bots;
    for (const auto& [email_key, acc] : identities) {
        GitIdentity identity;
        identity.name = acc.best_name();
        identity.email = acc.email;
        identity.commits_as_author = acc.as_author;
        identity.commits_as_committer = acc.as_committer;
        identity.first_seen = acc.first_seen;
        identity.last_seen = acc.last_seen;
        if (looks_like_bot(identity.name, identity.email)) {
            bots.push_back(std::move(identity));
        } else {
            people.push_back(std::move(identity));
        }
    }

    // Chronological contribution order.
    std::stable_sort(people.begin(), people.end(), [](const GitIdentity& a, const GitIdentity& b) {
        if (a.first_seen != b.first_seen) {
            return a.first_seen < b.first_seen;
        }
        return a.email < b.email;
    });

    auto to_person = [](const GitIdentity& identity, Role role) {
        PersonRef p;
        p.full_name = identity.name;
        p.email = identity.email;
        p.roles = {role};
        return p;
    };

    ValueList authors;
    ValueList contributors;
    for (const GitIdentity& identity : people) {
        if (identity.commits_as_author > 0) {
            authors.emplace_back(to_person(identity, Role::Author));
        }
        if (identity.commits_as_committer > 0) {
            contributors.emplace_back(to_person(identity, Role::Contributor));
        }
    }

    HarvestResult result;
    result.metadata = new_record();
    if (!authors.empty()) {
        result.metadata.set("author", Value(std::move(authors)));
    }
    if (!contributors.empty()) {
        result.metadata.set("contributor", Value(std::move(contributors)));
    }

    result.meta["path"] = repo.string();
    result.meta["branch"] = ref;
    result.meta["head_commit"] = head_commit;
    result.meta["commit_count"] = commits.size();
    Json merge_report = Json::object();
    for (const auto& [email_key, acc] : identities) {
        if (acc.spellings.size() > 1) {
            Json spellings = Json::array();
            for (const auto& [name, count] : acc.spellings) {
                spellings.push_back(name);
            }
            merge_report[email_key] = spellings;
        }
    }
    result.meta["identity_merges"] = merge_report;
    Json bot_list = Json::array();
    for (const GitIdentity& bot : bots) {
        bot_list.push_back(bot.email);
    }
    result.meta["bots"] = bot_list;

    ctx.log().debug("harvest.git", "collected " + std::to_string(people.size()) +
                                       " identities from " + std::to_string(commits.size()) +
                                       " commits on " + ref);
    return result;
}

HarvestResult GitHarvestPlugin::harvest(ExecutionContext& ctx) {
    std::optional<std::string> branch = ctx.config().git_branch;
    return harvest_git(ctx, ctx.working_dir(), branch);
}

} // namespace hermes
