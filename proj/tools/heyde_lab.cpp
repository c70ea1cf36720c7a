#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "heyde/cli.hpp"

namespace {

int emit(const heyde::cli::Outcome& outcome, const std::string& out_path) {
    if (!outcome.report.empty()) {
        if (out_path.empty()) {
            std::cout << outcome.report;
        } else {
            std::ofstream out(out_path);
            if (!out) {
                std::cerr << "error: cannot write " << out_path << "\n";
                return heyde::cli::kUsageError;
            }
            out << outcome.report;
        }
    }
    if (!outcome.message.empty()) std::cerr << outcome.message << "\n";
    return outcome.code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conditional symmetry of linear forms on finite abelian groups"};
    app.set_version_flag("--version", heyde::cli::kVersion);
    app.require_subcommand(1);

    heyde::cli::Options opts;
    std::string out_path;
    std::string timestamp;
    auto common = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_path, "Write the report to this file instead of stdout");
        cmd->add_option("--timestamp", timestamp, "Fixed manifest timestamp (reproducible reports)");
        cmd->add_option("--tolerance", opts.tolerance, "Tolerance of the characteristic-function checks")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
    };
    auto search_flags = [&](CLI::App* cmd) {
        cmd->add_option("--seed", opts.search.seed, "Random seed")->capture_default_str();
        cmd->add_option("--support-cap", opts.search.support_size_cap, "Largest grid support size")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        cmd->add_option("--denominator-cap", opts.search.denominator_cap, "Largest probability denominator")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        cmd->add_option("--trials", opts.search.random_trials, "Random pairs in addition to the grid")
            ->capture_default_str()
            ->check(CLI::NonNegativeNumber);
    };

    std::string instance_path;
    auto* check = app.add_subcommand("check", "Decide symmetry for one instance file");
    check->add_option("instance", instance_path, "Instance JSON")->required();
    common(check);

    std::string group_path, alpha_path;
    auto* search = app.add_subcommand("search", "Grid and random scan for symmetric pairs");
    search->add_option("group", group_path, "Group JSON")->required();
    search->add_option("alpha", alpha_path, "Endomorphism JSON")->required();
    common(search);
    search_flags(search);

    std::int64_t p = 0, k = 0, c = 0;
    auto* padic = app.add_subcommand("padic", "Scan multiplication by c on Z_{p^k}");
    padic->add_option("--p", p, "Prime")->required();
    padic->add_option("--k", k, "Exponent")->required();
    padic->add_option("--c", c, "Multiplier, prime to p")->required();
    common(padic);
    search_flags(padic);

    std::vector<std::string> suites;
    auto* verify = app.add_subcommand("verify", "Run property suites");
    verify->add_option("--suite", suites, "Suite name, repeatable, or \"all\"")->required();
    common(verify);
    search_flags(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : heyde::cli::kUsageError;
    }
    if (!timestamp.empty()) opts.timestamp = timestamp;

    heyde::cli::Outcome outcome;
    if (*check) outcome = heyde::cli::cmd_check(instance_path, opts);
    else if (*search) outcome = heyde::cli::cmd_search(group_path, alpha_path, opts);
    else if (*padic) outcome = heyde::cli::cmd_padic(p, k, c, opts);
    else outcome = heyde::cli::cmd_verify(suites, opts);
    return emit(outcome, out_path);
}
