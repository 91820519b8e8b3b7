#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "concap/capgraph.hpp"
#include "concap/config.hpp"
#include "concap/errors.hpp"
#include "concap/fuzz.hpp"
#include "concap/netsim.hpp"

namespace {

std::string set_text(const concap::NodeSet& s) {
    std::string out = "{";
    bool first = true;
    for (int node : s.members()) {
        if (!first) out += " ";
        out += std::to_string(node);
        first = false;
    }
    return out + "}";
}

int cmd_bound(const std::string& config_path, bool brute_force) {
    concap::NetworkSpec net = concap::load_network(config_path);
    if (brute_force) {
        std::printf("i_star = %lld\n", concap::brute_force_bound(net));
        return 0;
    }
    concap::BoundResult bound = concap::capacity_upper_bound(net);
    std::printf("i_star = %lld\n", bound.i_star);
    std::printf("witness: S = %s, gamma = %s\n", set_text(bound.witness_s).c_str(),
                set_text(bound.witness_gamma).c_str());
    if (net.n == 4) {
        std::printf("%-8s %-8s %8s\n", "S", "gamma", "value");
        for (const auto& term : bound.terms)
            std::printf("%-8s %-8s %8lld\n", set_text(term.s).c_str(),
                        set_text(term.gamma).c_str(), term.value);
    }
    return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path) {
    concap::ScenarioConfig config = concap::load_scenario(config_path);
    concap::ExecutionOptions opts;
    opts.trace_traffic = true;
    concap::ExecutionResult result = concap::run_execution(config, opts);

    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw concap::ConfigError("cannot write report file: " + out_path);
    out << concap::report_to_json_text(result.report);
    out.close();

    const auto& totals = result.report.totals;
    std::printf("rate=%.3f bits/unit ratio=%.6f failures=%lld final_mode=%s\n", totals.rate,
                totals.ratio, totals.failures_detected, concap::mode_name(totals.final_mode));
    return 0;
}

int cmd_fuzz(long long trials, std::uint64_t seed) {
    concap::FuzzOptions opts;
    opts.trials = trials;
    opts.seed = seed;
    concap::FuzzSummary summary = concap::run_fuzz(opts);
    if (summary.violation) {
        std::printf("violation at trial %lld: %s\n", summary.violation->trial,
                    summary.violation->reason.c_str());
        std::printf("%s", summary.violation->config_json.c_str());
        return 2;
    }
    std::printf("fuzz: %lld trials, 0 violations\n", summary.trials_run);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"capacity bounds and a coded 4-node consensus simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    bool brute_force = false;
    long long trials = 0;
    std::uint64_t seed = 0;

    CLI::App* bound = app.add_subcommand("bound", "compute the capacity upper bound");
    bound->add_option("--config", config_path, "network config file")->required();
    bound->add_flag("--brute-force", brute_force, "independent exhaustive evaluation")
        ->group(""); // hidden

    CLI::App* simulate = app.add_subcommand("simulate", "run a consensus execution");
    simulate->add_option("--config", config_path, "scenario config file")->required();
    simulate->add_option("--out", out_path, "report output file")->required();

    CLI::App* fuzz = app.add_subcommand("fuzz", "randomized invariant checking");
    fuzz->add_option("--trials", trials, "number of trials")->required();
    fuzz->add_option("--seed", seed, "master seed");

    try {
        app.parse(argc, argv);
        if (app.got_subcommand(bound)) return cmd_bound(config_path, brute_force);
        if (app.got_subcommand(simulate)) return cmd_simulate(config_path, out_path);
        return cmd_fuzz(trials, seed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const concap::InvariantPanic& e) {
        std::fprintf(stderr, "invariant violation: %s\n", e.what());
        return 2;
    } catch (const concap::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
