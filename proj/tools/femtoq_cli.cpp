// femtoq: command-line driver for density sweeps and the exhaustive oracle.
//
//   femtoq run             [--config F] [--seed S] [--out DIR] [--m-max N] [--quiet]
//   femtoq oracle          [--config F] [--seed S] [--out DIR] [--m-max N] [--quiet]
//   femtoq validate-config [--config F] [--seed S] [--out DIR] [--m-max N] [--quiet]
//
// Exit codes: 0 success, 1 config error, 2 runtime error, 3 oracle cap exceeded.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "femtoq/config.hpp"
#include "femtoq/experiment.hpp"
#include "femtoq/oracle.hpp"

namespace {

enum ExitCode : int { ok = 0, config_error = 1, runtime_error = 2, oracle_cap = 3 };

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> m_max;
    bool quiet = false;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config_path, "Scenario config (JSON); defaults apply when omitted");
    cmd->add_option("--seed", o.seed, "Master seed override");
    cmd->add_option("--out", o.out, "Output directory override");
    cmd->add_option("--m-max", o.m_max, "Largest number of active FBSs");
    cmd->add_flag("--quiet", o.quiet, "Suppress the run manifest and summaries");
}

femtoq::ScenarioConfig resolve(const Options& o) {
    femtoq::ScenarioConfig c = o.config_path.empty() ? femtoq::parse_config("") : femtoq::load_config(o.config_path);
    if (o.seed)
        c.seed = *o.seed;
    if (o.out)
        c.output_dir = *o.out;
    if (o.m_max)
        c.m_max = *o.m_max;
    c.validate();
    return c;
}

int cmd_run(const Options& o) {
    const auto config = resolve(o);
    auto res = femtoq::run_experiment(config, config.output_dir, o.quiet ? nullptr : &std::cout);
    if (!o.quiet) {
        std::cout << "m  c_mue   min_fue  sum      jain    iterations\n";
        for (const auto& step : res.trace.steps) {
            const auto& s = step.summary;
            std::printf("%-2zu %-7.3f %-8.3f %-8.3f %-7.4f %zu%s\n", s.m, s.c_mue, s.min_fue_capacity,
                        s.sum_capacity, s.jain, s.iterations, s.converged ? "" : " (budget)");
        }
        std::cout << "artifacts written to " << config.output_dir << '\n';
    }
    return ok;
}

int cmd_oracle(const Options& o) {
    const auto config = resolve(o);
    const auto run = femtoq::run_oracle(config, config.output_dir);
    if (!o.quiet) {
        std::cout << "m=" << run.m << " joint_actions=" << run.result.enumerated
                  << " feasible=" << (run.result.feasible ? "yes" : "no")
                  << " best_sum=" << run.result.best_objective << " c_mue=" << run.result.c_mue << '\n';
        if (run.optimality_gap)
            std::cout << "learned_sum=" << *run.learned_sum << " optimality_gap=" << *run.optimality_gap << '\n';
    }
    return ok;
}

int cmd_validate(const Options& o) {
    const auto config = resolve(o);
    if (!o.quiet)
        std::cout << femtoq::dump_config(config) << "\nconfig_hash " << femtoq::config_hash(config) << '\n';
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cooperative Q-learning power allocation for dense femtocell networks"};
    app.require_subcommand(1);

    Options opts;
    int (*action)(const Options&) = nullptr;

    auto* run = app.add_subcommand("run", "Run the individual + cooperative density sweep");
    add_common(run, opts);
    run->callback([&] { action = cmd_run; });

    auto* oracle = app.add_subcommand("oracle", "Exhaustive search over joint power assignments");
    add_common(oracle, opts);
    oracle->callback([&] { action = cmd_oracle; });

    auto* validate = app.add_subcommand("validate-config", "Load, validate and print the effective config");
    add_common(validate, opts);
    validate->callback([&] { action = cmd_validate; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        return action(opts);
    } catch (const femtoq::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const femtoq::OracleCapExceeded& e) {
        std::cerr << "oracle refused: " << e.what() << '\n';
        return oracle_cap;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return runtime_error;
    }
}
