#include "femtoq/experiment.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace femtoq {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write " + p.string());
    return out;
}

std::string trace_name(std::size_t m) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "trace_m%02zu.csv", m);
    return buf;
}

void write_trace(const fs::path& p, const DensityTrace& step) {
    auto out = open_out(p);
    out << "iteration,agent_id,action_dbm,c_mue,c_fue_i,reward,max_q_delta\n";
    for (const auto& rec : step.records) {
        for (std::size_t k = 0; k < rec.actions.size(); ++k) {
            out << rec.iteration << ',' << step.summary.sites[k] << ',' << num(rec.action_dbm[k]) << ','
                << num(rec.c_mue) << ',' << num(rec.c_fue[k]) << ',' << num(rec.rewards[k]) << ','
                << num(rec.max_q_delta) << '\n';
        }
    }
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
        out.push_back(cell);
    return out;
}

} // namespace

ExperimentResult run_experiment(const ScenarioConfig& config, const fs::path& out_dir, std::ostream* log) {
    config.validate();
    fs::create_directories(out_dir);

    ExperimentResult res;
    res.config_hash = config_hash(config);
    res.trace = run_simulation(config);

    {
        auto out = open_out(out_dir / "config.json");
        out << dump_config(config) << '\n';
    }

    nlohmann::json manifest = {{"tool", "femtoq"},
                               {"version", version},
                               {"seed", config.seed},
                               {"layout_seed", config.effective_layout_seed()},
                               {"config_hash", res.config_hash},
                               {"m_max", config.m_max},
                               {"admission_order", res.trace.admission_order}};
    {
        auto out = open_out(out_dir / "manifest.json");
        out << manifest.dump(2) << '\n';
    }
    if (log)
        *log << manifest.dump(2) << '\n';

    auto summary = open_out(out_dir / "summary.csv");
    summary << "m,c_mue_final,min_fue_capacity,sum_capacity,jain,iterations_to_converge,converged,qos_satisfied\n";
    auto finals = open_out(out_dir / "final_actions.csv");
    finals << "m,agent_id,action_dbm,c_fue\n";
    auto p_mue = open_out(out_dir / "plot_mue_capacity.csv");
    p_mue << "m,c_mue\n";
    auto p_fue = open_out(out_dir / "plot_fue_capacity.csv");
    p_fue << "m,agent_id,c_fue\n";
    auto p_sum = open_out(out_dir / "plot_sum_capacity.csv");
    p_sum << "m,sum_capacity\n";
    auto p_iter = open_out(out_dir / "plot_iterations.csv");
    p_iter << "m,iterations_to_converge\n";
    auto p_jain = open_out(out_dir / "plot_jain.csv");
    p_jain << "m,jain\n";

    for (const auto& step : res.trace.steps) {
        const auto& s = step.summary;
        summary << s.m << ',' << num(s.c_mue) << ',' << num(s.min_fue_capacity) << ',' << num(s.sum_capacity)
                << ',' << num(s.jain) << ',' << s.iterations << ',' << (s.converged ? 1 : 0) << ','
                << (s.qos_satisfied ? 1 : 0) << '\n';
        for (std::size_t k = 0; k < s.m; ++k) {
            finals << s.m << ',' << s.sites[k] << ',' << num(s.action_dbm[k]) << ',' << num(s.c_fue[k]) << '\n';
            p_fue << s.m << ',' << s.sites[k] << ',' << num(s.c_fue[k]) << '\n';
        }
        p_mue << s.m << ',' << num(s.c_mue) << '\n';
        p_sum << s.m << ',' << num(s.sum_capacity) << '\n';
        p_iter << s.m << ',' << s.iterations << '\n';
        p_jain << s.m << ',' << num(s.jain) << '\n';
        if (config.trace_stride > 0)
            write_trace(out_dir / trace_name(s.m), step);
    }
    return res;
}

std::optional<double> read_learned_sum(const fs::path& summary_csv, std::size_t m) {
    std::ifstream in(summary_csv);
    if (!in)
        return std::nullopt;
    std::string line;
    if (!std::getline(in, line))
        return std::nullopt;
    const auto header = split(line);
    std::size_t m_col = header.size();
    std::size_t sum_col = header.size();
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "m")
            m_col = c;
        else if (header[c] == "sum_capacity")
            sum_col = c;
    }
    if (m_col == header.size() || sum_col == header.size())
        return std::nullopt;
    while (std::getline(in, line)) {
        const auto cells = split(line);
        if (cells.size() <= std::max(m_col, sum_col))
            continue;
        if (std::stoul(cells[m_col]) == m)
            return std::stod(cells[sum_col]);
    }
    return std::nullopt;
}

OracleRun run_oracle(const ScenarioConfig& config, const fs::path& out_dir) {
    config.validate();
    const Topology sites = config.topology();
    const auto order = admission_order(sites.femto_count(), config.seed_agents, config.m_max, config.seed);
    const Topology active = sites.subset(order);
    const QosThresholds all = config.thresholds(sites.femto_count());
    QosThresholds thresholds{all.q_mue, {}};
    for (auto s : order)
        thresholds.q_fue.push_back(all.q_fue[s]);

    const GainMatrix gains = build_gain_matrix(active, config.pathloss);
    const ActionSet actions = config.action_set();
    const OracleProblem problem{gains, actions, thresholds, config.p_bs(), config.noise(),
                                config.oracle_max_joint_actions};

    OracleRun run;
    run.m = order.size();
    run.result = exhaustive_search(problem);

    std::ifstream manifest_in(out_dir / "manifest.json");
    if (manifest_in) {
        try {
            const auto manifest = nlohmann::json::parse(manifest_in);
            if (manifest.value("config_hash", std::string{}) == config_hash(config))
                run.learned_sum = read_learned_sum(out_dir / "summary.csv", run.m);
        } catch (const nlohmann::json::exception&) {
            // unreadable manifest: no learned run to compare against
        }
    }
    if (run.learned_sum && run.result.best_objective > 0.0)
        run.optimality_gap = (run.result.best_objective - *run.learned_sum) / run.result.best_objective;

    fs::create_directories(out_dir);
    {
        auto out = open_out(out_dir / "oracle.csv");
        out << "m,n_power,joint_actions,feasible,best_objective,c_mue,learned_sum,optimality_gap\n";
        out << run.m << ',' << actions.size() << ',' << num(run.result.enumerated) << ','
            << (run.result.feasible ? 1 : 0) << ',' << num(run.result.best_objective) << ','
            << num(run.result.c_mue) << ',' << (run.learned_sum ? num(*run.learned_sum) : "") << ','
            << (run.optimality_gap ? num(*run.optimality_gap) : "") << '\n';
    }
    {
        auto out = open_out(out_dir / "oracle_actions.csv");
        out << "agent_id,action_index,action_dbm,c_fue\n";
        for (std::size_t k = 0; k < run.m; ++k) {
            const auto a = run.result.best_action[k];
            out << order[k] << ',' << a << ',' << num(actions.level_dbm(a)) << ',' << num(run.result.c_fue[k])
                << '\n';
        }
    }
    return run;
}

} // namespace femtoq
