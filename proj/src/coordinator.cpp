#include "femtoq/coordinator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace femtoq {

namespace {

constexpr std::uint64_t admission_stream = 0xAD3155105ULL;

} // namespace

Agent make_agent(std::size_t site, const Topology& sites, const ScenarioConfig& config) {
    if (site >= sites.femto_count())
        throw std::out_of_range("make_agent: site out of range");
    Agent a;
    a.site = site;
    a.state = agent_state(sites.fbs[site], sites.mbs, sites.mue, config.radii);
    a.row = state_row(a.state, config.radii);
    a.beta = beta(sites.fbs[site], sites.mue, config.d_th_m);
    a.table = QTable(config.radii.state_count(), config.n_power);
    a.rng = Rng(derive_seed(config.seed, site));
    return a;
}

Environment make_environment(std::span<const Agent> agents, const Topology& sites,
                             const ScenarioConfig& config) {
    std::vector<std::size_t> order;
    order.reserve(agents.size());
    for (const auto& a : agents)
        order.push_back(a.site);
    const Topology active = sites.subset(order);
    const QosThresholds all = config.thresholds(sites.femto_count());

    Environment env;
    env.gains = build_gain_matrix(active, config.pathloss);
    env.actions = config.action_set();
    env.p_bs = config.p_bs();
    env.noise = config.noise();
    env.q_mue = all.q_mue;
    for (auto s : order)
        env.q_fue.push_back(all.q_fue[s]);
    env.reward = config.reward_function();
    env.learning = config.learning;
    return env;
}

IterationRecord step(std::span<Agent> agents, const Environment& env, std::size_t iteration) {
    const std::size_t m = agents.size();
    if (env.gains.femto_count() != m)
        throw std::invalid_argument("step: environment does not match the agent count");

    IterationRecord rec;
    rec.iteration = iteration;
    rec.actions.resize(m);
    rec.action_dbm.resize(m);
    std::vector<double> powers_mw(m);

    const double eps = epsilon_at(iteration, env.learning);
    for (std::size_t k = 0; k < m; ++k) {
        auto& a = agents[k];
        rec.actions[k] = select_action(a.table.row(a.row), eps, a.rng);
        rec.action_dbm[k] = env.actions.level_dbm(rec.actions[k]);
        powers_mw[k] = env.actions.level_mw(rec.actions[k]);
    }

    auto caps = evaluate_capacities(env.p_bs, powers_mw, env.gains, env.noise);
    rec.c_mue = caps.c_mue;
    rec.c_fue = std::move(caps.c_fue);
    rec.rewards.resize(m);

    for (std::size_t k = 0; k < m; ++k) {
        auto& a = agents[k];
        const RewardInputs in{rec.c_fue[k], rec.c_mue, a.beta, env.q_fue[k], env.q_mue};
        rec.rewards[k] = env.reward(in);
        const double before = a.table.at(a.row, rec.actions[k]);
        // a fixed FBS never leaves its state, so the lookahead row is its own
        const double after = q_update(a.table, a.row, rec.actions[k], rec.rewards[k], a.row, env.learning);
        rec.max_q_delta = std::max(rec.max_q_delta, std::abs(after - before));
    }
    return rec;
}

std::vector<double> peer_mean_row(std::span<const Agent> agents, std::size_t state_row) {
    std::vector<double> mean;
    std::size_t count = 0;
    for (const auto& a : agents) {
        if (a.row != state_row)
            continue;
        const auto r = a.table.row(state_row);
        if (mean.empty())
            mean.assign(r.size(), 0.0);
        for (std::size_t j = 0; j < r.size(); ++j)
            mean[j] += r[j];
        ++count;
    }
    for (double& v : mean)
        v /= static_cast<double>(count);
    return mean;
}

double share_rows(std::span<Agent> agents) {
    double max_change = 0.0;
    std::vector<bool> done(agents.size(), false);
    for (std::size_t k = 0; k < agents.size(); ++k) {
        if (done[k])
            continue;
        std::vector<std::size_t> group;
        for (std::size_t j = k; j < agents.size(); ++j) {
            if (agents[j].row == agents[k].row) {
                group.push_back(j);
                done[j] = true;
            }
        }
        if (group.size() < 2)
            continue;
        const std::size_t row = agents[k].row;
        const std::size_t width = agents[k].table.actions();
        std::vector<double> mean(width, 0.0);
        for (auto g : group) {
            const auto r = agents[g].table.row(row);
            for (std::size_t a = 0; a < width; ++a)
                mean[a] += r[a];
        }
        for (std::size_t a = 0; a < width; ++a) {
            const double first = agents[group[0]].table.at(row, a);
            const bool agreed = std::all_of(group.begin(), group.end(),
                                            [&](std::size_t g) { return agents[g].table.at(row, a) == first; });
            // rows that already agree stay bit-identical, so sharing is idempotent
            mean[a] = agreed ? first : mean[a] / static_cast<double>(group.size());
        }
        for (auto g : group) {
            auto r = agents[g].table.row(row);
            for (std::size_t a = 0; a < width; ++a) {
                max_change = std::max(max_change, std::abs(r[a] - mean[a]));
                r[a] = mean[a];
            }
        }
    }
    return max_change;
}

bool detect_convergence(std::span<const double> recent_deltas, const ConvergenceCriterion& criterion) {
    if (recent_deltas.size() < criterion.window)
        return false;
    const auto tail = recent_deltas.last(criterion.window);
    return std::all_of(tail.begin(), tail.end(), [&](double d) { return std::abs(d) < criterion.tolerance; });
}

bool ConvergenceDetector::push(double delta) {
    quiet_run_ = std::abs(delta) < criterion_.tolerance ? quiet_run_ + 1 : 0;
    return quiet_run_ >= criterion_.window;
}

bool ConstraintReport::all_fue_ok() const {
    return std::all_of(fue_ok.begin(), fue_ok.end(), [](bool b) { return b; });
}

bool ConstraintReport::all_power_ok() const {
    return std::all_of(power_ok.begin(), power_ok.end(), [](bool b) { return b; });
}

ConstraintReport check_constraints(double c_mue, std::span<const double> c_fue,
                                   std::span<const double> powers_dbm, double q_mue,
                                   std::span<const double> q_fue, PowerDbm p_max) {
    if (c_fue.size() != q_fue.size() || powers_dbm.size() != c_fue.size())
        throw std::invalid_argument("check_constraints: size mismatch");
    ConstraintReport r;
    r.mue_ok = c_mue >= q_mue;
    for (std::size_t i = 0; i < c_fue.size(); ++i) {
        r.fue_ok.push_back(c_fue[i] >= q_fue[i]);
        r.power_ok.push_back(powers_dbm[i] <= p_max.value);
    }
    return r;
}

ConstraintReport check_constraints(const IterationRecord& record, const QosThresholds& thresholds,
                                   PowerDbm p_max) {
    return check_constraints(record.c_mue, record.c_fue, record.action_dbm, thresholds.q_mue,
                             thresholds.q_fue, p_max);
}

double jain_index(std::span<const double> values) {
    if (values.empty())
        throw std::domain_error("jain_index: empty input");
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double v : values) {
        sum += v;
        sum_sq += v * v;
    }
    if (!(sum_sq > 0.0))
        throw std::domain_error("jain_index: all values are zero");
    return sum * sum / (static_cast<double>(values.size()) * sum_sq);
}

DensitySummary evaluate_greedy(std::span<const Agent> agents, const Environment& env) {
    const std::size_t m = agents.size();
    DensitySummary s;
    s.m = m;
    std::vector<double> powers_mw(m);
    for (std::size_t k = 0; k < m; ++k) {
        const auto a = greedy_action(agents[k].table.row(agents[k].row));
        s.sites.push_back(agents[k].site);
        s.action_dbm.push_back(env.actions.level_dbm(a));
        powers_mw[k] = env.actions.level_mw(a);
    }
    auto caps = evaluate_capacities(env.p_bs, powers_mw, env.gains, env.noise);
    s.c_mue = caps.c_mue;
    s.c_fue = std::move(caps.c_fue);
    s.min_fue_capacity = *std::min_element(s.c_fue.begin(), s.c_fue.end());
    s.sum_capacity = std::accumulate(s.c_fue.begin(), s.c_fue.end(), 0.0);
    s.jain = jain_index(s.c_fue);
    const double p_max = env.actions.level_dbm(env.actions.size() - 1);
    s.qos_satisfied = check_constraints(s.c_mue, s.c_fue, s.action_dbm, env.q_mue, env.q_fue, {p_max}).all_ok();
    return s;
}

DensityTrace run_density_step(std::span<Agent> agents, const Environment& env, const PhaseOptions& options) {
    DensityTrace out;
    ConvergenceDetector detector(options.convergence);
    const std::size_t budget = env.learning.max_iterations;
    std::vector<double> snapshot;
    std::size_t done = 0;
    bool converged = false;
    IterationRecord last;

    for (std::size_t it = 0; it < budget; ++it) {
        if (options.share) {
            snapshot.clear();
            for (const auto& a : agents) {
                const auto r = a.table.row(a.row);
                snapshot.insert(snapshot.end(), r.begin(), r.end());
            }
        }
        IterationRecord rec = step(agents, env, it);
        if (options.share) {
            share_rows(agents);
            double delta = 0.0;
            std::size_t pos = 0;
            for (const auto& a : agents) {
                for (double v : a.table.row(a.row))
                    delta = std::max(delta, std::abs(v - snapshot[pos++]));
            }
            rec.max_q_delta = delta;
        }
        done = it + 1;
        converged = detector.push(rec.max_q_delta);
        const bool keep = options.trace_stride > 0 && it % options.trace_stride == 0;
        if (keep)
            out.records.push_back(rec);
        else if (options.trace_stride > 0)
            last = std::move(rec);
        if (converged)
            break;
    }
    if (options.trace_stride > 0 && done > 0 && (done - 1) % options.trace_stride != 0)
        out.records.push_back(std::move(last));

    out.summary = evaluate_greedy(agents, env);
    out.summary.iterations = done;
    out.summary.converged = converged;
    return out;
}

std::vector<std::size_t> admission_order(std::size_t sites, std::size_t seed_agents, std::size_t m_max,
                                         std::uint64_t seed) {
    std::vector<std::size_t> order(sites);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t fixed = std::min(seed_agents, sites);
    Rng rng(derive_seed(seed, admission_stream));
    std::shuffle(order.begin() + static_cast<std::ptrdiff_t>(fixed), order.end(), rng);
    order.resize(std::min(m_max, sites));
    return order;
}

IndividualPhaseResult run_individual_phase(std::size_t seed_agents, const Topology& sites,
                                           std::span<const std::size_t> order, const ScenarioConfig& config) {
    if (seed_agents < 1)
        throw std::invalid_argument("run_individual_phase: need at least one seed agent");
    const std::size_t k = std::min(seed_agents, order.size());
    IndividualPhaseResult out;
    for (std::size_t i = 0; i < k; ++i)
        out.agents.push_back(make_agent(order[i], sites, config));
    const Environment env = make_environment(out.agents, sites, config);
    const PhaseOptions options{false, config.trace_stride, config.convergence};
    out.trace = run_density_step(out.agents, env, options);
    return out;
}

void run_cooperative_phase(std::vector<Agent>& agents, const Topology& sites,
                           std::span<const std::size_t> order, const ScenarioConfig& config, RunTrace& trace) {
    const PhaseOptions options{config.share_rows, config.trace_stride, config.convergence};
    for (std::size_t idx = agents.size(); idx < order.size(); ++idx) {
        Agent fresh = make_agent(order[idx], sites, config);
        if (config.share_rows) {
            const auto prior = peer_mean_row(agents, fresh.row);
            if (!prior.empty())
                std::copy(prior.begin(), prior.end(), fresh.table.row(fresh.row).begin());
        }
        agents.push_back(std::move(fresh));
        const Environment env = make_environment(agents, sites, config);
        trace.steps.push_back(run_density_step(agents, env, options));
    }
}

RunTrace run_simulation(const ScenarioConfig& config) {
    const Topology sites = config.topology();
    RunTrace trace;
    trace.admission_order = admission_order(sites.femto_count(), config.seed_agents, config.m_max, config.seed);
    const std::span<const std::size_t> order = trace.admission_order;

    const std::size_t seeds = std::min(config.seed_agents, order.size());
    for (std::size_t m = 1; m < seeds; ++m)
        trace.steps.push_back(run_individual_phase(m, sites, order, config).trace);

    auto individual = run_individual_phase(seeds, sites, order, config);
    trace.steps.push_back(std::move(individual.trace));
    run_cooperative_phase(individual.agents, sites, order, config, trace);
    return trace;
}

} // namespace femtoq
