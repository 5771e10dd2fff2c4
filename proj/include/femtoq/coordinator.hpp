#pragma once

// Multi-agent orchestration: synchronous joint-action iterations, Q-row
// sharing among same-state agents, convergence detection, QoS checks and
// the individual -> cooperative density sweep.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "femtoq/channel.hpp"
#include "femtoq/config.hpp"
#include "femtoq/learning.hpp"
#include "femtoq/reward.hpp"
#include "femtoq/topology.hpp"

namespace femtoq {

/// One learning FBS. `site` indexes the full layout.
struct Agent {
    std::size_t site = 0;
    AgentState state;
    std::size_t row = 0;
    double beta = 1.0;
    QTable table;
    Rng rng;
};

/// Everything an iteration needs besides the agents. `gains` covers exactly
/// the active agents, in agent order.
struct Environment {
    GainMatrix gains;
    ActionSet actions;
    PowerMw p_bs;
    NoisePower noise;
    double q_mue = 1.0;
    /// Threshold per active agent, agent order.
    std::vector<double> q_fue;
    RewardFunction reward;
    LearningParams learning;
};

struct IterationRecord {
    std::size_t iteration = 0;
    std::vector<std::size_t> actions;
    std::vector<double> action_dbm;
    double c_mue = 0.0;
    std::vector<double> c_fue;
    std::vector<double> rewards;
    /// Largest absolute change of any Q entry of any agent this iteration,
    /// including the effect of row sharing.
    double max_q_delta = 0.0;
};

/// Creates an agent with a zeroed table and its own generator.
Agent make_agent(std::size_t site, const Topology& sites, const ScenarioConfig& config);

/// Builds the environment for the agents listed (by site) in `agents`.
Environment make_environment(std::span<const Agent> agents, const Topology& sites,
                             const ScenarioConfig& config);

/// All agents act, capacities are evaluated once for the joint action, each
/// agent receives its reward and updates one Q entry.
IterationRecord step(std::span<Agent> agents, const Environment& env, std::size_t iteration);

/// Replaces every same-state group's active rows by the group mean. Returns
/// the largest absolute entry change.
double share_rows(std::span<Agent> agents);

/// Mean of the active rows of agents in `state_row`; empty when none.
std::vector<double> peer_mean_row(std::span<const Agent> agents, std::size_t state_row);

/// Windowed max-|delta| convergence test.
bool detect_convergence(std::span<const double> recent_deltas, const ConvergenceCriterion& criterion);

/// Streaming form of detect_convergence over the most recent `window` deltas.
class ConvergenceDetector {
public:
    explicit ConvergenceDetector(ConvergenceCriterion criterion) : criterion_(criterion) {}
    /// Returns true once the last `window` deltas are all below tolerance.
    bool push(double delta);
    void reset() { quiet_run_ = 0; }

private:
    ConvergenceCriterion criterion_;
    std::size_t quiet_run_ = 0;
};

struct ConstraintReport {
    bool mue_ok = false;
    std::vector<bool> fue_ok;
    std::vector<bool> power_ok;

    bool all_fue_ok() const;
    bool all_power_ok() const;
    bool all_ok() const { return mue_ok && all_fue_ok() && all_power_ok(); }
};

ConstraintReport check_constraints(double c_mue, std::span<const double> c_fue,
                                   std::span<const double> powers_dbm, double q_mue,
                                   std::span<const double> q_fue, PowerDbm p_max);

ConstraintReport check_constraints(const IterationRecord& record, const QosThresholds& thresholds,
                                   PowerDbm p_max);

/// (sum x)^2 / (n sum x^2). Throws std::domain_error for empty or all-zero input.
double jain_index(std::span<const double> values);

struct DensitySummary {
    std::size_t m = 0;
    /// Sites of the active agents in admission order.
    std::vector<std::size_t> sites;
    std::vector<double> action_dbm;
    double c_mue = 0.0;
    std::vector<double> c_fue;
    double min_fue_capacity = 0.0;
    double sum_capacity = 0.0;
    double jain = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    bool qos_satisfied = false;
};

struct DensityTrace {
    DensitySummary summary;
    std::vector<IterationRecord> records;
};

struct RunTrace {
    std::vector<std::size_t> admission_order;
    std::vector<DensityTrace> steps;
};

struct PhaseOptions {
    bool share = false;
    /// Keep every n-th record (0 keeps none).
    std::size_t trace_stride = 0;
    ConvergenceCriterion convergence;
};

/// Runs the active agents from iteration 0 until convergence or the
/// iteration budget. The summary reflects the greedy joint action of the
/// final tables.
DensityTrace run_density_step(std::span<Agent> agents, const Environment& env, const PhaseOptions& options);

/// Greedy joint action of the current tables, evaluated on `env`.
DensitySummary evaluate_greedy(std::span<const Agent> agents, const Environment& env);

/// Seed FBSs first (sites 0..seed_agents-1) then a seeded shuffle of the rest.
std::vector<std::size_t> admission_order(std::size_t sites, std::size_t seed_agents, std::size_t m_max,
                                         std::uint64_t seed);

struct IndividualPhaseResult {
    std::vector<Agent> agents;
    DensityTrace trace;
};

/// The first `seed_agents` admitted FBSs learn from zeroed tables with no
/// sharing.
IndividualPhaseResult run_individual_phase(std::size_t seed_agents, const Topology& sites,
                                           std::span<const std::size_t> order, const ScenarioConfig& config);

/// Admits the remaining agents one at a time (up to config.m_max), each
/// warm-started from same-state peers when sharing is enabled; appends one
/// density trace per admission to `trace`.
void run_cooperative_phase(std::vector<Agent>& agents, const Topology& sites,
                           std::span<const std::size_t> order, const ScenarioConfig& config, RunTrace& trace);

/// Full sweep M = 1..m_max. Densities below seed_agents come from standalone
/// individual runs of the first M admitted FBSs.
RunTrace run_simulation(const ScenarioConfig& config);

} // namespace femtoq
