#pragma once

// Scenario configuration: every simulation parameter with its default,
// validation, and a canonical JSON form used for hashing and round trips.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "femtoq/channel.hpp"
#include "femtoq/learning.hpp"
#include "femtoq/reward.hpp"
#include "femtoq/topology.hpp"

namespace femtoq {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ConvergenceCriterion {
    std::size_t window = 500;
    double tolerance = 1e-3;
    friend bool operator==(const ConvergenceCriterion&, const ConvergenceCriterion&) = default;
};

struct ScenarioConfig {
    std::uint64_t seed = 1;
    /// FUE placement seed; follows `seed` when unset.
    std::optional<std::uint64_t> layout_seed;

    double p_min_dbm = -20.0;
    double p_max_dbm = 25.0;
    std::size_t n_power = 31;
    double p_bs_dbm = 43.0;

    PathLossParams pathloss;
    double noise_dbm = -104.0;

    RingRadii radii;
    double d_th_m = 25.0;

    double q_mue = 1.0;
    /// Either one value for every FUE or one value per FBS site.
    std::vector<double> q_fue{1.0};

    LearningParams learning;
    ConvergenceCriterion convergence;

    std::size_t seed_agents = 4;
    std::size_t m_max = 15;
    /// Disabling also drops the warm start of newly admitted agents.
    bool share_rows = true;

    std::string reward = "proposed";
    int reward_mue_exponent = 2;

    LayoutParams layout;
    /// Pinned node positions; overrides layout generation when present.
    std::optional<Topology> positions;

    double oracle_max_joint_actions = 1e7;

    std::string output_dir = "out";
    /// Keep every n-th iteration in traces (0 keeps none; the final
    /// iteration of each density step is always kept when n > 0).
    std::size_t trace_stride = 10;

    std::uint64_t effective_layout_seed() const { return layout_seed.value_or(seed); }

    /// Throws ConfigError naming the offending key.
    void validate() const;

    /// Full site layout (pinned positions or generated grid).
    Topology topology() const;
    ActionSet action_set() const;
    NoisePower noise() const { return NoisePower::from_dbm({noise_dbm}); }
    PowerMw p_bs() const { return dbm_to_mw({p_bs_dbm}); }
    /// Per-site thresholds for `sites` sites.
    QosThresholds thresholds(std::size_t sites) const;
    RewardFunction reward_function() const { return make_reward(reward, reward_mue_exponent); }

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Parses JSON text; missing keys keep defaults, unknown keys are rejected.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// Canonical JSON with every effective parameter (sorted keys).
std::string dump_config(const ScenarioConfig& config);

/// FNV-1a 64 over dump_config, as 16 hex digits.
std::string config_hash(const ScenarioConfig& config);

} // namespace femtoq
