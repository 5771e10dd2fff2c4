#pragma once

// QoS- and proximity-aware per-agent reward.

#include <functional>
#include <string>
#include <vector>

namespace femtoq {

struct QosThresholds {
    double q_mue = 1.0;
    /// One entry per femto user, in femto index order.
    std::vector<double> q_fue;
};

struct RewardInputs {
    double c_fue = 0.0;
    double c_mue = 0.0;
    double beta = 1.0;
    double q_fue = 1.0;
    double q_mue = 1.0;
};

/// beta * C_fue * C_mue^k - (C_mue - q_mue)^2 / beta - (C_fue - q_fue)^2,
/// with k = `mue_exponent` (2 unless overridden).
/// Throws std::domain_error for beta <= 0.
double reward_proposed(const RewardInputs& in, int mue_exponent = 2);

using RewardFunction = std::function<double(const RewardInputs&)>;

/// Looks up a reward by its configuration name. "proposed" is built in.
/// Throws std::invalid_argument for unknown names.
RewardFunction make_reward(const std::string& name, int mue_exponent = 2);

/// Adds or replaces a named reward for later make_reward calls. The
/// built-in "proposed" cannot be replaced (std::invalid_argument).
void register_reward(const std::string& name, RewardFunction fn);

std::vector<std::string> reward_names();

} // namespace femtoq
