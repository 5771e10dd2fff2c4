#pragma once

// Brute-force search over every joint power assignment. Only meant for
// instances small enough to enumerate (N_power^M under a cap).

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "femtoq/channel.hpp"
#include "femtoq/learning.hpp"
#include "femtoq/reward.hpp"

namespace femtoq {

class OracleCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OracleResult {
    std::vector<std::size_t> best_action;
    /// Sum of FUE capacities of best_action.
    double best_objective = 0.0;
    /// True when at least one joint action meets every QoS constraint.
    bool feasible = false;
    double c_mue = 0.0;
    std::vector<double> c_fue;
    double enumerated = 0.0;
};

struct OracleProblem {
    const GainMatrix& gains;
    const ActionSet& actions;
    const QosThresholds& thresholds;
    PowerMw p_bs;
    NoisePower noise;
    double max_joint_actions = 1e7;
};

/// Number of joint actions, N_power^M, as a double.
double joint_action_count(std::size_t n_power, std::size_t m);

/// Feasible maximizer of the FUE sum capacity (lexicographically smallest
/// index vector on ties); the unconstrained maximizer when nothing is
/// feasible. Throws OracleCapExceeded above the enumeration cap.
OracleResult exhaustive_search(const OracleProblem& problem);

} // namespace femtoq
