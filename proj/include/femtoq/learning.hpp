#pragma once

// Tabular Q-learning core: discrete power actions, epsilon-greedy selection
// with a two-stage schedule, and the one-step temporal-difference update.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "femtoq/channel.hpp"

namespace femtoq {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer over (seed, stream); used to give every agent its
/// own generator independent of scheduling order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

class ActionSet {
public:
    ActionSet() = default;
    explicit ActionSet(std::vector<double> levels_dbm);

    std::size_t size() const { return dbm_.size(); }
    double level_dbm(std::size_t a) const { return dbm_.at(a); }
    double level_mw(std::size_t a) const { return mw_.at(a); }
    std::span<const double> levels_dbm() const { return dbm_; }
    double step_db() const { return dbm_.size() > 1 ? dbm_[1] - dbm_[0] : 0.0; }

private:
    std::vector<double> dbm_;
    std::vector<double> mw_;
};

/// `n` evenly spaced levels from p_min to p_max inclusive.
ActionSet make_action_set(PowerDbm p_min, PowerDbm p_max, std::size_t n);

class QTable {
public:
    QTable() = default;
    QTable(std::size_t states, std::size_t actions);

    std::size_t states() const { return states_; }
    std::size_t actions() const { return actions_; }

    double& at(std::size_t s, std::size_t a);
    double at(std::size_t s, std::size_t a) const;

    std::span<double> row(std::size_t s);
    std::span<const double> row(std::size_t s) const;

    /// State-major flat copy: entry (s, a) at index s * actions + a.
    const std::vector<double>& flat() const { return values_; }
    static QTable from_flat(std::size_t states, std::size_t actions, std::vector<double> values);

    friend bool operator==(const QTable&, const QTable&) = default;

private:
    std::size_t states_ = 0;
    std::size_t actions_ = 0;
    std::vector<double> values_;
};

struct LearningParams {
    double alpha = 0.5;
    double gamma = 0.9;
    double epsilon = 0.1;
    double explore_fraction = 0.8;
    std::size_t max_iterations = 50000;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    friend bool operator==(const LearningParams&, const LearningParams&) = default;
};

/// `epsilon` during the first explore_fraction of the budget, 0 afterwards.
double epsilon_at(std::size_t iteration, const LearningParams& params);

/// Lowest index holding the row maximum.
std::size_t greedy_action(std::span<const double> qrow);

/// Uniform random index with probability `eps`, otherwise greedy_action.
/// Always consumes exactly one exploration draw from `rng`.
std::size_t select_action(std::span<const double> qrow, double eps, Rng& rng);

/// Q(s,a) <- (1-alpha) Q(s,a) + alpha (reward + gamma max_a' Q(s',a')).
/// Returns the new value of the entry.
double q_update(QTable& table, std::size_t state, std::size_t action, double reward,
                std::size_t next_state, const LearningParams& params);

} // namespace femtoq
