#include "femtoq/learning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace femtoq {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

ActionSet::ActionSet(std::vector<double> levels_dbm) : dbm_(std::move(levels_dbm)) {
    if (dbm_.empty())
        throw std::invalid_argument("ActionSet: no levels");
    mw_.reserve(dbm_.size());
    for (std::size_t a = 0; a < dbm_.size(); ++a) {
        if (!std::isfinite(dbm_[a]) || (a > 0 && !(dbm_[a] > dbm_[a - 1])))
            throw std::invalid_argument("ActionSet: levels must be finite and ascending");
        mw_.push_back(dbm_to_mw({dbm_[a]}).value);
    }
}

ActionSet make_action_set(PowerDbm p_min, PowerDbm p_max, std::size_t n) {
    if (n < 2)
        throw std::domain_error("make_action_set: need at least two levels");
    if (!(p_min.value < p_max.value))
        throw std::domain_error("make_action_set: p_min must be below p_max");
    const double step = (p_max.value - p_min.value) / static_cast<double>(n - 1);
    std::vector<double> levels(n);
    for (std::size_t k = 0; k < n; ++k)
        levels[k] = p_min.value + static_cast<double>(k) * step;
    levels.back() = p_max.value;
    return ActionSet(std::move(levels));
}

QTable::QTable(std::size_t states, std::size_t actions)
    : states_(states), actions_(actions), values_(states * actions, 0.0) {
    if (states == 0 || actions == 0)
        throw std::invalid_argument("QTable: dimensions must be positive");
}

double& QTable::at(std::size_t s, std::size_t a) {
    if (s >= states_ || a >= actions_)
        throw std::out_of_range("QTable: index out of range");
    return values_[s * actions_ + a];
}

double QTable::at(std::size_t s, std::size_t a) const {
    if (s >= states_ || a >= actions_)
        throw std::out_of_range("QTable: index out of range");
    return values_[s * actions_ + a];
}

std::span<double> QTable::row(std::size_t s) {
    if (s >= states_)
        throw std::out_of_range("QTable: state out of range");
    return {values_.data() + s * actions_, actions_};
}

std::span<const double> QTable::row(std::size_t s) const {
    if (s >= states_)
        throw std::out_of_range("QTable: state out of range");
    return {values_.data() + s * actions_, actions_};
}

QTable QTable::from_flat(std::size_t states, std::size_t actions, std::vector<double> values) {
    if (values.size() != states * actions)
        throw std::invalid_argument("QTable::from_flat: size mismatch");
    QTable t(states, actions);
    for (double v : values) {
        if (!std::isfinite(v))
            throw std::invalid_argument("QTable::from_flat: non-finite entry");
    }
    t.values_ = std::move(values);
    return t;
}

void LearningParams::validate() const {
    // alpha = 0 freezes the table; kept legal for detector and replay checks
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("alpha must lie in [0, 1]");
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw std::invalid_argument("gamma must lie in [0, 1]");
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("epsilon must lie in [0, 1]");
    if (!(explore_fraction >= 0.0 && explore_fraction <= 1.0))
        throw std::invalid_argument("explore_fraction must lie in [0, 1]");
    if (max_iterations == 0)
        throw std::invalid_argument("max_iterations must be positive");
}

double epsilon_at(std::size_t iteration, const LearningParams& params) {
    const double cutoff = params.explore_fraction * static_cast<double>(params.max_iterations);
    return static_cast<double>(iteration) < cutoff ? params.epsilon : 0.0;
}

std::size_t greedy_action(std::span<const double> qrow) {
    if (qrow.empty())
        throw std::invalid_argument("greedy_action: empty row");
    // max_element returns the first maximum
    return static_cast<std::size_t>(std::max_element(qrow.begin(), qrow.end()) - qrow.begin());
}

std::size_t select_action(std::span<const double> qrow, double eps, Rng& rng) {
    if (qrow.empty())
        throw std::invalid_argument("select_action: empty row");
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(rng) < eps) {
        std::uniform_int_distribution<std::size_t> pick(0, qrow.size() - 1);
        return pick(rng);
    }
    return greedy_action(qrow);
}

double q_update(QTable& table, std::size_t state, std::size_t action, double reward,
                std::size_t next_state, const LearningParams& params) {
    const auto next = table.row(next_state);
    const double best_next = *std::max_element(next.begin(), next.end());
    double& q = table.at(state, action);
    q = (1.0 - params.alpha) * q + params.alpha * (reward + params.gamma * best_next);
    return q;
}

} // namespace femtoq
