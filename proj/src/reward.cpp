#include "femtoq/reward.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace femtoq {

double reward_proposed(const RewardInputs& in, int mue_exponent) {
    if (!(in.beta > 0.0))
        throw std::domain_error("reward_proposed: beta must be positive");
    const double mue_dev = in.c_mue - in.q_mue;
    const double fue_dev = in.c_fue - in.q_fue;
    return in.beta * in.c_fue * std::pow(in.c_mue, mue_exponent) - mue_dev * mue_dev / in.beta -
           fue_dev * fue_dev;
}

namespace {

std::mutex registry_mutex;

std::map<std::string, RewardFunction>& registry() {
    static std::map<std::string, RewardFunction> r;
    return r;
}

} // namespace

RewardFunction make_reward(const std::string& name, int mue_exponent) {
    if (name == "proposed")
        return [mue_exponent](const RewardInputs& in) { return reward_proposed(in, mue_exponent); };
    std::lock_guard lock(registry_mutex);
    auto it = registry().find(name);
    if (it == registry().end())
        throw std::invalid_argument("unknown reward '" + name + "'");
    return it->second;
}

void register_reward(const std::string& name, RewardFunction fn) {
    if (name == "proposed")
        throw std::invalid_argument("the built-in 'proposed' reward cannot be replaced");
    std::lock_guard lock(registry_mutex);
    registry()[name] = std::move(fn);
}

std::vector<std::string> reward_names() {
    std::lock_guard lock(registry_mutex);
    std::vector<std::string> names{"proposed"};
    for (const auto& [k, v] : registry())
        names.push_back(k);
    return names;
}

} // namespace femtoq
