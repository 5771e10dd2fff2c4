#include "femtoq/oracle.hpp"

#include <cmath>
#include <numeric>

namespace femtoq {

double joint_action_count(std::size_t n_power, std::size_t m) {
    return std::pow(static_cast<double>(n_power), static_cast<double>(m));
}

OracleResult exhaustive_search(const OracleProblem& problem) {
    const std::size_t m = problem.gains.femto_count();
    const std::size_t n = problem.actions.size();
    if (m == 0)
        throw std::invalid_argument("exhaustive_search: no femto cells");
    if (problem.thresholds.q_fue.size() != m)
        throw std::invalid_argument("exhaustive_search: need one FUE threshold per femto cell");

    const double total = joint_action_count(n, m);
    if (total > problem.max_joint_actions) {
        throw OracleCapExceeded("exhaustive search over " + std::to_string(n) + "^" + std::to_string(m) +
                                " joint actions exceeds the cap of " +
                                std::to_string(static_cast<long long>(problem.max_joint_actions)));
    }

    std::vector<std::size_t> idx(m, 0);
    std::vector<double> powers(m);

    OracleResult best_feasible;
    OracleResult best_any;
    bool have_any = false;
    double count = 0.0;

    // odometer in lexicographic order; strict improvement keeps the smallest vector on ties
    while (true) {
        for (std::size_t k = 0; k < m; ++k)
            powers[k] = problem.actions.level_mw(idx[k]);
        auto caps = evaluate_capacities(problem.p_bs, powers, problem.gains, problem.noise);
        const double objective = std::accumulate(caps.c_fue.begin(), caps.c_fue.end(), 0.0);
        bool ok = caps.c_mue >= problem.thresholds.q_mue;
        for (std::size_t k = 0; ok && k < m; ++k)
            ok = caps.c_fue[k] >= problem.thresholds.q_fue[k];
        count += 1.0;

        auto take = [&](OracleResult& slot) {
            slot.best_action = idx;
            slot.best_objective = objective;
            slot.c_mue = caps.c_mue;
            slot.c_fue = caps.c_fue;
        };
        if (!have_any || objective > best_any.best_objective) {
            take(best_any);
            have_any = true;
        }
        if (ok && (!best_feasible.feasible || objective > best_feasible.best_objective)) {
            take(best_feasible);
            best_feasible.feasible = true;
        }

        std::size_t pos = m;
        while (pos > 0) {
            --pos;
            if (++idx[pos] < n)
                break;
            idx[pos] = 0;
            if (pos == 0) {
                OracleResult& out = best_feasible.feasible ? best_feasible : best_any;
                out.enumerated = count;
                return out;
            }
        }
    }
}

} // namespace femtoq
