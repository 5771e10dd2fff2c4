// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances and thresholds are fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "femtoq/channel.hpp"
#include "femtoq/config.hpp"
#include "femtoq/coordinator.hpp"
#include "femtoq/learning.hpp"
#include "femtoq/oracle.hpp"
#include "femtoq/reward.hpp"
#include "femtoq/topology.hpp"

using namespace femtoq;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

constexpr double formula_rel_tol = 1e-9;
constexpr double fixed_point_tol = 1e-6;
constexpr std::size_t fixed_point_budget = 2000;
constexpr std::size_t toy_instances = 20;
constexpr double toy_gap_limit = 0.10;
constexpr double toy_feasible_share = 0.80;
constexpr std::size_t sweep_seeds = 7;
constexpr double degradation_fraction = 0.5;
constexpr double jain_floor = 0.85;
constexpr std::size_t iteration_budget = 50000;
constexpr double monotone_share = 0.70;
constexpr std::size_t cooperation_m = 6;
constexpr std::uint64_t cooperation_layout_seed = 2024;
constexpr double recompute_rel_tol = 1e-12;

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

bool close_rel(double got, double want, double tol) {
    const double scale = std::max(std::abs(want), 1.0);
    return std::abs(got - want) <= tol * scale;
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// ---------------------------------------------------------------- 1
Outcome formula_suite() {
    struct Case {
        const char* name;
        double got;
        double want;
    };
    const auto unit = GainMatrix(2, std::vector<double>(9, 1.0));
    const std::vector<double> ones{1.0, 1.0};

    // rhombus with every relevant link 5 m long
    Topology five;
    five.mue = {0.0, 0.0};
    five.fue = {{5.0, 0.0}};
    five.mbs = {2.5, 5.0 * std::sqrt(3.0) / 2.0};
    five.fbs = {{2.5, -5.0 * std::sqrt(3.0) / 2.0}};
    const auto g5 = build_gain_matrix(five, PathLossParams{});

    QTable t(1, 2);
    t.at(0, 0) = 2.0;
    t.at(0, 1) = 4.0;
    LearningParams lp;
    q_update(t, 0, 0, 1.0, 0, lp);

    const std::vector<double> radii{50.0, 150.0, 400.0};
    const std::vector<double> jain_in{1.0, 2.0, 3.0};
    const auto acts = make_action_set({-20.0}, {25.0}, 31);

    const std::vector<Case> cases{
        {"residential d=d0", pathloss_residential(5, 62.3, 4, 5), 62.3},
        {"residential d=50", pathloss_residential(50, 62.3, 4, 5), 102.3},
        {"penetration f=2.4", indoor_outdoor_penetration(2.4), 21.172},
        {"indoor-outdoor d=5", pathloss_indoor_outdoor(5, 2.4), 83.472},
        {"gain 0 dB", gain_from_pathloss(0).value, 1.0},
        {"gain 10 dB", gain_from_pathloss(10).value, 0.1},
        {"gain 102.3 dB", gain_from_pathloss(102.3).value, 5.888436553555884e-11},
        {"matrix MBS->MUE", g5.mbs_to_mue(), 5.888436553555884e-07},
        {"matrix FBS->FUE", g5.fbs_to_fue(0, 0), 5.888436553555884e-07},
        {"matrix FBS->MUE", g5.fbs_to_mue(0), 4.495727713019046e-09},
        {"matrix MBS->FUE", g5.mbs_to_fue(0), 5.888436553555884e-07},
        {"sinr_mue unit", sinr_mue({1.0}, ones, unit, {1.0}), 1.0 / 3.0},
        {"sinr_fue unit 0", sinr_fue(0, {1.0}, ones, unit, {1.0}), 1.0 / 3.0},
        {"sinr_fue unit 1", sinr_fue(1, {1.0}, ones, unit, {1.0}), 1.0 / 3.0},
        {"capacity 0", capacity(0), 0.0},
        {"capacity 1", capacity(1), 1.0},
        {"capacity 3", capacity(3), 2.0},
        {"reward at thresholds", reward_proposed({1, 1, 1, 1, 1}), 1.0},
        {"reward at zero", reward_proposed({0, 0, 1, 1, 1}), -2.0},
        {"reward beta 0.5", reward_proposed({2, 1, 0.5, 1, 1}), 0.0},
        {"q_update hand", t.at(0, 0), 3.3},
        {"action step", acts.step_db(), 1.5},
        {"action level 13", acts.level_dbm(13), -0.5},
        {"epsilon start", epsilon_at(0, lp), 0.1},
        {"epsilon boundary", epsilon_at(40000, lp), 0.0},
        {"ring d=10", static_cast<double>(ring_index(10, radii)), 0.0},
        {"ring d=400", static_cast<double>(ring_index(400, radii)), 2.0},
        {"ring d=401", static_cast<double>(ring_index(401, radii)), 3.0},
        {"jain 1,2,3", jain_index(jain_in), 6.0 / 7.0},
    };
    std::size_t bad = 0;
    std::string first;
    for (const auto& c : cases) {
        if (!close_rel(c.got, c.want, formula_rel_tol)) {
            if (bad++ == 0)
                first = std::string(" first mismatch: ") + c.name;
        }
    }
    return {bad == 0, std::to_string(cases.size() - bad) + "/" + std::to_string(cases.size()) +
                          " hand-computed values within 1e-9 relative" + first};
}

// ---------------------------------------------------------------- 2
Outcome fixed_point() {
    constexpr double reward_value = 1.7;
    register_reward("acceptance-constant", [](const RewardInputs&) { return reward_value; });

    ScenarioConfig cfg;
    cfg.reward = "acceptance-constant";
    cfg.learning.max_iterations = fixed_point_budget;
    cfg.learning.explore_fraction = 0.0;
    const Topology sites = cfg.topology();
    std::vector<Agent> agents{make_agent(0, sites, cfg)};
    const Environment env = make_environment(agents, sites, cfg);
    // tolerance far below the fixed-point tolerance so the full budget is used
    const PhaseOptions opts{false, 0, {fixed_point_budget + 1, 1e-300}};
    const auto out = run_density_step(agents, env, opts);

    const double target = reward_value / (1.0 - cfg.learning.gamma);
    const auto row = agents[0].table.row(agents[0].row);
    const double q = *std::max_element(row.begin(), row.end());
    const double err = std::abs(q - target);
    return {err < fixed_point_tol && out.summary.iterations <= fixed_point_budget,
            "Q=" + fmt("%.12g", q) + " target=" + fmt("%.12g", target) + " |err|=" + fmt("%.3g", err) +
                " after " + std::to_string(out.summary.iterations) + " iterations"};
}

// ---------------------------------------------------------------- 3
ScenarioConfig toy_instance(std::size_t k) {
    ScenarioConfig base;
    const Topology full = generate_layout(base.layout, 1000 + k);
    std::vector<std::size_t> pick(full.femto_count());
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    Rng rng(derive_seed(77, k));
    std::shuffle(pick.begin(), pick.end(), rng);
    const std::size_t m = (k % 2 == 0) ? 2 : 3;
    pick.resize(m);

    ScenarioConfig cfg;
    cfg.seed = 500 + k;
    cfg.n_power = 5;
    cfg.positions = full.subset(pick);
    cfg.m_max = m;
    cfg.trace_stride = 0;
    cfg.validate();
    return cfg;
}

Outcome oracle_equivalence() {
    std::size_t within = 0;
    std::size_t feasible = 0;
    std::size_t learned_ok = 0;
    double worst_gap = 0.0;
    std::vector<double> gaps;
    for (std::size_t k = 0; k < toy_instances; ++k) {
        const ScenarioConfig cfg = toy_instance(k);
        const Topology sites = cfg.topology();
        const auto order = admission_order(sites.femto_count(), cfg.seed_agents, cfg.m_max, cfg.seed);
        auto phase = run_individual_phase(cfg.m_max, sites, order, cfg);
        const auto& learned = phase.trace.summary;

        const Topology active = sites.subset(order);
        const GainMatrix gains = build_gain_matrix(active, cfg.pathloss);
        const ActionSet acts = cfg.action_set();
        const QosThresholds th = cfg.thresholds(order.size());
        const auto best = exhaustive_search({gains, acts, th, cfg.p_bs(), cfg.noise(), cfg.oracle_max_joint_actions});

        const double gap = (best.best_objective - learned.sum_capacity) / best.best_objective;
        gaps.push_back(gap);
        worst_gap = std::max(worst_gap, gap);
        if (gap <= toy_gap_limit)
            ++within;
        if (best.feasible) {
            ++feasible;
            if (learned.qos_satisfied)
                ++learned_ok;
        }
    }
    const bool gap_ok = within == toy_instances;
    const bool feas_ok = feasible == 0 || static_cast<double>(learned_ok) >= toy_feasible_share * feasible;
    return {gap_ok && feas_ok, std::to_string(within) + "/" + std::to_string(toy_instances) +
                                   " within 10% of optimum (median gap " + fmt("%.3f", median(gaps)) +
                                   ", worst " + fmt("%.3f", worst_gap) + "); constraints met in " +
                                   std::to_string(learned_ok) + "/" + std::to_string(feasible) +
                                   " oracle-feasible instances"};
}

// ---------------------------------------------------------------- 4..7
struct Sweep {
    // [m-1][seed]
    std::vector<std::vector<DensitySummary>> by_m;
};

const Sweep& default_sweep() {
    static const Sweep sweep = [] {
        Sweep s;
        for (std::size_t seed = 1; seed <= sweep_seeds; ++seed) {
            ScenarioConfig cfg;
            cfg.seed = seed;
            cfg.trace_stride = 0;
            const RunTrace run = run_simulation(cfg);
            if (s.by_m.empty())
                s.by_m.resize(run.steps.size());
            for (const auto& step : run.steps)
                s.by_m[step.summary.m - 1].push_back(step.summary);
        }
        return s;
    }();
    return sweep;
}

std::vector<double> column(std::size_t m, const std::function<double(const DensitySummary&)>& f) {
    std::vector<double> v;
    for (const auto& s : default_sweep().by_m.at(m - 1))
        v.push_back(f(s));
    return v;
}

Outcome qos_density() {
    const double q = ScenarioConfig{}.q_mue;
    std::size_t satisfied_upto = 0;
    for (std::size_t m = 1; m <= 8; ++m) {
        const double c_mue = median(column(m, [](const DensitySummary& s) { return s.c_mue; }));
        const double c_fue = median(column(m, [](const DensitySummary& s) { return s.min_fue_capacity; }));
        if (c_mue >= q && c_fue >= q)
            satisfied_upto = m;
        else
            break;
    }
    const char* grade = satisfied_upto >= 8 ? "full claim (M<=8)"
                        : satisfied_upto >= 6 ? "layout-sensitive (M<=6 only)"
                                              : "hard floor";
    return {satisfied_upto >= 5, "median QoS met for every M<=" + std::to_string(satisfied_upto) + " over " +
                                     std::to_string(sweep_seeds) + " seeds: " + grade};
}

Outcome graceful_degradation() {
    const double q = ScenarioConfig{}.q_mue;
    double worst = 1e300;
    for (std::size_t m = 1; m <= 11; ++m)
        worst = std::min(worst, median(column(m, [](const DensitySummary& s) { return s.c_mue; })));
    return {worst >= degradation_fraction * q,
            "lowest median C_MUE over M<=11 is " + fmt("%.3f", worst) + " b/s/Hz (floor " +
                fmt("%.2f", degradation_fraction * q) + ")"};
}

Outcome fairness() {
    const double j = median(column(13, [](const DensitySummary& s) { return s.jain; }));
    return {j >= jain_floor, "median Jain index at M=13 is " + fmt("%.4f", j)};
}

Outcome convergence_budget() {
    bool all_converged = true;
    std::size_t worst = 0;
    std::vector<double> med;
    for (std::size_t m = 1; m <= 13; ++m) {
        for (const auto& s : default_sweep().by_m.at(m - 1)) {
            all_converged = all_converged && s.converged && s.iterations <= iteration_budget;
            worst = std::max(worst, s.iterations);
        }
        med.push_back(median(column(m, [](const DensitySummary& s) { return static_cast<double>(s.iterations); })));
    }
    std::size_t nondecreasing = 0;
    for (std::size_t k = 1; k < med.size(); ++k)
        nondecreasing += med[k] >= med[k - 1];
    const double share = static_cast<double>(nondecreasing) / static_cast<double>(med.size() - 1);
    std::ostringstream medians;
    for (double v : med)
        medians << ' ' << static_cast<long>(v);
    return {all_converged && share >= monotone_share,
            std::string(all_converged ? "all" : "NOT all") + " runs converged (max " + std::to_string(worst) +
                " iterations); nondecreasing pairs " + std::to_string(nondecreasing) + "/" +
                std::to_string(med.size() - 1) + "; medians" + medians.str()};
}

// ---------------------------------------------------------------- 8
Outcome cooperation_benefit() {
    std::vector<double> with_sharing;
    std::vector<double> without;
    for (std::size_t seed = 1; seed <= sweep_seeds; ++seed) {
        for (bool share : {true, false}) {
            ScenarioConfig cfg;
            cfg.seed = seed;
            cfg.layout_seed = cooperation_layout_seed;
            cfg.m_max = cooperation_m;
            cfg.share_rows = share;
            cfg.trace_stride = 0;
            const auto run = run_simulation(cfg);
            const double it = static_cast<double>(run.steps.back().summary.iterations);
            (share ? with_sharing : without).push_back(it);
        }
    }
    const double a = median(with_sharing);
    const double b = median(without);
    return {a < b, "median iterations at M=6: sharing " + fmt("%.0f", a) + " vs independent " + fmt("%.0f", b)};
}

// ---------------------------------------------------------------- 9
Outcome determinism_and_invariants() {
    std::vector<std::string> failures;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok)
            failures.push_back(what);
    };
    Rng rng(9001);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    // dBm <-> mW round trip
    bool rt = true;
    for (int k = 0; k < 10000; ++k) {
        const double x = -150.0 + 200.0 * u(rng);
        rt = rt && std::abs(mw_to_dbm(dbm_to_mw({x})).value - x) <= 1e-9;
    }
    expect(rt, "dBm round trip");

    // SINR strictly decreasing in any interferer's power; capacity increasing
    bool mono = true;
    for (int k = 0; k < 2000; ++k) {
        const std::size_t m = 2 + k % 4;
        std::vector<double> g((m + 1) * (m + 1));
        for (double& v : g)
            v = 1e-9 + u(rng) * 1e-6;
        const GainMatrix gm(m, g);
        std::vector<double> p(m);
        for (double& v : p)
            v = 0.01 + u(rng) * 100.0;
        const std::size_t victim = k % m;
        const std::size_t other = (victim + 1) % m;
        const double before_fue = sinr_fue(victim, {1e4}, p, gm, {1e-10});
        const double before_mue = sinr_mue({1e4}, p, gm, {1e-10});
        p[other] *= 1.5;
        mono = mono && sinr_fue(victim, {1e4}, p, gm, {1e-10}) < before_fue &&
               sinr_mue({1e4}, p, gm, {1e-10}) < before_mue;
        mono = mono && capacity(before_fue) < capacity(before_fue * 1.01);
    }
    expect(mono, "SINR/capacity monotonicity");

    // ring index monotone and surjective
    const std::vector<double> radii{15.0, 50.0, 125.0};
    std::size_t prev = 0;
    std::vector<bool> hit(4, false);
    bool ring_ok = true;
    for (double d = 0.0; d < 300.0; d += 0.25) {
        const auto r = ring_index(d, radii);
        ring_ok = ring_ok && r >= prev;
        prev = r;
        hit[r] = true;
    }
    expect(ring_ok && std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }), "ring_index monotone/surjective");

    // share_rows preserves each group's mean and leaves other rows alone
    bool share_ok = true;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Agent> agents(5);
        for (std::size_t k = 0; k < agents.size(); ++k) {
            agents[k].row = static_cast<std::size_t>(u(rng) * 3);
            agents[k].table = QTable(4, 6);
            for (std::size_t s = 0; s < 4; ++s)
                for (std::size_t a = 0; a < 6; ++a)
                    agents[k].table.at(s, a) = u(rng) * 10 - 5;
        }
        const auto before = agents;
        share_rows(agents);
        for (std::size_t row = 0; row < 3; ++row) {
            const auto m0 = peer_mean_row(before, row);
            const auto m1 = peer_mean_row(agents, row);
            for (std::size_t a = 0; a < m0.size(); ++a)
                share_ok = share_ok && std::abs(m0[a] - m1[a]) <= 1e-12;
        }
        for (std::size_t k = 0; k < agents.size(); ++k)
            for (std::size_t s = 0; s < 4; ++s)
                if (s != agents[k].row)
                    share_ok = share_ok && std::ranges::equal(agents[k].table.row(s), before[k].table.row(s));
    }
    expect(share_ok, "share_rows mean preservation");

    // oracle permutation equivariance on toy instances
    bool perm_ok = true;
    for (std::size_t k = 0; k < 6; ++k) {
        const ScenarioConfig cfg = toy_instance(k + 1);
        const Topology t = cfg.topology();
        const GainMatrix g = build_gain_matrix(t, cfg.pathloss);
        const ActionSet acts = cfg.action_set();
        const QosThresholds th = cfg.thresholds(t.femto_count());
        const auto base = exhaustive_search({g, acts, th, cfg.p_bs(), cfg.noise(), 1e7});
        std::vector<std::size_t> perm(t.femto_count());
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::reverse(perm.begin(), perm.end());
        const auto swapped = exhaustive_search({g.permuted(perm), acts, th, cfg.p_bs(), cfg.noise(), 1e7});
        for (std::size_t i = 0; i < perm.size(); ++i)
            perm_ok = perm_ok && swapped.best_action[i] == base.best_action[perm[i]];
        perm_ok = perm_ok && swapped.feasible == base.feasible;
    }
    expect(perm_ok, "oracle permutation equivariance");

    // bit-identical reruns + capacity recomputation from logged powers
    ScenarioConfig cfg;
    cfg.seed = 3;
    cfg.m_max = 6;
    cfg.trace_stride = 97;
    const auto a = run_simulation(cfg);
    const auto b = run_simulation(cfg);
    bool same = a.admission_order == b.admission_order && a.steps.size() == b.steps.size();
    bool recompute = true;
    const Topology sites = cfg.topology();
    for (std::size_t k = 0; same && k < a.steps.size(); ++k) {
        const auto& sa = a.steps[k];
        const auto& sb = b.steps[k];
        same = same && sa.summary.iterations == sb.summary.iterations && sa.summary.c_fue == sb.summary.c_fue &&
               sa.summary.c_mue == sb.summary.c_mue && sa.records.size() == sb.records.size();
        for (std::size_t r = 0; same && r < sa.records.size(); ++r)
            same = sa.records[r].rewards == sb.records[r].rewards && sa.records[r].actions == sb.records[r].actions &&
                   sa.records[r].max_q_delta == sb.records[r].max_q_delta;

        const GainMatrix g = build_gain_matrix(sites.subset(sa.summary.sites), cfg.pathloss);
        for (const auto& rec : sa.records) {
            std::vector<double> p;
            for (double dbm : rec.action_dbm)
                p.push_back(dbm_to_mw({dbm}).value);
            const auto caps = evaluate_capacities(cfg.p_bs(), p, g, cfg.noise());
            recompute = recompute && close_rel(caps.c_mue, rec.c_mue, recompute_rel_tol);
            for (std::size_t i = 0; i < p.size(); ++i)
                recompute = recompute && close_rel(caps.c_fue[i], rec.c_fue[i], recompute_rel_tol);
        }
    }
    expect(same, "bit-identical rerun");
    expect(recompute, "capacity recomputation from logged powers");

    // config round trip
    ScenarioConfig c2 = cfg;
    c2.positions = cfg.topology();
    const auto reloaded = parse_config(dump_config(c2));
    expect(config_hash(reloaded) == config_hash(c2), "config round trip hash");

    std::string detail = failures.empty() ? "all invariant checks hold" : "failed:";
    for (const auto& f : failures)
        detail += " [" + f + "]";
    return {failures.empty(), detail};
}

} // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        Outcome (*run)();
    };
    const Entry entries[] = {
        {1, "formula unit suite", formula_suite},
        {2, "Q-update fixed point", fixed_point},
        {3, "oracle equivalence at toy scale", oracle_equivalence},
        {4, "QoS density claim", qos_density},
        {5, "graceful MUE degradation", graceful_degradation},
        {6, "fairness at M=13", fairness},
        {7, "convergence budget and trend", convergence_budget},
        {8, "cooperation benefit", cooperation_benefit},
        {9, "determinism and invariants", determinism_and_invariants},
    };

    int failed = 0;
    for (const auto& e : entries) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = e.run();
        } catch (const std::exception& ex) {
            o = {false, std::string("exception: ") + ex.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", e.id, e.name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(entries)) - failed, std::size(entries));
    return failed == 0 ? 0 : 1;
}
