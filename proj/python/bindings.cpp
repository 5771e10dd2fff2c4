#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "femtoq/channel.hpp"
#include "femtoq/config.hpp"
#include "femtoq/coordinator.hpp"
#include "femtoq/experiment.hpp"
#include "femtoq/learning.hpp"
#include "femtoq/oracle.hpp"
#include "femtoq/reward.hpp"
#include "femtoq/topology.hpp"

namespace py = pybind11;
using namespace femtoq;

namespace {

py::dict summary_dict(const DensitySummary& s) {
    py::dict d;
    d["m"] = s.m;
    d["sites"] = s.sites;
    d["action_dbm"] = s.action_dbm;
    d["c_mue"] = s.c_mue;
    d["c_fue"] = s.c_fue;
    d["min_fue_capacity"] = s.min_fue_capacity;
    d["sum_capacity"] = s.sum_capacity;
    d["jain"] = s.jain;
    d["iterations"] = s.iterations;
    d["converged"] = s.converged;
    d["qos_satisfied"] = s.qos_satisfied;
    return d;
}

py::list summaries(const RunTrace& trace) {
    py::list out;
    for (const auto& step : trace.steps)
        out.append(summary_dict(step.summary));
    return out;
}

py::dict oracle_dict(const OracleResult& r) {
    py::dict d;
    d["best_action"] = r.best_action;
    d["best_objective"] = r.best_objective;
    d["feasible"] = r.feasible;
    d["c_mue"] = r.c_mue;
    d["c_fue"] = r.c_fue;
    d["enumerated"] = r.enumerated;
    return d;
}

} // namespace

PYBIND11_MODULE(_femtoq, m) {
    m.doc() = "Cooperative Q-learning power allocation for dense femtocell networks";
    m.attr("__version__") = version;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<OracleCapExceeded>(m, "OracleCapExceeded", PyExc_RuntimeError);

    m.def("pathloss_residential", &pathloss_residential, py::arg("d"), py::arg("pl0") = 62.3,
          py::arg("n") = 4.0, py::arg("d0") = 5.0);
    m.def("pathloss_indoor_outdoor", &pathloss_indoor_outdoor, py::arg("d"), py::arg("f") = 2.4);
    m.def("gain_from_pathloss", [](double pl) { return gain_from_pathloss(pl).value; }, py::arg("pl"));
    m.def("dbm_to_mw", [](double p) { return dbm_to_mw({p}).value; }, py::arg("p_dbm"));
    m.def("mw_to_dbm", [](double p) { return mw_to_dbm({p}).value; }, py::arg("p_mw"));
    m.def("capacity", &capacity, py::arg("sinr"));

    m.def(
        "evaluate_capacities",
        [](std::size_t femto_count, std::vector<double> gains, double p_bs_mw, const std::vector<double>& powers_mw,
           double sigma2_mw) {
            const GainMatrix g(femto_count, std::move(gains));
            const auto caps = evaluate_capacities({p_bs_mw}, powers_mw, g, {sigma2_mw});
            return py::make_tuple(caps.c_mue, caps.c_fue);
        },
        py::arg("femto_count"), py::arg("gains"), py::arg("p_bs_mw"), py::arg("powers_mw"), py::arg("sigma2_mw"),
        "Returns (c_mue, [c_fue...]) for a row-major (M+1)x(M+1) gain list.");

    m.def(
        "ring_index", [](double d, const std::vector<double>& radii) { return ring_index(d, radii); },
        py::arg("d"), py::arg("radii"));
    m.def(
        "action_levels",
        [](double p_min, double p_max, std::size_t n) {
            const auto a = make_action_set({p_min}, {p_max}, n);
            return std::vector<double>(a.levels_dbm().begin(), a.levels_dbm().end());
        },
        py::arg("p_min") = -20.0, py::arg("p_max") = 25.0, py::arg("n") = 31);
    m.def(
        "reward",
        [](double c_fue, double c_mue, double beta, double q_fue, double q_mue, int mue_exponent) {
            return reward_proposed({c_fue, c_mue, beta, q_fue, q_mue}, mue_exponent);
        },
        py::arg("c_fue"), py::arg("c_mue"), py::arg("beta"), py::arg("q_fue") = 1.0, py::arg("q_mue") = 1.0,
        py::arg("mue_exponent") = 2);
    m.def(
        "jain_index", [](const std::vector<double>& v) { return jain_index(v); }, py::arg("values"));

    m.def(
        "normalize_config", [](const std::string& text) { return dump_config(parse_config(text)); },
        py::arg("config_json") = "", "Validated config with every default filled in, as canonical JSON.");
    m.def(
        "config_hash", [](const std::string& text) { return config_hash(parse_config(text)); },
        py::arg("config_json") = "");

    m.def(
        "run",
        [](const std::string& text) {
            const auto config = parse_config(text);
            RunTrace trace;
            {
                py::gil_scoped_release release;
                trace = run_simulation(config);
            }
            return py::make_tuple(trace.admission_order, summaries(trace));
        },
        py::arg("config_json") = "",
        "Runs the density sweep in memory; returns (admission_order, [summary per density]).");
    m.def(
        "run_experiment",
        [](const std::string& text, const std::filesystem::path& out_dir) {
            const auto config = parse_config(text);
            ExperimentResult res;
            {
                py::gil_scoped_release release;
                res = femtoq::run_experiment(config, out_dir);
            }
            return py::make_tuple(res.config_hash, summaries(res.trace));
        },
        py::arg("config_json"), py::arg("out_dir"), "Runs the sweep and writes the CSV artifacts to out_dir.");
    m.def(
        "oracle",
        [](const std::string& text, const std::filesystem::path& out_dir) {
            const auto config = parse_config(text);
            OracleRun run;
            {
                py::gil_scoped_release release;
                run = run_oracle(config, out_dir);
            }
            py::dict d = oracle_dict(run.result);
            d["m"] = run.m;
            d["learned_sum"] = run.learned_sum;
            d["optimality_gap"] = run.optimality_gap;
            return d;
        },
        py::arg("config_json"), py::arg("out_dir"));
}
