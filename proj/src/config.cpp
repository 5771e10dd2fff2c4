#include "femtoq/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace femtoq {

using nlohmann::json;

namespace {

// Walks one JSON object, tracking which keys were consumed so leftovers can
// be reported as unknown.
class Section {
public:
    Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object())
            throw ConfigError(where() + " must be an object");
    }

    std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const json* find(const std::string& key) {
        seen_.insert(key);
        auto it = node_.find(key);
        return it == node_.end() ? nullptr : &*it;
    }

    void number(const std::string& key, double& out) {
        if (const json* v = find(key)) {
            if (!v->is_number())
                throw ConfigError(key_path(key) + " must be a number");
            out = v->get<double>();
            if (!std::isfinite(out))
                throw ConfigError(key_path(key) + " must be finite");
        }
    }

    template <typename Int>
    void integer(const std::string& key, Int& out) {
        if (const json* v = find(key)) {
            if (!v->is_number_integer() || (std::is_unsigned_v<Int> && v->is_number_integer() &&
                                            !v->is_number_unsigned()))
                throw ConfigError(key_path(key) + " must be a non-negative integer");
            out = v->get<Int>();
        }
    }

    void boolean(const std::string& key, bool& out) {
        if (const json* v = find(key)) {
            if (!v->is_boolean())
                throw ConfigError(key_path(key) + " must be true or false");
            out = v->get<bool>();
        }
    }

    void string(const std::string& key, std::string& out) {
        if (const json* v = find(key)) {
            if (!v->is_string())
                throw ConfigError(key_path(key) + " must be a string");
            out = v->get<std::string>();
        }
    }

    void numbers(const std::string& key, std::vector<double>& out) {
        if (const json* v = find(key)) {
            if (v->is_number()) {
                out = {v->get<double>()};
                return;
            }
            if (!v->is_array())
                throw ConfigError(key_path(key) + " must be a number list");
            out.clear();
            for (const auto& e : *v) {
                if (!e.is_number())
                    throw ConfigError(key_path(key) + " must be a number list");
                out.push_back(e.get<double>());
            }
        }
    }

    void position(const std::string& key, Position& out) {
        if (const json* v = find(key))
            out = parse_position(*v, key_path(key));
    }

    static Position parse_position(const json& v, const std::string& where) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw ConfigError(where + " must be an [x, y] pair");
        return {v[0].get<double>(), v[1].get<double>()};
    }

    void finish() const {
        for (auto it = node_.begin(); it != node_.end(); ++it) {
            if (!seen_.count(it.key()))
                throw ConfigError("unknown key " + key_path(it.key()));
        }
    }

private:
    std::string where() const { return path_.empty() ? "config" : path_; }

    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

json position_json(const Position& p) { return json::array({p.x, p.y}); }

std::vector<Position> parse_positions(const json& v, const std::string& where) {
    if (!v.is_array())
        throw ConfigError(where + " must be a list of [x, y] pairs");
    std::vector<Position> out;
    for (const auto& e : v)
        out.push_back(Section::parse_position(e, where));
    return out;
}

Topology parse_topology(const json& node) {
    Section s(node, "positions");
    Topology t;
    s.position("mbs", t.mbs);
    s.position("mue", t.mue);
    if (const json* v = s.find("fbs"))
        t.fbs = parse_positions(*v, "positions.fbs");
    if (const json* v = s.find("fue"))
        t.fue = parse_positions(*v, "positions.fue");
    s.finish();
    return t;
}

json topology_json(const Topology& t) {
    json fbs = json::array();
    json fue = json::array();
    for (const auto& p : t.fbs)
        fbs.push_back(position_json(p));
    for (const auto& p : t.fue)
        fue.push_back(position_json(p));
    return {{"mbs", position_json(t.mbs)}, {"mue", position_json(t.mue)}, {"fbs", fbs}, {"fue", fue}};
}

} // namespace

void ScenarioConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };

    if (!(p_min_dbm < p_max_dbm))
        fail("power.p_min must be below power.p_max");
    if (n_power < 2)
        fail("power.n_power must be at least 2");
    try {
        radii.validate();
    } catch (const std::invalid_argument& e) {
        fail(std::string("state.") + e.what());
    }
    if (!(d_th_m > 0.0))
        fail("state.d_th must be positive");
    if (!(pathloss.d0_m > 0.0))
        fail("channel.d0 must be positive");
    if (!(pathloss.frequency_ghz > 0.0))
        fail("channel.f must be positive");
    if (!(pathloss.exponent > 0.0))
        fail("channel.n must be positive");
    if (!(q_mue > 0.0))
        fail("qos.q_mue must be positive");
    if (q_fue.empty())
        fail("qos.q_fue must not be empty");
    for (double q : q_fue) {
        if (!(q > 0.0))
            fail("qos.q_fue entries must be positive");
    }
    try {
        learning.validate();
    } catch (const std::invalid_argument& e) {
        fail(std::string("learning.") + e.what());
    }
    if (convergence.window < 1)
        fail("convergence.window must be >= 1");
    if (!(convergence.tolerance > 0.0))
        fail("convergence.tolerance must be positive");
    if (seed_agents < 1)
        fail("phases.seed_agents must be >= 1");
    if (m_max < 1)
        fail("phases.m_max must be >= 1");
    try {
        (void)make_reward(reward, reward_mue_exponent);
    } catch (const std::invalid_argument& e) {
        fail(std::string("reward.name: ") + e.what());
    }
    if (!(oracle_max_joint_actions >= 1.0))
        fail("oracle.max_joint_actions must be >= 1");

    std::size_t sites = layout.count;
    if (positions) {
        try {
            positions->validate();
        } catch (const std::invalid_argument& e) {
            fail(std::string("positions: ") + e.what());
        }
        sites = positions->femto_count();
    } else {
        if (layout.count < 1)
            fail("layout.count must be >= 1");
        if (!(layout.spacing_m > 0.0))
            fail("layout.spacing must be positive");
        if (!(layout.fue_radius_m > 0.0))
            fail("layout.fue_radius must be positive");
        if (!(layout.fue_min_distance_m >= 0.0) || !(layout.fue_min_distance_m < layout.fue_radius_m))
            fail("layout.fue_min_distance must lie in [0, fue_radius)");
    }
    if (m_max > sites)
        fail("phases.m_max exceeds the number of FBS sites (" + std::to_string(sites) + ")");
    if (q_fue.size() != 1 && q_fue.size() < sites)
        fail("qos.q_fue needs one entry or one per FBS site");
}

Topology ScenarioConfig::topology() const {
    if (positions)
        return *positions;
    return generate_layout(layout, effective_layout_seed());
}

ActionSet ScenarioConfig::action_set() const {
    return make_action_set({p_min_dbm}, {p_max_dbm}, n_power);
}

QosThresholds ScenarioConfig::thresholds(std::size_t sites) const {
    QosThresholds t{q_mue, {}};
    t.q_fue.resize(sites);
    for (std::size_t k = 0; k < sites; ++k)
        t.q_fue[k] = q_fue.size() == 1 ? q_fue[0] : q_fue.at(k);
    return t;
}

ScenarioConfig parse_config(const std::string& text) {
    json root;
    const bool blank = text.find_first_not_of(" \t\r\n") == std::string::npos;
    if (blank) {
        root = json::object();
    } else {
        try {
            root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("malformed config: ") + e.what());
        }
    }

    ScenarioConfig c;
    Section top(root, "");
    top.integer("seed", c.seed);
    if (const json* v = top.find("layout_seed")) {
        if (!v->is_null()) {
            if (!v->is_number_unsigned())
                throw ConfigError("layout_seed must be a non-negative integer");
            c.layout_seed = v->get<std::uint64_t>();
        }
    }

    if (const json* v = top.find("power")) {
        Section s(*v, "power");
        s.number("p_min", c.p_min_dbm);
        s.number("p_max", c.p_max_dbm);
        s.integer("n_power", c.n_power);
        s.number("p_bs", c.p_bs_dbm);
        double step = std::nan("");
        s.number("step", step);
        s.finish();
        if (!std::isnan(step) && c.n_power >= 2) {
            const double implied = (c.p_max_dbm - c.p_min_dbm) / static_cast<double>(c.n_power - 1);
            if (std::abs(implied - step) > 1e-9)
                throw ConfigError("power.step " + std::to_string(step) +
                                  " inconsistent with n_power (implies " + std::to_string(implied) + ")");
        }
    }
    if (const json* v = top.find("channel")) {
        Section s(*v, "channel");
        s.number("pl0", c.pathloss.pl0_db);
        s.number("n", c.pathloss.exponent);
        s.number("d0", c.pathloss.d0_m);
        s.number("f", c.pathloss.frequency_ghz);
        s.number("sigma2", c.noise_dbm);
        s.finish();
    }
    if (const json* v = top.find("state")) {
        Section s(*v, "state");
        s.numbers("mbs_radii", c.radii.mbs_radii);
        s.numbers("mue_radii", c.radii.mue_radii);
        s.number("d_th", c.d_th_m);
        s.finish();
    }
    if (const json* v = top.find("qos")) {
        Section s(*v, "qos");
        s.number("q_mue", c.q_mue);
        s.numbers("q_fue", c.q_fue);
        s.finish();
    }
    if (const json* v = top.find("learning")) {
        Section s(*v, "learning");
        s.number("alpha", c.learning.alpha);
        s.number("gamma", c.learning.gamma);
        s.number("epsilon", c.learning.epsilon);
        s.number("explore_fraction", c.learning.explore_fraction);
        s.integer("max_iterations", c.learning.max_iterations);
        s.finish();
    }
    if (const json* v = top.find("convergence")) {
        Section s(*v, "convergence");
        s.integer("window", c.convergence.window);
        s.number("tolerance", c.convergence.tolerance);
        s.finish();
    }
    if (const json* v = top.find("phases")) {
        Section s(*v, "phases");
        s.integer("seed_agents", c.seed_agents);
        s.integer("m_max", c.m_max);
        s.boolean("share_rows", c.share_rows);
        s.finish();
    }
    if (const json* v = top.find("reward")) {
        Section s(*v, "reward");
        s.string("name", c.reward);
        s.integer("mue_exponent", c.reward_mue_exponent);
        s.finish();
    }
    if (const json* v = top.find("layout")) {
        Section s(*v, "layout");
        s.integer("count", c.layout.count);
        s.number("spacing", c.layout.spacing_m);
        s.number("fue_radius", c.layout.fue_radius_m);
        std::string placement = c.layout.fue_placement == FuePlacement::circle ? "circle" : "disk";
        s.string("fue_placement", placement);
        if (placement == "circle")
            c.layout.fue_placement = FuePlacement::circle;
        else if (placement == "disk")
            c.layout.fue_placement = FuePlacement::disk;
        else
            throw ConfigError("layout.fue_placement must be \"circle\" or \"disk\"");
        s.number("fue_min_distance", c.layout.fue_min_distance_m);
        s.position("mbs_offset", c.layout.mbs_offset);
        s.position("mue_offset", c.layout.mue_offset);
        s.finish();
    }
    if (const json* v = top.find("positions")) {
        if (!v->is_null())
            c.positions = parse_topology(*v);
    }
    if (const json* v = top.find("oracle")) {
        Section s(*v, "oracle");
        s.number("max_joint_actions", c.oracle_max_joint_actions);
        s.finish();
    }
    if (const json* v = top.find("output")) {
        Section s(*v, "output");
        s.string("dir", c.output_dir);
        s.integer("trace_stride", c.trace_stride);
        s.finish();
    }
    top.finish();

    c.validate();
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string dump_config(const ScenarioConfig& c) {
    json root;
    root["seed"] = c.seed;
    root["layout_seed"] = c.effective_layout_seed();
    root["power"] = {{"p_min", c.p_min_dbm}, {"p_max", c.p_max_dbm}, {"n_power", c.n_power}, {"p_bs", c.p_bs_dbm}};
    root["channel"] = {{"pl0", c.pathloss.pl0_db},
                       {"n", c.pathloss.exponent},
                       {"d0", c.pathloss.d0_m},
                       {"f", c.pathloss.frequency_ghz},
                       {"sigma2", c.noise_dbm}};
    root["state"] = {{"mbs_radii", c.radii.mbs_radii}, {"mue_radii", c.radii.mue_radii}, {"d_th", c.d_th_m}};
    root["qos"] = {{"q_mue", c.q_mue}, {"q_fue", c.q_fue}};
    root["learning"] = {{"alpha", c.learning.alpha},
                        {"gamma", c.learning.gamma},
                        {"epsilon", c.learning.epsilon},
                        {"explore_fraction", c.learning.explore_fraction},
                        {"max_iterations", c.learning.max_iterations}};
    root["convergence"] = {{"window", c.convergence.window}, {"tolerance", c.convergence.tolerance}};
    root["phases"] = {{"seed_agents", c.seed_agents}, {"m_max", c.m_max}, {"share_rows", c.share_rows}};
    root["reward"] = {{"name", c.reward}, {"mue_exponent", c.reward_mue_exponent}};
    root["layout"] = {{"count", c.layout.count},
                      {"spacing", c.layout.spacing_m},
                      {"fue_radius", c.layout.fue_radius_m},
                      {"fue_placement", c.layout.fue_placement == FuePlacement::circle ? "circle" : "disk"},
                      {"fue_min_distance", c.layout.fue_min_distance_m},
                      {"mbs_offset", position_json(c.layout.mbs_offset)},
                      {"mue_offset", position_json(c.layout.mue_offset)}};
    if (c.positions)
        root["positions"] = topology_json(*c.positions);
    root["oracle"] = {{"max_joint_actions", c.oracle_max_joint_actions}};
    root["output"] = {{"dir", c.output_dir}, {"trace_stride", c.trace_stride}};
    return root.dump(2);
}

std::string config_hash(const ScenarioConfig& config) {
    const std::string text = dump_config(config);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace femtoq
