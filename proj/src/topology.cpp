#include "femtoq/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace femtoq {

double distance(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

void Topology::validate() const {
    if (fbs.empty())
        throw std::invalid_argument("topology: at least one FBS is required");
    if (fbs.size() != fue.size())
        throw std::invalid_argument("topology: fbs and fue lists differ in length");

    std::vector<Position> all{mbs, mue};
    all.insert(all.end(), fbs.begin(), fbs.end());
    all.insert(all.end(), fue.begin(), fue.end());
    for (const auto& p : all) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw std::invalid_argument("topology: non-finite coordinate");
    }
    for (std::size_t a = 0; a < all.size(); ++a) {
        for (std::size_t b = a + 1; b < all.size(); ++b) {
            if (all[a] == all[b])
                throw std::invalid_argument("topology: two nodes share position (" +
                                            std::to_string(all[a].x) + ", " +
                                            std::to_string(all[a].y) + ")");
        }
    }
}

Topology Topology::subset(std::span<const std::size_t> order) const {
    Topology out{mbs, mue, {}, {}};
    out.fbs.reserve(order.size());
    out.fue.reserve(order.size());
    for (auto k : order) {
        if (k >= fbs.size())
            throw std::out_of_range("topology: femto index out of range");
        out.fbs.push_back(fbs[k]);
        out.fue.push_back(fue[k]);
    }
    return out;
}

Topology generate_layout(const LayoutParams& params, std::uint64_t seed) {
    if (params.count < 1)
        throw std::invalid_argument("layout: count must be >= 1");
    if (!(params.spacing_m > 0.0) || !(params.fue_radius_m > 0.0))
        throw std::invalid_argument("layout: spacing and fue_radius must be positive");
    if (!(params.fue_min_distance_m >= 0.0) || params.fue_min_distance_m >= params.fue_radius_m)
        throw std::invalid_argument("layout: fue_min_distance must lie in [0, fue_radius)");

    const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(params.count))));

    Topology topo;
    topo.fbs.reserve(params.count);
    Position centroid;
    for (std::size_t k = 0; k < params.count; ++k) {
        const Position p{static_cast<double>(k % cols) * params.spacing_m,
                         static_cast<double>(k / cols) * params.spacing_m};
        topo.fbs.push_back(p);
        centroid.x += p.x;
        centroid.y += p.y;
    }
    centroid.x /= static_cast<double>(params.count);
    centroid.y /= static_cast<double>(params.count);

    topo.mbs = {centroid.x + params.mbs_offset.x, centroid.y + params.mbs_offset.y};
    topo.mue = {centroid.x + params.mue_offset.x, centroid.y + params.mue_offset.y};

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r_max = params.fue_radius_m;
    topo.fue.reserve(params.count);
    for (const auto& f : topo.fbs) {
        double r = 0.0;
        double theta = 0.0;
        if (params.fue_placement == FuePlacement::circle) {
            r = r_max;
            theta = 2.0 * std::numbers::pi * unit(rng);
        } else {
            do {
                // sqrt of a uniform variate gives uniform density over the disk
                r = r_max * std::sqrt(unit(rng));
                theta = 2.0 * std::numbers::pi * unit(rng);
            } while (r < params.fue_min_distance_m);
        }
        topo.fue.push_back({f.x + r * std::cos(theta), f.y + r * std::sin(theta)});
    }
    return topo;
}

void RingRadii::validate() const {
    auto check = [](const std::vector<double>& radii, const char* name) {
        if (radii.empty())
            throw std::invalid_argument(std::string(name) + " must not be empty");
        for (std::size_t k = 0; k < radii.size(); ++k) {
            if (!(radii[k] > 0.0) || !std::isfinite(radii[k]))
                throw std::invalid_argument(std::string(name) + " must be positive");
            if (k > 0 && !(radii[k] > radii[k - 1]))
                throw std::invalid_argument(std::string(name) + " not ascending");
        }
    };
    check(mbs_radii, "mbs_radii");
    check(mue_radii, "mue_radii");
}

std::size_t ring_index(double d, std::span<const double> radii) {
    if (radii.empty())
        throw std::domain_error("ring_index: empty radii list");
    if (!(d >= 0.0))
        throw std::domain_error("ring_index: negative distance");
    // first radius >= d; its position equals the count of radii strictly below d
    return static_cast<std::size_t>(std::lower_bound(radii.begin(), radii.end(), d) - radii.begin());
}

AgentState agent_state(const Position& fbs, const Position& mbs, const Position& mue,
                       const RingRadii& radii) {
    return {ring_index(distance(fbs, mbs), radii.mbs_radii),
            ring_index(distance(fbs, mue), radii.mue_radii)};
}

std::size_t state_row(const AgentState& state, const RingRadii& radii) {
    if (state.d_mbs > radii.mbs_radii.size() || state.d_mue > radii.mue_radii.size())
        throw std::out_of_range("state_row: ring index out of range");
    return state.d_mbs * (radii.mue_radii.size() + 1) + state.d_mue;
}

double beta(const Position& fbs, const Position& mue, double d_th) {
    if (!(d_th > 0.0))
        throw std::domain_error("beta: d_th must be positive");
    const double d = distance(fbs, mue);
    if (!(d > 0.0))
        throw std::domain_error("beta: FBS coincides with the MUE");
    return d / d_th;
}

} // namespace femtoq
