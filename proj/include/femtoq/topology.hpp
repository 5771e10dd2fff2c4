#pragma once

// Node placement and the location-derived learning state of each femto cell.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace femtoq {

struct Position {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Position&, const Position&) = default;
};

double distance(const Position& a, const Position& b);

struct Topology {
    Position mbs;
    Position mue;
    std::vector<Position> fbs;
    std::vector<Position> fue;

    std::size_t femto_count() const { return fbs.size(); }

    /// Throws std::invalid_argument when the femto/user lists differ in size,
    /// are empty, or any two nodes share a position.
    void validate() const;

    /// Keeps only the femto cells listed in `order`, relabelled in that order.
    Topology subset(std::span<const std::size_t> order) const;

    friend bool operator==(const Topology&, const Topology&) = default;
};

enum class FuePlacement {
    /// exactly fue_radius from the FBS, uniform bearing
    circle,
    /// uniform over the disk of radius fue_radius
    disk,
};

struct LayoutParams {
    std::size_t count = 15;
    double spacing_m = 35.0;
    double fue_radius_m = 10.0;
    FuePlacement fue_placement = FuePlacement::circle;
    /// Disk placement rejects FUEs closer than this to their FBS; the
    /// log-distance model would otherwise amplify below ~0.14 m.
    double fue_min_distance_m = 1.0;
    /// MBS and MUE are placed relative to the centroid of the FBS grid.
    Position mbs_offset{-300.0, 0.0};
    Position mue_offset{3.5, 3.5};

    friend bool operator==(const LayoutParams&, const LayoutParams&) = default;
};

/// FBSs on a row-major square grid (ceil(sqrt(count)) columns) starting at
/// the origin; FUEs placed around their FBS per `fue_placement`.
/// Deterministic for a fixed seed.
Topology generate_layout(const LayoutParams& params, std::uint64_t seed);

struct RingRadii {
    std::vector<double> mbs_radii{50.0, 150.0, 400.0};
    std::vector<double> mue_radii{15.0, 50.0, 125.0};

    /// Throws std::invalid_argument naming the offending list.
    void validate() const;
    std::size_t state_count() const { return (mbs_radii.size() + 1) * (mue_radii.size() + 1); }

    friend bool operator==(const RingRadii&, const RingRadii&) = default;
};

struct AgentState {
    std::size_t d_mbs = 0;
    std::size_t d_mue = 0;
    friend bool operator==(const AgentState&, const AgentState&) = default;
};

/// Number of radii strictly below `d`: 0 inside the first ring, radii.size()
/// beyond the outermost one. A distance equal to a radius stays inside.
std::size_t ring_index(double d, std::span<const double> radii);

AgentState agent_state(const Position& fbs, const Position& mbs, const Position& mue,
                       const RingRadii& radii);

/// Row of the Q-table owned by `state`.
std::size_t state_row(const AgentState& state, const RingRadii& radii);

/// Distance from the FBS to the MUE normalized by `d_th`.
double beta(const Position& fbs, const Position& mue, double d_th);

} // namespace femtoq
