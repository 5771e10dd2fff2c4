#include "femtoq/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace femtoq {

PowerMw dbm_to_mw(PowerDbm p) { return {std::pow(10.0, p.value / 10.0)}; }

PowerDbm mw_to_dbm(PowerMw p) {
    if (!(p.value > 0.0))
        throw std::domain_error("mw_to_dbm: power must be positive");
    return {10.0 * std::log10(p.value)};
}

NoisePower NoisePower::from_dbm(PowerDbm p) { return {dbm_to_mw(p).value}; }

double pathloss_residential(double d_m, double pl0_db, double exponent, double d0_m) {
    if (!(d_m > 0.0) || !(d0_m > 0.0))
        throw std::domain_error("pathloss_residential: distances must be positive");
    return pl0_db + 10.0 * exponent * std::log10(d_m / d0_m);
}

double indoor_outdoor_penetration(double f_ghz) { return -1.8 * f_ghz * f_ghz + 10.6 * f_ghz + 6.1; }

double pathloss_indoor_outdoor(double d_m, double f_ghz) {
    if (!(d_m > 0.0) || !(f_ghz > 0.0))
        throw std::domain_error("pathloss_indoor_outdoor: distance and frequency must be positive");
    return indoor_outdoor_penetration(f_ghz) + 62.3 + 32.0 * std::log10(d_m / 5.0);
}

LinearGain gain_from_pathloss(double pl_db) { return {std::pow(10.0, -pl_db / 10.0)}; }

GainMatrix::GainMatrix(std::size_t femto_count, std::vector<double> values)
    : m_(femto_count), values_(std::move(values)) {
    if (values_.size() != (m_ + 1) * (m_ + 1))
        throw std::invalid_argument("GainMatrix: expected (M+1)^2 entries");
    for (double g : values_) {
        if (!(g > 0.0) || !(g <= 1.0))
            throw std::domain_error("GainMatrix: gains must lie in (0, 1]");
    }
}

GainMatrix GainMatrix::permuted(std::span<const std::size_t> perm) const {
    if (perm.size() != m_)
        throw std::invalid_argument("GainMatrix::permuted: permutation size mismatch");
    // node k+1 in the new labelling is node perm[k]+1 in the old one; MBS/MUE stay at 0
    auto old_node = [&](std::size_t n) { return n == 0 ? 0 : perm[n - 1] + 1; };
    std::vector<double> out(values_.size());
    for (std::size_t tx = 0; tx <= m_; ++tx)
        for (std::size_t rx = 0; rx <= m_; ++rx)
            out[tx * (m_ + 1) + rx] = (*this)(old_node(tx), old_node(rx));
    return GainMatrix(m_, std::move(out));
}

GainMatrix build_gain_matrix(const Topology& topology, const PathLossParams& params) {
    const std::size_t m = topology.femto_count();
    if (topology.fue.size() != m)
        throw std::invalid_argument("build_gain_matrix: fbs/fue size mismatch");

    auto residential = [&](const Position& a, const Position& b) {
        return gain_from_pathloss(
                   pathloss_residential(distance(a, b), params.pl0_db, params.exponent, params.d0_m))
            .value;
    };
    auto indoor_outdoor = [&](const Position& a, const Position& b) {
        return gain_from_pathloss(pathloss_indoor_outdoor(distance(a, b), params.frequency_ghz)).value;
    };

    std::vector<double> g((m + 1) * (m + 1));
    auto at = [&](std::size_t tx, std::size_t rx) -> double& { return g[tx * (m + 1) + rx]; };

    at(0, 0) = residential(topology.mbs, topology.mue);
    for (std::size_t i = 0; i < m; ++i)
        at(0, i + 1) = residential(topology.mbs, topology.fue[i]);
    for (std::size_t j = 0; j < m; ++j) {
        at(j + 1, 0) = indoor_outdoor(topology.fbs[j], topology.mue);
        for (std::size_t i = 0; i < m; ++i) {
            at(j + 1, i + 1) = (i == j) ? residential(topology.fbs[j], topology.fue[i])
                                        : indoor_outdoor(topology.fbs[j], topology.fue[i]);
        }
    }
    for (double v : g) {
        if (!(v <= 1.0))
            throw std::domain_error("build_gain_matrix: link too short for the path-loss model (gain > 1)");
    }
    return GainMatrix(m, std::move(g));
}

double sinr_mue(PowerMw p_bs, std::span<const double> fbs_powers_mw, const GainMatrix& gains,
                NoisePower noise) {
    if (fbs_powers_mw.size() != gains.femto_count())
        throw std::invalid_argument("sinr_mue: power vector size mismatch");
    double interference = 0.0;
    for (std::size_t j = 0; j < fbs_powers_mw.size(); ++j)
        interference += fbs_powers_mw[j] * gains.fbs_to_mue(j);
    return p_bs.value * gains.mbs_to_mue() / (interference + noise.sigma2_mw);
}

double sinr_fue(std::size_t i, PowerMw p_bs, std::span<const double> fbs_powers_mw,
                const GainMatrix& gains, NoisePower noise) {
    if (fbs_powers_mw.size() != gains.femto_count())
        throw std::invalid_argument("sinr_fue: power vector size mismatch");
    if (i >= gains.femto_count())
        throw std::out_of_range("sinr_fue: femto index out of range");
    double interference = p_bs.value * gains.mbs_to_fue(i);
    for (std::size_t j = 0; j < fbs_powers_mw.size(); ++j) {
        if (j != i)
            interference += fbs_powers_mw[j] * gains.fbs_to_fue(j, i);
    }
    return fbs_powers_mw[i] * gains.fbs_to_fue(i, i) / (interference + noise.sigma2_mw);
}

double capacity(double sinr) {
    if (!(sinr >= 0.0))
        throw std::domain_error("capacity: negative SINR");
    return std::log2(1.0 + sinr);
}

LinkCapacities evaluate_capacities(PowerMw p_bs, std::span<const double> fbs_powers_mw,
                                   const GainMatrix& gains, NoisePower noise) {
    LinkCapacities out;
    out.c_mue = capacity(sinr_mue(p_bs, fbs_powers_mw, gains, noise));
    out.c_fue.resize(gains.femto_count());
    for (std::size_t i = 0; i < gains.femto_count(); ++i)
        out.c_fue[i] = capacity(sinr_fue(i, p_bs, fbs_powers_mw, gains, noise));
    return out;
}

} // namespace femtoq
