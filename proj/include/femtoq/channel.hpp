#pragma once

// Deterministic path-loss models, dB/linear conversions and the SINR /
// capacity expressions for a single-cell downlink with one macro user and
// M femto users sharing one narrowband channel.
//
// Node indexing used throughout the library:
//   transmitters: 0 = MBS, 1..M = FBS_1..FBS_M
//   receivers:    0 = MUE, 1..M = FUE_1..FUE_M
// Public functions take 0-based femto indices (fbs 0 is FBS_1).

#include <cstddef>
#include <span>
#include <vector>

#include "femtoq/topology.hpp"

namespace femtoq {

struct PowerDbm {
    double value = 0.0;
    friend bool operator==(PowerDbm, PowerDbm) = default;
};

struct PowerMw {
    double value = 0.0;
    friend bool operator==(PowerMw, PowerMw) = default;
};

PowerMw dbm_to_mw(PowerDbm p);
PowerDbm mw_to_dbm(PowerMw p);

struct LinearGain {
    double value = 1.0;
};

struct NoisePower {
    double sigma2_mw = 0.0;

    static NoisePower from_dbm(PowerDbm p);
};

/// Log-distance model PL0 + 10 n log10(d / d0), in dB.
double pathloss_residential(double d_m, double pl0_db, double exponent, double d0_m);

/// Indoor-to-outdoor femtocell model: frequency penalty
/// -1.8 f^2 + 10.6 f + 6.1 plus 62.3 + 32 log10(d / 5). f in GHz.
double pathloss_indoor_outdoor(double d_m, double f_ghz);

/// Frequency-dependent penetration term of the indoor-to-outdoor model.
double indoor_outdoor_penetration(double f_ghz);

LinearGain gain_from_pathloss(double pl_db);

/// Linear channel gains for every transmitter -> receiver pair.
/// Immutable once built.
class GainMatrix {
public:
    GainMatrix() = default;
    /// `values` is row-major with transmitters as rows, (M+1) x (M+1).
    GainMatrix(std::size_t femto_count, std::vector<double> values);

    std::size_t femto_count() const { return m_; }
    std::size_t entry_count() const { return values_.size(); }

    double operator()(std::size_t tx, std::size_t rx) const { return values_[tx * (m_ + 1) + rx]; }

    double mbs_to_mue() const { return (*this)(0, 0); }
    double mbs_to_fue(std::size_t i) const { return (*this)(0, i + 1); }
    double fbs_to_mue(std::size_t j) const { return (*this)(j + 1, 0); }
    double fbs_to_fue(std::size_t j, std::size_t i) const { return (*this)(j + 1, i + 1); }

    std::span<const double> values() const { return values_; }

    /// Relabels femto cells: new femto k is old femto perm[k].
    GainMatrix permuted(std::span<const std::size_t> perm) const;

private:
    std::size_t m_ = 0;
    std::vector<double> values_;
};

struct PathLossParams {
    double pl0_db = 62.3;
    double exponent = 4.0;
    double d0_m = 5.0;
    double frequency_ghz = 2.4;
    friend bool operator==(const PathLossParams&, const PathLossParams&) = default;
};

/// Serving links (MBS->MUE, FBS_i->FUE_i) and MBS->FUE_i use the residential
/// model; every femto transmitter reaching a non-served receiver uses the
/// indoor-to-outdoor model. Throws std::domain_error on coincident nodes.
GainMatrix build_gain_matrix(const Topology& topology, const PathLossParams& params);

double sinr_mue(PowerMw p_bs, std::span<const double> fbs_powers_mw, const GainMatrix& gains,
                NoisePower noise);

double sinr_fue(std::size_t i, PowerMw p_bs, std::span<const double> fbs_powers_mw,
                const GainMatrix& gains, NoisePower noise);

/// Normalized Shannon capacity log2(1 + sinr) in b/s/Hz.
double capacity(double sinr);

struct LinkCapacities {
    double c_mue = 0.0;
    std::vector<double> c_fue;
};

/// Evaluates both SINR expressions and capacities for one joint power vector.
/// Entries of `fbs_powers_mw` that are zero model inactive femto cells.
LinkCapacities evaluate_capacities(PowerMw p_bs, std::span<const double> fbs_powers_mw,
                                   const GainMatrix& gains, NoisePower noise);

} // namespace femtoq
