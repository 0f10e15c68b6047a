#pragma once

// Spectral and geometric analysis of simulated traces. Windows are rectangular
// and must frame an integer number of stimulus cycles, so harmonics land on
// exact DFT bins and no leakage correction is applied.

#include "ampsim/model.hpp"
#include "ampsim/transient.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace ampsim {

/// One-sided power spectrum. power[k] is the mean-square contribution of bin k,
/// so the bins sum to the mean square of the signal (Parseval).
struct Spectrum {
    double bin_width = 0.0;
    std::vector<double> power;

    double frequency(std::size_t k) const { return bin_width * static_cast<double>(k); }
};

/// Harmonics whose power relative to the fundamental does not exceed this are
/// treated as numerical noise.
inline constexpr double kHarmonicPowerFloor = 1e-9;

struct ThdResult {
    double thd = 0.0;
    double fundamental_rms = 0.0;
    std::vector<double> harmonic_rms;  ///< V_2, V_3, ... (only those above the floor).
    std::size_t n_harmonics_used = 0;
};

struct PhaseLag {
    double lag = 0.0;  ///< arg(B_1) - arg(A_1) wrapped to (-pi, pi].
    double frequency = 0.0;
};

struct TrajectoryMetrics {
    double loop_detachment = 0.0;
    bool is_closed = false;
};

Spectrum power_spectrum(std::span<const double> x, double dt);

/// Index of the bin at f0 for an n-sample window; throws ConfigError when f0
/// does not fall on a bin.
std::size_t aligned_bin(std::size_t n, double dt, double f0);

ThdResult thd(std::span<const double> x, double dt, double f0);

PhaseLag phase_lag(std::span<const double> a, std::span<const double> b, double dt, double f0);

/// (i_b, I(i_b)) pairs along the resistive load line.
std::vector<std::pair<double, double>> transfer_function(const EarlyParams& p,
                                                         const CircuitConfig& c,
                                                         std::span<const double> i_b_grid);

/// Max distance of the (V_C, I) trajectory from the load line V_C = V_CC - R*I,
/// with both axes scaled to [0, 1] (V_CC and V_CC/R) and the distance divided by
/// the scaled line length. Closure compares the first and last cycle.
TrajectoryMetrics trajectory_metrics(const Trace& tr, const CircuitConfig& c);

/// Relative tolerance for TrajectoryMetrics::is_closed.
inline constexpr double kClosureTolerance = 1e-3;

void write_spectrum_csv(std::ostream& out, const Spectrum& sp, std::size_t fundamental_bin);
void write_thd_csv(std::ostream& out, const ThdResult& r);

}  // namespace ampsim
