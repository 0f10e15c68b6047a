#pragma once

// Time-domain simulation of the common-emitter stage driven by a sinusoidal
// base current.

#include "ampsim/model.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace ampsim {

struct Stimulus {
    double offset = 60e-6;     ///< DC bias [A].
    double amplitude = 60e-6;  ///< Peak amplitude [A].
    double frequency = 1000.0; ///< [Hz].
    double phase = 0.0;        ///< [rad].

    void validate() const;
    double at(double t) const;
    double peak() const { return offset + amplitude; }

    bool operator==(const Stimulus&) const = default;
};

enum class Scheme { euler, trapezoidal };

enum class InitialState {
    discharged,          ///< V_p(0) = 0.
    dc_operating_point,  ///< V_p(0) at the resistive operating point of i_b(0).
};

struct SimConfig {
    std::size_t n_steps = 200'000;  ///< Requested Nt; rounded up to whole cycles.
    std::size_t n_cycles = 6;
    std::size_t discard_cycles = 3;
    Scheme scheme = Scheme::euler;
    InitialState initial = InitialState::discharged;

    void validate() const;

    bool operator==(const SimConfig&) const = default;
};

inline constexpr std::size_t kMinSamplesPerCycle = 1000;

/// Sampling grid realised for a (stimulus, config) pair.
///
/// The sample count is rounded up so that every cycle holds exactly
/// samples_per_cycle samples: n_samples = n_cycles * samples_per_cycle + 1 and
/// dt = t_end / (n_samples - 1) with t_end = n_cycles / f.
struct TimeGrid {
    double dt = 0.0;
    std::size_t n_samples = 0;
    std::size_t samples_per_cycle = 0;
};

TimeGrid resolve_grid(const Stimulus& st, const SimConfig& cfg);

/// Uniformly sampled circuit waveforms. v_p[k] == vcc - v_c[k] for every k.
struct Trace {
    double dt = 0.0;
    double t0 = 0.0;
    std::size_t samples_per_cycle = 0;
    std::vector<double> i_b;
    std::vector<double> i;
    std::vector<double> v_c;
    std::vector<double> v_p;

    std::size_t size() const { return i_b.size(); }
    double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }

    /// Sub-trace [first, first + count).
    Trace slice(std::size_t first, std::size_t count) const;
};

std::vector<double> generate_stimulus(const Stimulus& st, const SimConfig& cfg);

/// Pointwise resistive solution; the circuit is memoryless.
Trace simulate_resistive(const EarlyParams& p, const CircuitConfig& c, const Stimulus& st,
                         const SimConfig& cfg);

/// Time-stepped RC-load solution starting from a discharged capacitor.
Trace simulate_rc(const EarlyParams& p, const CircuitConfig& c, const Stimulus& st,
                  const SimConfig& cfg);

/// Dispatches on c.resistive().
Trace simulate(const EarlyParams& p, const CircuitConfig& c, const Stimulus& st,
               const SimConfig& cfg);

/// Whole cycles remaining after dropping cfg.discard_cycles leading cycles.
Trace steady_state_window(const Trace& tr, const Stimulus& st, const SimConfig& cfg);

/// Every stride-th sample; dt scales accordingly.
Trace decimate(const Trace& tr, std::size_t stride);

/// CSV `t,i_b,i,v_c,v_p`, 17 significant digits.
void write_trace_csv(std::ostream& out, const Trace& tr);

}  // namespace ampsim
