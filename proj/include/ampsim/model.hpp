#pragma once

// Early transistor model of a simplified common-emitter stage.
//
// The transistor output port is a Thevenin pair: a fixed source V_a (negative)
// in series with R_o(I_B) = 1/tan(s*I_B). Everything here is closed form and
// works in the tan form (numerator and denominator multiplied by tan(s*I_B)),
// so that cutoff (I_B = 0) is an ordinary point.

#include <optional>

namespace ampsim {

/// The two invariant Early parameters.
struct EarlyParams {
    double va = -50.0;  ///< Early voltage [V], strictly negative.
    double s = 10.0;    ///< Fanning parameter [1/A], strictly positive.

    /// Throws ConfigError naming the violated invariant.
    void validate() const;

    bool operator==(const EarlyParams&) const = default;
};

struct CircuitConfig {
    double vcc = 10.0;     ///< Supply [V].
    double r_load = 150.0; ///< Load resistance [ohm].
    double c_load = 0.0;   ///< Load capacitance in parallel with r_load [F]; 0 = resistive.

    // Input port (diode + series resistance). Only needed for solve_input_port.
    std::optional<double> r_b;
    std::optional<double> r_i;
    std::optional<double> v_r;

    void validate() const;
    bool resistive() const { return c_load == 0.0; }

    bool operator==(const CircuitConfig&) const = default;
};

struct OperatingPoint {
    double i_b = 0.0;  ///< Base current [A].
    double i = 0.0;    ///< Collector current [A].
    double v_c = 0.0;  ///< Collector voltage [V].
    double v_p = 0.0;  ///< Load voltage [V]; v_p = vcc - v_c.
};

struct InputPortSolution {
    double i_b = 0.0;
    double v_b = 0.0;
};

/// tan(s*i_b): the output conductance 1/R_o. Valid on 0 <= s*i_b < pi/2,
/// throws DomainError otherwise.
double fan_conductance(const EarlyParams& p, double i_b);

/// R_o(i_b) = 1/tan(s*i_b). Requires 0 < s*i_b < pi/2 (infinite at cutoff).
double output_resistance(const EarlyParams& p, double i_b);

/// Operating point on the resistive load line. Requires c.c_load == 0.
OperatingPoint solve_resistive(const EarlyParams& p, const CircuitConfig& c, double i_b);

/// Diode input port driven by v_i through r_b. Returns i_b = 0 below threshold.
InputPortSolution solve_input_port(const CircuitConfig& c, double v_i);

/// Current gain dI/dI_B along the resistive load line. Requires 0 < s*i_b < pi/2.
double beta_gain(const EarlyParams& p, const CircuitConfig& c, double i_b);

/// Ratio of gains on two parallel load lines with supplies xi*vcc and vcc.
/// Independent of i_b, s and R.
double gain_ratio_rho(const EarlyParams& p, double vcc, double xi);

/// <beta> ~ s*|V_a|.
double average_gain_estimate(const EarlyParams& p);

}  // namespace ampsim
