#include "ampsim/model.hpp"

#include "ampsim/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ampsim {

namespace {

void require_tan_domain(const EarlyParams& p, double i_b, bool allow_zero) {
    const double x = p.s * i_b;
    // NaN fails every comparison, so test for acceptance rather than rejection.
    const bool lower_ok = allow_zero ? x >= 0.0 : x > 0.0;
    if (!(lower_ok && x < std::numbers::pi / 2)) {
        throw DomainError("s*i_b = " + std::to_string(x) + " outside the Early model domain " +
                          (allow_zero ? "[0, pi/2)" : "(0, pi/2)"));
    }
}

}  // namespace

void EarlyParams::validate() const {
    if (!(va < 0.0) || !std::isfinite(va)) throw ConfigError("va must be negative");
    if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("s must be positive");
}

void CircuitConfig::validate() const {
    if (!(vcc > 0.0) || !std::isfinite(vcc)) throw ConfigError("vcc must be positive");
    if (!(r_load >= 0.0) || !std::isfinite(r_load)) throw ConfigError("r must be non-negative");
    if (!(c_load >= 0.0) || !std::isfinite(c_load)) throw ConfigError("c must be non-negative");
    if (c_load > 0.0 && r_load == 0.0)
        throw ConfigError("c > 0 requires r > 0 (parallel RC load)");
    if (r_b && !(*r_b >= 0.0)) throw ConfigError("r_b must be non-negative");
    if (r_i && !(*r_i >= 0.0)) throw ConfigError("r_i must be non-negative");
}

double fan_conductance(const EarlyParams& p, double i_b) {
    require_tan_domain(p, i_b, true);
    return std::tan(p.s * i_b);
}

double output_resistance(const EarlyParams& p, double i_b) {
    require_tan_domain(p, i_b, false);
    return 1.0 / std::tan(p.s * i_b);
}

OperatingPoint solve_resistive(const EarlyParams& p, const CircuitConfig& c, double i_b) {
    if (!c.resistive()) throw ConfigError("solve_resistive requires a purely resistive load");
    const double t = fan_conductance(p, i_b);
    OperatingPoint op;
    op.i_b = i_b;
    op.i = (c.vcc - p.va) * t / (c.r_load * t + 1.0);
    op.v_p = c.r_load * op.i;
    op.v_c = c.vcc - op.v_p;
    return op;
}

InputPortSolution solve_input_port(const CircuitConfig& c, double v_i) {
    if (!c.r_b || !c.r_i || !c.v_r)
        throw ConfigError("input port needs r_b, r_i and v_r");
    const double r_total = *c.r_b + *c.r_i;
    if (!(r_total > 0.0)) throw ConfigError("r_b + r_i must be positive");
    if (v_i < *c.v_r) return {0.0, v_i};  // diode off: no current through r_b
    InputPortSolution out;
    out.i_b = (v_i - *c.v_r) / r_total;
    out.v_b = *c.v_r + out.i_b * *c.r_i;
    return out;
}

double beta_gain(const EarlyParams& p, const CircuitConfig& c, double i_b) {
    require_tan_domain(p, i_b, false);
    // s*K*csc^2(x)/(cot(x) + R)^2 with numerator and denominator scaled by sin^2(x).
    const double x = p.s * i_b;
    const double d = std::cos(x) + c.r_load * std::sin(x);
    return p.s * (c.vcc - p.va) / (d * d);
}

double gain_ratio_rho(const EarlyParams& p, double vcc, double xi) {
    if (!(xi > 0.0)) throw ConfigError("xi must be positive");
    if (!(vcc > 0.0)) throw ConfigError("vcc must be positive");
    return (xi * vcc - p.va) / (vcc - p.va);
}

double average_gain_estimate(const EarlyParams& p) { return p.s * std::abs(p.va); }

}  // namespace ampsim
