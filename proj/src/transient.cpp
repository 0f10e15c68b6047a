#include "ampsim/transient.hpp"

#include "ampsim/csv.hpp"
#include "ampsim/errors.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

namespace ampsim {

void Stimulus::validate() const {
    if (!(frequency > 0.0) || !std::isfinite(frequency))
        throw ConfigError("f must be positive");
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
        throw ConfigError("amplitude must be non-negative");
    if (!std::isfinite(offset) || !std::isfinite(phase))
        throw ConfigError("offset and phase must be finite");
    if (!(offset - amplitude >= 0.0)) throw ConfigError("offset - amplitude >= 0 violated");
}

double Stimulus::at(double t) const {
    return offset + amplitude * std::sin(2.0 * std::numbers::pi * frequency * t + phase);
}

void SimConfig::validate() const {
    if (n_cycles == 0) throw ConfigError("cycles must be positive");
    if (!(discard_cycles < n_cycles)) throw ConfigError("discard < cycles violated");
    if (n_steps < 2) throw ConfigError("nt must be at least 2");
    if ((n_steps - 1 + n_cycles - 1) / n_cycles < kMinSamplesPerCycle)
        throw ConfigError("nt gives fewer than " + std::to_string(kMinSamplesPerCycle) +
                          " samples per cycle");
}

TimeGrid resolve_grid(const Stimulus& st, const SimConfig& cfg) {
    st.validate();
    cfg.validate();
    TimeGrid g;
    g.samples_per_cycle = (cfg.n_steps - 1 + cfg.n_cycles - 1) / cfg.n_cycles;
    g.n_samples = g.samples_per_cycle * cfg.n_cycles + 1;
    g.dt = 1.0 / (st.frequency * static_cast<double>(g.samples_per_cycle));
    return g;
}

Trace Trace::slice(std::size_t first, std::size_t count) const {
    Trace out;
    out.dt = dt;
    out.t0 = time(first);
    out.samples_per_cycle = samples_per_cycle;
    auto cut = [&](const std::vector<double>& v) {
        return std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(first),
                                   v.begin() + static_cast<std::ptrdiff_t>(first + count));
    };
    out.i_b = cut(i_b);
    out.i = cut(i);
    out.v_c = cut(v_c);
    out.v_p = cut(v_p);
    return out;
}

namespace {

// Phase reduced modulo one cycle, so every cycle is sampled identically.
std::vector<double> sample_stimulus(const Stimulus& st, const TimeGrid& g, std::size_t count) {
    std::vector<double> out(count);
    const double spc = static_cast<double>(g.samples_per_cycle);
    for (std::size_t k = 0; k < count; ++k) {
        const double cycle_phase = static_cast<double>(k % g.samples_per_cycle) / spc;
        out[k] = st.offset +
                 st.amplitude * std::sin(2.0 * std::numbers::pi * cycle_phase + st.phase);
    }
    return out;
}

Trace empty_trace(const TimeGrid& g) {
    Trace tr;
    tr.dt = g.dt;
    tr.samples_per_cycle = g.samples_per_cycle;
    tr.i.resize(g.n_samples);
    tr.v_c.resize(g.n_samples);
    tr.v_p.resize(g.n_samples);
    return tr;
}

double conductance_at(const EarlyParams& p, double i_b, std::size_t k) {
    try {
        return fan_conductance(p, i_b);
    } catch (const DomainError& e) {
        throw DomainError(e.what(), k);
    }
}

}  // namespace

std::vector<double> generate_stimulus(const Stimulus& st, const SimConfig& cfg) {
    const TimeGrid g = resolve_grid(st, cfg);
    return sample_stimulus(st, g, g.n_samples);
}

Trace simulate_resistive(const EarlyParams& p, const CircuitConfig& c, const Stimulus& st,
                         const SimConfig& cfg) {
    p.validate();
    c.validate();
    if (!c.resistive()) throw ConfigError("simulate_resistive requires c = 0");
    const TimeGrid g = resolve_grid(st, cfg);
    Trace tr = empty_trace(g);
    tr.i_b = sample_stimulus(st, g, g.n_samples);
    const double k_src = c.vcc - p.va;
    for (std::size_t k = 0; k < g.n_samples; ++k) {
        const double t = conductance_at(p, tr.i_b[k], k);
        const double i = k_src * t / (c.r_load * t + 1.0);
        tr.i[k] = i;
        tr.v_p[k] = c.r_load * i;
        tr.v_c[k] = c.vcc - tr.v_p[k];
    }
    return tr;
}

Trace simulate_rc(const EarlyParams& p, const CircuitConfig& c, const Stimulus& st,
                  const SimConfig& cfg) {
    p.validate();
    c.validate();
    if (!(c.c_load > 0.0)) throw ConfigError("simulate_rc requires c > 0");
    const TimeGrid g = resolve_grid(st, cfg);
    Trace tr = empty_trace(g);

    // One extra stimulus sample: the trapezoidal step k -> k+1 needs i_b[k+1].
    std::vector<double> ib = sample_stimulus(st, g, g.n_samples + 1);
    const double k_src = c.vcc - p.va;
    const double inv_r = 1.0 / c.r_load;
    const double dt_over_c = g.dt / c.c_load;
    const double limit = 10.0 * c.vcc;

    double vp = 0.0;
    if (cfg.initial == InitialState::dc_operating_point) {
        const double t0 = conductance_at(p, ib[0], 0);
        vp = c.r_load * k_src * t0 / (c.r_load * t0 + 1.0);
    }

    double t_now = conductance_at(p, ib[0], 0);
    for (std::size_t k = 0; k < g.n_samples; ++k) {
        // I = (V_CC - V_a - V_p) / R_o, written as a product with tan(s*i_b).
        const double i = (k_src - vp) * t_now;
        tr.i[k] = i;
        tr.v_c[k] = c.vcc - vp;
        tr.v_p[k] = vp;

        const double i_cap = i - vp * inv_r;
        const double t_next = conductance_at(p, ib[k + 1], k + 1);
        if (cfg.scheme == Scheme::euler) {
            vp += i_cap * dt_over_c;
        } else {
            // Implicit trapezoid. I_C(k+1) = K*T' - (T' + 1/R)*V_p(k+1) is linear in
            // V_p(k+1), so the step solves in closed form.
            const double h = 0.5 * dt_over_c;
            const double b_next = t_next + inv_r;
            vp = (vp + h * (i_cap + k_src * t_next)) / (1.0 + h * b_next);
        }
        t_now = t_next;
        if (!(std::abs(vp) <= limit)) {
            throw InstabilityError("|V_p| exceeded 10*vcc at sample " + std::to_string(k) +
                                   "; increase nt");
        }
    }
    tr.i_b = std::move(ib);
    tr.i_b.pop_back();
    return tr;
}

Trace simulate(const EarlyParams& p, const CircuitConfig& c, const Stimulus& st,
               const SimConfig& cfg) {
    return c.resistive() ? simulate_resistive(p, c, st, cfg) : simulate_rc(p, c, st, cfg);
}

Trace steady_state_window(const Trace& tr, const Stimulus& st, const SimConfig& cfg) {
    if (!(tr.dt > 0.0)) throw ConfigError("trace has no time step");
    const auto spc = static_cast<std::size_t>(std::llround(1.0 / (st.frequency * tr.dt)));
    if (spc == 0) throw ConfigError("stimulus period shorter than one sample");
    const std::size_t first = cfg.discard_cycles * spc;
    const std::size_t cycles = first < tr.size() ? (tr.size() - first) / spc : 0;
    if (cycles == 0) throw ConfigError("fewer than one full cycle remains after discarding");
    Trace out = tr.slice(first, cycles * spc);
    out.samples_per_cycle = spc;
    return out;
}

Trace decimate(const Trace& tr, std::size_t stride) {
    if (stride == 0) throw ConfigError("decimation stride must be positive");
    Trace out;
    out.dt = tr.dt * static_cast<double>(stride);
    out.t0 = tr.t0;
    out.samples_per_cycle = tr.samples_per_cycle % stride == 0 ? tr.samples_per_cycle / stride : 0;
    for (std::size_t k = 0; k < tr.size(); k += stride) {
        out.i_b.push_back(tr.i_b[k]);
        out.i.push_back(tr.i[k]);
        out.v_c.push_back(tr.v_c[k]);
        out.v_p.push_back(tr.v_p[k]);
    }
    return out;
}

void write_trace_csv(std::ostream& out, const Trace& tr) {
    out << "t,i_b,i,v_c,v_p\n";
    for (std::size_t k = 0; k < tr.size(); ++k) {
        out << format_double(tr.time(k)) << ',' << format_double(tr.i_b[k]) << ','
            << format_double(tr.i[k]) << ',' << format_double(tr.v_c[k]) << ','
            << format_double(tr.v_p[k]) << '\n';
    }
}

}  // namespace ampsim
