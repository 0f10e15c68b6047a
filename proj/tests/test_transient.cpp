#include "ampsim/analysis.hpp"
#include "ampsim/errors.hpp"
#include "ampsim/sweep.hpp"
#include "ampsim/transient.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

using namespace ampsim;
using Catch::Approx;

namespace {

const EarlyParams kPnp{-50.0, 10.0};

CircuitConfig load(double r, double c = 0.0) {
    CircuitConfig cc;
    cc.vcc = 10.0;
    cc.r_load = r;
    cc.c_load = c;
    return cc;
}

Stimulus drive(double f, double amplitude = 60e-6) { return {amplitude, amplitude, f, 0.0}; }

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

TEST_CASE("stimulus invariants", "[transient]") {
    CHECK_NOTHROW(drive(1000.0).validate());
    CHECK_THROWS_WITH((Stimulus{0.0, 60e-6, 1000.0, 0.0}.validate()),
                      Catch::Matchers::ContainsSubstring("offset - amplitude >= 0"));
    CHECK_THROWS_AS((Stimulus{60e-6, 60e-6, 0.0, 0.0}.validate()), ConfigError);

    SimConfig cfg;
    cfg.discard_cycles = cfg.n_cycles;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = SimConfig{};
    cfg.n_steps = 5000;  // 833 samples per cycle
    CHECK_THROWS_WITH(cfg.validate(), Catch::Matchers::ContainsSubstring("samples per cycle"));
}

TEST_CASE("time grid holds whole cycles", "[transient]") {
    const SimConfig cfg;
    const TimeGrid g = resolve_grid(drive(1000.0), cfg);
    CHECK(g.samples_per_cycle == 33334);
    CHECK(g.n_samples == 6 * 33334 + 1);
    CHECK(g.n_samples >= cfg.n_steps);
    const double t_end = 6.0 / 1000.0;
    CHECK(g.dt == Approx(t_end / static_cast<double>(g.n_samples - 1)).epsilon(1e-15));
}

TEST_CASE("generated stimulus", "[transient]") {
    SimConfig cfg;
    cfg.n_steps = 6 * 4000 + 1;
    const auto ib = generate_stimulus(drive(1000.0), cfg);
    REQUIRE(ib.size() == cfg.n_steps);
    CHECK(ib[0] == Approx(60e-6).epsilon(1e-15));
    CHECK(ib[1000] == Approx(120e-6).epsilon(1e-15));  // t = 1/(4f)
    CHECK(ib[3000] == Approx(0.0).margin(1e-18));
    const TimeGrid g = resolve_grid(drive(1000.0), cfg);
    for (std::size_t k = 0; k < ib.size(); k += 997)
        CHECK(ib[k] == Approx(drive(1000.0).at(static_cast<double>(k) * g.dt)).margin(1e-15));

    const auto dc = generate_stimulus(Stimulus{60e-6, 0.0, 1000.0, 0.0}, cfg);
    CHECK(std::all_of(dc.begin(), dc.end(), [](double v) { return v == 60e-6; }));
}

TEST_CASE("resistive simulation is pointwise", "[transient]") {
    const SimConfig cfg;
    const Trace dc = simulate_resistive(kPnp, load(150.0), Stimulus{60e-6, 0.0, 1000.0, 0.0}, cfg);
    const OperatingPoint op = solve_resistive(kPnp, load(150.0), 60e-6);
    CHECK(std::all_of(dc.i.begin(), dc.i.end(), [&](double v) { return v == op.i; }));

    for (double r : {30.0, 60.0, 150.0}) {
        const Trace tr = simulate_resistive(kPnp, load(r), drive(1000.0, 30e-6), cfg);
        REQUIRE(tr.size() == tr.v_c.size());
        const auto [lo, hi] = std::minmax_element(tr.i.begin(), tr.i.end());
        // The grid does not land exactly on the stimulus extrema.
        CHECK(*lo == Approx(0.0).margin(1e-9));
        CHECK(*hi == Approx(solve_resistive(kPnp, load(r), 60e-6).i).epsilon(1e-8));
        for (std::size_t k = 0; k < tr.size(); k += 101) {
            CHECK(tr.v_c[k] == Approx(10.0 - r * tr.i[k]).margin(1e-12));
            CHECK(tr.v_c[k] + tr.v_p[k] == Approx(10.0).epsilon(1e-15));
        }
    }
}

TEST_CASE("domain errors name the sample", "[transient]") {
    const EarlyParams steep{-50.0, 2e4};  // s * 120 uA = 2.4 > pi/2
    try {
        simulate_resistive(steep, load(150.0), drive(1000.0), SimConfig{});
        FAIL("expected a domain error");
    } catch (const DomainError& e) {
        REQUIRE(e.sample().has_value());
        const auto ib = generate_stimulus(drive(1000.0), SimConfig{});
        const std::size_t k = *e.sample();
        CHECK(steep.s * ib[k] >= std::numbers::pi / 2);
        CHECK(steep.s * ib[k - 1] < std::numbers::pi / 2);
    }
    CircuitConfig rc = load(150.0, 250e-9);
    CHECK_THROWS_AS(simulate_rc(steep, rc, drive(1000.0), SimConfig{}), NumericalError);
}

TEST_CASE("RC simulation update rule", "[transient]") {
    const CircuitConfig rc = load(150.0, 250e-9);
    const SimConfig cfg;
    const Trace tr = simulate_rc(kPnp, rc, drive(1000.0), cfg);
    REQUIRE(tr.size() == resolve_grid(drive(1000.0), cfg).n_samples);
    CHECK(tr.v_p[0] == 0.0);
    CHECK(tr.v_c[0] == 10.0);
    CHECK(tr.i[0] == Approx(60.0 * std::tan(10.0 * 60e-6)).epsilon(1e-14));

    // KVL on every sample.
    for (std::size_t k = 0; k < tr.size(); ++k)
        REQUIRE(std::abs(tr.v_c[k] + tr.v_p[k] - 10.0) <= 4 * std::numeric_limits<double>::epsilon() * 10.0);

    // KCL: I = V_p/R + C dV_p/dt on steady-state samples.
    const std::size_t first = 3 * tr.samples_per_cycle;
    const double scale = max_abs(tr.i);
    double worst = 0.0;
    for (std::size_t k = first; k + 1 < tr.size(); ++k) {
        const double resid = tr.i[k] - tr.v_p[k] / 150.0 - 250e-9 * (tr.v_p[k + 1] - tr.v_p[k]) / tr.dt;
        worst = std::max(worst, std::abs(resid));
    }
    CHECK(worst <= 1e-6 * scale);
}

TEST_CASE("DC drive settles on the resistive operating point", "[transient]") {
    const CircuitConfig rc = load(150.0, 250e-9);
    const Stimulus dc{60e-6, 0.0, 1000.0, 0.0};
    const double vp_dc = solve_resistive(kPnp, load(150.0), 60e-6).v_p;
    for (Scheme scheme : {Scheme::euler, Scheme::trapezoidal}) {
        SimConfig cfg;
        cfg.scheme = scheme;
        const Trace tr = simulate_rc(kPnp, rc, dc, cfg);
        CHECK(tr.v_p.back() == Approx(vp_dc).epsilon(1e-12));

        cfg.initial = InitialState::dc_operating_point;
        const Trace flat = simulate_rc(kPnp, rc, dc, cfg);
        CHECK(flat.v_p.front() == Approx(vp_dc).epsilon(1e-14));
        CHECK(max_abs(flat.v_p) == Approx(vp_dc).epsilon(1e-12));
    }
}

TEST_CASE("coarse Euler steps are reported as instability", "[transient]") {
    SimConfig cfg;
    cfg.n_steps = 6001;
    CHECK_THROWS_AS(simulate_rc(kPnp, load(150.0, 1e-12), drive(20.0), cfg), InstabilityError);
    cfg.scheme = Scheme::trapezoidal;
    CHECK_NOTHROW(simulate_rc(kPnp, load(150.0, 1e-12), drive(20.0), cfg));
}

TEST_CASE("vanishing capacitance reproduces the resistive trace", "[transient][oracle]") {
    SimConfig cfg;
    cfg.scheme = Scheme::trapezoidal;
    const Stimulus st = drive(20.0);
    const Trace rc = steady_state_window(simulate_rc(kPnp, load(150.0, 1e-12), st, cfg), st, cfg);
    const Trace r = steady_state_window(simulate_resistive(kPnp, load(150.0), st, cfg), st, cfg);
    REQUIRE(rc.size() == r.size());
    const double scale = max_abs(r.i);
    for (std::size_t k = 0; k < r.size(); ++k) REQUIRE(std::abs(rc.i[k] - r.i[k]) <= 1e-3 * scale);
}

TEST_CASE("steady-state window", "[transient]") {
    const SimConfig cfg;
    const Stimulus st = drive(1000.0);
    const Trace full = simulate_resistive(kPnp, load(150.0), st, cfg);
    const Trace win = steady_state_window(full, st, cfg);
    CHECK(win.samples_per_cycle == 33334);
    CHECK(win.size() == 3 * 33334);
    CHECK(win.t0 == Approx(3e-3).epsilon(1e-12));
    // Memoryless circuit: the window is a pure slice.
    for (std::size_t k = 0; k < win.size(); k += 1009) CHECK(win.i[k] == full.i[3 * 33334 + k]);

    SimConfig tight = cfg;
    tight.discard_cycles = 5;
    const Trace short_trace = full.slice(0, 5 * 33334 + 10);
    CHECK_THROWS_AS(steady_state_window(short_trace, st, tight), ConfigError);
}

TEST_CASE("RC steady state is periodic", "[transient]") {
    const SimConfig cfg;
    for (double f : {20.0, 1000.0}) {
        const Stimulus st = drive(f);
        const Trace win = steady_state_window(simulate_rc(kPnp, load(150.0, 250e-9), st, cfg), st, cfg);
        const std::size_t spc = win.samples_per_cycle;
        const double scale = max_abs(win.v_p);
        for (std::size_t k = 0; k + spc < win.size(); k += 97)
            REQUIRE(std::abs(win.v_p[k + spc] - win.v_p[k]) <= 1e-3 * scale);
    }
}

TEST_CASE("capacitor voltage lags the collector current", "[transient][property]") {
    const SimConfig cfg;
    for (double f : {20.0, 70.0, 300.0, 1000.0}) {
        const Stimulus st = drive(f);
        const Trace win = steady_state_window(simulate_rc(kPnp, load(150.0, 250e-9), st, cfg), st, cfg);
        CHECK(phase_lag(win.i, win.v_p, win.dt, f).lag < 0.0);
    }
}

TEST_CASE("base and collector currents stay in phase at low frequency", "[transient][property]") {
    // The -V_p*tan(s*i_b) term feeds the load voltage back into I; its phase
    // contribution stays below 1e-3 rad while omega*R*C is small.
    const SimConfig cfg;
    const Stimulus st = drive(20.0);
    const Trace win = steady_state_window(simulate_rc(kPnp, load(150.0, 250e-9), st, cfg), st, cfg);
    CHECK(std::abs(phase_lag(win.i_b, win.i, win.dt, 20.0).lag) < 1e-3);
}

TEST_CASE("loop collapses onto the load line in both limits", "[transient][property]") {
    SimConfig cfg;
    cfg.scheme = Scheme::trapezoidal;
    {
        const Stimulus st = drive(1000.0);
        const Trace win = steady_state_window(simulate_rc(kPnp, load(150.0, 1e-12), st, cfg), st, cfg);
        CHECK(trajectory_metrics(win, load(150.0, 1e-12)).loop_detachment < 1e-3);
    }
    {
        const Stimulus st = drive(0.5);
        const Trace win = steady_state_window(simulate_rc(kPnp, load(150.0, 250e-9), st, cfg), st, cfg);
        CHECK(trajectory_metrics(win, load(150.0, 250e-9)).loop_detachment < 1e-3);
    }
}

TEST_CASE("integration schemes converge at their orders", "[transient][convergence]") {
    const CircuitConfig rc = load(150.0, 250e-9);
    const Stimulus st = drive(1000.0);
    auto thd_at = [&](Scheme scheme, std::size_t nt) {
        SimConfig cfg;
        cfg.scheme = scheme;
        cfg.n_steps = nt;
        return measure_thd(kPnp, rc, st, cfg);
    };
    {
        const double a = thd_at(Scheme::euler, 60001);
        const double b = thd_at(Scheme::euler, 120001);
        const double c = thd_at(Scheme::euler, 240001);
        CHECK((a - b) / (b - c) == Approx(2.0).margin(0.2));
    }
    {
        const double a = thd_at(Scheme::trapezoidal, 6001);
        const double b = thd_at(Scheme::trapezoidal, 12001);
        const double c = thd_at(Scheme::trapezoidal, 24001);
        CHECK((a - b) / (b - c) > 3.5);
    }
}

TEST_CASE("trace CSV", "[transient]") {
    SimConfig cfg;
    cfg.n_steps = 6001;
    const Trace tr = simulate_resistive(kPnp, load(150.0), drive(1000.0), cfg);
    std::ostringstream os;
    write_trace_csv(os, tr);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,i_b,i,v_c,v_p");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == tr.size());

    // 17 significant digits round-trip exactly.
    std::istringstream again(os.str());
    std::getline(again, line);
    std::getline(again, line);
    std::getline(again, line);
    const double i_parsed = std::stod(line.substr(line.find(',', line.find(',') + 1) + 1));
    CHECK(i_parsed == tr.i[1]);

    const Trace half = decimate(tr, 2);
    CHECK(half.size() == (tr.size() + 1) / 2);
    CHECK(half.dt == 2.0 * tr.dt);
}
