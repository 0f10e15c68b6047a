#include "ampsim/commands.hpp"

#include "ampsim/analysis.hpp"
#include "ampsim/csv.hpp"
#include "ampsim/errors.hpp"
#include "ampsim/sweep.hpp"
#include "ampsim/transient.hpp"

#include <array>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

namespace fs = std::filesystem;

namespace ampsim {

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 7> kCommandNames{{
    {Command::op_point, "op-point"},
    {Command::transient, "transient"},
    {Command::thd, "thd"},
    {Command::spectrum, "spectrum"},
    {Command::sweep, "sweep"},
    {Command::beta_scan, "beta-scan"},
    {Command::figures, "figures"},
}};

// I/O failures are reported with the invalid-invocation code.
class OutputError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// Tracks files written during one run so a failed run leaves nothing behind.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}
    OutputSet(const OutputSet&) = delete;
    OutputSet& operator=(const OutputSet&) = delete;

    ~OutputSet() {
        if (committed_) return;
        std::error_code ec;
        for (const auto& p : written_) fs::remove(p, ec);
    }

    void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        const fs::path path = dir_ / name;
        written_.push_back(path);
        std::ofstream out(path, std::ios::binary);
        if (!out) throw OutputError("cannot open " + path.string() + " for writing");
        body(out);
        out.flush();
        if (!out) throw OutputError("write failed for " + path.string());
    }

    void commit() { committed_ = true; }
    std::size_t count() const { return written_.size(); }

private:
    fs::path dir_;
    std::vector<fs::path> written_;
    bool committed_ = false;
};

CircuitConfig as_resistive(CircuitConfig c) {
    c.c_load = 0.0;
    return c;
}

Trace steady_output(const RunConfig& cfg) {
    return steady_state_window(simulate(cfg.early, cfg.circuit, cfg.stimulus, cfg.sim),
                               cfg.stimulus, cfg.sim);
}

std::string tag(const EarlyParams& p) {
    return "va" + format_double(p.va) + "_s" + format_double(p.s);
}

// Caps exported figure traces near `rows` samples.
Trace thin(const Trace& tr, std::size_t rows) {
    const std::size_t stride = std::max<std::size_t>(1, tr.size() / rows);
    return decimate(tr, stride);
}

void run_op_point(const RunConfig& cfg, OutputSet& out, std::ostream& log) {
    const OperatingPoint op =
        solve_resistive(cfg.early, as_resistive(cfg.circuit), cfg.stimulus.offset);
    out.write("op_point.csv", [&](std::ostream& os) {
        os << "i_b,i,v_c,v_p\n"
           << format_double(op.i_b) << ',' << format_double(op.i) << ','
           << format_double(op.v_c) << ',' << format_double(op.v_p) << '\n';
    });
    log << "I = " << format_double(op.i) << " A, V_C = " << format_double(op.v_c)
        << " V, <beta> ~ " << format_double(average_gain_estimate(cfg.early)) << '\n';
}

void run_transient(const RunConfig& cfg, OutputSet& out, std::ostream& log) {
    const Trace tr = simulate(cfg.early, cfg.circuit, cfg.stimulus, cfg.sim);
    out.write("trace.csv", [&](std::ostream& os) { write_trace_csv(os, tr); });
    log << tr.size() << " samples, dt = " << format_double(tr.dt) << " s\n";
}

void run_thd(const RunConfig& cfg, OutputSet& out, std::ostream& log) {
    const Trace tr = steady_output(cfg);
    const ThdResult r = thd(tr.i, tr.dt, cfg.stimulus.frequency);
    out.write("thd.csv", [&](std::ostream& os) { write_thd_csv(os, r); });
    log << "THD(" << format_double(cfg.early.va) << ", " << format_double(cfg.early.s)
        << ") = " << format_double(r.thd) << " over " << r.n_harmonics_used << " harmonics\n";
}

void run_spectrum(const RunConfig& cfg, OutputSet& out, std::ostream& log) {
    const Trace tr = steady_output(cfg);
    const Spectrum sp = power_spectrum(tr.i, tr.dt);
    const std::size_t bin = aligned_bin(tr.size(), tr.dt, cfg.stimulus.frequency);
    out.write("spectrum.csv", [&](std::ostream& os) { write_spectrum_csv(os, sp, bin); });
    log << sp.power.size() << " bins of " << format_double(sp.bin_width) << " Hz\n";
}

void run_sweep(const RunConfig& cfg, OutputSet& out, std::ostream& log, std::ostream& err) {
    const ThdSurface surface = thd_surface(cfg.grid, cfg.circuit, cfg.stimulus, cfg.sim);
    for (const auto& d : surface.diagnostics) err << "sweep: " << d << '\n';
    out.write("surface.csv", [&](std::ostream& os) { write_surface_csv(os, surface); });
    const auto rows =
        thd_vs_r(cfg.early, cfg.scan.r_values, cfg.stimulus, cfg.sim, cfg.circuit.vcc);
    out.write("thd_vs_r.csv", [&](std::ostream& os) { write_thd_vs_r_csv(os, rows); });
    log << cfg.grid.n_va * cfg.grid.n_s << " cells, " << surface.diagnostics.size()
        << " outside the model domain\n";
}

void run_beta_scan(const RunConfig& cfg, OutputSet& out, std::ostream& log) {
    const auto grid = open_linspace(cfg.scan.ib_max, cfg.scan.ib_points);
    const BetaScan scan = beta_scan(cfg.early, as_resistive(cfg.circuit), grid);
    out.write("beta_scan.csv", [&](std::ostream& os) { write_beta_scan_csv(os, scan); });
    log << "fit slope " << format_double(scan.fit.slope) << ", R^2 " << format_double(scan.fit.r2)
        << ", rho(xi=" << format_double(cfg.scan.xi)
        << ") = " << format_double(gain_ratio_rho(cfg.early, cfg.circuit.vcc, cfg.scan.xi))
        << '\n';
}

// Data behind each figure, using the parameter sets quoted for it. Sampling
// settings (nt, scheme, cycles) come from the run configuration.
void run_figures(const RunConfig& cfg, OutputSet& out, std::ostream& log, std::ostream& err) {
    const EarlyParams pnp{-50.0, 10.0};
    const EarlyParams npn{-200.0, 2.5};
    const EarlyParams low_ro{-10.0, 50.0};
    const Stimulus drive{60e-6, 60e-6, 1000.0, 0.0};
    CircuitConfig r150;
    r150.vcc = 10.0;
    r150.r_load = 150.0;

    // Fig. 4: straight trajectories for three load resistances.
    for (double r : {30.0, 60.0, 150.0}) {
        CircuitConfig c = r150;
        c.r_load = r;
        const Trace tr = steady_state_window(simulate(pnp, c, drive, cfg.sim), drive, cfg.sim);
        out.write("fig4_trajectory_r" + format_double(r) + ".csv",
                  [&](std::ostream& os) { write_trace_csv(os, thin(tr, 3000)); });
    }

    // Fig. 5: transfer functions; Fig. 6: spectra; THD spot values.
    const auto ib_grid = open_linspace(2.0 * drive.amplitude, 240);
    std::vector<std::pair<EarlyParams, double>> spot;
    for (const EarlyParams& p : {pnp, npn}) {
        const auto tf = transfer_function(p, r150, ib_grid);
        out.write("fig5_transfer_" + tag(p) + ".csv", [&](std::ostream& os) {
            os << "i_b,i\n";
            for (const auto& [ib, i] : tf) os << format_double(ib) << ',' << format_double(i) << '\n';
        });
        const Trace tr = steady_state_window(simulate(p, r150, drive, cfg.sim), drive, cfg.sim);
        const std::size_t bin = aligned_bin(tr.size(), tr.dt, drive.frequency);
        out.write("fig6_spectrum_" + tag(p) + ".csv", [&](std::ostream& os) {
            write_spectrum_csv(os, power_spectrum(tr.i, tr.dt), bin);
        });
        if (p == pnp) {
            out.write("fig6_spectrum_input.csv", [&](std::ostream& os) {
                write_spectrum_csv(os, power_spectrum(tr.i_b, tr.dt), bin);
            });
        }
        spot.emplace_back(p, thd(tr.i, tr.dt, drive.frequency).thd);
    }
    out.write("thd_spot_values.csv", [&](std::ostream& os) {
        os << "va,s,thd\n";
        for (const auto& [p, t] : spot)
            os << format_double(p.va) << ',' << format_double(p.s) << ',' << format_double(t) << '\n';
    });

    // Figs. 7 and 8: RC load loops and phase lag between -V_C and I_B.
    CircuitConfig rc = r150;
    rc.c_load = 250e-9;
    out.write("fig8_phase_lag.csv", [&](std::ostream& os) {
        os << "va,s,f_hz,lag_rad,loop_detachment,is_closed,thd\n";
        for (const EarlyParams& p : {pnp, low_ro}) {
            for (double f : {20.0, 70.0, 300.0, 1000.0}) {
                Stimulus st = drive;
                st.frequency = f;
                const Trace full = simulate(p, rc, st, cfg.sim);
                if (p == pnp) {
                    out.write("fig7_rc_f" + format_double(f) + ".csv",
                              [&](std::ostream& fs) { write_trace_csv(fs, thin(full, 6000)); });
                }
                const Trace tr = steady_state_window(full, st, cfg.sim);
                std::vector<double> neg_vc(tr.v_c.size());
                for (std::size_t k = 0; k < neg_vc.size(); ++k) neg_vc[k] = -tr.v_c[k];
                const PhaseLag lag = phase_lag(tr.i_b, neg_vc, tr.dt, f);
                const TrajectoryMetrics m = trajectory_metrics(tr, rc);
                os << format_double(p.va) << ',' << format_double(p.s) << ',' << format_double(f)
                   << ',' << format_double(lag.lag) << ',' << format_double(m.loop_detachment)
                   << ',' << (m.is_closed ? 1 : 0) << ','
                   << format_double(thd(tr.i, tr.dt, f).thd) << '\n';
            }
        }
    });

    // Fig. 9: THD surface and THD against R.
    const ThdSurface surface = thd_surface(cfg.grid, r150, drive, cfg.sim);
    for (const auto& d : surface.diagnostics) err << "figures: " << d << '\n';
    out.write("fig9_surface.csv", [&](std::ostream& os) { write_surface_csv(os, surface); });
    const auto rows = thd_vs_r(pnp, cfg.scan.r_values, drive, cfg.sim, r150.vcc);
    out.write("fig9_thd_vs_r.csv", [&](std::ostream& os) { write_thd_vs_r_csv(os, rows); });

    // Fig. 11: gain flat in I_B with equispaced steps in V_CC.
    const auto scan_grid = open_linspace(15e-6, 150);
    out.write("fig11_beta_vs_vcc.csv", [&](std::ostream& os) {
        os << "vcc,i_b,beta\n";
        for (double vcc = 5.0; vcc <= 50.0; vcc += 5.0) {
            CircuitConfig c = r150;
            c.vcc = vcc;
            for (double ib : scan_grid)
                os << format_double(vcc) << ',' << format_double(ib) << ','
                   << format_double(beta_gain(npn, c, ib)) << '\n';
        }
    });

    // Fig. 12: gain decreasing with I_B, faster for larger R.
    for (double r : {0.0, 50.0, 500.0, 5000.0}) {
        CircuitConfig c = r150;
        c.r_load = r;
        const BetaScan scan = beta_scan(npn, c, scan_grid);
        out.write("fig12_beta_scan_r" + format_double(r) + ".csv",
                  [&](std::ostream& os) { write_beta_scan_csv(os, scan); });
    }

    log << "THD" << tag(pnp) << " = " << format_double(spot[0].second) << ", THD" << tag(npn)
        << " = " << format_double(spot[1].second)
        << ", ratio = " << format_double(spot[0].second / spot[1].second) << '\n';
    log << "rho(va=-200, vcc=10, xi=1.1) = " << format_double(gain_ratio_rho(npn, 10.0, 1.1))
        << '\n';
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
    for (const auto& [cmd, text] : kCommandNames)
        if (text == name) return cmd;
    return std::nullopt;
}

std::string_view command_name(Command cmd) {
    for (const auto& [c, text] : kCommandNames)
        if (c == cmd) return text;
    return "?";
}

int run_command(Command cmd, const RunConfig& cfg, std::ostream& log, std::ostream& err) {
    OutputSet out(cfg.output_path);
    try {
        cfg.validate();
        switch (cmd) {
            case Command::op_point: run_op_point(cfg, out, log); break;
            case Command::transient: run_transient(cfg, out, log); break;
            case Command::thd: run_thd(cfg, out, log); break;
            case Command::spectrum: run_spectrum(cfg, out, log); break;
            case Command::sweep: run_sweep(cfg, out, log, err); break;
            case Command::beta_scan: run_beta_scan(cfg, out, log); break;
            case Command::figures: run_figures(cfg, out, log, err); break;
        }
        out.commit();
        log << "wrote " << out.count() << " file(s) to " << cfg.output_path.string() << '\n';
        return kExitOk;
    } catch (const NumericalError& e) {
        err << command_name(cmd) << ": numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        err << command_name(cmd) << ": " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        // Filesystem and stream failures: the output location is unusable.
        err << command_name(cmd) << ": " << e.what() << '\n';
        return kExitInvalid;
    }
}

}  // namespace ampsim
