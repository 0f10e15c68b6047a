#include "ampsim/sweep.hpp"

#include "ampsim/analysis.hpp"
#include "ampsim/csv.hpp"
#include "ampsim/errors.hpp"

#include <cmath>
#include <exception>
#include <ostream>

namespace ampsim {

SweepGrid SweepGrid::open_rectangle(double va_min, double s_max, std::size_t n_va,
                                    std::size_t n_s) {
    SweepGrid g;
    g.va_min = va_min;
    g.va_max = va_min / static_cast<double>(n_va);
    g.s_max = s_max;
    g.s_min = s_max / static_cast<double>(n_s);
    g.n_va = n_va;
    g.n_s = n_s;
    return g;
}

void SweepGrid::validate() const {
    if (n_va < 2 || n_s < 2) throw ConfigError("grid counts must be at least 2");
    if (!(va_min <= va_max) || !(va_max < 0.0))
        throw ConfigError("grid needs va_min <= va_max < 0");
    if (!(s_min > 0.0) || !(s_min <= s_max)) throw ConfigError("grid needs 0 < s_min <= s_max");
}

double SweepGrid::va(std::size_t i) const {
    return va_min + (va_max - va_min) * static_cast<double>(i) / static_cast<double>(n_va - 1);
}

double SweepGrid::s(std::size_t j) const {
    return s_min + (s_max - s_min) * static_cast<double>(j) / static_cast<double>(n_s - 1);
}

double measure_thd(const EarlyParams& p, const CircuitConfig& c, const Stimulus& st,
                   const SimConfig& cfg) {
    const Trace tr = steady_state_window(simulate(p, c, st, cfg), st, cfg);
    return thd(tr.i, tr.dt, st.frequency).thd;
}

namespace {

struct CellResult {
    std::optional<double> value;
    std::string diagnostic;
};

CellResult surface_cell(const SweepGrid& grid, std::size_t cell, const CircuitConfig& c,
                        const Stimulus& st, const SimConfig& cfg) {
    const std::size_t i = cell / grid.n_s;
    const std::size_t j = cell % grid.n_s;
    const EarlyParams p{grid.va(i), grid.s(j)};
    try {
        return {measure_thd(p, c, st, cfg), {}};
    } catch (const NumericalError& e) {
        return {std::nullopt, "va=" + format_double(p.va) + " s=" + format_double(p.s) + ": " +
                                  e.what()};
    }
}

ThdSurface assemble(const SweepGrid& grid, std::vector<CellResult>&& cells) {
    ThdSurface out;
    out.grid = grid;
    out.thd.reserve(cells.size());
    for (auto& cell : cells) {
        out.thd.push_back(cell.value);
        if (!cell.value) out.diagnostics.push_back(std::move(cell.diagnostic));
    }
    return out;
}

void check_surface_inputs(const SweepGrid& grid, const CircuitConfig& c, const Stimulus& st,
                          const SimConfig& cfg) {
    grid.validate();
    c.validate();
    st.validate();
    cfg.validate();
}

}  // namespace

ThdSurface thd_surface(const SweepGrid& grid, const CircuitConfig& c, const Stimulus& st,
                       const SimConfig& cfg) {
    check_surface_inputs(grid, c, st, cfg);
    const auto n = static_cast<long>(grid.n_va * grid.n_s);
    std::vector<CellResult> cells(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic)
    for (long cell = 0; cell < n; ++cell) {
        cells[static_cast<std::size_t>(cell)] =
            surface_cell(grid, static_cast<std::size_t>(cell), c, st, cfg);
    }
    return assemble(grid, std::move(cells));
}

ThdSurface thd_surface_serial(const SweepGrid& grid, const CircuitConfig& c,
                              const Stimulus& st, const SimConfig& cfg) {
    check_surface_inputs(grid, c, st, cfg);
    const std::size_t n = grid.n_va * grid.n_s;
    std::vector<CellResult> cells(n);
    for (std::size_t cell = 0; cell < n; ++cell) cells[cell] = surface_cell(grid, cell, c, st, cfg);
    return assemble(grid, std::move(cells));
}

LinearFit fit_line(std::span<const std::pair<double, double>> xy) {
    if (xy.size() < 2) throw ConfigError("line fit needs at least two points");
    const double n = static_cast<double>(xy.size());
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : xy) {
        mx += x;
        my += y;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : xy) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (!(sxx > 0.0)) throw ConfigError("line fit needs distinct x values");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    // A constant y is fitted exactly.
    f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

BetaScan beta_scan(const EarlyParams& p, const CircuitConfig& c,
                   std::span<const double> i_b_grid) {
    p.validate();
    c.validate();
    if (!c.resistive()) throw ConfigError("beta scan requires a resistive load");
    BetaScan scan;
    scan.points.reserve(i_b_grid.size());
    for (double ib : i_b_grid) scan.points.emplace_back(ib, beta_gain(p, c, ib));
    scan.fit = fit_line(scan.points);
    return scan;
}

namespace {

double thd_at_r(const EarlyParams& p, double r, const Stimulus& st, const SimConfig& cfg,
                double vcc) {
    CircuitConfig c;
    c.vcc = vcc;
    c.r_load = r;
    c.c_load = 0.0;
    return measure_thd(p, c, st, cfg);
}

}  // namespace

std::vector<std::pair<double, double>> thd_vs_r(const EarlyParams& p,
                                                std::span<const double> r_values,
                                                const Stimulus& st, const SimConfig& cfg,
                                                double vcc) {
    const auto n = static_cast<long>(r_values.size());
    std::vector<std::pair<double, double>> out(r_values.size());
    // Exceptions must not escape an OpenMP region; rethrow the first afterwards.
    std::vector<std::exception_ptr> errors(r_values.size());
#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < n; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        try {
            out[idx] = {r_values[idx], thd_at_r(p, r_values[idx], st, cfg, vcc)};
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

std::vector<std::pair<double, double>> thd_vs_r_serial(const EarlyParams& p,
                                                       std::span<const double> r_values,
                                                       const Stimulus& st,
                                                       const SimConfig& cfg, double vcc) {
    std::vector<std::pair<double, double>> out;
    out.reserve(r_values.size());
    for (double r : r_values) out.emplace_back(r, thd_at_r(p, r, st, cfg, vcc));
    return out;
}

std::vector<double> open_linspace(double hi, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k)
        out[k] = hi * static_cast<double>(k + 1) / static_cast<double>(n);
    if (n > 0) out.back() = hi;
    return out;
}

void write_surface_csv(std::ostream& out, const ThdSurface& surface) {
    const SweepGrid& g = surface.grid;
    out << "# s_axis: ";
    for (std::size_t j = 0; j < g.n_s; ++j) out << (j ? "," : "") << format_double(g.s(j));
    out << "\n# va_axis: ";
    for (std::size_t i = 0; i < g.n_va; ++i) out << (i ? "," : "") << format_double(g.va(i));
    out << '\n';
    for (std::size_t i = 0; i < g.n_va; ++i) {
        for (std::size_t j = 0; j < g.n_s; ++j) {
            const auto& v = surface.at(i, j);
            out << (j ? "," : "") << (v ? format_double(*v) : std::string("nan"));
        }
        out << '\n';
    }
}

void write_beta_scan_csv(std::ostream& out, const BetaScan& scan) {
    out << "i_b,beta,fit_slope,fit_intercept,fit_r2\n";
    for (const auto& [ib, beta] : scan.points) {
        out << format_double(ib) << ',' << format_double(beta) << ','
            << format_double(scan.fit.slope) << ',' << format_double(scan.fit.intercept) << ','
            << format_double(scan.fit.r2) << '\n';
    }
}

void write_thd_vs_r_csv(std::ostream& out, std::span<const std::pair<double, double>> rows) {
    out << "r_ohms,thd\n";
    for (const auto& [r, t] : rows) out << format_double(r) << ',' << format_double(t) << '\n';
}

}  // namespace ampsim
