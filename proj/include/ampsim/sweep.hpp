#pragma once

// Parameter-space sweeps. Every cell is an independent pure computation, so the
// OpenMP kernels and their serial references produce bitwise-identical results.

#include "ampsim/model.hpp"
#include "ampsim/transient.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ampsim {

/// Inclusive linear axes over a rectangle of the (V_a, s) plane.
struct SweepGrid {
    double va_min = -200.0;
    double va_max = -10.0;
    double s_min = 1.0;
    double s_max = 10.0;
    std::size_t n_va = 20;
    std::size_t n_s = 10;

    /// Open at V_a = 0 and s = 0: s starts at s_max/n_s, V_a ends at va_min/n_va.
    static SweepGrid open_rectangle(double va_min, double s_max, std::size_t n_va,
                                    std::size_t n_s);

    void validate() const;
    double va(std::size_t i) const;
    double s(std::size_t j) const;

    bool operator==(const SweepGrid&) const = default;
};

/// THD over the grid, row-major [i_va][i_s]. Cells outside the model domain are
/// empty and listed in diagnostics.
struct ThdSurface {
    SweepGrid grid;
    std::vector<std::optional<double>> thd;
    std::vector<std::string> diagnostics;

    const std::optional<double>& at(std::size_t i_va, std::size_t i_s) const {
        return thd[i_va * grid.n_s + i_s];
    }
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

struct BetaScan {
    std::vector<std::pair<double, double>> points;  ///< (i_b, beta)
    LinearFit fit;
};

/// THD of the steady-state collector current for one parameter set.
double measure_thd(const EarlyParams& p, const CircuitConfig& c, const Stimulus& st,
                   const SimConfig& cfg);

ThdSurface thd_surface(const SweepGrid& grid, const CircuitConfig& c, const Stimulus& st,
                       const SimConfig& cfg);
ThdSurface thd_surface_serial(const SweepGrid& grid, const CircuitConfig& c,
                              const Stimulus& st, const SimConfig& cfg);

BetaScan beta_scan(const EarlyParams& p, const CircuitConfig& c,
                   std::span<const double> i_b_grid);

/// Least squares y = slope*x + intercept with coefficient of determination.
LinearFit fit_line(std::span<const std::pair<double, double>> xy);

std::vector<std::pair<double, double>> thd_vs_r(const EarlyParams& p,
                                                std::span<const double> r_values,
                                                const Stimulus& st, const SimConfig& cfg,
                                                double vcc);
std::vector<std::pair<double, double>> thd_vs_r_serial(const EarlyParams& p,
                                                       std::span<const double> r_values,
                                                       const Stimulus& st,
                                                       const SimConfig& cfg, double vcc);

/// n points evenly spaced on (0, hi].
std::vector<double> open_linspace(double hi, std::size_t n);

void write_surface_csv(std::ostream& out, const ThdSurface& surface);
void write_beta_scan_csv(std::ostream& out, const BetaScan& scan);
void write_thd_vs_r_csv(std::ostream& out, std::span<const std::pair<double, double>> rows);

}  // namespace ampsim
