#include "ampsim/analysis.hpp"

#include "ampsim/csv.hpp"
#include "ampsim/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>
#include <string>

namespace ampsim {

namespace {

// FFTW's planner is not re-entrant; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

class RealForwardFft {
public:
    explicit RealForwardFft(std::size_t n) : n_(n) {
        in_.reset(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
        out_.reset(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1))));
        std::lock_guard lock(planner_mutex());
        plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_.get(), out_.get(), FFTW_ESTIMATE);
    }
    ~RealForwardFft() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    RealForwardFft(const RealForwardFft&) = delete;
    RealForwardFft& operator=(const RealForwardFft&) = delete;

    std::span<const fftw_complex> run(std::span<const double> x) {
        std::copy(x.begin(), x.end(), in_.get());
        fftw_execute(plan_);
        return {out_.get(), n_ / 2 + 1};
    }

private:
    std::size_t n_;
    std::unique_ptr<double, FftwFree> in_;
    std::unique_ptr<fftw_complex, FftwFree> out_;
    fftw_plan plan_ = nullptr;
};

// X_k = sum x[j] exp(-2 pi i k j / n); the angle index is reduced mod n.
std::complex<double> dft_bin(std::span<const double> x, std::size_t k) {
    const std::size_t n = x.size();
    const double w = 2.0 * std::numbers::pi / static_cast<double>(n);
    double re = 0.0;
    double im = 0.0;
    std::size_t idx = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const double a = w * static_cast<double>(idx);
        re += x[j] * std::cos(a);
        im -= x[j] * std::sin(a);
        idx += k;
        if (idx >= n) idx -= n;
    }
    return {re, im};
}

double wrap_to_pi(double a) {
    a = std::remainder(a, 2.0 * std::numbers::pi);  // [-pi, pi]
    return a <= -std::numbers::pi ? a + 2.0 * std::numbers::pi : a;
}

}  // namespace

Spectrum power_spectrum(std::span<const double> x, double dt) {
    if (x.empty()) throw ConfigError("power spectrum of an empty window");
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    const std::size_t n = x.size();
    RealForwardFft fft(n);
    const auto coeffs = fft.run(x);

    Spectrum sp;
    sp.bin_width = 1.0 / (static_cast<double>(n) * dt);
    sp.power.resize(coeffs.size());
    const double norm = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const double mag2 = coeffs[k][0] * coeffs[k][0] + coeffs[k][1] * coeffs[k][1];
        // Bins other than DC and Nyquist stand for a +/- frequency pair.
        const bool paired = k != 0 && !(n % 2 == 0 && k == n / 2);
        sp.power[k] = (paired ? 2.0 : 1.0) * mag2 * norm;
    }
    return sp;
}

std::size_t aligned_bin(std::size_t n, double dt, double f0) {
    if (!(f0 > 0.0)) throw ConfigError("fundamental frequency must be positive");
    const double cycles = f0 * static_cast<double>(n) * dt;
    const double rounded = std::round(cycles);
    if (rounded < 1.0 || std::abs(cycles - rounded) > 1e-6 * std::max(1.0, cycles))
        throw ConfigError("window of " + std::to_string(n) + " samples holds " +
                          std::to_string(cycles) + " cycles; f0 is not bin-aligned");
    const auto bin = static_cast<std::size_t>(rounded);
    if (bin > n / 2) throw ConfigError("fundamental above Nyquist");
    return bin;
}

ThdResult thd(std::span<const double> x, double dt, double f0) {
    const Spectrum sp = power_spectrum(x, dt);
    const std::size_t m = aligned_bin(x.size(), dt, f0);
    const double p1 = sp.power[m];
    if (!(p1 > 0.0)) throw NumericalError("fundamental has no power; THD undefined");

    ThdResult r;
    r.fundamental_rms = std::sqrt(p1);
    double sum = 0.0;
    for (std::size_t bin = 2 * m; bin < sp.power.size(); bin += m) {
        const double p = sp.power[bin];
        if (p / p1 > kHarmonicPowerFloor) {
            sum += p;
            r.harmonic_rms.push_back(std::sqrt(p));
        }
    }
    r.n_harmonics_used = r.harmonic_rms.size();
    r.thd = std::sqrt(sum) / r.fundamental_rms;
    return r;
}

PhaseLag phase_lag(std::span<const double> a, std::span<const double> b, double dt, double f0) {
    if (a.size() != b.size()) throw ConfigError("phase_lag needs equal-length signals");
    if (a.empty()) throw ConfigError("phase_lag of an empty window");
    const std::size_t m = aligned_bin(a.size(), dt, f0);

    auto fundamental = [&](std::span<const double> x, const char* name) {
        const std::complex<double> c = dft_bin(x, m);
        // AC mean square, for judging whether the fundamental carries power.
        double mean = 0.0;
        for (double v : x) mean += v;
        mean /= static_cast<double>(x.size());
        double ac = 0.0;
        for (double v : x) ac += (v - mean) * (v - mean);
        ac /= static_cast<double>(x.size());
        const double n = static_cast<double>(x.size());
        const double p1 = 2.0 * std::norm(c) / (n * n);
        if (!(ac > 0.0) || p1 / ac < kHarmonicPowerFloor)
            throw NumericalError(std::string("signal ") + name +
                                 " has no fundamental; phase undefined");
        return c;
    };
    const auto ca = fundamental(a, "a");
    const auto cb = fundamental(b, "b");
    return {wrap_to_pi(std::arg(cb) - std::arg(ca)), f0};
}

std::vector<std::pair<double, double>> transfer_function(const EarlyParams& p,
                                                         const CircuitConfig& c,
                                                         std::span<const double> i_b_grid) {
    std::vector<std::pair<double, double>> out;
    out.reserve(i_b_grid.size());
    for (double ib : i_b_grid) out.emplace_back(ib, solve_resistive(p, c, ib).i);
    return out;
}

TrajectoryMetrics trajectory_metrics(const Trace& tr, const CircuitConfig& c) {
    TrajectoryMetrics m;
    // In unit axes u = V_C/V_CC, w = R*I/V_CC the load line is u + w = 1 with
    // length sqrt(2); distance over length is |u + w - 1| / 2.
    for (std::size_t k = 0; k < tr.size(); ++k) {
        const double d = std::abs(tr.v_c[k] + c.r_load * tr.i[k] - c.vcc) / (2.0 * c.vcc);
        m.loop_detachment = std::max(m.loop_detachment, d);
    }

    const std::size_t spc = tr.samples_per_cycle;
    if (spc == 0 || tr.size() < 2 * spc) return m;
    const std::size_t last = (tr.size() / spc - 1) * spc;
    auto closes = [&](const std::vector<double>& v) {
        double scale = 0.0;
        for (double x : v) scale = std::max(scale, std::abs(x));
        if (scale == 0.0) return true;
        for (std::size_t k = 0; k < spc; ++k)
            if (std::abs(v[k] - v[last + k]) > kClosureTolerance * scale) return false;
        return true;
    };
    m.is_closed = closes(tr.v_c) && closes(tr.i);
    return m;
}

void write_spectrum_csv(std::ostream& out, const Spectrum& sp, std::size_t fundamental_bin) {
    const double ref = sp.power.at(fundamental_bin);
    out << "freq_hz,power_db_rel_fundamental\n";
    for (std::size_t k = 0; k < sp.power.size(); ++k) {
        const double db = 10.0 * std::log10(sp.power[k] / ref);
        out << format_double(sp.frequency(k)) << ',' << format_double(db) << '\n';
    }
}

void write_thd_csv(std::ostream& out, const ThdResult& r) {
    out << "thd,n_harmonics,fundamental_rms\n"
        << format_double(r.thd) << ',' << r.n_harmonics_used << ','
        << format_double(r.fundamental_rms) << '\n';
}

}  // namespace ampsim
