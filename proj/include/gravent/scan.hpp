#pragma once

#include "gravent/amplitudes.hpp"
#include "gravent/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace gravent {

struct LogRange {
    double min = 0.0;
    double max = 0.0;

    void validate(const char* what) const {
        if (!(min > 0.0) || !(max > 0.0) || !std::isfinite(min) || !std::isfinite(max) || max < min) {
            throw std::invalid_argument(std::string(what) + ": range must satisfy 0 < min <= max");
        }
    }
    /// k-th of n log-spaced points; endpoints are exact.
    double at(std::size_t k, std::size_t n) const {
        if (n == 1 || k == 0) return min;
        if (k + 1 == n) return max;
        const double f = static_cast<double>(k) / static_cast<double>(n - 1);
        return std::exp(std::log(min) + f * (std::log(max) - std::log(min)));
    }
};

/// Everything a scan cell needs besides (M, t).
struct ScanTemplate {
    Material material = ytterbium();
    PhysicalConstants constants{};
    double dsep_over_r = 10.0;
    double dx_over_r = 10.0;
    unsigned threads = 0;
};

struct ScanRow {
    double M = 0.0;
    double t = 0.0;
    double phi = 0.0;
    double vartheta = 0.0;
    double ratio = 0.0;
    bool perturbative_ok = true;
    bool nonrel_ok = true;
};

struct ContourPoint {
    double M = 0.0;
    double t_threshold = 0.0;
};

inline ExperimentConfig scan_cell_config(double mass, double time, const ScanTemplate& tpl) {
    auto cfg = make_scaled(mass, time, tpl.dsep_over_r, tpl.dx_over_r, tpl.material);
    cfg.constants = tpl.constants;
    return cfg;
}

inline ScanRow evaluate_cell(double mass, double time, const ScanTemplate& tpl) {
    const auto cfg = scan_cell_config(mass, time, tpl);
    ScanRow row;
    row.M = mass;
    row.t = time;
    row.phi = phase_nonrel(cfg, RL);
    row.vartheta = vartheta(cfg);
    row.ratio = row.phi > 0.0 ? row.vartheta / row.phi : 0.0;
    const auto rep = validate_config(cfg, row.phi, row.vartheta);
    row.perturbative_ok = rep.ok("perturbative_phi") && rep.ok("perturbative_vartheta");
    row.nonrel_ok = rep.ok("non_relativistic_wavepacket");
    return row;
}

/// Mass-major grid of (phi, vartheta) with d_RL = dsep_over_r * R.
inline std::vector<ScanRow> scan_grid(const LogRange& masses, const LogRange& times, std::size_t n_mass,
                                      std::size_t n_time, const ScanTemplate& tpl = {}) {
    masses.validate("scan_grid mass");
    times.validate("scan_grid time");
    if (n_mass < 2 || n_time < 2) throw std::invalid_argument("scan_grid: need at least 2 points per axis");
    tpl.material.validate();
    tpl.constants.validate();
    if (!(tpl.dsep_over_r > 2.0)) throw std::invalid_argument("scan_grid: dsep_over_r must exceed 2");

    const std::size_t n = n_mass * n_time;
    std::vector<ScanRow> rows(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < n; k = next++) {
            rows[k] = evaluate_cell(masses.at(k / n_time, n_mass), times.at(k % n_time, n_time), tpl);
        }
    };
    unsigned workers = tpl.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : tpl.threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    return rows;
}

using SignificanceFn = std::function<double(const ExperimentConfig&)>;

struct ContourOptions {
    double solver_tol = 1e-9; // relative tolerance on the significance at the root
    double t_min = 1e-30;
    double t_max = 1e30;
    SignificanceFn significance = [](const ExperimentConfig& c) { return vartheta(c); };
};

struct ContourResult {
    std::vector<ContourPoint> points;
    std::vector<std::string> diagnostics;
};

/// For each mass, bisection in log t for significance(M, t) = level. The
/// significance must increase with t.
inline ContourResult contour(double level, const LogRange& masses, std::size_t n_mass, const ScanTemplate& tpl = {},
                             const ContourOptions& opt = {}) {
    if (!(level > 0.0)) throw std::invalid_argument("contour: level must be > 0");
    masses.validate("contour mass");
    if (n_mass < 1) throw std::invalid_argument("contour: need at least one mass");
    if (!(opt.solver_tol > 0.0)) throw std::invalid_argument("contour: solver_tol must be > 0");

    ContourResult out;
    for (std::size_t k = 0; k < n_mass; ++k) {
        const double mass = masses.at(k, n_mass);
        auto f = [&](double t) { return opt.significance(scan_cell_config(mass, t, tpl)) - level; };
        if (f(opt.t_min) > 0.0 || f(opt.t_max) < 0.0) {
            std::ostringstream os;
            os << "M = " << mass << " kg: no crossing of level " << level << " for t in [" << opt.t_min << ", "
               << opt.t_max << "] s";
            out.diagnostics.push_back(os.str());
            continue;
        }
        double lo = std::log(opt.t_min);
        double hi = std::log(opt.t_max);
        // A relative step of eps in t moves a t^p significance by about p*eps.
        const double stop = opt.solver_tol / 8.0;
        while (hi - lo > stop) {
            const double mid = 0.5 * (lo + hi);
            if (f(std::exp(mid)) >= 0.0) hi = mid;
            else lo = mid;
        }
        out.points.push_back({mass, std::exp(0.5 * (lo + hi))});
    }
    return out;
}

/// Relative gas-collision decoherence rate: linear in pressure, M^(2/3) in mass.
inline double decoherence_scaling(double pressure_ratio, double mass_ratio) {
    if (!(pressure_ratio > 0.0) || !(mass_ratio > 0.0)) {
        throw std::invalid_argument("decoherence_scaling: ratios must be > 0");
    }
    return pressure_ratio * std::cbrt(mass_ratio * mass_ratio);
}

// ---------------------------------------------------------------------------
// Output

enum class OutputFormat { CSV, JSON };

inline OutputFormat parse_format(const std::string& s) {
    if (s == "csv") return OutputFormat::CSV;
    if (s == "json") return OutputFormat::JSON;
    throw std::invalid_argument("unknown output format '" + s + "' (expected csv or json)");
}

inline std::string format_sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.8e", v);
    return buf;
}

inline const char* format_bool(bool b) { return b ? "true" : "false"; }

inline std::string to_csv(const std::vector<ScanRow>& rows) {
    std::string s = "M_kg,t_s,phi,vartheta,ratio,perturbative_ok,nonrel_ok\n";
    for (const auto& r : rows) {
        s += format_sci(r.M) + ',' + format_sci(r.t) + ',' + format_sci(r.phi) + ',' + format_sci(r.vartheta) + ','
             + format_sci(r.ratio) + ',' + format_bool(r.perturbative_ok) + ',' + format_bool(r.nonrel_ok) + '\n';
    }
    return s;
}

inline std::string to_csv(const std::vector<ContourPoint>& pts) {
    std::string s = "M_kg,t_threshold_s\n";
    for (const auto& p : pts) s += format_sci(p.M) + ',' + format_sci(p.t_threshold) + '\n';
    return s;
}

inline std::string to_json(const std::vector<ScanRow>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        arr.push_back({{"M_kg", r.M},
                       {"t_s", r.t},
                       {"phi", r.phi},
                       {"vartheta", r.vartheta},
                       {"ratio", r.ratio},
                       {"perturbative_ok", r.perturbative_ok},
                       {"nonrel_ok", r.nonrel_ok}});
    }
    return arr.dump(2) + '\n';
}

inline std::string to_json(const std::vector<ContourPoint>& pts) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& p : pts) arr.push_back({{"M_kg", p.M}, {"t_threshold_s", p.t_threshold}});
    return arr.dump(2) + '\n';
}

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw OutputError("failed writing '" + path + "'");
}

template <class Items>
void emit(const Items& items, OutputFormat fmt, const std::string& path) {
    write_file(path, fmt == OutputFormat::CSV ? to_csv(items) : to_json(items));
}

} // namespace gravent
