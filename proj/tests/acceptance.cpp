// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the number
// of failing criteria (0 when all pass).

#include "gravent/gravent.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace gravent;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome phase_reproduction() {
    const auto t0 = Clock::now();
    const auto cfg = make_collinear(1e-14, 2.0, 200e-6, 200e-6);
    const double phi = phase_nonrel(cfg, RL);
    const double elapsed = seconds_since(t0);

    using big = boost::multiprecision::cpp_dec_float_50;
    const big G("6.67430e-11"), hbar("1.054571817e-34"), M("1e-14"), t("2"), d("200e-6");
    const double oracle = static_cast<double>(G * M * M * t / (hbar * d));

    const double rel_target = std::abs(phi - 0.6329) / 0.6329;
    const double rel_oracle = std::abs(phi - oracle) / oracle;
    return {rel_target <= 1e-3 && rel_oracle <= 1e-14 && elapsed < 1e-3,
            fmt("phi = %.9f, 50-digit oracle %.9f (rel %.1e), target 0.6329 (rel %.1e), %.1f us", phi, oracle,
                rel_oracle, rel_target, elapsed * 1e6)};
}

Outcome relativistic_limit() {
    const auto t0 = Clock::now();
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> lm(std::log(1e-16), std::log(1e-5));
    std::uniform_real_distribution<double> ld(std::log(1e-6), std::log(1e-1));
    std::uniform_real_distribution<double> lx(std::log(1.0001), std::log(1e8));
    std::uniform_real_distribution<double> below(0.0, 1.0);
    double worst = 0.0;
    bool gate = true;
    for (int k = 0; k < 100; ++k) {
        auto cfg = make_collinear(std::exp(lm(gen)), 0.0, std::exp(ld(gen)), std::exp(ld(gen)));
        const double d = cfg.distance(RL);
        cfg.t = std::exp(lx(gen)) * d / cfg.constants.c;
        const double dev = std::abs(gamma2_relativistic_point(cfg, RL) / (I * phase_nonrel(cfg, RL)) - 1.0);
        worst = std::max(worst, std::abs(dev - d / (cfg.constants.c * cfg.t)));
        cfg.t = below(gen) * d / cfg.constants.c;
        gate = gate && gamma2_relativistic_point(cfg, RL) == cplx(0.0, 0.0);
    }
    const double elapsed = seconds_since(t0);
    return {worst <= 1e-12 && gate && elapsed < 1.0,
            fmt("max | |gamma/(i phi) - 1| - d/(ct) | = %.2e over 100 configs, zero inside ct < d: %s, %.3f s", worst,
                gate ? "yes" : "no", elapsed)};
}

Outcome double_sphere_oracle() {
    const auto t0 = Clock::now();
    const DoubleSphereGeometry g{1.0, 3.0, 20.0, -1.0};
    MonteCarloOptions mc;
    mc.n_samples = 10'000'000;
    const auto q = double_sphere_coulomb_mc(g, mc);
    const double closed = double_sphere_coulomb_closed(g.R, g.dx, g.d);
    const double elapsed = seconds_since(t0);
    const double rel = std::abs(closed - q.value) / q.value;
    const double rel_ref = std::abs(closed - 0.0998) / 0.0998;
    return {rel <= 0.05 && rel_ref <= 0.05 && elapsed < 30.0,
            fmt("closed %.5f, Monte Carlo %.5f +- %.1e (1e7 samples), rel %.2e, %.1f s", closed, q.value,
                q.std_error, rel, elapsed)};
}

Outcome beta4_oracle() {
    const auto t0 = Clock::now();
    const auto cfg = make_scaled(1e-14, 1.0, 20.0, 20.0);
    MonteCarloOptions mc;
    mc.n_samples = 1'000'000;
    const auto q = beta4_numeric(cfg, RL, potential::SemiClassicalMean{}, mc);
    const cplx closed = beta4_closed(cfg, RL);
    const double elapsed = seconds_since(t0);
    const double diff = std::abs(q.value - closed);
    const double allowed = 3.0 * q.std_error + 0.08 * std::abs(closed);
    return {diff <= allowed && elapsed < 120.0,
            fmt("numeric %.4e +- %.1e vs closed %.4e at dx = d_RL = 20R: ratio %.4f, allowed rel %.4f, %.1f s",
                q.value.real(), q.std_error, closed.real(), q.value.real() / closed.real(),
                allowed / std::abs(closed), elapsed)};
}

Outcome exact_ratio() {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> lm(std::log(1e-20), std::log(1.0));
    std::uniform_real_distribution<double> lt(std::log(1e-15), std::log(1e6));
    std::uniform_real_distribution<double> sep(2.01, 1e4);
    double worst = 0.0;
    int n = 0;
    for (int k = 0; k < 10'000; ++k) {
        const auto cfg = make_scaled(std::exp(lm(gen)), std::exp(lt(gen)), sep(gen), sep(gen));
        for (auto p : all_pairs) {
            const cplx r = kappa4_closed(cfg, p) / beta4_closed(cfg, p);
            worst = std::max(worst, std::abs(r - 16.0) / 16.0);
            ++n;
        }
    }
    return {worst <= 1e-12, fmt("max |kappa4/beta4 - 16| / 16 = %.2e over %d (config, pair) cases", worst, n)};
}

Outcome significance_line() {
    const auto t0 = Clock::now();
    const auto res = contour(0.1, {planck_mass, planck_mass}, 1);
    const auto cfg = scan_cell_config(planck_mass, 1.0, {});
    const auto& k = cfg.constants;
    const double m = cfg.material.atom_mass;
    const double rate = (6.0 / 25.0) * k.G * k.G * m * m * std::pow(planck_mass, 3) * cfg.R
                        / (k.hbar * k.hbar * k.hbar * cfg.distance(RL));
    const double t_closed = std::sqrt(0.1) / rate;
    const double t_bisect = res.points.empty() ? NAN : res.points[0].t_threshold;
    const auto small = evaluate_cell(1e-14, 2.0, {});
    const double elapsed = seconds_since(t0);

    const bool line_ok = std::abs(t_bisect - 4.1e-9) / 4.1e-9 <= 0.01 && std::abs(t_closed - 4.1e-9) / 4.1e-9 <= 0.01
                         && std::abs(t_bisect - t_closed) / t_closed <= 1e-8;
    // "~1.3e-23" read as two significant figures.
    const bool ratio_ok = small.ratio >= 1.25e-23 && small.ratio < 1.35e-23;
    return {line_ok && ratio_ok && elapsed < 1.0,
            fmt("t(vartheta = 0.1) bisection %.5e s, closed form %.5e s (target 4.1e-9 +- 1%%); vartheta/phi at "
                "1e-14 kg, 2 s = %.4e (target ~1.3e-23); %.3f s",
                t_bisect, t_closed, small.ratio, elapsed)};
}

Outcome classical_separability() {
    const auto cfg = make_scaled(1e-14, 2.0, 10.0, 10.0);
    const auto lp = compute_local_phases(cfg, potential::SemiClassicalMean{});
    // Reduce the phases mod 2 pi so the state is well conditioned; this is a
    // per-object rotation and does not change entanglement.
    auto wrap = [](double x) { return std::remainder(x, 2.0 * std::numbers::pi); };
    const LocalPhases wrapped{wrap(lp.phi1L), wrap(lp.phi1R), wrap(lp.phi2L), wrap(lp.phi2R)};
    const double n_cg = negativity(assemble_state(alpha_cg_exponentiated(wrapped)));
    const double n_cg_raw = negativity(assemble_state(alpha_cg_exponentiated(lp)));

    double worst = 0.0;
    for (double phi : {1e-4, 1e-3, 1e-2}) {
        AmplitudeSet a;
        a[RL] = cplx(1.0, phi);
        const double n = negativity(assemble_state(a));
        const double oracle = std::abs(std::sin(phi / 2.0)) / 2.0;
        worst = std::max(worst, std::abs(n - oracle) / oracle);
    }
    return {n_cg < 1e-12 && n_cg_raw < 1e-12 && worst <= 1e-3,
            fmt("classical exponentiated negativity %.1e (unwrapped phases %.1e); QG (1,1,1+i phi,1) max rel "
                "deviation from |sin(phi/2)|/2 for phi <= 1e-2: %.2e",
                n_cg, n_cg_raw, worst)};
}

Outcome negativity_oracle() {
    double worst = 0.0;
    for (double phi : {0.1, 1.0, std::numbers::pi}) {
        AmplitudeSet a;
        a[RL] = std::exp(I * phi);
        worst = std::max(worst, std::abs(negativity(assemble_state(a)) - std::abs(std::sin(phi / 2.0)) / 2.0));
    }
    AmplitudeSet a;
    a[RL] = std::exp(I * std::numbers::pi);
    const double at_pi = negativity(assemble_state(a));
    return {worst <= 1e-10 && std::abs(at_pi - 0.5) <= 1e-10,
            fmt("max |N - |sin(phi/2)|/2| = %.2e at phi in {0.1, 1, pi}; N(pi) = %.15f", worst, at_pi)};
}

Outcome dp_model_checks() {
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> lm(std::log(1e-16), std::log(1e-4));
    std::uniform_real_distribution<double> sep(2.2, 50.0);
    std::uniform_real_distribution<double> dxr(0.0, 50.0);
    std::uniform_real_distribution<double> ls(std::log(1e-4), std::log(1e3));
    int physical = 0;
    for (int k = 0; k < 1000; ++k) {
        const auto p = dp_parameters(make_scaled(std::exp(lm(gen)), 0.0, sep(gen), dxr(gen)));
        const double rate = std::max({p.E_G1 / p.hbar, p.u(RL), 1e-300});
        try {
            const auto rho = dp_density_matrix(p, std::exp(ls(gen)) / rate);
            if (rho.is_psd()) ++physical;
        } catch (const StateError&) {
        }
    }

    const auto p = dp_parameters(make_scaled(1e-14, 0.0, 10.0, 10.0));
    const double t = 1e-5 * p.hbar / p.E_G1;
    const auto dev = [&](double s) {
        return (dp_density_matrix(p, s).matrix() - dp_first_order(p, s)).cwiseAbs().maxCoeff();
    };
    const double scaling = dev(2.0 * t) / dev(t);

    const double R = 7e-4;
    const double eg_jump = std::abs(e_g(1e-5, R, std::nextafter(2.0 * R, 0.0)) / e_g(1e-5, R, std::nextafter(2.0 * R, 1.0)) - 1.0);

    const auto cfg = make_scaled(1e-5, 1.0, 10.0, 10.0);
    const auto thr = dp_threshold_time(cfg);
    const double t_star = thr.value_or(NAN);
    const bool thr_ok = thr && t_star >= 0.5e-19 && t_star <= 2e-19;

    return {physical == 1000 && std::abs(scaling - 4.0) <= 0.1 && eg_jump <= 1e-12 && thr_ok,
            fmt("PSD+unit trace %d/1000; first-order deviation ratio under t -> 2t %.4f; E_G jump at lambda = 1 "
                "%.1e; 10 mg threshold (d_RL = dx = 10R) %.3e s vs target 1e-19 s within x2: %s",
                physical, scaling, eg_jump, t_star, thr_ok ? "yes" : "no")};
}

Outcome degenerate_suppression() {
    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> lm(std::log(1e-18), std::log(1e-2));
    std::uniform_real_distribution<double> sep(2.0 + 1e-12, 1e3);
    int nonzero = 0;
    for (int k = 0; k < 10'000; ++k) {
        const auto cfg = make_scaled(std::exp(lm(gen)), 1.0, sep(gen), sep(gen));
        for (auto pr : all_pairs) {
            if (overlap_integral(cfg, pr) != 0.0) ++nonzero;
        }
    }
    const auto cfg = make_collinear(1e-14, 1.0, 1e-4, 100e-6);
    const double log_s = free_suppression_log(cfg, RL);
    const double rel = std::abs(log_s + 1.63e14) / 1.63e14;
    return {nonzero == 0 && rel <= 1e-3,
            fmt("nonzero overlaps in 40000 non-overlapping cases: %d; free_suppression_log(Yb, 100 um) = %.5e "
                "(rel %.1e vs -1.63e14)",
                nonzero, log_s, rel)};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"phase reproduction", phase_reproduction},
        {"relativistic limit", relativistic_limit},
        {"double-sphere oracle", double_sphere_oracle},
        {"beta4 numeric oracle", beta4_oracle},
        {"kappa4/beta4 = 16", exact_ratio},
        {"significance line", significance_line},
        {"classical separability", classical_separability},
        {"negativity oracle", negativity_oracle},
        {"DP model", dp_model_checks},
        {"degenerate suppression", degenerate_suppression},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("[%s] criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed;
}
