#pragma once

// Closed forms checked against independent quadrature. Used by `gravent validate`.

#include "gravent/amplitudes.hpp"
#include "gravent/dp_model.hpp"
#include "gravent/entanglement.hpp"
#include "gravent/potentials.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace gravent {

struct OracleResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace detail {

inline OracleResult compare(std::string name, double got, double want, double tol) {
    const double rel = std::abs(got - want) / std::abs(want);
    std::ostringstream os;
    os.precision(6);
    os << "got " << got << ", expected " << want << ", rel " << rel << " (tol " << tol << ")";
    return {std::move(name), rel <= tol, os.str()};
}

inline OracleResult guarded(const std::string& name, const std::function<OracleResult()>& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        return {name, false, std::string("error: ") + e.what()};
    }
}

} // namespace detail

inline std::vector<OracleResult> run_oracles(const MonteCarloOptions& mc = {}) {
    std::vector<OracleResult> out;

    out.push_back(detail::guarded("double_sphere_closed_vs_mc", [&] {
        const DoubleSphereGeometry g;
        const auto q = double_sphere_coulomb_mc(g, mc);
        const double closed = double_sphere_coulomb_closed(g.R, g.dx, g.d);
        return detail::compare("double_sphere_closed_vs_mc", closed, q.value, 0.05);
    }));

    out.push_back(detail::guarded("double_sphere_series_vs_mc", [&] {
        DoubleSphereGeometry g;
        g.dx = 5.0;
        const auto q = double_sphere_coulomb_mc(g, mc);
        return detail::compare("double_sphere_series_vs_mc", double_sphere_coulomb_series(g, 8), q.value,
                               0.01 + 3.0 * q.std_error / q.value);
    }));

    out.push_back(detail::guarded("local_phase_product_vs_mc", [&] {
        const auto cfg = make_scaled(1e-14, 2.0, 10.0, 10.0);
        const PotentialModel pm = potential::SemiClassicalMean{};
        const auto pr = local_phase(cfg, 2, Branch::L, pm, {QuadratureMethod::NestedProductRule, {}});
        const auto q = local_phase(cfg, 2, Branch::L, pm, {QuadratureMethod::MonteCarlo, mc});
        return detail::compare("local_phase_product_vs_mc", pr.value, q.value,
                               1e-3 + 4.0 * q.std_error / std::abs(q.value));
    }));

    out.push_back(detail::guarded("gamma2_sphere_vs_point", [&] {
        // A small sphere far from the light cone edge behaves like a point.
        auto cfg = make_collinear(1e-14, 0.0, 1e-3, 1e-3);
        cfg.t = 3.0 * cfg.d_rl / cfg.constants.c;
        const auto s = gamma2_relativistic_sphere(cfg, RL, mc);
        const auto p = gamma2_relativistic_point(cfg, RL);
        return detail::compare("gamma2_sphere_vs_point", s.value.imag(), p.imag(), 1e-3);
    }));

    out.push_back(detail::guarded("kappa4_over_beta4", [] {
        const auto cfg = make_scaled(planck_mass, 1e-9, 10.0, 10.0);
        return detail::compare("kappa4_over_beta4", std::abs(kappa4_closed(cfg, RL) / beta4_closed(cfg, RL)), 16.0,
                               1e-12);
    }));

    out.push_back(detail::guarded("negativity_phase_state", [] {
        AmplitudeSet a;
        a[RL] = std::exp(I * std::numbers::pi);
        return detail::compare("negativity_phase_state", negativity(assemble_state(a)), 0.5, 1e-10);
    }));

    out.push_back(detail::guarded("e_g_continuity", [] {
        const double R = 1e-6;
        const double below = e_g(1e-14, R, 2.0 * R * (1.0 - 1e-15));
        const double above = e_g(1e-14, R, 2.0 * R * (1.0 + 1e-15));
        return detail::compare("e_g_continuity", below, above, 1e-12);
    }));

    return out;
}

} // namespace gravent
