#pragma once

// Stochastic classical gravity in its Diosi-Penrose form: Newtonian unitary
// phases plus gravitational dephasing of the branch basis.
//
// Convention: E_G is an energy (J) and every decoherence exponent is E_G t / hbar;
// U_ij = G M^2 / (hbar d_ij) is a rate (s^-1).

#include "gravent/amplitudes.hpp"
#include "gravent/entanglement.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace gravent {

/// Gravitational self-energy of the difference between two uniform spheres
/// displaced by dx, with lambda = dx / (2R).
inline double e_g(double M, double R, double dx, double G = PhysicalConstants{}.G) {
    if (!(M > 0.0) || !(R > 0.0)) throw std::domain_error("e_g: M and R must be > 0");
    if (dx < 0.0) throw std::domain_error("e_g: dx must be >= 0");
    const double scale = 6.0 * G * M * M / (5.0 * R);
    const double lam = dx / (2.0 * R);
    if (lam <= 1.0) {
        const double l2 = lam * lam;
        return scale * (5.0 / 3.0 * l2 - 5.0 / 4.0 * l2 * lam + l2 * l2 * lam / 6.0);
    }
    return scale * (1.0 - 5.0 / (12.0 * lam));
}

struct DPParameters {
    double E_G1 = 0.0; // J
    double E_G2 = 0.0; // J
    std::array<double, 4> U{}; // s^-1, indexed by BranchPair::index()
    double hbar = PhysicalConstants{}.hbar;
    /// Multiplies the whole decoherence functional (E_G and the U cross terms
    /// come from the same kernel); 0 leaves unitary Newtonian evolution.
    double decoherence_scale = 1.0;

    double u(BranchPair p) const { return U[static_cast<std::size_t>(p.index())]; }

    /// Dephasing rate (s^-1) of the coherence between joint branches a and b.
    double gamma(BranchPair a, BranchPair b) const {
        double g = 0.0;
        const bool diff1 = a.i != b.i;
        const bool diff2 = a.j != b.j;
        if (diff1) g += E_G1 / hbar;
        if (diff2) g += E_G2 / hbar;
        if (diff1 && diff2) {
            g += u(a) + u(b) - u({a.i, b.j}) - u({b.i, a.j});
        }
        return decoherence_scale * g;
    }

    /// sigma_G = E_G t / hbar for object 1 (objects are identical in the experiment).
    double sigma_g(double t) const { return E_G1 * t / hbar; }
};

inline DPParameters dp_parameters(const ExperimentConfig& cfg) {
    const auto& k = cfg.constants;
    DPParameters p;
    p.hbar = k.hbar;
    p.E_G1 = e_g(cfg.M, cfg.R, cfg.branch_separation(1), k.G);
    p.E_G2 = e_g(cfg.M, cfg.R, cfg.branch_separation(2), k.G);
    for (auto bp : all_pairs) {
        p.U[static_cast<std::size_t>(bp.index())] = k.G * cfg.M * cfg.M / (k.hbar * cfg.distance(bp));
    }
    return p;
}

/// rho_ab(t) = (1/4) exp(i t (U_b - U_a)) exp(-Gamma_ab t) from an equal-weight start.
inline DensityMatrix4 dp_density_matrix(const DPParameters& p, double t) {
    if (t < 0.0) throw std::domain_error("dp_density_matrix: t must be >= 0");
    Matrix4c rho;
    for (auto a : all_pairs) {
        for (auto b : all_pairs) {
            const double phase = t * (p.u(b) - p.u(a));
            const double decay = a == b ? 0.0 : p.gamma(a, b) * t;
            rho(a.index(), b.index()) = 0.25 * std::exp(cplx{-decay, phase});
        }
    }
    return DensityMatrix4(rho);
}

inline DensityMatrix4 dp_density_matrix(const ExperimentConfig& cfg, double t) {
    return dp_density_matrix(dp_parameters(cfg), t);
}

/// First-order expansion in t: rho(0) + (t/4) K with K_ab = i(U_b - U_a) - Gamma_ab.
inline Matrix4c dp_first_order(const DPParameters& p, double t) {
    Matrix4c rho;
    for (auto a : all_pairs) {
        for (auto b : all_pairs) {
            const double g = a == b ? 0.0 : p.gamma(a, b);
            rho(a.index(), b.index()) = 0.25 * (1.0 + t * cplx{-g, p.u(b) - p.u(a)});
        }
    }
    return rho;
}

/// Closed form valid when d_RL << dx: only U_RL survives and each object
/// dephases at E_G / hbar.
inline Matrix4c dp_far_limit(double E_G, double U_RL, double hbar, double t) {
    const double eg = E_G * t / hbar;
    const double u = U_RL * t;
    auto e = [](double decay, double phase) { return std::exp(cplx{-decay, phase}); };
    Matrix4c r;
    r << 1.0, e(eg, 0.0), e(eg, u), e(2.0 * eg - u, 0.0),
         e(eg, 0.0), 1.0, e(2.0 * eg + u, u), e(eg, 0.0),
         e(eg, -u), e(2.0 * eg + u, -u), 1.0, e(eg, -u),
         e(2.0 * eg - u, 0.0), e(eg, 0.0), e(eg, u), 1.0;
    return 0.25 * r;
}

struct DPEntanglementCondition {
    double kappa4_mag = 0.0;
    double sigma_g = 0.0;
    bool entangling = false;
};

/// Virtual-matter amplitude |kappa^(4)_RL| against the decoherence exponent sigma_G.
inline DPEntanglementCondition dp_entanglement_condition(const ExperimentConfig& cfg, double t) {
    ExperimentConfig at = cfg;
    at.t = t;
    DPEntanglementCondition c;
    c.kappa4_mag = std::abs(kappa4_closed(at, RL));
    c.sigma_g = dp_parameters(at).sigma_g(t);
    c.entangling = c.kappa4_mag > c.sigma_g;
    return c;
}

/// Smallest t in [t_min, t_max] beyond which |kappa^(4)_RL| exceeds sigma_G, by
/// log-space bisection. Empty if the crossing is outside the bracket.
inline std::optional<double> dp_threshold_time(const ExperimentConfig& cfg, double t_min = 1e-40,
                                               double t_max = 1e10, double rel_tol = 1e-12) {
    auto excess = [&](double t) {
        const auto c = dp_entanglement_condition(cfg, t);
        return c.kappa4_mag - c.sigma_g;
    };
    if (excess(t_min) > 0.0 || excess(t_max) <= 0.0) return std::nullopt;
    double lo = std::log(t_min);
    double hi = std::log(t_max);
    while (hi - lo > rel_tol) {
        const double mid = 0.5 * (lo + hi);
        if (excess(std::exp(mid)) > 0.0) hi = mid;
        else lo = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

} // namespace gravent
