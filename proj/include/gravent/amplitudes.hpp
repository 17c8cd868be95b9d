#pragma once

#include "gravent/config.hpp"
#include "gravent/potentials.hpp"
#include "gravent/quadrature.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gravent {

using cplx = std::complex<double>;
inline constexpr cplx I{0.0, 1.0};

enum class GravityModel {
    QGNonRel,
    QGRelativisticPoint,
    QGRelativisticSphere,
    CGSemiClassical,
    QGVirtualMatter,
    DPStochastic,
};

inline const char* to_string(GravityModel m) {
    switch (m) {
    case GravityModel::QGNonRel: return "qg";
    case GravityModel::QGRelativisticPoint: return "qg-rel";
    case GravityModel::QGRelativisticSphere: return "qg-rel-sphere";
    case GravityModel::CGSemiClassical: return "cg";
    case GravityModel::QGVirtualMatter: return "qg-virtual";
    case GravityModel::DPStochastic: return "dp";
    }
    return "?";
}

inline GravityModel parse_model(const std::string& s) {
    for (auto m : {GravityModel::QGNonRel, GravityModel::QGRelativisticPoint, GravityModel::QGRelativisticSphere,
                   GravityModel::CGSemiClassical, GravityModel::QGVirtualMatter, GravityModel::DPStochastic}) {
        if (s == to_string(m)) return m;
    }
    throw std::invalid_argument("unknown gravity model '" + s + "'");
}

/// The four branch amplitudes in basis order (LL, LR, RL, RR).
struct AmplitudeSet {
    std::array<cplx, 4> alpha{cplx{1.0}, cplx{1.0}, cplx{1.0}, cplx{1.0}};
    GravityModel model = GravityModel::QGNonRel;
    int order = 0;               // highest Dyson order included
    bool exponentiated = false;  // true if phases were resummed to e^{i...}
    bool perturbative_ok = true; // every perturbative contribution has magnitude <= 1

    cplx& operator[](BranchPair p) { return alpha[static_cast<std::size_t>(p.index())]; }
    const cplx& operator[](BranchPair p) const { return alpha[static_cast<std::size_t>(p.index())]; }
};

// ---------------------------------------------------------------------------
// Quantum-gravity phases

/// phi_ij = G M^2 t / (hbar d_ij).
inline double phase_nonrel(const ExperimentConfig& cfg, BranchPair p) {
    const double d = cfg.distance(p);
    if (!(d > 0.0)) throw std::domain_error("phase_nonrel: d_ij must be > 0");
    const auto& k = cfg.constants;
    return k.G * cfg.M * cfg.M * cfg.t / (k.hbar * d);
}

/// Light-cone gated point-particle amplitude i (G M^2/(hbar c)) (ct/d - 1) theta(ct - d).
inline cplx gamma2_relativistic_point(const ExperimentConfig& cfg, BranchPair p) {
    const auto& k = cfg.constants;
    const double d = cfg.distance(p);
    const double ct = k.c * cfg.t;
    if (!(ct > d)) return {0.0, 0.0};
    return I * (k.G * cfg.M * cfg.M / (k.hbar * k.c)) * (ct / d - 1.0);
}

/// Same amplitude for uniform spheres: the light-cone kernel averaged over both balls.
inline ComplexQuadratureResult gamma2_relativistic_sphere(const ExperimentConfig& cfg, BranchPair p,
                                                          const MonteCarloOptions& opt = {}) {
    const auto& k = cfg.constants;
    const double d = cfg.distance(p);
    if (!(d > 2.0 * cfg.R)) throw std::domain_error("gamma2_relativistic_sphere: spheres overlap");
    const double ct = k.c * cfg.t;
    if (ct <= d - 2.0 * cfg.R) return {{0.0, 0.0}, 0.0, 0, QuadratureMethod::MonteCarlo};

    const auto b1 = sphere_of(cfg, 1, p.i);
    const auto b2 = sphere_of(cfg, 2, p.j);
    const auto res = mc_integrate_two_balls(
        [ct](const Vec3& x, const Vec3& y) {
            const double r = (x - y).norm();
            return r < ct ? ct / r - 1.0 : 0.0;
        },
        b1, b2, opt);
    const double V = cfg.volume();
    const double pref = k.G * cfg.M * cfg.M / (k.hbar * k.c * V * V);
    return {I * (pref * res.value), pref * res.std_error, res.n_samples, res.method};
}

// ---------------------------------------------------------------------------
// Classical-gravity local phases

/// phi_ki = (M t / (hbar V)) int theta_ki(x) Phi(x) d^3x.
inline QuadratureResult<double> local_phase(const ExperimentConfig& cfg, int kappa, Branch b,
                                            const PotentialModel& model, const QuadratureOptions& q = {}) {
    const auto ball = sphere_of(cfg, kappa, b);
    auto f = [&](const Vec3& x) { return potential_value(x, model, cfg); };
    QuadratureResult<double> raw = q.method == QuadratureMethod::MonteCarlo ? mc_integrate_ball(f, ball, q.mc)
                                                                             : product_integrate_ball(f, ball);
    const double pref = cfg.M * cfg.t / (cfg.constants.hbar * cfg.volume());
    return {pref * raw.value, std::abs(pref) * raw.std_error, raw.n_samples, raw.method};
}

/// phi_{kappa i} for both objects and both branches.
struct LocalPhases {
    double phi1L = 0.0;
    double phi1R = 0.0;
    double phi2L = 0.0;
    double phi2R = 0.0;

    double object1(Branch b) const { return b == Branch::L ? phi1L : phi1R; }
    double object2(Branch b) const { return b == Branch::L ? phi2L : phi2R; }
};

inline LocalPhases compute_local_phases(const ExperimentConfig& cfg, const PotentialModel& model,
                                        const QuadratureOptions& q = {}) {
    LocalPhases lp;
    lp.phi1L = local_phase(cfg, 1, Branch::L, model, q).value;
    lp.phi1R = local_phase(cfg, 1, Branch::R, model, q).value;
    lp.phi2L = local_phase(cfg, 2, Branch::L, model, q).value;
    lp.phi2R = local_phase(cfg, 2, Branch::R, model, q).value;
    return lp;
}

/// beta^(2)_ij = -phi_1i phi_2j.
inline cplx beta2(const LocalPhases& lp, BranchPair p) { return {-lp.object1(p.i) * lp.object2(p.j), 0.0}; }

/// alpha_ij = 1 - i(phi_1i + phi_2j) - (phi_1i + phi_2j)^2 / 2.
inline AmplitudeSet alpha_cg_second_order(const LocalPhases& lp) {
    AmplitudeSet a;
    a.model = GravityModel::CGSemiClassical;
    a.order = 2;
    for (auto p : all_pairs) {
        const double s = lp.object1(p.i) + lp.object2(p.j);
        a[p] = cplx{1.0 - 0.5 * s * s, -s};
        a.perturbative_ok = a.perturbative_ok && std::abs(s) <= 1.0;
    }
    return a;
}

/// Resummed local phases exp(-i(phi_1i + phi_2j)); a product of per-object factors.
inline AmplitudeSet alpha_cg_exponentiated(const LocalPhases& lp) {
    AmplitudeSet a;
    a.model = GravityModel::CGSemiClassical;
    a.order = 2;
    a.exponentiated = true;
    for (auto p : all_pairs) a[p] = std::exp(-I * (lp.object1(p.i) + lp.object2(p.j)));
    return a;
}

// ---------------------------------------------------------------------------
// Fourth-order virtual-matter amplitudes

namespace detail {
/// G^2 m^2 M^3 R t / (hbar^3 d_ij), the common magnitude of the fourth-order closed forms.
inline double virtual_matter_scale(const ExperimentConfig& cfg, BranchPair p) {
    const auto& k = cfg.constants;
    const double m = cfg.material.atom_mass;
    const double d = cfg.distance(p);
    const double hb3 = k.hbar * k.hbar * k.hbar;
    return k.G * k.G * m * m * cfg.M * cfg.M * cfg.M * cfg.R * cfg.t / (hb3 * d);
}
} // namespace detail

/// beta^(4)_ij = ((6/25) i G^2 m^2 M^3 R t / (hbar^3 d_ij))^2; valid for dx, d_ij >> R.
inline cplx beta4_closed(const ExperimentConfig& cfg, BranchPair p) {
    const cplx root = I * (6.0 / 25.0) * detail::virtual_matter_scale(cfg, p);
    return root * root;
}

/// kappa^(4)_ij = ((24/25) i G^2 m^2 M^3 R t / (hbar^3 d_ij))^2 = 16 beta^(4)_ij.
inline cplx kappa4_closed(const ExperimentConfig& cfg, BranchPair p) {
    const cplx root = I * (24.0 / 25.0) * detail::virtual_matter_scale(cfg, p);
    return root * root;
}

/// vartheta = |beta^(4)_RL|.
inline double vartheta(const ExperimentConfig& cfg) { return std::abs(beta4_closed(cfg, RL)); }

/// (M^2 t^2 m^4 / (4 pi^2 hbar^6 V^2)) (i int int Phi(x) Phi(y) theta_1i theta_2j / |x - y|)^2
/// with the six-dimensional integral done by Monte Carlo.
inline ComplexQuadratureResult beta4_numeric(const ExperimentConfig& cfg, BranchPair p, const PotentialModel& model,
                                             const MonteCarloOptions& opt = {}) {
    if (!(cfg.distance(p) > 2.0 * cfg.R)) throw std::domain_error("beta4_numeric: spheres overlap");
    const auto b1 = sphere_of(cfg, 1, p.i);
    const auto b2 = sphere_of(cfg, 2, p.j);
    const auto J = mc_integrate_two_balls(
        [&](const Vec3& x, const Vec3& y) {
            return potential_value(x, model, cfg) * potential_value(y, model, cfg) / (x - y).norm();
        },
        b1, b2, opt);
    const auto& k = cfg.constants;
    const double m = cfg.material.atom_mass;
    const double root_pref =
        cfg.M * cfg.t * m * m / (2.0 * std::numbers::pi * k.hbar * k.hbar * k.hbar * cfg.volume());
    const double s = root_pref * J.value;
    const double ds = std::abs(root_pref) * J.std_error;
    return {cplx{-s * s, 0.0}, 2.0 * std::abs(s) * ds, J.n_samples, J.method};
}

/// Quantum-gravity counterpart: same integral with the branch-superposed potential.
inline ComplexQuadratureResult kappa4_numeric(const ExperimentConfig& cfg, BranchPair p,
                                              const MonteCarloOptions& opt = {}) {
    return beta4_numeric(cfg, p, potential::QGBranch{p}, opt);
}

// ---------------------------------------------------------------------------
// Kernels and auxiliary scales

/// Spatial kernel of the massive propagator at frequency k0 and mass scale gamma.
/// |k0| < gamma decays like Yukawa, |k0| > gamma oscillates, |k0| = gamma gives 1/(4 pi r).
inline cplx propagator_kernel_f(double k0, double r, double gamma) {
    if (!(r > 0.0)) throw std::domain_error("propagator_kernel_f: r must be > 0");
    const double base = 1.0 / (4.0 * std::numbers::pi * r);
    const double a = std::abs(k0);
    const double g = std::abs(gamma);
    if (a < g) return base * std::exp(-r * std::sqrt((g - a) * (g + a)));
    if (a > g) return base * std::exp(I * (r * std::sqrt((a - g) * (a + g))));
    return {base, 0.0};
}

/// Natural log of the e^{-2 m c d_ij / hbar} suppression of the gravity-free process.
inline double free_suppression_log(const ExperimentConfig& cfg, BranchPair p) {
    const auto& k = cfg.constants;
    return -2.0 * cfg.material.atom_mass * k.c * cfg.distance(p) / k.hbar;
}

/// raw * dx^2 / d_RL^2, the relevant parameter when dx << d_RL.
inline double effective_parameter(double raw, const ExperimentConfig& cfg) {
    if (!(cfg.d_rl > 0.0)) throw std::domain_error("effective_parameter: d_RL must be > 0");
    return raw * cfg.dx * cfg.dx / (cfg.d_rl * cfg.d_rl);
}

// ---------------------------------------------------------------------------

struct AmplitudeOptions {
    bool exponentiate_qg = false;      // resum the QG phase into e^{i phi_ij}
    bool numeric_fourth_order = false; // use Monte Carlo instead of the closed forms
    MonteCarloOptions mc{};
    QuadratureOptions local_phase_quadrature{QuadratureMethod::NestedProductRule, {}};
};

/// Branch amplitudes of one gravity model at its characteristic Dyson order.
///
/// CG: local phases are resummed (they are local unitaries and carry no
/// entanglement) and multiplied by (1 + beta^(4)_ij).
/// QG with virtual matter: 1 + i phi_ij + kappa^(4)_ij.
inline AmplitudeSet compute_amplitudes(const ExperimentConfig& cfg, GravityModel model,
                                       const AmplitudeOptions& opt = {}) {
    AmplitudeSet a;
    a.model = model;
    auto flag = [&](cplx contribution) { a.perturbative_ok = a.perturbative_ok && std::abs(contribution) <= 1.0; };

    switch (model) {
    case GravityModel::QGNonRel:
        a.order = 2;
        a.exponentiated = opt.exponentiate_qg;
        for (auto p : all_pairs) {
            const double phi = phase_nonrel(cfg, p);
            a[p] = opt.exponentiate_qg ? std::exp(I * phi) : 1.0 + I * phi;
            if (!opt.exponentiate_qg) flag(I * phi);
        }
        break;
    case GravityModel::QGRelativisticPoint:
        a.order = 2;
        for (auto p : all_pairs) {
            const cplx g = gamma2_relativistic_point(cfg, p);
            a[p] = 1.0 + g;
            flag(g);
        }
        break;
    case GravityModel::QGRelativisticSphere:
        a.order = 2;
        for (auto p : all_pairs) {
            const cplx g = gamma2_relativistic_sphere(cfg, p, opt.mc).value;
            a[p] = 1.0 + g;
            flag(g);
        }
        break;
    case GravityModel::CGSemiClassical: {
        a.order = 4;
        a.exponentiated = true;
        const auto lp = compute_local_phases(cfg, potential::SemiClassicalMean{}, opt.local_phase_quadrature);
        for (auto p : all_pairs) {
            const cplx b4 = opt.numeric_fourth_order
                                ? beta4_numeric(cfg, p, potential::SemiClassicalMean{}, opt.mc).value
                                : beta4_closed(cfg, p);
            a[p] = std::exp(-I * (lp.object1(p.i) + lp.object2(p.j))) * (1.0 + b4);
            flag(b4);
        }
        break;
    }
    case GravityModel::QGVirtualMatter:
        a.order = 4;
        for (auto p : all_pairs) {
            const double phi = phase_nonrel(cfg, p);
            const cplx k4 = opt.numeric_fourth_order ? kappa4_numeric(cfg, p, opt.mc).value : kappa4_closed(cfg, p);
            a[p] = 1.0 + I * phi + k4;
            flag(I * phi);
            flag(k4);
        }
        break;
    case GravityModel::DPStochastic:
        throw std::invalid_argument("the DP model yields a mixed state, not an amplitude set; use dp_density_matrix");
    }
    return a;
}

} // namespace gravent
