#pragma once

#include "gravent/config.hpp"
#include "gravent/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <variant>
#include <vector>

namespace gravent {

/// 1 iff |x - centre| <= R (the surface counts as inside).
inline int sphere_indicator(const Vec3& x, const SphereSource& s) {
    return (x - s.center).squaredNorm() <= s.R * s.R ? 1 : 0;
}

/// Newtonian potential of a uniform sphere; J/kg.
inline double sphere_potential(const Vec3& x, const SphereSource& s, double G) {
    const double r = (x - s.center).norm();
    if (r <= s.R) {
        return -G * s.M * (1.5 / s.R - r * r / (2.0 * s.R * s.R * s.R));
    }
    return -G * s.M / r;
}

inline double sphere_potential(const Vec3& x, const SphereSource& s) {
    return sphere_potential(x, s, PhysicalConstants{}.G);
}

namespace potential {

/// Mean-field potential: each object contributes the average over its branches.
struct SemiClassicalMean {};

/// Branch-superposed potential of the joint branch (i, j): Phi_1i + Phi_2j.
struct QGBranch {
    BranchPair pair{};
};

struct SingleSphere {
    int kappa = 1;
    Branch branch = Branch::L;
};

struct Custom {
    std::function<double(const Vec3&)> fn;
};

} // namespace potential

using PotentialModel =
    std::variant<potential::SemiClassicalMean, potential::QGBranch, potential::SingleSphere, potential::Custom>;

inline double potential_value(const Vec3& x, const PotentialModel& model, const ExperimentConfig& cfg) {
    const double G = cfg.constants.G;
    auto phi = [&](int kappa, Branch b) { return sphere_potential(x, sphere_of(cfg, kappa, b), G); };
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, potential::SemiClassicalMean>) {
                const double c1 = 0.5 * (phi(1, Branch::L) + phi(1, Branch::R));
                const double c2 = 0.5 * (phi(2, Branch::L) + phi(2, Branch::R));
                return c1 + c2;
            } else if constexpr (std::is_same_v<T, potential::QGBranch>) {
                return phi(1, m.pair.i) + phi(2, m.pair.j);
            } else if constexpr (std::is_same_v<T, potential::SingleSphere>) {
                return phi(m.kappa, m.branch);
            } else {
                if (!m.fn) throw std::invalid_argument("custom potential has no callable");
                return m.fn(x);
            }
        },
        model);
}

struct MultipoleOptions {
    double rel_tol = 1e-10;
    /// Points where rho_n is not smooth (e.g. the edge of a ball).
    std::vector<double> breakpoints{};
    /// rho_n vanishes beyond this radius; infinity if not compactly supported.
    double support_radius = std::numeric_limits<double>::infinity();
};

/// Radial coefficient Phi_n(x) of the axially symmetric potential
///   Phi(x, theta) = sum_n Phi_n(x) P_n(cos theta),
/// in the attractive sign convention (negative for positive density).
template <class Rho>
double multipole_phi_n(int n, Rho&& rho_n, double x, const MultipoleOptions& opt = {}) {
    if (n < 0) throw std::invalid_argument("multipole_phi_n: n must be >= 0");
    if (!(x > 0.0)) throw std::invalid_argument("multipole_phi_n: radius must be > 0");

    const double np = n + 0.5;
    auto inner_f = [&](double y) { return std::pow(y, n + 2) * rho_n(y); };
    auto outer_f = [&](double y) { return std::pow(y, 1 - n) * rho_n(y); };

    auto piecewise = [&](auto&& f, double a, double b, const char* what) {
        std::vector<double> cuts{a};
        for (double p : opt.breakpoints) {
            if (p > a && p < b) cuts.push_back(p);
        }
        std::sort(cuts.begin() + 1, cuts.end());
        cuts.push_back(b);
        double sum = 0.0;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            if (cuts[k + 1] > cuts[k]) sum += adaptive_integrate(f, cuts[k], cuts[k + 1], opt.rel_tol, what);
        }
        return sum;
    };

    const double inner = piecewise(inner_f, 0.0, x, "multipole_phi_n inner integral");
    double outer = 0.0;
    if (x < opt.support_radius) {
        outer = piecewise(outer_f, x, opt.support_radius, "multipole_phi_n outer integral");
    }
    return -2.0 * std::numbers::pi / (np * std::pow(x, n + 1)) * inner
           - 2.0 * std::numbers::pi * std::pow(x, n) / np * outer;
}

/// n = 0 closed form of
///   I = int d^3x int d^3y  theta(R - |x - D|) theta(R - |y|) / (|x| |y - x| |y - d|)
/// with |D| = dx and |d| = d; the dropped n >= 1 terms are O(R/d).
inline double double_sphere_coulomb_closed(double R, double dx, double d) {
    if (!(R > 0.0) || !(d > 0.0)) throw std::domain_error("double_sphere_coulomb_closed: R and d must be > 0");
    if (!(dx > R)) throw std::domain_error("double_sphere_coulomb_closed: requires dx > R");
    const double pi2 = std::numbers::pi * std::numbers::pi;
    return 8.0 * pi2 * R * R * R / (3.0 * d)
           * (R + (R * R - dx * dx) / (2.0 * dx) * std::log((dx + R) / (dx - R)));
}

/// Geometry of the double-sphere integral: y-ball at the origin, singular point
/// at d along +z, x-ball centred at distance dx making angle acos(cos_angle)
/// with +z. The collinear experiment corresponds to cos_angle = -1.
struct DoubleSphereGeometry {
    double R = 1.0;
    double dx = 3.0;
    double d = 20.0;
    double cos_angle = -1.0;

    Vec3 singular_point() const { return {0.0, 0.0, d}; }
    Vec3 x_center() const {
        const double s = std::sqrt(std::max(0.0, 1.0 - cos_angle * cos_angle));
        return dx * Vec3(s, 0.0, cos_angle);
    }
};

/// Brute-force Monte Carlo of the defining six-dimensional integral.
inline QuadratureResult<double> double_sphere_coulomb_mc(const DoubleSphereGeometry& g,
                                                         const MonteCarloOptions& opt = {}) {
    const Vec3 dvec = g.singular_point();
    const SphereSource xball{g.x_center(), g.R, 1.0};
    const SphereSource yball{Vec3::Zero(), g.R, 1.0};
    return mc_integrate_two_balls(
        [&](const Vec3& x, const Vec3& y) { return 1.0 / (x.norm() * (y - x).norm() * (y - dvec).norm()); },
        xball, yball, opt);
}

/// Legendre series of the same integral truncated after `n_terms` terms. The
/// radial coefficients come from multipole_phi_n; the remaining integral over
/// the x-ball uses the nested product rule. Requires dx > 2R so the x-ball lies
/// outside the y-ball.
inline double double_sphere_coulomb_series(const DoubleSphereGeometry& g, int n_terms) {
    if (!(g.dx > 2.0 * g.R)) throw std::domain_error("double_sphere_coulomb_series: requires dx > 2R");
    if (n_terms < 1) throw std::invalid_argument("double_sphere_coulomb_series: n_terms must be >= 1");
    const Vec3 axis = g.singular_point().normalized();
    const SphereSource xball{g.x_center(), g.R, 1.0};

    MultipoleOptions mopt;
    mopt.breakpoints = {g.R};
    mopt.support_radius = g.R;

    double total = 0.0;
    for (int n = 0; n < n_terms; ++n) {
        auto rho_n = [&](double y) { return y <= g.R ? std::pow(y, n) / std::pow(g.d, n + 1) : 0.0; };
        auto term = [&](const Vec3& x) {
            const double r = x.norm();
            const double ct = x.dot(axis) / r;
            // Sign flip: the integral uses the repulsive convention int rho / |y - x|.
            return -multipole_phi_n(n, rho_n, r, mopt) * std::legendre(n, ct) / r;
        };
        total += product_integrate_ball(term, xball).value;
    }
    return total;
}

/// Volume of the intersection of two balls of equal radius R at centre distance d.
inline double lens_volume(double R, double d) {
    if (d >= 2.0 * R) return 0.0;
    if (d <= 0.0) return ball_volume(R);
    return std::numbers::pi * (4.0 * R + d) * (2.0 * R - d) * (2.0 * R - d) / 12.0;
}

/// Square of the spatial overlap of the two normalised sphere wavefunctions of
/// branch pair (i, j). Exactly zero whenever d_ij >= 2R.
inline double overlap_integral(const ExperimentConfig& cfg, BranchPair p) {
    const double single = lens_volume(cfg.R, cfg.distance(p)) / cfg.volume();
    return single * single;
}

} // namespace gravent
