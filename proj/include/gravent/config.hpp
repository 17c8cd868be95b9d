#pragma once

#include "gravent/constants.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace gravent {

using Vec3 = Eigen::Vector3d;

enum class Branch { L = 0, R = 1 };

inline constexpr std::array<Branch, 2> branches{Branch::L, Branch::R};

inline const char* to_string(Branch b) { return b == Branch::L ? "L" : "R"; }

/// Joint branch (i of object 1, j of object 2). Basis index follows (LL, LR, RL, RR).
struct BranchPair {
    Branch i = Branch::L;
    Branch j = Branch::L;

    constexpr int index() const { return 2 * static_cast<int>(i) + static_cast<int>(j); }
    static constexpr BranchPair from_index(int k) {
        return {static_cast<Branch>(k / 2), static_cast<Branch>(k % 2)};
    }
    std::string name() const { return std::string(to_string(i)) + to_string(j); }
    friend constexpr bool operator==(BranchPair, BranchPair) = default;
};

inline constexpr BranchPair LL{Branch::L, Branch::L};
inline constexpr BranchPair LR{Branch::L, Branch::R};
inline constexpr BranchPair RL{Branch::R, Branch::L};
inline constexpr BranchPair RR{Branch::R, Branch::R};
inline constexpr std::array<BranchPair, 4> all_pairs{LL, LR, RL, RR};

inline BranchPair parse_pair(const std::string& s) {
    for (auto p : all_pairs) {
        if (p.name() == s) return p;
    }
    throw std::invalid_argument("unknown branch pair '" + s + "' (expected LL, LR, RL or RR)");
}

/// Adjacent interferometers on the x axis; d_rl is the closest approach.
struct CollinearGeometry {};

struct ExplicitPositions {
    Vec3 x1L = Vec3::Zero();
    Vec3 x1R = Vec3::Zero();
    Vec3 x2L = Vec3::Zero();
    Vec3 x2R = Vec3::Zero();
};

using Geometry = std::variant<CollinearGeometry, ExplicitPositions>;

/// R = (3M / (4 pi rho))^(1/3).
inline double derive_radius(double mass, double density) {
    if (!(mass > 0.0) || !(density > 0.0)) {
        throw std::domain_error("derive_radius: mass and density must be > 0");
    }
    return std::cbrt(3.0 * mass / (4.0 * std::numbers::pi * density));
}

inline double ball_volume(double radius) { return 4.0 * std::numbers::pi * radius * radius * radius / 3.0; }

struct ExperimentConfig {
    double M = 0.0;     // mass of each sphere, kg
    double t = 0.0;     // interaction time, s
    double dx = 0.0;    // superposition separation, m
    double d_rl = 0.0;  // closest branch separation, m (collinear geometry)
    double R = 0.0;     // sphere radius, m
    Material material = ytterbium();
    Geometry geometry = CollinearGeometry{};
    PhysicalConstants constants{};

    double volume() const { return ball_volume(R); }

    /// Centre of object `kappa` (1 or 2) in branch `b`.
    Vec3 center(int kappa, Branch b) const {
        if (kappa != 1 && kappa != 2) throw std::invalid_argument("object index must be 1 or 2");
        if (const auto* pos = std::get_if<ExplicitPositions>(&geometry)) {
            if (kappa == 1) return b == Branch::L ? pos->x1L : pos->x1R;
            return b == Branch::L ? pos->x2L : pos->x2R;
        }
        const Vec3 e = Vec3::UnitX();
        const double offset = kappa == 1 ? (b == Branch::L ? 0.0 : dx)
                                         : (b == Branch::L ? dx + d_rl : 2.0 * dx + d_rl);
        return offset * e;
    }

    double distance(BranchPair p) const { return (center(1, p.i) - center(2, p.j)).norm(); }

    /// Separation between the two branches of one object.
    double branch_separation(int kappa) const {
        return (center(kappa, Branch::L) - center(kappa, Branch::R)).norm();
    }

    double min_distance() const {
        double d = distance(LL);
        for (auto p : all_pairs) d = std::min(d, distance(p));
        return d;
    }
};

/// Collinear config with R derived from the material density.
inline ExperimentConfig make_collinear(double mass, double time, double dx, double d_rl,
                                       const Material& material = ytterbium()) {
    ExperimentConfig cfg;
    cfg.M = mass;
    cfg.t = time;
    cfg.dx = dx;
    cfg.d_rl = d_rl;
    cfg.material = material;
    cfg.R = derive_radius(mass, material.density);
    return cfg;
}

/// Collinear config with d_RL = dsep_over_r * R and dx = dx_over_r * R.
inline ExperimentConfig make_scaled(double mass, double time, double dsep_over_r, double dx_over_r,
                                    const Material& material = ytterbium()) {
    auto cfg = make_collinear(mass, time, 0.0, 0.0, material);
    cfg.d_rl = dsep_over_r * cfg.R;
    cfg.dx = dx_over_r * cfg.R;
    return cfg;
}

enum class Check { Pass, Warn, Fail };

struct ValidityFlag {
    std::string name;
    Check status = Check::Pass;
    std::string detail;
};

struct ValidityReport {
    std::vector<ValidityFlag> flags;

    const ValidityFlag* find(const std::string& name) const {
        for (const auto& f : flags) {
            if (f.name == name) return &f;
        }
        return nullptr;
    }
    bool ok(const std::string& name) const {
        const auto* f = find(name);
        return f != nullptr && f->status == Check::Pass;
    }
    bool fatal() const {
        for (const auto& f : flags) {
            if (f.status == Check::Fail) return true;
        }
        return false;
    }
};

inline const char* to_string(Check c) {
    switch (c) {
    case Check::Pass: return "pass";
    case Check::Warn: return "warn";
    case Check::Fail: return "fail";
    }
    return "?";
}

/// Reduced Compton wavelength hbar / (m c) of one constituent atom.
inline double compton_length(const ExperimentConfig& cfg) {
    return cfg.constants.hbar / (cfg.material.atom_mass * cfg.constants.c);
}

/// Never throws. Perturbative flags are only added when the caller has the
/// amplitude magnitudes (pass negative values to skip them).
inline ValidityReport validate_config(const ExperimentConfig& cfg, double phi = -1.0,
                                      double vartheta = -1.0) {
    ValidityReport rep;
    auto add = [&](std::string name, bool good, Check bad, std::string detail) {
        rep.flags.push_back({std::move(name), good ? Check::Pass : bad, std::move(detail)});
    };

    const bool params_ok = cfg.M > 0.0 && cfg.R > 0.0 && cfg.t >= 0.0 && std::isfinite(cfg.M)
                           && std::isfinite(cfg.R) && std::isfinite(cfg.t);
    add("parameters", params_ok, Check::Fail, "M > 0, R > 0, t >= 0");

    // Distinct objects must never overlap; the two branches of one object may.
    double dmin = 0.0;
    try {
        dmin = cfg.min_distance();
    } catch (...) {
        dmin = 0.0;
    }
    std::ostringstream os;
    os << "min d_ij = " << dmin << " m vs 2R = " << 2.0 * cfg.R << " m";
    add("non_overlap", dmin > 2.0 * cfg.R, Check::Fail, os.str());

    bool wavepacket = false;
    if (cfg.material.atom_mass > 0.0 && cfg.constants.c > 0.0) {
        wavepacket = cfg.R >= 100.0 * compton_length(cfg);
    }
    add("non_relativistic_wavepacket", wavepacket, Check::Warn, "R >= 100 hbar/(m c)");

    if (phi >= 0.0) add("perturbative_phi", phi < 1.0, Check::Warn, "phi < 1");
    if (vartheta >= 0.0) add("perturbative_vartheta", vartheta < 1.0, Check::Warn, "vartheta < 1");
    return rep;
}

} // namespace gravent
