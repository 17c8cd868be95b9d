#pragma once

#include <stdexcept>
#include <string>

namespace gravent {

/// SI values of the constants used throughout. Defaults are CODATA 2018.
struct PhysicalConstants {
    double G = 6.67430e-11;       // m^3 kg^-1 s^-2
    double hbar = 1.054571817e-34; // J s
    double c = 299792458.0;       // m s^-1

    void validate() const {
        if (!(G > 0.0) || !(hbar > 0.0) || !(c > 0.0)) {
            throw std::domain_error("physical constants must be strictly positive");
        }
    }
};

/// Toy unit system for tests: G = hbar = c = 1.
inline constexpr PhysicalConstants natural_units() { return {1.0, 1.0, 1.0}; }

inline constexpr double atomic_mass_unit = 1.66053906660e-27; // kg

struct Material {
    std::string name;
    double atom_mass = 0.0; // kg, mass of a single constituent atom
    double density = 0.0;   // kg m^-3

    void validate() const {
        if (!(atom_mass > 0.0)) throw std::domain_error("material atom_mass must be > 0");
        if (!(density > 0.0)) throw std::domain_error("material density must be > 0");
    }
};

// Isotope and density are not pinned by anything upstream; these are defaults only.
inline Material ytterbium() { return {"ytterbium", 173.0 * atomic_mass_unit, 6900.0}; }

inline constexpr double planck_mass = 2.176435e-8; // kg

} // namespace gravent
