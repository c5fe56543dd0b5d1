#ifndef QTSIM_GRID_HPP
#define QTSIM_GRID_HPP

#include <cstddef>

namespace qtsim {

/// Unit system: lengths in nm, times in fs, energies in eV.
/// Wave vectors are in nm^-1 and masses in eV*fs^2/nm^2.
namespace units {

/// Reduced Planck constant, eV*fs.
inline constexpr double hbar = 0.6582119569;

/// Free electron rest mass, eV*fs^2/nm^2  (m0*c^2 = 510998.95 eV,
/// c = 299.792458 nm/fs).
inline constexpr double electron_rest_mass =
    510998.95 / (299.792458 * 299.792458);

/// hbar^2/(2*m0) in eV*nm^2; must come out to ~0.0381 for the constant
/// set to be consistent.
inline constexpr double hbar_sq_over_2m0 =
    hbar * hbar / (2.0 * electron_rest_mass);

} // namespace units

/// Uniform 1D position grid, nodes x_j = x_min + j*dx for j in [0, n_points).
/// Hard-wall box: the wave function is pinned to zero at both ends.
struct SpatialGrid {
    double x_min = 0.0;   ///< nm
    double dx = 0.0;      ///< nm
    int n_points = 0;

    double x(int j) const { return x_min + j * dx; }
    double x_max() const { return x_min + (n_points - 1) * dx; }
    double span() const { return (n_points - 1) * dx; }

    bool operator==(const SpatialGrid&) const = default;
};

/// Uniform wave-vector grid conjugate to a SpatialGrid, symmetric about
/// zero: k_j = k_min + j*dk with k_min = -(n_points/2)*dk and
/// dk = 2*pi/(n_points*dx).
struct MomentumGrid {
    double k_min = 0.0;   ///< nm^-1
    double dk = 0.0;      ///< nm^-1
    int n_points = 0;

    double k(int j) const { return k_min + j * dk; }
    double k_max() const { return k_min + (n_points - 1) * dk; }

    bool operator==(const MomentumGrid&) const = default;
};

/// Builds the closed simulation box [x_min, x_max] with n_points nodes.
/// dx = (x_max - x_min)/(n_points - 1). Throws ConfigError on a
/// non-positive span or n_points < 2.
SpatialGrid make_grid(double x_min, double x_max, int n_points);

/// Wave-vector grid conjugate to g: same point count,
/// dk = 2*pi/(n*dx), centered on zero.
MomentumGrid conjugate_momentum_grid(const SpatialGrid& g);

} // namespace qtsim

#endif
