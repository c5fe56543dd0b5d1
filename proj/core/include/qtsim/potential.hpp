#ifndef QTSIM_POTENTIAL_HPP
#define QTSIM_POTENTIAL_HPP

#include "qtsim/grid.hpp"

#include <vector>

namespace qtsim {

/// Static potential-energy profile V(x), eV.
struct Potential {
    SpatialGrid grid;
    std::vector<double> values;
};

/// Symmetric double barrier: two rectangular barriers of the given width
/// and height whose inner edges are well_width apart, centered on
/// `center`. A grid cell takes the value of the region containing its
/// center (no sub-cell smoothing).
Potential double_barrier(const SpatialGrid& g, double center,
                         double barrier_width, double height,
                         double well_width);

/// Identically zero potential (free evolution / oracle runs).
Potential free_potential(const SpatialGrid& g);

} // namespace qtsim

#endif
