#include "qtsim/potential.hpp"
#include "qtsim/errors.hpp"

#include <cmath>

namespace qtsim {

Potential double_barrier(const SpatialGrid& g, double center,
                         double barrier_width, double height,
                         double well_width) {
    if (!(barrier_width > 0.0) || well_width < 0.0)
        throw ConfigError("double_barrier: non-positive feature size");
    const double half_well = 0.5 * well_width;
    const double outer = half_well + barrier_width;
    if (center - outer < g.x_min || center + outer > g.x_max())
        throw ConfigError("double_barrier: features outside the box");

    Potential v;
    v.grid = g;
    v.values.assign(g.n_points, 0.0);
    // Membership by |x - center|, inner edge included, outer edge excluded;
    // the small snap tolerance keeps mirror nodes consistent despite
    // last-ulp differences in x(j) - center.
    const double eps = 1e-9;
    for (int j = 0; j < g.n_points; ++j) {
        const double r = std::abs(g.x(j) - center);
        if (r >= half_well - eps && r < outer - eps)
            v.values[j] = height;
    }
    return v;
}

Potential free_potential(const SpatialGrid& g) {
    Potential v;
    v.grid = g;
    v.values.assign(g.n_points, 0.0);
    return v;
}

} // namespace qtsim
