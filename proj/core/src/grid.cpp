#include "qtsim/grid.hpp"
#include "qtsim/errors.hpp"

#include <numbers>
#include <string>

namespace qtsim {

SpatialGrid make_grid(double x_min, double x_max, int n_points) {
    if (n_points < 2)
        throw ConfigError("make_grid: n_points must be >= 2, got " +
                          std::to_string(n_points));
    if (!(x_max > x_min))
        throw ConfigError("make_grid: x_max must exceed x_min");
    SpatialGrid g;
    g.x_min = x_min;
    g.dx = (x_max - x_min) / (n_points - 1);
    g.n_points = n_points;
    return g;
}

MomentumGrid conjugate_momentum_grid(const SpatialGrid& g) {
    if (g.n_points < 2 || !(g.dx > 0.0))
        throw ConfigError("conjugate_momentum_grid: invalid spatial grid");
    MomentumGrid kg;
    kg.n_points = g.n_points;
    kg.dk = 2.0 * std::numbers::pi / (g.n_points * g.dx);
    kg.k_min = -(g.n_points / 2) * kg.dk;
    return kg;
}

} // namespace qtsim
