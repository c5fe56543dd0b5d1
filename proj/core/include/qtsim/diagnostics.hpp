#ifndef QTSIM_DIAGNOSTICS_HPP
#define QTSIM_DIAGNOSTICS_HPP

#include "qtsim/state.hpp"

#include <utility>
#include <vector>

namespace qtsim {

struct NegativityReport {
    struct Point {
        double x; // nm
        double q; // 1/nm
    };
    double time = 0.0;            // fs
    std::vector<Point> violations; // Q < -tol, sorted by x
    Point global_min{0.0, 0.0};
    bool empty() const { return violations.empty(); }
};

struct NormDecomposition {
    double positive;
    double negative;
    double total;
};

NegativityReport scan_negativity(const ChargeDensity& q, double tol,
                                 double time = 0.0);

NormDecomposition norm_decomposition(const ChargeDensity& q);

/// R = integral of Q for x < divider, T = the rest; R + T = trace.
std::pair<double, double> transmission_reflection(const ChargeDensity& q,
                                                  double divider);

/// Probability mass within `margin` of either box edge.
double boundary_leak(const PureState& psi, double margin);
double boundary_leak(const ChargeDensity& q, double margin);

} // namespace qtsim

#endif
