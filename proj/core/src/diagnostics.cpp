#include "qtsim/diagnostics.hpp"
#include "qtsim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qtsim {

NegativityReport scan_negativity(const ChargeDensity& q, double tol,
                                 double time) {
    if (tol < 0.0)
        throw PreconditionError("scan_negativity: tol must be non-negative");
    NegativityReport r;
    r.time = time;
    r.global_min = {q.grid.x(0), q.values[0]};
    for (int j = 0; j < q.grid.n_points; ++j) {
        const double x = q.grid.x(j);
        const double v = q.values[j];
        if (v < r.global_min.q) r.global_min = {x, v};
        if (v < -tol) r.violations.push_back({x, v});
    }
    return r;
}

NormDecomposition norm_decomposition(const ChargeDensity& q) {
    double pos = 0.0, neg = 0.0;
    for (double v : q.values) (v >= 0.0 ? pos : neg) += v;
    return {pos * q.grid.dx, neg * q.grid.dx, (pos + neg) * q.grid.dx};
}

std::pair<double, double> transmission_reflection(const ChargeDensity& q,
                                                  double divider) {
    if (divider < q.grid.x_min || divider > q.grid.x_max())
        throw PreconditionError("transmission_reflection: divider outside box");
    double r = 0.0, t = 0.0;
    for (int j = 0; j < q.grid.n_points; ++j)
        (q.grid.x(j) < divider ? r : t) += q.values[j];
    return {r * q.grid.dx, t * q.grid.dx};
}

namespace {

template <class Value>
double edge_sum(const SpatialGrid& g, const std::vector<Value>& vals,
                double margin, double (*density)(const Value&)) {
    if (!(margin < g.span() / 2.0))
        throw PreconditionError("boundary_leak: margin must be under half the box");
    double s = 0.0;
    for (int j = 0; j < g.n_points; ++j) {
        const double x = g.x(j);
        if (x - g.x_min < margin || g.x_max() - x < margin)
            s += density(vals[j]);
    }
    return s * g.dx;
}

} // namespace

double boundary_leak(const PureState& psi, double margin) {
    return edge_sum<cdouble>(psi.grid, psi.amplitudes, margin,
                             [](const cdouble& a) { return std::norm(a); });
}

double boundary_leak(const ChargeDensity& q, double margin) {
    return edge_sum<double>(q.grid, q.values, margin,
                            [](const double& v) { return v; });
}

} // namespace qtsim
