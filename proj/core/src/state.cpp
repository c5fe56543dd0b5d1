#include "qtsim/state.hpp"
#include "qtsim/errors.hpp"

#include <cmath>
#include <string>

namespace qtsim {

double SignedEnsemble::total_weight() const {
    double s = 0.0;
    for (const auto& t : terms) s += t.weight;
    return s;
}

double norm_squared(const PureState& psi) {
    double s = 0.0;
    for (const auto& a : psi.amplitudes) s += std::norm(a);
    return s * psi.grid.dx;
}

cdouble inner_product(const PureState& a, const PureState& b) {
    if (a.grid != b.grid)
        throw ShapeError("inner_product: states on different grids");
    cdouble s = 0.0;
    for (int j = 0; j < a.grid.n_points; ++j)
        s += std::conj(a.amplitudes[j]) * b.amplitudes[j];
    return s * a.grid.dx;
}

namespace {

void renormalize(PureState& psi) {
    const double n2 = norm_squared(psi);
    if (!(n2 > 0.0) || !std::isfinite(n2))
        throw DegenerateInputError("state norm vanished during construction");
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : psi.amplitudes) a *= inv;
}

} // namespace

PureState gaussian_packet(const SpatialGrid& g, double x0, double k0, double a0) {
    if (!(a0 > 0.0))
        throw ConfigError("gaussian_packet: a0 must be positive");
    PureState psi;
    psi.grid = g;
    psi.amplitudes.resize(g.n_points);
    for (int j = 0; j < g.n_points; ++j) {
        const double u = g.x(j) - x0;
        const double env = std::exp(-u * u / (a0 * a0));
        psi.amplitudes[j] = env * std::polar(1.0, k0 * u);
    }
    psi.meta = GaussianMeta{x0, k0, a0};
    renormalize(psi);
    return psi;
}

PureState superpose(const std::vector<PureState>& states,
                    const std::vector<cdouble>& coefficients) {
    if (states.empty() || states.size() != coefficients.size())
        throw ShapeError("superpose: states/coefficients size mismatch");
    bool any_nonzero = false;
    for (const auto& c : coefficients)
        if (c != cdouble{0.0, 0.0}) any_nonzero = true;
    if (!any_nonzero)
        throw DegenerateInputError("superpose: all coefficients zero");

    const SpatialGrid& g = states.front().grid;
    for (const auto& s : states)
        if (s.grid != g) throw ShapeError("superpose: mixed grids");

    PureState out;
    out.grid = g;
    out.amplitudes.assign(g.n_points, cdouble{0.0, 0.0});
    for (size_t i = 0; i < states.size(); ++i)
        for (int j = 0; j < g.n_points; ++j)
            out.amplitudes[j] += coefficients[i] * states[i].amplitudes[j];
    renormalize(out);
    return out;
}

ChargeDensity charge_density(const SignedEnsemble& e) {
    if (e.terms.empty())
        throw ShapeError("charge_density: empty ensemble");
    const SpatialGrid& g = e.terms.front().state.grid;
    ChargeDensity q;
    q.grid = g;
    q.values.assign(g.n_points, 0.0);
    for (const auto& t : e.terms) {
        if (t.state.grid != g)
            throw ShapeError("charge_density: ensemble terms on mixed grids");
        for (int j = 0; j < g.n_points; ++j)
            q.values[j] += t.weight * std::norm(t.state.amplitudes[j]);
    }
    return q;
}

double integrate(const ChargeDensity& q) {
    double s = 0.0;
    for (double v : q.values) s += v;
    return s * q.grid.dx;
}

double centroid(const ChargeDensity& q) {
    double s = 0.0, m = 0.0;
    for (int j = 0; j < q.grid.n_points; ++j) {
        s += q.values[j];
        m += q.grid.x(j) * q.values[j];
    }
    return m / s;
}

} // namespace qtsim
