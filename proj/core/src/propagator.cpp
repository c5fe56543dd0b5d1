#include "qtsim/propagator.hpp"
#include "qtsim/errors.hpp"

#include <cmath>
#include <string>

namespace qtsim {

Propagator::Propagator(const SpatialGrid& grid, const Potential& potential,
                       double dt, double effective_mass, int substeps)
    : grid_(grid), dt_(dt), mass_(effective_mass), substeps_(substeps) {
    if (potential.grid != grid)
        throw ShapeError("Propagator: potential on a different grid");
    if (!(dt != 0.0))
        throw ConfigError("Propagator: dt must be nonzero");
    if (!(effective_mass > 0.0))
        throw ConfigError("Propagator: effective mass must be positive");
    if (substeps < 1)
        throw ConfigError("Propagator: substeps must be >= 1");

    v_ = potential.values;
    hop_ = units::hbar * units::hbar / (2.0 * mass_ * grid.dx * grid.dx);
    const double dt_sub = dt / substeps;
    const cdouble tau(0.0, dt_sub / (2.0 * units::hbar));
    off_ = tau * (-hop_);
    diag_.resize(grid.n_points);
    for (int j = 0; j < grid.n_points; ++j)
        diag_[j] = 1.0 + tau * (2.0 * hop_ + v_[j]);
}

PureState Propagator::step(const PureState& psi) const {
    if (psi.grid != grid_)
        throw ShapeError("Propagator::step: state on a different grid");
    const int n = grid_.n_points;
    PureState out = psi;
    out.meta.reset();
    std::vector<cdouble> rhs(n), cp(n);
    std::vector<cdouble>& a = out.amplitudes;

    for (int s = 0; s < substeps_; ++s) {
        // rhs = (1 - i tau H) a  == conj-coefficient side of CN
        for (int j = 0; j < n; ++j) {
            cdouble r = (2.0 - diag_[j]) * a[j];
            if (j > 0) r -= off_ * a[j - 1];
            if (j + 1 < n) r -= off_ * a[j + 1];
            rhs[j] = r;
        }
        // Thomas solve of (1 + i tau H) a = rhs
        cdouble beta = diag_[0];
        a[0] = rhs[0] / beta;
        for (int j = 1; j < n; ++j) {
            cp[j] = off_ / beta;
            beta = diag_[j] - off_ * cp[j];
            a[j] = (rhs[j] - off_ * a[j - 1]) / beta;
        }
        for (int j = n - 2; j >= 0; --j)
            a[j] -= cp[j + 1] * a[j + 1];
    }
    return out;
}

Trajectory evolve_ensemble(const Propagator& p, const SignedEnsemble& e,
                           double t_from, double t_to,
                           const std::vector<double>& snapshot_times) {
    const double dt = p.dt();
    const double span = t_to - t_from;
    const double steps_exact = span / dt;
    const long n_steps = std::lround(steps_exact);
    if (n_steps < 0 || std::abs(steps_exact - n_steps) > 1e-9)
        throw ConfigError("evolve_ensemble: span is not an integer number of steps");

    Trajectory traj;
    traj.requested_times = snapshot_times;
    std::vector<long> snap_steps;
    for (double t : snapshot_times) {
        if (t < t_from - 0.5 * std::abs(dt) || t > t_to + 0.5 * std::abs(dt))
            throw ConfigError("evolve_ensemble: snapshot time outside span");
        long s = std::lround((t - t_from) / dt);
        if (s < 0) s = 0;
        if (s > n_steps) s = n_steps;
        snap_steps.push_back(s);
    }

    SignedEnsemble cur = e;
    for (long s = 0; s <= n_steps; ++s) {
        for (size_t i = 0; i < snap_steps.size(); ++i) {
            if (snap_steps[i] == s) {
                traj.times.push_back(t_from + s * dt);
                traj.snapshots.push_back(cur);
            }
        }
        if (s == n_steps) break;
        for (auto& term : cur.terms)
            term.state = p.step(term.state);
    }
    traj.final_state = std::move(cur);
    traj.t_final = t_from + n_steps * dt;
    return traj;
}

PureState analytic_free_gaussian(const SpatialGrid& g, double x0, double k0,
                                 double a0, double effective_mass, double t) {
    if (!(a0 > 0.0))
        throw ConfigError("analytic_free_gaussian: a0 must be positive");
    if (t < 0.0)
        throw ConfigError("analytic_free_gaussian: t must be >= 0");
    // Fourier evolution of exp(-(u/a0)^2 + i k0 u):
    //   psi(u,t) ~ A^{-1/2} exp( (a0^2 k0/2 + i u)^2 / (4A) - a0^2 k0^2/4 ),
    //   A = a0^2/4 + i hbar t / (2 m*).
    const cdouble A(a0 * a0 / 4.0, units::hbar * t / (2.0 * effective_mass));
    const cdouble invsqrtA = 1.0 / std::sqrt(A);
    PureState psi;
    psi.grid = g;
    psi.amplitudes.resize(g.n_points);
    const double c0 = a0 * a0 * k0 / 2.0;
    const double phase0 = a0 * a0 * k0 * k0 / 4.0;
    for (int j = 0; j < g.n_points; ++j) {
        const cdouble z(c0, g.x(j) - x0);
        psi.amplitudes[j] = invsqrtA * std::exp(z * z / (4.0 * A) - phase0);
    }
    const double n2 = norm_squared(psi);
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : psi.amplitudes) a *= inv;
    psi.meta = GaussianMeta{x0, k0, a0};
    return psi;
}

double mean_kinetic_energy(const PureState& psi, double effective_mass) {
    const int n = psi.grid.n_points;
    const double c =
        units::hbar * units::hbar / (2.0 * effective_mass * psi.grid.dx * psi.grid.dx);
    double e = 0.0;
    for (int j = 0; j < n; ++j) {
        cdouble lap = -2.0 * psi.amplitudes[j];
        if (j > 0) lap += psi.amplitudes[j - 1];
        if (j + 1 < n) lap += psi.amplitudes[j + 1];
        e += std::real(std::conj(psi.amplitudes[j]) * (-c * lap));
    }
    return e * psi.grid.dx;
}

double mean_energy(const PureState& psi, const Potential& v,
                   double effective_mass) {
    if (v.grid != psi.grid)
        throw ShapeError("mean_energy: potential on a different grid");
    double e = mean_kinetic_energy(psi, effective_mass);
    for (int j = 0; j < psi.grid.n_points; ++j)
        e += v.values[j] * std::norm(psi.amplitudes[j]) * psi.grid.dx;
    return e;
}

} // namespace qtsim
