#ifndef QTSIM_PROPAGATOR_HPP
#define QTSIM_PROPAGATOR_HPP

#include "qtsim/potential.hpp"
#include "qtsim/state.hpp"

#include <vector>

namespace qtsim {

/// Crank-Nicolson propagator for H0 = -(hbar^2/2m*) d2/dx2 + V(x) on the
/// three-point Laplacian with hard-wall boundaries. Each outer step of dt
/// is internally subdivided into `substeps` tridiagonal solves; the scheme
/// is norm-preserving regardless of step size.
///
/// Immutable after construction; step() is pure and may be called
/// concurrently from multiple threads.
class Propagator {
public:
    Propagator(const SpatialGrid& grid, const Potential& potential,
               double dt, double effective_mass, int substeps = 1);

    /// Advance psi by one outer step dt.
    PureState step(const PureState& psi) const;

    const SpatialGrid& grid() const { return grid_; }
    double dt() const { return dt_; }
    int substeps() const { return substeps_; }
    double effective_mass() const { return mass_; }

private:
    SpatialGrid grid_;
    double dt_;
    double mass_;
    int substeps_;
    // (1 + i tau H) coefficients of the implicit side; tau = dt_sub/(2 hbar).
    std::vector<cdouble> diag_;
    cdouble off_;
    std::vector<double> v_;
    double hop_; // hbar^2/(2 m dx^2)
};

/// Snapshots of an evolving ensemble at requested times (snapped to the
/// nearest step boundary), plus the final state.
struct Trajectory {
    std::vector<double> requested_times;
    std::vector<double> times;            ///< actual (step-boundary) times
    std::vector<SignedEnsemble> snapshots;
    SignedEnsemble final_state;
    double t_final = 0.0;
};

/// Evolve every ensemble term independently from t_from to t_to, recording
/// deep snapshots. Weights are never touched. (t_to - t_from) must be an
/// integer number of steps within half a step.
Trajectory evolve_ensemble(const Propagator& p, const SignedEnsemble& e,
                           double t_from, double t_to,
                           const std::vector<double>& snapshot_times);

/// Closed-form freely spreading Gaussian at time t (drift hbar*k0/m*,
/// width factor sqrt(1 + 4 hbar^2 t^2 / (m*^2 a0^4))), sampled on the grid
/// and renormalized. Independent oracle for the solver.
PureState analytic_free_gaussian(const SpatialGrid& g, double x0, double k0,
                                 double a0, double effective_mass, double t);

/// <psi| -(hbar^2/2m*) d2/dx2 |psi> on the same three-point stencil the
/// propagator uses.
double mean_kinetic_energy(const PureState& psi, double effective_mass);

/// <psi| H0 |psi> with the given potential.
double mean_energy(const PureState& psi, const Potential& v,
                   double effective_mass);

} // namespace qtsim

#endif
