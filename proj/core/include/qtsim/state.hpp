#ifndef QTSIM_STATE_HPP
#define QTSIM_STATE_HPP

#include "qtsim/grid.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace qtsim {

using cdouble = std::complex<double>;

/// Construction parameters of a Gaussian packet, kept for bookkeeping.
struct GaussianMeta {
    double x0 = 0.0;  ///< central position, nm
    double k0 = 0.0;  ///< central wave vector, nm^-1
    double a0 = 0.0;  ///< width parameter, nm
};

/// A pure state: complex wave function sampled on a spatial grid,
/// unit-normalized under the rectangle rule (sum |psi|^2 dx = 1).
struct PureState {
    SpatialGrid grid;
    std::vector<cdouble> amplitudes;
    std::optional<GaussianMeta> meta;
};

/// rho(t) = sum_i w_i |psi_i><psi_i|.  Weights are plain reals so the
/// subtracted term of the Hamiltonian-eigenstate collision can be
/// represented; general-state mode keeps them all non-negative.
struct SignedEnsemble {
    struct Term {
        double weight;
        PureState state;
    };
    std::vector<Term> terms;
    int electron_count = 1;

    double total_weight() const;
};

/// Q(x) = sum_i w_i |psi_i(x)|^2, units nm^-1. May dip negative when
/// negative-weight terms dominate.
struct ChargeDensity {
    SpatialGrid grid;
    std::vector<double> values;
};

/// Normalized Gaussian packet psi(x) ~ e^{i k0 (x-x0)} e^{-(x-x0)^2/a0^2}.
/// The continuum prefactor is replaced by exact grid renormalization.
PureState gaussian_packet(const SpatialGrid& g, double x0, double k0, double a0);

/// Pointwise linear combination of states on a common grid, renormalized.
/// Throws ShapeError on grid mismatch, DegenerateInputError if the sum
/// cancels to (numerically) nothing.
PureState superpose(const std::vector<PureState>& states,
                    const std::vector<cdouble>& coefficients);

/// Ensemble charge density per Q(x_j) = sum_i w_i |psi_i(x_j)|^2.
ChargeDensity charge_density(const SignedEnsemble& e);

/// sum_j |psi_j|^2 dx (squared norm under the rectangle rule).
double norm_squared(const PureState& psi);

/// <a|b> = sum_j conj(a_j) b_j dx.
cdouble inner_product(const PureState& a, const PureState& b);

/// Rectangle-rule integral of a charge density over the whole box.
double integrate(const ChargeDensity& q);

/// Charge centroid  int x Q dx / int Q dx.
double centroid(const ChargeDensity& q);

} // namespace qtsim

#endif
