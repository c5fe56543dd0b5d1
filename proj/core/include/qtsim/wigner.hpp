#ifndef QTSIM_WIGNER_HPP
#define QTSIM_WIGNER_HPP

#include "qtsim/state.hpp"

#include <string>
#include <vector>

namespace qtsim {

/// Which rows of the phase-space lattice to compute.
/// `with_midpoints` stores 2n-1 rows at dx/2 spacing (needed for the
/// inverse transform); `nodes_only` stores the n original-node rows
/// (enough for marginals and output).
enum class WignerRows { nodes_only, with_midpoints };

/// Real-valued Wigner field on the (x, k) lattice.
///
/// Convention "aux2x-v1": k is a wave vector (nm^-1); the x'-offset
/// lattice has spacing dx with the wave function trigonometrically
/// upsampled to dx/2 so x +- x'/2 lands on stored nodes; offsets use a
/// symmetric window and zero padding outside the box; the forward
/// prefactor is dx/(2 pi) and the position marginal is sum_k F dk with
/// unit convention factor, so the marginal equals the density-matrix
/// diagonal exactly on the lattice.
struct WignerField {
    SpatialGrid grid;
    MomentumGrid kgrid;
    WignerRows rows = WignerRows::nodes_only;
    /// Spatial decimation for nodes_only fields: row r sits at node
    /// r*row_stride. Always 1 when midpoints are present.
    int row_stride = 1;
    std::string convention = "aux2x-v1";
    /// Row-major: value(row, ik). Row r sits at x = x_min + r*dx/2 when
    /// midpoints are present, x = x_min + r*row_stride*dx otherwise.
    std::vector<double> values;

    int n_rows() const {
        return rows == WignerRows::with_midpoints
                   ? 2 * grid.n_points - 1
                   : (grid.n_points + row_stride - 1) / row_stride;
    }
    double row_x(int r) const {
        return rows == WignerRows::with_midpoints
                   ? grid.x_min + r * 0.5 * grid.dx
                   : grid.x(r * row_stride);
    }
    double& at(int r, int ik) { return values[size_t(r) * kgrid.n_points + ik]; }
    double at(int r, int ik) const {
        return values[size_t(r) * kgrid.n_points + ik];
    }
    /// Row index of spatial node j.
    int node_row(int j) const {
        return rows == WignerRows::with_midpoints ? 2 * j : j;
    }
    /// Largest |imaginary part| discarded when realizing the rows;
    /// should stay below 1e-10 for Hermitian inputs.
    double max_imag_residue = 0.0;
};

/// Complex density matrix rho(x, x') sampled on grid x grid (row-major,
/// rho(j, j') = values[j*n + j']).
struct DensityMatrixGrid {
    SpatialGrid grid;
    std::vector<cdouble> values;

    cdouble at(int j, int jp) const {
        return values[size_t(j) * grid.n_points + jp];
    }
    double trace_times_dx() const;
};

/// Wigner-Weyl transform of the pure state |psi><psi|. kg must be the
/// conjugate of psi's grid. row_stride > 1 (nodes_only fields) computes
/// every row_stride-th spatial row, for cheap dumps of large grids.
WignerField wigner_from_state(const PureState& psi, const MomentumGrid& kg,
                              WignerRows rows = WignerRows::with_midpoints,
                              int row_stride = 1);

/// sum_i w_i * wigner_from_state(psi_i) -- linear in the density matrix.
WignerField wigner_from_ensemble(const SignedEnsemble& e, const MomentumGrid& kg,
                                 WignerRows rows = WignerRows::with_midpoints,
                                 int row_stride = 1);

/// Inverse transform: rho(x, x') = sum_k F((x+x')/2, k) e^{i k (x-x')} dk.
/// Requires a field with midpoint rows.
DensityMatrixGrid density_matrix_from_wigner(const WignerField& f);

/// Q(x) = sum_k F(x, k) dk (position marginal, Eq.-(9)-style).
ChargeDensity marginal_position(const WignerField& f);

/// P(k) = sum_x F(x, k) dx, on the momentum grid (node rows only).
std::vector<double> marginal_momentum(const WignerField& f);

} // namespace qtsim

#endif
