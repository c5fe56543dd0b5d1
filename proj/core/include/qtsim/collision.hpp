#ifndef QTSIM_COLLISION_HPP
#define QTSIM_COLLISION_HPP

#include "qtsim/state.hpp"

#include <variant>
#include <vector>

namespace qtsim {

/// Weight selection for the H.E. collision: either derive the largest
/// safe weight from the pre-collision density (scaled by a safety factor
/// beta in (0,1]) or use a caller-supplied value.
struct AutoMaxSafe {
    double beta = 0.9;
};
struct ExplicitWeight {
    double w;
};
using WeightMode = std::variant<AutoMaxSafe, ExplicitWeight>;

struct HeCollisionSpec {
    double t_S;  // fs
    double k0;   // initial wave vector, 1/nm
    double k_F;  // final wave vector, 1/nm
    WeightMode weight_mode = AutoMaxSafe{};
};

struct GsCollisionSpec {
    double t_S;          // fs
    int source_index;    // ensemble member that scatters
    int occupation;      // M_i, electrons occupying the source state
};

/// Z[i][j] >= 0 is the rate (1/fs) from state j into state i.
struct RateMatrix {
    std::vector<std::vector<double>> Z;
};

/// Builds the pair of wide Gaussians used by the H.E. operator. Both are
/// centered at x_{0S} = x0_ref + (hbar k0 / m*) t_S with width
/// a_{0S} = 2 a0 sqrt(1 + 4 hbar^2 t_S^2 / (m*^2 a0^4)); psi_N carries k0,
/// psi_P carries k_F. Throws ConfigError if a packet leaks past the box
/// edges (margin 5 nm) by more than 1e-6.
struct CollisionPackets {
    PureState psi_P;
    PureState psi_N;
    double a0S;
    double x0S;
};
CollisionPackets build_collision_packets(const SignedEnsemble& e_pre,
                                         const HeCollisionSpec& spec,
                                         double effective_mass, double a0,
                                         double x0_ref);

/// Largest weight (scaled by beta) such that
/// Q_pre + w (|psi_P|^2 - |psi_N|^2) >= 0 everywhere, found by ignoring
/// the psi_P contribution: w = beta * min_x Q_pre(x)/|psi_N(x)|^2 over
/// nodes with |psi_N|^2 dx > 1e-14. Throws PreconditionError if Q_pre <= 0
/// anywhere on that support.
double max_safe_weight(const SignedEnsemble& e_pre, const PureState& psi_P,
                       const PureState& psi_N, double beta);

struct HeCollisionResult {
    SignedEnsemble ensemble;
    double resolved_weight;
    CollisionPackets packets;
};
HeCollisionResult apply_he_collision(const SignedEnsemble& e_pre,
                                     const HeCollisionSpec& spec,
                                     double effective_mass, double a0,
                                     double x0_ref);

/// G.S. operator: moves weight 1/M_total from the source member to a new
/// term holding psi_F; zero-weight terms are pruned. All weights stay >= 0.
SignedEnsemble apply_gs_collision(const SignedEnsemble& e_pre,
                                  const GsCollisionSpec& spec,
                                  const PureState& psi_F);

/// One explicit-Euler step of the rate equation
///   w_i += (dt/2pi) sum_j (Z_ij w_j - Z_ji w_i).
/// Requires dt * (max column sum of Z) / 2pi <= 1 so no weight overdraws.
SignedEnsemble general_collision_step(const SignedEnsemble& e,
                                      const RateMatrix& Z, double dt);

} // namespace qtsim

#endif
