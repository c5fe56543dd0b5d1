#include "qtsim/collision.hpp"
#include "qtsim/errors.hpp"
#include "qtsim/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace qtsim {

namespace {

double edge_mass(const PureState& psi, double margin) {
    double s = 0.0;
    const auto& g = psi.grid;
    for (int j = 0; j < g.n_points; ++j) {
        const double x = g.x(j);
        if (x - g.x_min < margin || g.x_max() - x < margin)
            s += std::norm(psi.amplitudes[j]);
    }
    return s * g.dx;
}

} // namespace

CollisionPackets build_collision_packets(const SignedEnsemble& e_pre,
                                         const HeCollisionSpec& spec,
                                         double effective_mass, double a0,
                                         double x0_ref) {
    if (spec.t_S <= 0.0)
        throw PreconditionError("collision: t_S must be positive");
    if (e_pre.terms.empty())
        throw PreconditionError("collision: empty pre-collision ensemble");
    const auto& g = e_pre.terms.front().state.grid;

    const double spread = 2.0 * units::hbar * spec.t_S /
                          (effective_mass * a0 * a0);
    const double a0S = 2.0 * a0 * std::sqrt(1.0 + spread * spread);
    const double x0S = x0_ref + units::hbar * spec.k0 / effective_mass * spec.t_S;

    CollisionPackets p;
    p.a0S = a0S;
    p.x0S = x0S;
    p.psi_P = gaussian_packet(g, x0S, spec.k_F, a0S);
    p.psi_N = gaussian_packet(g, x0S, spec.k0, a0S);

    const double leak =
        std::max(edge_mass(p.psi_P, 5.0), edge_mass(p.psi_N, 5.0));
    if (leak > 1e-6)
        throw ConfigError("collision packets overflow the box (edge mass " +
                          std::to_string(leak) + ")");
    return p;
}

double max_safe_weight(const SignedEnsemble& e_pre, const PureState& /*psi_P*/,
                       const PureState& psi_N, double beta) {
    if (!(beta > 0.0 && beta <= 1.0))
        throw PreconditionError("max_safe_weight: beta must be in (0, 1]");
    const ChargeDensity q = charge_density(e_pre);
    const double dx = q.grid.dx;
    double ratio = std::numeric_limits<double>::infinity();
    bool any = false;
    for (int j = 0; j < q.grid.n_points; ++j) {
        const double n2 = std::norm(psi_N.amplitudes[j]);
        if (n2 * dx <= 1e-14) continue;
        any = true;
        if (q.values[j] <= 0.0)
            throw PreconditionError(
                "max_safe_weight: pre-collision density is not positive on "
                "the support of psi_N");
        ratio = std::min(ratio, q.values[j] / n2);
    }
    if (!any)
        throw PreconditionError(
            "max_safe_weight: psi_N support is disjoint from the density");
    return beta * ratio;
}

HeCollisionResult apply_he_collision(const SignedEnsemble& e_pre,
                                     const HeCollisionSpec& spec,
                                     double effective_mass, double a0,
                                     double x0_ref) {
    HeCollisionResult r;
    r.packets = build_collision_packets(e_pre, spec, effective_mass, a0, x0_ref);

    bool from_auto = false;
    if (const auto* am = std::get_if<AutoMaxSafe>(&spec.weight_mode)) {
        r.resolved_weight =
            max_safe_weight(e_pre, r.packets.psi_P, r.packets.psi_N, am->beta);
        from_auto = true;
    } else {
        r.resolved_weight = std::get<ExplicitWeight>(spec.weight_mode).w;
    }
    if (!(r.resolved_weight > 0.0))
        throw ConfigError("apply_he_collision: resolved weight must be positive");

    r.ensemble = e_pre;
    r.ensemble.terms.push_back({+r.resolved_weight, r.packets.psi_P});
    r.ensemble.terms.push_back({-r.resolved_weight, r.packets.psi_N});

    // Safety assertion at t_S+. The auto bound is strict by construction;
    // an explicit weight only has to hold up to roundoff in the summed
    // density, so allow a relative floor there.
    const ChargeDensity q = charge_density(r.ensemble);
    const double qmax =
        *std::max_element(q.values.begin(), q.values.end());
    const double floor = from_auto ? 0.0 : 1e-12 * qmax;
    for (double v : q.values)
        if (v < -floor)
            throw PreconditionError(
                "apply_he_collision: post-collision density is negative at "
                "t_S+ (weight too large)");
    return r;
}

SignedEnsemble apply_gs_collision(const SignedEnsemble& e_pre,
                                  const GsCollisionSpec& spec,
                                  const PureState& psi_F) {
    if (spec.source_index < 0 ||
        spec.source_index >= static_cast<int>(e_pre.terms.size()))
        throw PreconditionError("apply_gs_collision: source_index out of range");
    if (spec.occupation < 1)
        throw PreconditionError(
            "apply_gs_collision: source occupation must be at least 1");
    if (e_pre.electron_count < 1)
        throw PreconditionError("apply_gs_collision: electron_count must be >= 1");

    const double transfer = 1.0 / e_pre.electron_count;
    SignedEnsemble out = e_pre;
    auto& src = out.terms[spec.source_index];
    if (src.weight < transfer - 1e-15)
        throw PreconditionError(
            "apply_gs_collision: source weight below the transfer quantum");
    src.weight -= transfer;
    if (std::abs(src.weight) < 1e-15) src.weight = 0.0;
    out.terms.push_back({transfer, psi_F});
    std::erase_if(out.terms, [](const SignedEnsemble::Term& t) {
        return t.weight == 0.0;
    });
    return out;
}

SignedEnsemble general_collision_step(const SignedEnsemble& e,
                                      const RateMatrix& Z, double dt) {
    const size_t n = e.terms.size();
    if (Z.Z.size() != n)
        throw ShapeError("general_collision_step: rate matrix size mismatch");
    for (const auto& row : Z.Z) {
        if (row.size() != n)
            throw ShapeError("general_collision_step: rate matrix not square");
        for (double v : row)
            if (v < 0.0)
                throw PreconditionError(
                    "general_collision_step: negative rate entry");
    }
    for (const auto& t : e.terms)
        if (t.weight < 0.0)
            throw PreconditionError(
                "general_collision_step: negative input weight");

    const double two_pi = 2.0 * std::numbers::pi;
    for (size_t j = 0; j < n; ++j) {
        double col = 0.0;
        for (size_t i = 0; i < n; ++i) col += Z.Z[i][j];
        if (dt * col / two_pi > 1.0)
            throw PreconditionError(
                "general_collision_step: dt too large, weight overdraw");
    }

    SignedEnsemble out = e;
    for (size_t i = 0; i < n; ++i) {
        double gain = 0.0, loss = 0.0;
        for (size_t j = 0; j < n; ++j) {
            gain += Z.Z[i][j] * e.terms[j].weight;
            loss += Z.Z[j][i];
        }
        out.terms[i].weight =
            e.terms[i].weight + dt / two_pi * (gain - loss * e.terms[i].weight);
    }
    return out;
}

} // namespace qtsim
