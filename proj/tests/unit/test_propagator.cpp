#include <doctest.h>

#include "qtsim/errors.hpp"
#include "qtsim/propagator.hpp"

#include <cmath>

using namespace qtsim;

namespace {

const double kMass = 0.2 * units::electron_rest_mass;

double max_diff(const PureState& a, const PureState& b) {
    double d = 0.0;
    for (size_t j = 0; j < a.amplitudes.size(); ++j)
        d = std::max(d, std::abs(a.amplitudes[j] - b.amplitudes[j]));
    return d;
}

} // namespace

TEST_SUITE("propagator") {

TEST_CASE("each step preserves the norm to machine precision") {
    SpatialGrid g = make_grid(0.0, 600.0, 1501);
    Potential v = double_barrier(g, 350.0, 0.8, 0.2, 4.0);
    Propagator p(g, v, 3.0, kMass);
    PureState psi = gaussian_packet(g, 280.0, 0.69, 15.0);
    for (int s = 0; s < 50; ++s) {
        const double before = norm_squared(psi);
        psi = p.step(psi);
        CHECK(std::abs(norm_squared(psi) - before) < 1e-13);
    }
}

TEST_CASE("time reversal returns the initial state") {
    SpatialGrid g = make_grid(0.0, 600.0, 1501);
    Potential v = double_barrier(g, 350.0, 0.8, 0.2, 4.0);
    Propagator fwd(g, v, 3.0, kMass, 2);
    Propagator bwd(g, v, -3.0, kMass, 2);
    PureState psi0 = gaussian_packet(g, 280.0, 0.69, 15.0);
    PureState psi = psi0;
    for (int s = 0; s < 20; ++s) psi = fwd.step(psi);
    for (int s = 0; s < 20; ++s) psi = bwd.step(psi);
    CHECK(max_diff(psi, psi0) < 1e-10);
}

TEST_CASE("free evolution tracks the analytic gaussian") {
    SpatialGrid g = make_grid(0.0, 600.0, 6001); // dx = 0.1
    Propagator p(g, free_potential(g), 1.0, kMass, 8);
    PureState psi = gaussian_packet(g, 150.0, 0.69, 15.0);
    const double t = 60.0;
    for (int s = 0; s < 60; ++s) psi = p.step(psi);
    PureState oracle = analytic_free_gaussian(g, 150.0, 0.69, 15.0, kMass, t);
    const double fidelity = std::abs(inner_product(oracle, psi));
    CHECK(fidelity > 1.0 - 1e-5);
}

TEST_CASE("analytic gaussian drifts at the group velocity and spreads") {
    SpatialGrid g = make_grid(0.0, 600.0, 6001);
    const double t = 100.0;
    PureState psi = analytic_free_gaussian(g, 150.0, 0.69, 15.0, kMass, t);
    SignedEnsemble e;
    e.terms = {{1.0, psi}};
    const double x_expect = 150.0 + units::hbar * 0.69 / kMass * t;
    CHECK(centroid(charge_density(e)) == doctest::Approx(x_expect).epsilon(1e-6));
    // width grows by sqrt(1 + (2 hbar t / m a0^2)^2)
    double m2 = 0.0;
    ChargeDensity q = charge_density(e);
    for (int j = 0; j < g.n_points; ++j) {
        const double u = g.x(j) - x_expect;
        m2 += u * u * q.values[j];
    }
    m2 *= g.dx;
    const double spread = 2.0 * units::hbar * t / (kMass * 15.0 * 15.0);
    const double sigma2 = 15.0 * 15.0 / 4.0 * (1.0 + spread * spread);
    CHECK(m2 == doctest::Approx(sigma2).epsilon(1e-4));
}

TEST_CASE("kinetic energy of the paper packet is about 0.09 eV") {
    SpatialGrid g = make_grid(0.0, 600.0, 3001);
    PureState psi = gaussian_packet(g, 280.0, 0.69, 15.0);
    const double ke = mean_kinetic_energy(psi, kMass);
    // continuum expectation: (hbar^2/2m)(k0^2 + 1/a0^2)
    const double expect = units::hbar * units::hbar / (2.0 * kMass) *
                          (0.69 * 0.69 + 1.0 / (15.0 * 15.0));
    CHECK(ke == doctest::Approx(expect).epsilon(1e-3));
    CHECK(ke == doctest::Approx(0.09).epsilon(0.02));
}

TEST_CASE("mean energy adds the potential expectation") {
    SpatialGrid g = make_grid(0.0, 600.0, 3001);
    Potential v = double_barrier(g, 350.0, 0.8, 0.2, 4.0);
    PureState psi = gaussian_packet(g, 350.0, 0.0, 30.0);
    const double e = mean_energy(psi, v, kMass);
    const double ke = mean_kinetic_energy(psi, kMass);
    CHECK(e > ke); // sits on top of the barriers
}

TEST_CASE("evolve_ensemble snaps snapshots to step boundaries") {
    SpatialGrid g = make_grid(0.0, 600.0, 601);
    Propagator p(g, free_potential(g), 3.0, kMass);
    SignedEnsemble e;
    e.terms = {{1.0, gaussian_packet(g, 280.0, 0.69, 15.0)}};
    Trajectory t = evolve_ensemble(p, e, 0.0, 30.0, {0.0, 7.0, 30.0});
    REQUIRE(t.times.size() == 3);
    CHECK(t.times[0] == doctest::Approx(0.0));
    CHECK(t.times[1] == doctest::Approx(6.0)); // nearest boundary to 7
    CHECK(t.times[2] == doctest::Approx(30.0));
    CHECK(t.t_final == doctest::Approx(30.0));
}

TEST_CASE("evolve_ensemble rejects non-commensurate spans") {
    SpatialGrid g = make_grid(0.0, 600.0, 601);
    Propagator p(g, free_potential(g), 3.0, kMass);
    SignedEnsemble e;
    e.terms = {{1.0, gaussian_packet(g, 280.0, 0.69, 15.0)}};
    CHECK_THROWS_AS(evolve_ensemble(p, e, 0.0, 10.0, {}), ConfigError);
}

TEST_CASE("weights are untouched by evolution") {
    SpatialGrid g = make_grid(0.0, 600.0, 601);
    Propagator p(g, free_potential(g), 3.0, kMass);
    SignedEnsemble e;
    e.terms = {{0.75, gaussian_packet(g, 280.0, 0.69, 15.0)},
               {-0.25, gaussian_packet(g, 300.0, -0.69, 15.0)}};
    Trajectory t = evolve_ensemble(p, e, 0.0, 30.0, {});
    CHECK(t.final_state.terms[0].weight == 0.75);
    CHECK(t.final_state.terms[1].weight == -0.25);
}

} // TEST_SUITE
