#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "curvn/photon.hpp"
#include "oracles.hpp"

using namespace curvn;

namespace {
WorldLine dipole_wiggle() { return WorldLine::wiggle(0.01, 2.0, -8.0, 8.0); }
}

TEST_CASE("minkowski kernel: inertial worldline vanishes identically") {
    const WorldLine w = WorldLine::inertial({0.2, 0, 0}, {0.4, 0.1, 0});
    for (double t : {-5.0, 0.0, 2.0})
        for (double u : {-1.0, 3.7})
            if (t != u) CHECK(minkowski_kernel(w, t, u) == doctest::Approx(0.0));
    CHECK(minkowski_kernel_diagonal(w, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("minkowski kernel: symmetric in its time arguments") {
    const WorldLine w = dipole_wiggle();
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    for (int i = 0; i < 50; ++i) {
        const double t = dist(rng), u = dist(rng);
        const double a = minkowski_kernel(w, t, u);
        const double b = minkowski_kernel(w, u, t);
        CHECK(std::memcmp(&a, &b, sizeof a) == 0);
    }
}

TEST_CASE("minkowski kernel: diagonal limit by extrapolation") {
    const WorldLine w = WorldLine::wiggle(0.05, 1.5, -4.0, 4.0);
    for (double t : {-1.0, 0.3, 2.2}) {
        std::vector<double> hs = {1e-2, 1e-3, 1e-4};
        std::vector<double> ks;
        for (double h : hs) ks.push_back(minkowski_kernel_direct(w, t + h, t));
        const double limit = oracle::extrapolate_to_zero(hs, ks);
        CHECK(limit == doctest::Approx(minkowski_kernel_diagonal(w, t)).epsilon(1e-6));
    }
}

TEST_CASE("photon_number: inertial worldline radiates nothing") {
    const PhotonCount n = photon_number(WorldLine::inertial({}, {0.3, 0, 0}));
    CHECK(n.converged);
    CHECK(std::abs(n.value) < 1e-12);
    CHECK(std::abs(spectral_photon_number(WorldLine::inertial({}, {0.3, 0, 0})).value) ==
          doctest::Approx(0.0));
}

TEST_CASE("photon_number agrees with the spectral oracle in the dipole regime") {
    const WorldLine cases[] = {dipole_wiggle(), WorldLine::wiggle(0.005, 3.0, -6.0, 6.0)};
    for (const WorldLine& w : cases) {
        const PhotonCount pos = photon_number(w, 1e-4);
        const PhotonCount spec = spectral_photon_number(w);
        REQUIRE(pos.converged);
        CHECK(pos.value > 0.0);
        CHECK(std::abs(pos.value - spec.value) / spec.value < 0.01);
    }
}

TEST_CASE("photon_number: quadratic in the wiggle amplitude") {
    const double n1 = photon_number(WorldLine::wiggle(0.01, 2.0, -8.0, 8.0), 1e-4).value;
    const double n2 = photon_number(WorldLine::wiggle(0.005, 2.0, -8.0, 8.0), 1e-4).value;
    CHECK(n1 / n2 == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("photon_number: invariant under Poincare transformations") {
    const WorldLine w = dipole_wiggle();
    const double n0 = photon_number(w, 1e-4).value;

    const WorldLine variants[] = {
        w.translated({1.5, -0.7, 2.0}, 3.0),
        w.rotated({0, 0, 1}, 1.1),
        w.rotated({0, 1, 0}, 0.7),
        w.boosted({0.5, 0, 0}),
        w.boosted({0.0, 0.3, 0.2}),
    };
    for (const WorldLine& v : variants) {
        const double n = photon_number(v, 1e-4).value;
        CHECK(std::abs(n - n0) / n0 < 1e-3);
    }
}

TEST_CASE("boost: zero boost is the identity, inertial stays inertial") {
    const WorldLine w = dipole_wiggle();
    const WorldLine same = w.boosted({0, 0, 0});
    for (double t : {-3.0, 0.5, 6.0})
        CHECK(norm(same.at(t).position - w.at(t).position) < 1e-14);

    const WorldLine inert = WorldLine::inertial({}, {0.2, 0, 0}).boosted({0.5, 0, 0});
    CHECK(std::abs(photon_number(inert).value) < 1e-12);
    CHECK_THROWS_AS(w.boosted({1.0, 0, 0}), std::invalid_argument);
}

TEST_CASE("boost: event transform is consistent with velocity addition") {
    const WorldLine w = WorldLine::inertial({0, 1, 0}, {0.3, 0, 0});
    const WorldLine b = w.boosted({0.5, 0, 0});
    // relativistic velocity addition along the axis
    const double expect = (0.3 - 0.5) / (1.0 - 0.15);
    CHECK(b.at(0.7).velocity.x == doctest::Approx(expect).epsilon(1e-12));
    CHECK(b.at(0.7).velocity.y == doctest::Approx(0.0));
}

TEST_CASE("identification: wiggles are identified, detuned steps are not") {
    CHECK(is_identified(dipole_wiggle()));
    CHECK(is_identified(WorldLine::wiggle(0.01, 2.0, -8.0, 8.0, {1, 0, 0}, {0.4, 0, 0})));
    CHECK_FALSE(is_identified(WorldLine::velocity_step({}, {0.01, 0, 0}, -2.0, 2.0)));
}

TEST_CASE("infrared catastrophe: detuned worldline grows without converging") {
    const WorldLine detuned = WorldLine::velocity_step({}, {0.01, 0, 0}, -2.0, 2.0);
    CHECK_THROWS_AS(photon_number(detuned), ir_divergence_error);
    CHECK_THROWS_AS(spectral_photon_number(detuned), ir_divergence_error);

    // window doubling: monotone growth across at least 4 doublings
    double prev = 0.0;
    int grows = 0;
    for (int k = 0; k < 5; ++k) {
        const double pad = 8.0 * (1 << k);
        const double n = photon_number_window(detuned, pad, 2049);
        if (k > 0 && n > prev) ++grows;
        prev = n;
    }
    CHECK(grows >= 4);

    // while the identified wiggle converges
    CHECK(photon_number(dipole_wiggle(), 1e-4).converged);
}

TEST_CASE("spectrum: infrared-finite for identified worldlines") {
    const Spectrum spec = radiation_spectrum(dipole_wiggle());
    REQUIRE(spec.omega.size() >= 16);
    const double peak =
        *std::max_element(spec.energy_density.begin(), spec.energy_density.end());
    CHECK(peak > 0.0);
    // dE/domega -> 0 toward omega = 0
    CHECK(spec.energy_density[1] < 1e-4 * peak);
    CHECK(spec.energy_density[1] < spec.energy_density[4]);
    CHECK(spec.number_density[0] == 0.0);
}
