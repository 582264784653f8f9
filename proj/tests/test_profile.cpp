#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dpnls/errors.hpp"
#include "dpnls/model.hpp"
#include "dpnls/profile.hpp"
#include "oracles.hpp"

using namespace dpnls;

TEST_CASE("profile matches an independent ODE shooter") {
    const Nonlinearity nl{2.0, 3.0};
    const double omega = 0.3;
    const SolitonProfile prof = build_profile(nl, omega, 4097, 16.0);
    const std::vector<double> xs{0.5, 1.0, 2.0, 4.0, 8.0};
    const std::vector<double> shot = oracles::shoot_profile(nl, omega, prof.peak, xs);
    const double dx = 16.0 / 4096.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const int i = static_cast<int>(std::lround(xs[k] / dx));
        REQUIRE(prof.x[i] == doctest::Approx(xs[k]).epsilon(1e-14));
        CHECK(std::abs(prof.phi[i] - shot[k]) < 2e-9 * prof.peak);
    }
}

TEST_CASE("first integral of the profile equation holds on the grid") {
    // phi'^2 == W(phi^2) with W(s) = omega*s - L(s)*s; a central-difference
    // derivative bounds the check at O(dx^2)
    auto residual = [](const Nonlinearity& nl, double omega, double x_max) {
        const int n = 32769;
        const SolitonProfile prof = build_profile(nl, omega, n, x_max);
        const double dx = prof.x[1] - prof.x[0];
        double worst = 0.0;
        for (int i = 1; i + 1 < n; ++i) {
            if (prof.phi[i] < 1e-6 * prof.peak) break;
            const double d = (prof.phi[i + 1] - prof.phi[i - 1]) / (2.0 * dx);
            const double s = prof.phi[i] * prof.phi[i];
            worst = std::max(worst, std::abs(d * d - eval_W(nl, s, omega)));
        }
        return worst;
    };
    CHECK(residual({2.0, 3.0}, 0.3, 20.0) < 1e-6);
    CHECK(residual({3.0, 4.0}, 1.5, 12.0) < 2e-5);   // steeper profile, larger phi'''
    CHECK(residual({2.0, 3.0}, 0.0, 60.0) < 5e-5);   // zero-frequency algebraic decay
}

TEST_CASE("peak value and monotone decay") {
    const Nonlinearity nl{2.0, 3.5};
    const double omega = 0.7;
    const SolitonProfile prof = build_profile(nl, omega, 2049);
    CHECK(prof.peak == doctest::Approx(std::sqrt(h_of_omega(nl, omega))).epsilon(1e-15));
    CHECK(prof.phi[0] == prof.peak);
    for (std::size_t i = 0; i + 1 < prof.phi.size(); ++i) {
        CHECK(prof.phi[i + 1] <= prof.phi[i]);
        if (prof.phi[i] > 1e-12 * prof.peak) CHECK(prof.phi[i + 1] < prof.phi[i]);
        CHECK(prof.phi[i] > 0.0);
    }
}

TEST_CASE("uniform grid layout") {
    const SolitonProfile prof = build_profile({2.0, 3.0}, 1.0, 513, 10.0);
    REQUIRE(prof.x.size() == 513);
    REQUIRE(prof.phi.size() == 513);
    const double dx = 10.0 / 512.0;
    for (int i : {0, 1, 77, 256, 512}) {
        CHECK(prof.x[i] == doctest::Approx(i * dx).epsilon(1e-15));
    }
    CHECK(prof.x.back() == doctest::Approx(10.0).epsilon(1e-15));
}

TEST_CASE("exponential tail rate equals sqrt(omega)") {
    const Nonlinearity nl{2.0, 3.0};
    const double omega = 0.3;
    const SolitonProfile prof = build_profile(nl, omega, 8193);
    const int n = static_cast<int>(prof.x.size());
    const double dx = prof.x[1] - prof.x[0];
    // deep in the tail phi^{p-1} is ~1e-10 so the local decay rate has
    // converged to sqrt(omega) far below the test tolerance
    const int i = n - 8;
    const double rate = std::log(prof.phi[i - 1] / prof.phi[i + 1]) / (2.0 * dx);
    CHECK(rate == doctest::Approx(std::sqrt(omega)).epsilon(1e-8));
}

TEST_CASE("zero-frequency tail decays algebraically") {
    const Nonlinearity nl{2.0, 3.0};
    const SolitonProfile prof = build_profile(nl, 0.0, 8193, 60.0);
    CHECK(prof.peak == doctest::Approx(4.0 / 3.0).epsilon(1e-14));  // sqrt(16/9)
    // phi ~ C x^{-2/(p-1)} = C x^{-2}: the compensated product levels off
    auto comp = [&](double xq) {
        const double dx = prof.x[1] - prof.x[0];
        const int i = static_cast<int>(std::lround(xq / dx));
        return prof.phi[i] * prof.x[i] * prof.x[i];
    };
    CHECK(comp(50.0) == doctest::Approx(comp(58.0)).epsilon(0.02));
    // and the rate is visibly not exponential
    CHECK(prof.phi[8192] / prof.phi[4096] > 0.1);
}

TEST_CASE("squared norm equals twice the mass functional") {
    const Nonlinearity nl{2.0, 3.0};
    for (double omega : {0.05, 0.3, 2.0}) {
        const double m = mass(nl, omega);
        const ProfileNorms n = norms_and_energy(nl, omega);
        CHECK(n.mass2 == doctest::Approx(2.0 * m).epsilon(1e-13));
    }
}

TEST_CASE("norms and energy at a frozen benchmark point") {
    const Nonlinearity nl{2.0, 3.0};
    const double omega = 0.3;
    CHECK(mass(nl, omega) == doctest::Approx(3.2464152113242055).epsilon(1e-12));
    const ProfileNorms n = norms_and_energy(nl, omega);
    CHECK(n.grad_sq == doctest::Approx(1.58580565441).epsilon(1e-10));
    CHECK(n.lp_norm == doctest::Approx(8.42870350933).epsilon(1e-10));
    CHECK(n.lq_norm == doctest::Approx(11.9623582905).epsilon(1e-10));
    CHECK(n.mass2 == doctest::Approx(6.49283042265).epsilon(1e-10));
    CHECK(n.energy == doctest::Approx(0.611881091015).epsilon(1e-9));
}

TEST_CASE("grid trapezoid of phi^2 reproduces the closed-form norm") {
    const Nonlinearity nl{2.0, 3.0};
    const double omega = 0.3;
    const SolitonProfile prof = build_profile(nl, omega, 4097);
    std::vector<double> sq(prof.phi.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = prof.phi[i] * prof.phi[i];
    const double grid_mass2 = 2.0 * oracles::trapezoid(sq, prof.x[1] - prof.x[0]);
    CHECK(grid_mass2 == doctest::Approx(norms_and_energy(nl, omega).mass2).epsilon(1e-8));
}

TEST_CASE("second derivative of the scaled energy at zero frequency") {
    CHECK(scaling_second_derivative_at_zero({2.0, 4.0}) ==
          doctest::Approx(-0.2895872869).epsilon(1e-8));
    CHECK(scaling_second_derivative_at_zero({2.0, 3.0}) ==
          doctest::Approx(0.1645512199).epsilon(1e-8));
    // sign flips across q = (23 - 3p) / (3 + p)
    CHECK(scaling_second_derivative_at_zero({1.5, 4.5}) < 0.0);   // above the curve
    CHECK(scaling_second_derivative_at_zero({1.5, 3.5}) > 0.0);   // below the curve
    CHECK_THROWS_AS(scaling_second_derivative_at_zero({2.0, 5.0}), DomainError);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(build_profile({2.0, 3.0}, -0.1), DomainError);
    CHECK_THROWS_AS(build_profile({2.0, 3.0}, 0.3, 4), DomainError);
    CHECK_THROWS_AS(build_profile({2.0, 6.0}, 0.0), DomainError);  // q >= 5 at omega 0
    CHECK_THROWS_AS(mass({2.0, 3.0}, -1.0), DomainError);
    CHECK_THROWS_AS(mass({2.0, 6.0}, 0.0), DomainError);
    CHECK_THROWS_AS(norms_and_energy({2.0, 3.0}, -1.0), DomainError);
    CHECK_NOTHROW(build_profile({2.0, 6.0}, 1.0));  // q >= 5 fine at positive omega
}
