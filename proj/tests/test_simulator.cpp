#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "dpnls/errors.hpp"
#include "dpnls/model.hpp"
#include "dpnls/profile.hpp"
#include "dpnls/simulator.hpp"

using namespace dpnls;

namespace {

std::vector<std::complex<double>> rotated(const std::vector<std::complex<double>>& v, int m) {
    const int n = static_cast<int>(v.size());
    std::vector<std::complex<double>> out(n);
    for (int i = 0; i < n; ++i) out[i] = v[((i - m) % n + n) % n];
    return out;
}

}  // namespace

TEST_CASE("state construction from a half-line profile") {
    const SolitonProfile prof = build_profile({2.0, 3.0}, 0.3, 33, 12.0);
    const FieldState st = make_state(prof, 64);
    CHECK(st.L_dom == doctest::Approx(24.0).epsilon(1e-14));
    REQUIRE(st.values.size() == 64);
    CHECK(st.time == 0.0);
    CHECK_FALSE(st.blew_up);
    CHECK(std::abs(st.values[32]) == doctest::Approx(prof.peak).epsilon(1e-15));
    for (int j = 1; j < 32; ++j) {  // even reflection about the center cell
        CHECK(st.values[32 + j] == st.values[32 - j]);
    }
    CHECK_THROWS_AS(make_state(prof, 63), DomainError);   // odd
    CHECK_THROWS_AS(make_state(prof, 8), DomainError);    // too short
    CHECK_THROWS_AS(make_state(prof, 128), DomainError);  // sample count mismatch
}

TEST_CASE("evolution guards") {
    FieldState st = profile_on_grid({2.0, 3.0}, 0.3, 256);
    CHECK_THROWS_AS(evolve({2.0, 3.0}, st, -1e-3, 1.0), DomainError);
    CHECK_THROWS_AS(evolve({2.0, 3.0}, st, 0.1, 1.0), DomainError);  // dt*k_max^2 > pi
    // a state already flagged as blown up passes through untouched
    st.blew_up = true;
    const FieldState out = evolve({2.0, 3.0}, st, 1e-3, 1.0);
    CHECK(out.blew_up);
    CHECK(out.time == st.time);
    // t_end at or before the current time is a no-op
    FieldState fresh = profile_on_grid({2.0, 3.0}, 0.3, 256);
    const FieldState same = evolve({2.0, 3.0}, fresh, 1e-3, 0.0);
    CHECK(same.time == 0.0);
}

TEST_CASE("discrete functionals match the closed-form norms") {
    const Nonlinearity nl{2.0, 3.0};
    const double omega = 0.3;
    const FieldState st = profile_on_grid(nl, omega, 512);
    const ProfileNorms n = norms_and_energy(nl, omega);
    CHECK(discrete_mass(st) == doctest::Approx(n.mass2).epsilon(1e-6));
    CHECK(discrete_energy(nl, st) == doctest::Approx(n.energy).epsilon(1e-6));
}

TEST_CASE("mass and energy are conserved by the stepper") {
    const Nonlinearity nl{2.0, 3.0};
    const FieldState st0 = profile_on_grid(nl, 0.3, 512);
    const double m0 = discrete_mass(st0);
    const double e0 = discrete_energy(nl, st0);
    const FieldState st = evolve(nl, st0, 1e-3, 2.0);
    CHECK(st.time == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_FALSE(st.blew_up);
    CHECK(std::abs(discrete_mass(st) - m0) < 1e-12 * m0);
    CHECK(std::abs(discrete_energy(nl, st) - e0) < 1e-9 * std::abs(e0));
}

TEST_CASE("gauge covariance of the flow") {
    const Nonlinearity nl{2.0, 3.0};
    FieldState a = profile_on_grid(nl, 0.3, 256);
    FieldState b = a;
    const std::complex<double> gauge = std::polar(1.0, 0.7);
    for (auto& v : b.values) v *= gauge;
    const FieldState ae = evolve(nl, a, 1e-3, 0.5);
    const FieldState be = evolve(nl, b, 1e-3, 0.5);
    double worst = 0.0;
    for (std::size_t i = 0; i < ae.values.size(); ++i) {
        worst = std::max(worst, std::abs(be.values[i] - gauge * ae.values[i]));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("translation covariance of the flow") {
    const Nonlinearity nl{2.0, 3.0};
    FieldState a = profile_on_grid(nl, 0.3, 256);
    FieldState b = a;
    b.values = rotated(a.values, 37);
    const FieldState ae = evolve(nl, a, 1e-3, 0.5);
    const FieldState be = evolve(nl, b, 1e-3, 0.5);
    const std::vector<std::complex<double>> shifted = rotated(ae.values, 37);
    double worst = 0.0;
    for (std::size_t i = 0; i < shifted.size(); ++i) {
        worst = std::max(worst, std::abs(be.values[i] - shifted[i]));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("standing wave stays on its orbit") {
    const Nonlinearity nl{2.0, 3.0};
    const double omega = 0.3;
    const FieldState st0 = profile_on_grid(nl, omega, 512);
    const FieldState st = evolve(nl, st0, 1e-3, 10.0);
    // amplitude profile unchanged
    double worst = 0.0;
    for (std::size_t i = 0; i < st.values.size(); ++i) {
        worst = std::max(worst, std::abs(std::abs(st.values[i]) - std::abs(st0.values[i])));
    }
    CHECK(worst < 1e-4);
    // the orbit coordinates recover the accumulated phase and zero shift
    const OrbitalDistance od = orbital_distance(st, nl, omega);
    CHECK(od.value < 2e-4);
    CHECK(od.theta == doctest::Approx(omega * 10.0).epsilon(2e-3));
    CHECK(std::abs(od.y) < 1e-4);
}

TEST_CASE("splitting error scales quadratically in dt") {
    const Nonlinearity nl{2.0, 3.0};
    const double omega = 0.3;
    auto drift = [&](double dt) {
        const FieldState st = evolve(nl, profile_on_grid(nl, omega, 256), dt, 1.0);
        return orbital_distance(st, nl, omega).value;
    };
    const double coarse = drift(4e-3);
    const double fine = drift(2e-3);
    CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.75));  // accept [2.5, 7] roughly
}

TEST_CASE("orbital distance identities") {
    const Nonlinearity nl{2.0, 3.0};
    const double omega = 0.3;

    // distance from the soliton itself is numerically zero
    const FieldState st = profile_on_grid(nl, omega, 512);
    const OrbitalDistance self = orbital_distance(st, nl, omega);
    CHECK(self.value < 1e-6);
    CHECK(std::abs(self.theta) < 1e-8);
    CHECK(std::abs(self.y) < 1e-6);

    // a gauge factor and a grid-aligned shift are recovered exactly
    const SolitonProfile prof = build_profile(nl, omega, 129, 16.0);
    FieldState sh = make_state(prof, 256);
    sh.values = rotated(sh.values, 12);  // 12 cells * dx(=0.125) = 1.5
    const std::complex<double> gauge = std::polar(1.0, 0.7);
    for (auto& v : sh.values) v *= gauge;
    const OrbitalDistance od = orbital_distance(sh, nl, omega);
    CHECK(od.value < 1e-6);
    CHECK(od.theta == doctest::Approx(0.7).epsilon(1e-8));
    CHECK(od.y == doctest::Approx(1.5).epsilon(1e-6));

    // a pure amplitude change of relative size eps sits at distance
    // eps * ||phi||_{H1}
    FieldState amp = profile_on_grid(nl, omega, 512);
    for (auto& v : amp.values) v *= 1.001;
    const ProfileNorms n = norms_and_energy(nl, omega);
    const double expect = 1e-3 * std::sqrt(n.grad_sq + n.mass2);
    CHECK(orbital_distance(amp, nl, omega).value == doctest::Approx(expect).epsilon(0.02));
}

TEST_CASE("stability experiment: structure of the record") {
    const Nonlinearity nl{2.0, 3.0};
    const ExperimentResult res = stability_experiment(nl, 0.3, 1e-3, 5.0, 256, 2e-3);
    CHECK_FALSE(res.blew_up);
    REQUIRE(res.series.size() == 21);  // t = 0, 0.25, ..., 5
    for (std::size_t k = 0; k < res.series.size(); ++k) {
        CHECK(res.series[k].t == doctest::Approx(0.25 * k).epsilon(1e-9));
    }
    // mass column constant, max_distance consistent with the series
    const double m0 = res.series.front().mass;
    double dmax = 0.0;
    for (const ExperimentRecord& r : res.series) {
        CHECK(std::abs(r.mass - m0) < 1e-11 * m0);
        dmax = std::max(dmax, r.distance);
    }
    CHECK(res.max_distance == doctest::Approx(dmax).epsilon(1e-14));
    const ProfileNorms n = norms_and_energy(nl, 0.3);
    CHECK(res.profile_h1_norm == doctest::Approx(std::sqrt(n.grad_sq + n.mass2)).epsilon(1e-6));
    // the stable side must not look unstable on this short horizon
    CHECK(res.verdict_hint != VerdictHint::consistent_with_unstable);
    CHECK(res.max_distance < 20.0 * 1e-3 * res.profile_h1_norm);
}

TEST_CASE("stability experiment input validation") {
    CHECK_THROWS_AS(stability_experiment({2.0, 3.0}, -0.3, 1e-3, 1.0, 64, 1e-3), DomainError);
    CHECK_THROWS_AS(stability_experiment({2.0, 3.0}, 0.3, 0.0, 1.0, 64, 1e-3), DomainError);
    CHECK_THROWS_AS(stability_experiment({2.0, 3.0}, 0.3, 1e-3, -1.0, 64, 1e-3), DomainError);
}

TEST_CASE("verdict hint names") {
    CHECK(std::string(verdict_hint_name(VerdictHint::consistent_with_stable)) ==
          "consistent_with_stable");
    CHECK(std::string(verdict_hint_name(VerdictHint::consistent_with_unstable)) ==
          "consistent_with_unstable");
    CHECK(std::string(verdict_hint_name(VerdictHint::inconclusive)) == "inconclusive");
}
