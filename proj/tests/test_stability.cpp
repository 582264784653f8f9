#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

#include "dpnls/errors.hpp"
#include "dpnls/model.hpp"
#include "dpnls/profile.hpp"
#include "dpnls/stability.hpp"

using namespace dpnls;

TEST_CASE("mass slope at frozen benchmark points") {
    CHECK(dmass({2.0, 3.0}, 0.3) == doctest::Approx(1.0488304292652117).epsilon(1e-11));
    CHECK(dmass({2.0, 4.0}, 0.2) == doctest::Approx(-0.15518407609950904).epsilon(1e-11));
    CHECK(dmass({3.0, 4.0}, 0.5) == doctest::Approx(-0.15855365732388835).epsilon(1e-11));
}

TEST_CASE("mass slope equals the finite difference of the mass") {
    const Nonlinearity nl{2.0, 3.0};
    const double w = 0.3, d = 1e-3 * w;
    const double fd = (mass(nl, w + d) - mass(nl, w - d)) / (2.0 * d);
    CHECK(dmass(nl, w) == doctest::Approx(fd).epsilon(1e-5));
}

TEST_CASE("mass slope input validation") {
    CHECK_THROWS_AS(dmass({2.0, 3.0}, 0.0), DomainError);
    CHECK_THROWS_AS(dmass({2.0, 3.0}, -0.5), DomainError);
    CHECK_THROWS_AS(dmass({2.0, 3.0}, std::numeric_limits<double>::infinity()), DomainError);
    CHECK_THROWS_AS(dmass({2.0, 3.0}, std::numeric_limits<double>::quiet_NaN()), DomainError);
    // q >= 5 is allowed here (and the slope is negative there)
    const Nonlinearity big{2.0, 5.5};
    CHECK(dmass(big, eval_L(big, 4.0 * h_zero(big))) < 0.0);
}

TEST_CASE("rescaled sign integrals at frozen points") {
    const Nonlinearity nl{3.0, 4.0};
    CHECK(f_family(nl, 2.0, 0) == doctest::Approx(-2.8401259309).epsilon(1e-9));
    CHECK(f_family(nl, 2.0, 1) == doctest::Approx(93.8531717277).epsilon(1e-9));
    CHECK(f_family(nl, 2.0, 2) == doctest::Approx(-1420.91998104).epsilon(1e-9));
    CHECK(f_family({2.0, 4.0}, 3.0, 0) == doctest::Approx(0.28031306725).epsilon(1e-9));
}

TEST_CASE("F0 stays accurate arbitrarily close to the degenerate point") {
    // the integrand develops a boundary layer of width ~(h - h0)^(1/alpha);
    // these references pin the behavior at relative offsets 1e-4 and 1e-3
    const Nonlinearity nl{2.0, 3.5};
    const double h0 = h_zero(nl);
    CHECK(f_family(nl, h0 * (1.0 + 1e-4), 0) ==
          doctest::Approx(-1.6542035827984640).epsilon(1e-10));
    CHECK(f_family(nl, h0 * (1.0 + 1e-3), 0) ==
          doctest::Approx(-1.5212240078159968).epsilon(1e-10));
}

TEST_CASE("sign integral input validation") {
    const Nonlinearity nl{2.0, 3.0};
    const double h0 = h_zero(nl);
    CHECK_THROWS_AS(f_family(nl, h0, 0), DomainError);        // boundary excluded
    CHECK_THROWS_AS(f_family(nl, 0.5 * h0, 0), DomainError);
    CHECK_THROWS_AS(f_family(nl, 2.0 * h0, 3), DomainError);
    CHECK_THROWS_AS(f_family(nl, 2.0 * h0, -1), DomainError);
    CHECK_THROWS_AS(f_family({2.0, 5.5}, 10.0, 0), DomainError);
}

TEST_CASE("mass slope sign agrees with F0 through the substitution") {
    const Nonlinearity nl{3.0, 4.0};
    for (double w : {0.3, 0.7, 1.5, 2.5}) {
        const double f0 = f_family(nl, h_of_omega(nl, w), 0);
        const double dm = dmass(nl, w);
        CHECK(((f0 > 0.0) - (f0 < 0.0)) == ((dm > 0.0) - (dm < 0.0)));
    }
}

TEST_CASE("zero-frequency limit: finite branch") {
    const ZeroFrequencyLimit zf = zero_frequency_limit({2.0, 4.0});
    REQUIRE(zf.kind == LimitKind::finite);
    CHECK(zf.value == doctest::Approx(-1.36829993051).epsilon(1e-9));
    CHECK(zf.c_pq == doctest::Approx(1.84988195782).epsilon(1e-9));
    CHECK(zf.sign == -1);

    const ZeroFrequencyLimit pos = zero_frequency_limit({1.5, 3.5});
    REQUIRE(pos.kind == LimitKind::finite);
    CHECK(pos.value > 0.0);
    CHECK(pos.sign == 1);
}

TEST_CASE("zero-frequency limit: balanced and divergent branches") {
    const ZeroFrequencyLimit bal = zero_frequency_limit({2.0, 3.0});  // 2p+q = 7
    REQUIRE(bal.kind == LimitKind::finite);
    CHECK(bal.value == 0.0);
    CHECK(bal.sign == 0);

    for (auto nl : {Nonlinearity{2.5, 3.0}, Nonlinearity{3.0, 4.0},
                    Nonlinearity{7.0 / 3.0, 3.0}}) {
        const ZeroFrequencyLimit inf = zero_frequency_limit(nl);
        CHECK(inf.kind == LimitKind::negative_infinity);
        CHECK(inf.sign == -1);
        CHECK(std::isinf(inf.value));
        CHECK(inf.value < 0.0);
    }
    CHECK_THROWS_AS(zero_frequency_limit({2.0, 5.0}), DomainError);
}

TEST_CASE("degenerate-limit integral against its closed form") {
    auto pair = [](double p, double q) {
        const Nonlinearity nl{p, q};
        const double quad = h_limit_integral(nl);
        const double closed = h_limit_closed_form(nl);
        CHECK(quad == doctest::Approx(closed).epsilon(1e-9));
        return quad;
    };
    CHECK(pair(2.0, 4.0) == doctest::Approx(-2.6220575542921196).epsilon(1e-9));
    CHECK(pair(2.0, 3.5) == doctest::Approx(-1.4021821053254542).epsilon(1e-9));
    CHECK(pair(1.5, 3.0) == doctest::Approx(1.4936684004443737).epsilon(1e-9));
    // balanced pair integrates to zero (Gamma pole in the closed form)
    CHECK(h_limit_closed_form({2.0, 3.0}) == 0.0);
    CHECK(std::abs(h_limit_integral({2.0, 3.0})) < 1e-8);
}

TEST_CASE("degenerate-limit divergence detection") {
    CHECK(h_limit_divergent({2.5, 3.0}));
    CHECK(h_limit_divergent({3.0, 4.0}));
    CHECK(h_limit_divergent({7.0 / 3.0, 3.0}));  // boundary counts as divergent
    CHECK_FALSE(h_limit_divergent({2.0, 4.0}));
    CHECK_FALSE(h_limit_divergent({1.5, 3.0}));
    CHECK_THROWS_AS(h_limit_integral({2.5, 3.0}), DomainError);
    CHECK_THROWS_AS(h_limit_integral({2.0, 5.5}), DomainError);
    CHECK_THROWS_AS(h_limit_closed_form({3.0, 4.0}), DomainError);
}

TEST_CASE("sharp threshold at frozen benchmark pairs") {
    const auto th34 = threshold({3.0, 4.0});
    REQUIRE(th34.has_value());
    CHECK(th34->z_star == doctest::Approx(3.68606166382).epsilon(1e-9));
    CHECK(th34->omega_star == doctest::Approx(0.987734613757).epsilon(1e-9));
    CHECK(th34->curvature_estimate > 0.0);
    CHECK(th34->omega_star < critical_points({3.0, 4.0}).omega0);
    // F0 changes sign from - to + across z_star
    CHECK(f_family({3.0, 4.0}, th34->z_star * 0.999, 0) < 0.0);
    CHECK(f_family({3.0, 4.0}, th34->z_star * 1.001, 0) > 0.0);

    const auto th = threshold({2.0, 3.5});
    REQUIRE(th.has_value());
    CHECK(th->z_star == doctest::Approx(1.94608215031).epsilon(1e-9));
    CHECK(th->omega_star == doctest::Approx(0.0915582559527).epsilon(1e-9));
    CHECK(th->curvature_estimate > 0.0);
}

TEST_CASE("threshold is absent outside the sharp regime") {
    CHECK_FALSE(threshold({2.0, 3.0}).has_value());    // stable for every frequency
    CHECK_FALSE(threshold({1.5, 4.5}).has_value());    // gap regime
    CHECK_FALSE(threshold({1.5, 3.5}).has_value());    // gap regime
    CHECK_FALSE(threshold({2.0, 5.5}).has_value());    // q >= 5
}

TEST_CASE("classification: stable for all frequencies") {
    const StabilityReport rep = classify({2.0, 3.0});
    CHECK(rep.regime == Regime::stable_all);
    CHECK_FALSE(rep.omega_star.has_value());
    CHECK_FALSE(rep.mu_estimate.has_value());
    REQUIRE(rep.omega0.has_value());
    CHECK(*rep.omega0 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    REQUIRE(rep.theory_intervals.size() == 1);
    CHECK(rep.theory_intervals[0].lo == 0.0);
    CHECK(std::isinf(rep.theory_intervals[0].hi));
    CHECK(rep.theory_intervals[0].verdict == Verdict::stable);
    REQUIRE(rep.numeric_sign_scan.size() == 24);
    for (const ScanPoint& pt : rep.numeric_sign_scan) CHECK(pt.sign == 1);
}

TEST_CASE("classification: unstable for all frequencies at large q") {
    const StabilityReport rep = classify({2.0, 5.5});
    CHECK(rep.regime == Regime::q_ge_5_unstable_all);
    CHECK_FALSE(rep.omega0.has_value());
    CHECK_FALSE(rep.omega_star.has_value());
    REQUIRE(rep.theory_intervals.size() == 1);
    CHECK(rep.theory_intervals[0].verdict == Verdict::unstable);
    REQUIRE(rep.numeric_sign_scan.size() == 24);
    for (const ScanPoint& pt : rep.numeric_sign_scan) CHECK(pt.sign == -1);
}

TEST_CASE("classification: sharp threshold regime") {
    const StabilityReport rep = classify({3.0, 4.0});
    CHECK(rep.regime == Regime::sharp_threshold);
    REQUIRE(rep.omega_star.has_value());
    CHECK(*rep.omega_star == doctest::Approx(0.987734613757).epsilon(1e-9));
    REQUIRE(rep.omega0.has_value());
    CHECK(*rep.omega0 == doctest::Approx(3.125).epsilon(1e-13));
    REQUIRE(rep.theory_intervals.size() == 2);
    CHECK(rep.theory_intervals[0].lo == 0.0);
    CHECK(rep.theory_intervals[0].hi == *rep.omega_star);
    CHECK(rep.theory_intervals[0].verdict == Verdict::unstable_incl_endpoint);
    CHECK(rep.theory_intervals[1].lo == *rep.omega_star);
    CHECK(std::isinf(rep.theory_intervals[1].hi));
    CHECK(rep.theory_intervals[1].verdict == Verdict::stable);
}

TEST_CASE("classification: gap regimes") {
    const StabilityReport un = classify({1.5, 4.5});
    CHECK(un.regime == Regime::unstable_small_with_gap);
    REQUIRE(un.mu_estimate.has_value());
    CHECK(*un.mu_estimate == doctest::Approx(0.697629).epsilon(1e-4));
    REQUIRE(un.omega0.has_value());
    CHECK(*un.omega0 == doctest::Approx(critical_points({1.5, 4.5}).omega0).epsilon(1e-13));
    REQUIRE(un.theory_intervals.size() == 3);
    CHECK(un.theory_intervals[0].verdict == Verdict::unstable);
    CHECK(un.theory_intervals[1].verdict == Verdict::theory_silent);
    CHECK(un.theory_intervals[2].verdict == Verdict::stable);
    CHECK(un.theory_intervals[0].hi == *un.mu_estimate);
    CHECK(un.theory_intervals[1].lo == *un.mu_estimate);
    CHECK(un.theory_intervals[1].hi == *un.omega0);
    CHECK(un.theory_intervals[2].lo == *un.omega0);
    CHECK(*un.mu_estimate < *un.omega0);

    const StabilityReport st = classify({1.5, 3.5});
    CHECK(st.regime == Regime::stable_small_with_gap);
    REQUIRE(st.mu_estimate.has_value());
    CHECK(*st.mu_estimate == doctest::Approx(1.1889).epsilon(1e-3));
    REQUIRE(st.theory_intervals.size() == 3);
    CHECK(st.theory_intervals[0].verdict == Verdict::stable);
    CHECK(st.theory_intervals[1].verdict == Verdict::theory_silent);
    CHECK(st.theory_intervals[2].verdict == Verdict::stable);
}

TEST_CASE("sign scan frequencies ascend") {
    for (auto nl : {Nonlinearity{2.0, 3.0}, Nonlinearity{3.0, 4.0}}) {
        const StabilityReport rep = classify(nl);
        for (std::size_t i = 1; i < rep.numeric_sign_scan.size(); ++i) {
            CHECK(rep.numeric_sign_scan[i].omega > rep.numeric_sign_scan[i - 1].omega);
        }
    }
}

TEST_CASE("sign-pattern audit in the transitional window") {
    const AuditRecord rec = sign_pattern_audit({2.0, 3.5});
    REQUIRE(rec.items.size() == 4);
    CHECK(rec.items[0].name == "near_h0_sign");
    CHECK(rec.items[1].name == "divided_difference_growth");
    CHECK(rec.items[2].name == "f0prime_single_sign_change");
    CHECK(rec.items[3].name == "positivity_persists");
    for (const AuditItem& it : rec.items) {
        CHECK(it.pass);
        CHECK_FALSE(it.witness.empty());
    }
    CHECK(rec.all_pass);
}

TEST_CASE("audit trichotomy edge cases") {
    // balanced pair: the expected near-endpoint sign is 0, which auto-passes
    const AuditRecord bal = sign_pattern_audit({2.0, 3.0});
    CHECK(bal.items[0].pass);
    CHECK(bal.items[0].witness.find("expected sign 0") != std::string::npos);
    // 2p+q < 7 inside the window: slope positive from the start
    const AuditRecord low = sign_pattern_audit({1.9, 3.1});
    CHECK(low.items[0].pass);
    CHECK(f_family({1.9, 3.1}, h_zero({1.9, 3.1}) * (1.0 + 1e-4), 0) > 0.0);
}

TEST_CASE("audit preconditions") {
    CHECK_THROWS_AS(sign_pattern_audit({3.0, 4.0}), DomainError);   // p too large
    CHECK_THROWS_AS(sign_pattern_audit({1.5, 3.0}), DomainError);   // p too small
    CHECK_THROWS_AS(sign_pattern_audit({2.0, 5.5}), DomainError);   // q too large
}

TEST_CASE("enum names used by the reporting layer") {
    CHECK(std::string(regime_name(Regime::stable_all)) == "stable_all");
    CHECK(std::string(regime_name(Regime::sharp_threshold)) == "sharp_threshold");
    CHECK(std::string(regime_name(Regime::q_ge_5_unstable_all)) == "q_ge_5_unstable_all");
    CHECK(std::string(regime_name(Regime::unstable_small_with_gap)) == "unstable_small_with_gap");
    CHECK(std::string(regime_name(Regime::stable_small_with_gap)) == "stable_small_with_gap");
    CHECK(std::string(verdict_name(Verdict::stable)) == "stable");
    CHECK(std::string(verdict_name(Verdict::unstable)) == "unstable");
    CHECK(std::string(verdict_name(Verdict::unstable_incl_endpoint)) == "unstable_incl_endpoint");
    CHECK(std::string(verdict_name(Verdict::theory_silent)) == "theory_silent");
}
