#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "test_support.hpp"
#include "uplinksim/scenario.hpp"

using namespace uplinksim;

namespace {

// Ideal limit: every loss channel disabled, no background, no mismatch, and
// a window wide enough to capture the packets entirely.
ScenarioParams ideal_params() {
    ScenarioParams p = table1_defaults();
    p.clock_offset_s = 0.0;
    p.gating_window_s = 20.0 * p.temporal_width_s;
    p.beam.mode = BeamWidthMode::kOff;
    p.atmosphere.alpha0_per_m = 1e-300;
    p.losses = StaticLosses{1.0, 1.0};
    p.background.night_rate_per_detector_hz = 0.0;
    p.background.day_rate_per_detector_hz = 0.0;
    p.background.dark_count_rate_hz = 0.0;
    return p;
}

}  // namespace

TEST_CASE("ideal limit: unit fidelity at the linear-optics ceiling",
          "[scenario]") {
    const auto m = evaluate_scenario(ideal_params());
    CHECK(m.fidelity == Catch::Approx(1.0).margin(1e-9));
    CHECK(m.eta_tot == Catch::Approx(0.5).margin(1e-12));
    CHECK(m.p_s == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("table-1-defaults at 500 km / 1000 km (frozen chain)",
          "[scenario]") {
    // All expected values frozen from an independent closed-form + adaptive
    // quadrature evaluation of the same model chain.
    const auto m = evaluate_scenario(table1_defaults());
    CHECK(m.slant_range_m == Catch::Approx(720750.855037).epsilon(1e-9));
    CHECK(m.zenith_angle_rad ==
          Catch::Approx(48.3653866271 * kPi / 180.0).epsilon(1e-9));
    CHECK(m.eta_a == Catch::Approx(0.951604411324).epsilon(1e-8));
    CHECK(m.beam_width_m == Catch::Approx(10.8663244721).epsilon(1e-10));
    CHECK(m.eta_w == Catch::Approx(0.00944030499654).epsilon(1e-10));
    CHECK(m.p_gw1 == Catch::Approx(0.954229725073).epsilon(1e-9));
    CHECK(m.p_gw2 == Catch::Approx(m.p_gw1).epsilon(1e-12));
    CHECK(m.f_ic == Catch::Approx(0.999033856903).epsilon(1e-9));
    CHECK(m.eta_channel1 == Catch::Approx(0.00214306538724).epsilon(1e-8));
    CHECK(m.click_prob == Catch::Approx(6.11981273182e-05).epsilon(1e-10));
    CHECK(m.p_m_single == Catch::Approx(7.08639244817e-07).epsilon(1e-8));
    CHECK(m.eta_tot == Catch::Approx(2.83455697927e-06).epsilon(1e-8));
    CHECK(m.p_s == Catch::Approx(0.810032603319).epsilon(1e-8));
    CHECK(m.fidelity == Catch::Approx(0.856741845082).epsilon(1e-8));
}

TEST_CASE("best-performance point at 200 km / 300 km (frozen chain)",
          "[scenario]") {
    ScenarioParams p = table1_defaults();
    p.altitude_m = 200e3;
    p.ground_separation_m = 300e3;
    const auto m = evaluate_scenario(p);
    CHECK(m.eta_a == Catch::Approx(0.95902610173).epsilon(1e-8));
    CHECK(m.eta_w == Catch::Approx(0.0749502085498).epsilon(1e-10));
    CHECK(m.eta_tot == Catch::Approx(0.000151145797312).epsilon(1e-8));
    CHECK(m.p_s == Catch::Approx(0.972552862625).epsilon(1e-8));
    CHECK(m.fidelity == Catch::Approx(0.978475021734).epsilon(1e-8));
}

TEST_CASE("evaluation is deterministic", "[scenario]") {
    const auto a = evaluate_scenario(table1_defaults());
    const auto b = evaluate_scenario(table1_defaults());
    CHECK(a.fidelity == b.fidelity);
    CHECK(a.eta_tot == b.eta_tot);
    CHECK(a.p_m_single == b.p_m_single);
}

TEST_CASE("daytime regime collapses toward the mixed-state floor",
          "[scenario]") {
    ScenarioParams p = table1_defaults();
    p.background.regime = SkyRegime::kDay;
    const auto m = evaluate_scenario(p);
    CHECK(m.fidelity < 0.3);
    CHECK(m.fidelity >= 0.25);
}

TEST_CASE("radiance mode reproduces the direct night rate it was calibrated "
          "against", "[scenario]") {
    ScenarioParams direct = table1_defaults();
    ScenarioParams radiance = table1_defaults();
    radiance.background.rate_mode = BackgroundRateMode::kRadiance;
    const auto a = evaluate_scenario(direct);
    const auto b = evaluate_scenario(radiance);
    CHECK(b.stray_rate_hz == Catch::Approx(a.stray_rate_hz).epsilon(5e-3));
    CHECK(b.fidelity == Catch::Approx(a.fidelity).epsilon(1e-4));
}

TEST_CASE("scenario invariants reject bad inputs", "[scenario]") {
    ScenarioParams p = table1_defaults();
    p.gating_window_s = 0.0;
    CHECK_THROWS_WITH(evaluate_scenario(p),
                      Catch::Matchers::ContainsSubstring("gating_window_s > 0"));
    p = table1_defaults();
    p.temporal_width_s = -1e-9;
    CHECK_THROWS_AS(evaluate_scenario(p), std::invalid_argument);
    p = table1_defaults();
    p.losses.detector_efficiency = 1.5;
    CHECK_THROWS_AS(evaluate_scenario(p), std::invalid_argument);
}

TEST_CASE("Gaussian clock-offset spread averages the delivered fidelity",
          "[scenario]") {
    // Zero spread reproduces the fixed-offset evaluation bit for bit.
    ScenarioParams fixed = table1_defaults();
    ScenarioParams spread = fixed;
    spread.clock_offset_spread_s = 0.0;
    CHECK(evaluate_scenario(spread).fidelity ==
          evaluate_scenario(fixed).fidelity);

    // A tiny spread barely moves the result.
    spread.clock_offset_spread_s = 1e-15;
    CHECK(evaluate_scenario(spread).fidelity ==
          Catch::Approx(evaluate_scenario(fixed).fidelity).epsilon(1e-9));

    // Jitter around a zero mean offset can only hurt: some realizations are
    // mismatched, none are better than perfectly matched.
    ScenarioParams matched = table1_defaults();
    matched.clock_offset_s = 0.0;
    ScenarioParams jittered = matched;
    jittered.clock_offset_spread_s = 5e-9;
    const auto m_fixed = evaluate_scenario(matched);
    const auto m_jit = evaluate_scenario(jittered);
    CHECK(m_jit.fidelity < m_fixed.fidelity);
    CHECK(m_jit.f_ic < m_fixed.f_ic);

    // A spread so large that most realizations miss the window still
    // produces a valid background-limited ensemble.
    jittered.clock_offset_spread_s = 400e-9;
    const auto m_wild = evaluate_scenario(jittered);
    CHECK(m_wild.fidelity >= 0.25);
    CHECK(m_wild.eta_tot < m_fixed.eta_tot);
}

TEST_CASE("clock offset degrades fidelity monotonically", "[scenario]") {
    double prev = 1.0;
    for (double dt : {0.0, 2e-9, 5e-9, 10e-9, 20e-9}) {
        ScenarioParams p = table1_defaults();
        p.background.night_rate_per_detector_hz = 0.0;
        p.background.dark_count_rate_hz = 0.0;
        p.clock_offset_s = dt;
        const auto m = evaluate_scenario(p);
        CHECK(m.fidelity <= prev + 1e-12);
        prev = m.fidelity;
    }
}
