#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "test_support.hpp"
#include "uplinksim/channel.hpp"

using namespace uplinksim;

namespace {

BeamParams default_beam() {
    BeamParams b;
    b.aperture_radius_m = 0.75;
    b.initial_waist_m = 0.025;
    b.fried_parameter_m = 0.0324;
    b.tracking_error_m = 0.1;
    b.pointing_jitter_sq = 1e-12;
    return b;
}

}  // namespace

TEST_CASE("near field without turbulence keeps the initial waist",
          "[channel]") {
    BeamParams b = default_beam();
    b.initial_waist_m = 0.15;
    b.fried_parameter_m = std::numeric_limits<double>::infinity();
    // z far below the Rayleigh range pi w0^2 / lambda (~90 km here).
    const double w = long_term_beam_width(1.0, 785e-9, b);
    CHECK(w == Catch::Approx(0.15).epsilon(1e-9));
}

TEST_CASE("diffraction-only width at 500 km", "[channel]") {
    BeamParams b = default_beam();
    b.initial_waist_m = 0.15;
    b.fried_parameter_m = std::numeric_limits<double>::infinity();
    // Frozen from the independent Gaussian-divergence evaluation
    // sqrt(w0^2 + (z lambda / (pi w0))^2).
    CHECK(long_term_beam_width(500e3, 785e-9, b) ==
          Catch::Approx(0.846309941).epsilon(1e-9));
}

TEST_CASE("finite Fried parameter strictly widens the beam", "[channel]") {
    BeamParams b = default_beam();
    b.initial_waist_m = 0.15;
    b.fried_parameter_m = std::numeric_limits<double>::infinity();
    const double no_turb = long_term_beam_width(500e3, 785e-9, b);
    b.fried_parameter_m = 0.1;
    CHECK(long_term_beam_width(500e3, 785e-9, b) > no_turb);
}

TEST_CASE("beam width is monotone in range and in turbulence strength",
          "[channel]") {
    BeamParams b = default_beam();
    double prev = 0.0;
    for (double z : {100e3, 300e3, 600e3, 1200e3}) {
        const double w = long_term_beam_width(z, 800e-9, b);
        CHECK(w > prev);
        prev = w;
    }
    prev = std::numeric_limits<double>::infinity();
    for (double r0 : {0.01, 0.03, 0.1, 0.5}) {
        b.fried_parameter_m = r0;
        const double w = long_term_beam_width(500e3, 800e-9, b);
        CHECK(w < prev);
        prev = w;
    }
}

TEST_CASE("widening/wandering efficiency: frozen example and limits",
          "[channel]") {
    // R_A=0.15 m, w=3 m, z=500 km, sigma_tr=0, jitter=1e-12.
    CHECK(widening_wandering_efficiency(0.15, 3.0, 500e3, 0.0, 1e-12) ==
          Catch::Approx(4.853050576e-3).epsilon(1e-9));
    // Huge aperture catches everything.
    CHECK(widening_wandering_efficiency(1e6, 3.0, 500e3, 0.0, 1e-12) ==
          Catch::Approx(1.0).margin(1e-12));
    // Infinitely wide beam loses everything.
    CHECK(widening_wandering_efficiency(0.15, 1e9, 500e3, 0.0, 1e-12) <
          1e-15);
}

TEST_CASE("eta_w monotonicity", "[channel]") {
    const double base =
        widening_wandering_efficiency(0.5, 5.0, 500e3, 0.1, 1e-12);
    CHECK(widening_wandering_efficiency(0.6, 5.0, 500e3, 0.1, 1e-12) > base);
    CHECK(widening_wandering_efficiency(0.5, 6.0, 500e3, 0.1, 1e-12) < base);
    CHECK(widening_wandering_efficiency(0.5, 5.0, 800e3, 0.1, 1e-12) < base);
    CHECK(widening_wandering_efficiency(0.5, 5.0, 500e3, 2.0, 1e-12) < base);
}

TEST_CASE("zenith attenuation matches the closed form", "[channel]") {
    // At theta=0 the path altitude equals the distance, so
    // eta_a = exp(-alpha0 h_tilde (1 - exp(-z/h_tilde))).
    const auto geom = link_geometry(500e3, 0.0);
    AtmosphereParams atmo;
    const double closed =
        std::exp(-atmo.alpha0_per_m * atmo.scale_height_m *
                 -std::expm1(-geom.slant_range_m / atmo.scale_height_m));
    CHECK(closed == Catch::Approx(0.9675385596).epsilon(1e-9));
    CHECK(atmospheric_efficiency(geom, atmo) ==
          Catch::Approx(closed).epsilon(1e-8));
}

TEST_CASE("attenuation vanishes with alpha0 and worsens off zenith",
          "[channel]") {
    AtmosphereParams atmo;
    atmo.alpha0_per_m = 1e-300;
    const auto zenith = link_geometry(500e3, 0.0);
    CHECK(atmospheric_efficiency(zenith, atmo) ==
          Catch::Approx(1.0).margin(1e-12));

    atmo.alpha0_per_m = 5e-6;
    // Equal slant range, different zenith angles.
    LinkGeometry oblique = zenith;
    oblique.zenith_angle_rad = 60.0 * kPi / 180.0;
    CHECK(atmospheric_efficiency(oblique, atmo) <
          atmospheric_efficiency(zenith, atmo));

    // Stronger extinction, lower transmissivity.
    AtmosphereParams thick = atmo;
    thick.alpha0_per_m = 1e-5;
    CHECK(atmospheric_efficiency(zenith, thick) <
          atmospheric_efficiency(zenith, atmo));
}

TEST_CASE("flat-atmosphere limit holds to 2% out to 60 degrees", "[channel]") {
    AtmosphereParams atmo;
    for (double deg : {0.0, 20.0, 40.0, 60.0}) {
        LinkGeometry geom;
        geom.slant_range_m = 800e3;
        geom.zenith_angle_rad = deg * kPi / 180.0;
        const double flat = std::exp(-atmo.alpha0_per_m * atmo.scale_height_m /
                                     std::cos(geom.zenith_angle_rad));
        const double full = atmospheric_efficiency(geom, atmo);
        CHECK(std::abs(full - flat) / flat < 0.02);
    }
}

TEST_CASE("channel budget composes the four factors", "[channel]") {
    const auto geom = link_geometry(500e3, 1000e3);
    BeamParams beam = default_beam();
    AtmosphereParams atmo;
    StaticLosses losses{0.8, 0.6};
    const auto budget = channel_efficiency(geom, beam, atmo, losses, 800e-9);
    CHECK(budget.product() ==
          Catch::Approx(budget.eta_a * budget.eta_w * 0.8 * 0.6)
              .epsilon(1e-15));

    ChannelBudget fixed;
    fixed.eta_a = 0.9675;
    fixed.eta_w = 4.853e-3;
    fixed.optics_efficiency = 0.8;
    fixed.detector_efficiency = 0.6;
    CHECK(fixed.product() == Catch::Approx(2.2537332e-3).epsilon(1e-6));

    ChannelBudget zeroed = fixed;
    zeroed.eta_w = 0.0;
    CHECK(zeroed.product() == 0.0);
    ChannelBudget unity;
    CHECK(unity.product() == 1.0);
}

TEST_CASE("beam width modes: direct and off", "[channel]") {
    const auto geom = link_geometry(500e3, 0.0);
    AtmosphereParams atmo;
    StaticLosses losses{1.0, 1.0};

    BeamParams direct = default_beam();
    direct.mode = BeamWidthMode::kDirect;
    direct.direct_width_m = 3.0;
    const auto budget = channel_efficiency(geom, direct, atmo, losses, 800e-9);
    CHECK(budget.beam_width_m == 3.0);

    BeamParams off = default_beam();
    off.mode = BeamWidthMode::kOff;
    const auto ideal = channel_efficiency(geom, off, atmo, losses, 800e-9);
    CHECK(ideal.eta_w == 1.0);
}

TEST_CASE("invalid channel parameters are rejected", "[channel]") {
    BeamParams b = default_beam();
    CHECK_THROWS_AS(long_term_beam_width(0.0, 800e-9, b),
                    std::invalid_argument);
    b.initial_waist_m = 0.0;
    CHECK_THROWS_AS(long_term_beam_width(500e3, 800e-9, b),
                    std::invalid_argument);
    CHECK_THROWS_AS(widening_wandering_efficiency(0.0, 3.0, 1.0, 0.0, 0.0),
                    std::invalid_argument);
    AtmosphereParams atmo;
    atmo.scale_height_m = 0.0;
    CHECK_THROWS_AS(atmospheric_efficiency(link_geometry(500e3, 0.0), atmo),
                    std::invalid_argument);
    StaticLosses losses{0.0, 0.5};
    CHECK_THROWS_AS(losses.validate(), std::invalid_argument);
}
