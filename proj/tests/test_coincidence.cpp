#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <bit>
#include <cmath>

#include "test_support.hpp"
#include "uplinksim/coincidence.hpp"

using namespace uplinksim;

namespace {

DetectorPatternDistribution uniform_background(double p) {
    DetectorPatternDistribution d;
    for (int bits = 0; bits < 16; ++bits) {
        double prob = 1.0;
        for (int i = 0; i < 4; ++i) prob *= (bits >> i) & 1 ? p : 1.0 - p;
        d.probabilities[static_cast<std::size_t>(bits)] = prob;
    }
    return d;
}

const ClickPattern kSig1010 = ClickPattern::from_tuple(true, false, true, false);

}  // namespace

TEST_CASE("ground pattern distribution: lossless, lossy, one-sided",
          "[coincidence]") {
    const auto both_lost = ground_pattern_distribution(0.0, 0.0);
    CHECK(both_lost.probabilities[0] == 1.0);

    const auto lossless = ground_pattern_distribution(1.0, 1.0);
    lossless.validate();
    CHECK(lossless[kSig1010] == Catch::Approx(0.125).epsilon(1e-14));
    // No single-click mass when both photons always arrive.
    CHECK(lossless.probabilities[0b0001] ==
          Catch::Approx(1.0 / 16.0).epsilon(1e-14));

    const auto one_sided = ground_pattern_distribution(1.0, 0.0);
    one_sided.validate();
    CHECK(one_sided.probabilities[0b0001] == Catch::Approx(0.25).epsilon(1e-14));
    for (int bits = 0; bits < 16; ++bits) {
        const int clicks = std::popcount(static_cast<unsigned>(bits));
        if (clicks > 1)
            CHECK(one_sided.probabilities[static_cast<std::size_t>(bits)] == 0.0);
    }
}

TEST_CASE("ground pattern distribution normalizes for random efficiencies",
          "[coincidence]") {
    oracle::Rand rand(321);
    for (int i = 0; i < 40; ++i) {
        const auto d = ground_pattern_distribution(rand.uniform(0.0, 1.0),
                                                   rand.uniform(0.0, 1.0));
        d.validate(1e-12);
    }
}

TEST_CASE("signature_prob collapses to P_G(M) without background",
          "[coincidence]") {
    const auto ground = ground_pattern_distribution(0.7, 0.4);
    const auto quiet = uniform_background(0.0);
    CHECK(signature_prob(kSig1010, ground, quiet) ==
          Catch::Approx(ground[kSig1010]).epsilon(1e-14));

    const auto lossless = ground_pattern_distribution(1.0, 1.0);
    CHECK(signature_prob(kSig1010, lossless, quiet) ==
          Catch::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("signature_prob reproduces the seven-term expansion",
          "[coincidence]") {
    // P_M(1,0,1,0) spelt out term by term against generic distributions.
    oracle::Rand rand(777);
    const auto pg = rand.distribution();
    const auto pd = rand.distribution();
    auto g = [&](int bits) { return pg.probabilities[static_cast<std::size_t>(bits)]; };
    auto d = [&](int bits) { return pd.probabilities[static_cast<std::size_t>(bits)]; };
    const double expanded =
        g(0b0101) * (d(0b0000) + d(0b0100) + d(0b0001) + d(0b0101)) +
        g(0b0100) * (d(0b0001) + d(0b0101)) +
        g(0b0001) * (d(0b0100) + d(0b0101)) +
        g(0b0000) * d(0b0101);
    CHECK(signature_prob(kSig1010, pg, pd) ==
          Catch::Approx(expanded).epsilon(1e-14));
}

TEST_CASE("signature_prob equals the 16x16 brute force on random pairs",
          "[coincidence]") {
    oracle::Rand rand(2024);
    for (int i = 0; i < 300; ++i) {
        const auto pg = rand.distribution();
        const auto pd = rand.distribution();
        for (auto bits : kAcceptedSignatures) {
            const ClickPattern m{bits};
            CHECK(signature_prob(m, pg, pd) ==
                  Catch::Approx(oracle::signature_prob_brute(m, pg, pd))
                      .margin(1e-12));
        }
    }
}

TEST_CASE("non-accepted signatures are rejected", "[coincidence]") {
    const auto pg = ground_pattern_distribution(0.5, 0.5);
    const auto pd = uniform_background(0.1);
    CHECK_THROWS_AS(
        signature_prob(ClickPattern::from_tuple(true, true, false, false), pg, pd),
        std::invalid_argument);
    CHECK_THROWS_AS(
        signature_prob(ClickPattern::from_tuple(true, false, false, false), pg, pd),
        std::invalid_argument);
}

TEST_CASE("total success: ideal Bell measurement reaches one half",
          "[coincidence]") {
    const auto lossless = ground_pattern_distribution(1.0, 1.0);
    const auto quiet = uniform_background(0.0);
    CHECK(total_success(lossless, quiet) == Catch::Approx(0.5).margin(1e-12));
    CHECK(total_success(0.0) == 0.0);
    CHECK_THROWS_AS(total_success(0.3), std::invalid_argument);
}

TEST_CASE("asymmetric detector config trips the symmetry guard",
          "[coincidence]") {
    const auto ground = ground_pattern_distribution(0.8, 0.8);
    // Detector 1 much noisier than the rest.
    DetectorPatternDistribution biased;
    const std::array<double, 4> p{0.3, 0.01, 0.01, 0.01};
    for (int bits = 0; bits < 16; ++bits) {
        double prob = 1.0;
        for (int i = 0; i < 4; ++i)
            prob *= (bits >> i) & 1 ? p[static_cast<std::size_t>(i)]
                                    : 1.0 - p[static_cast<std::size_t>(i)];
        biased.probabilities[static_cast<std::size_t>(bits)] = prob;
    }
    CHECK_THROWS_AS(total_success(ground, biased), std::logic_error);
}

TEST_CASE("eta_tot never exceeds one half without background",
          "[coincidence]") {
    oracle::Rand rand(606);
    const auto quiet = uniform_background(0.0);
    for (int i = 0; i < 60; ++i) {
        const double eta = rand.uniform(0.0, 1.0);
        const auto ground = ground_pattern_distribution(eta, eta);
        CHECK(total_success(ground, quiet) <= 0.5 + 1e-12);
    }
    CHECK(total_success(ground_pattern_distribution(1.0, 1.0), quiet) ==
          Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("legitimate fraction: no background and no signal", "[coincidence]") {
    const auto ground = ground_pattern_distribution(0.6, 0.9);
    CHECK(legitimate_fraction(ground, uniform_background(0.0), kSig1010) ==
          Catch::Approx(1.0).margin(1e-14));

    // eta1 = 0 removes all two-click ground patterns.
    const auto one_dead = ground_pattern_distribution(0.0, 0.7);
    CHECK(legitimate_fraction(one_dead, uniform_background(0.2), kSig1010) ==
          Catch::Approx(0.0).margin(1e-14));

    CHECK_THROWS_AS(legitimate_fraction(ground_pattern_distribution(0.0, 0.0),
                                        uniform_background(0.0), kSig1010),
                    std::domain_error);
}

TEST_CASE("final fidelity endpoints and affine form", "[coincidence]") {
    CHECK(final_fidelity(1.0, 0.93) == Catch::Approx(0.93).epsilon(1e-15));
    CHECK(final_fidelity(0.0, 0.93) == Catch::Approx(0.25).epsilon(1e-15));
    CHECK(final_fidelity(0.9, 0.9) == Catch::Approx(0.835).epsilon(1e-15));
    CHECK_THROWS_AS(final_fidelity(1.2, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(final_fidelity(0.5, 0.3), std::invalid_argument);

    // Strictly increasing in P_S for any F_ic > 1/4, and bounded by
    // [1/4, 1].
    for (double f_ic : {0.5, 0.75, 1.0}) {
        double prev = 0.0;
        for (double ps = 0.0; ps <= 1.0; ps += 0.125) {
            const double f = final_fidelity(ps, f_ic);
            CHECK(f >= 0.25);
            CHECK(f <= 1.0);
            if (ps > 0.0) CHECK(f > prev);
            prev = f;
        }
    }
}

TEST_CASE("detector and mode permutations leave the outcome unchanged",
          "[coincidence]") {
    // Uniform routing and equal detector click probabilities are invariant
    // under 1<->2, 3<->4, and left<->right relabelling, so the four
    // signature probabilities must agree and eta_tot must equal 4 P_M.
    oracle::Rand rand(9);
    for (int i = 0; i < 20; ++i) {
        const auto ground = ground_pattern_distribution(rand.uniform(0, 1),
                                                        rand.uniform(0, 1));
        const auto bg = uniform_background(rand.uniform(0, 0.4));
        const double pm = signature_prob(kSig1010, ground, bg);
        for (auto bits : kAcceptedSignatures)
            CHECK(signature_prob(ClickPattern{bits}, ground, bg) ==
                  Catch::Approx(pm).margin(1e-14));
        CHECK(total_success(ground, bg) == Catch::Approx(4 * pm).margin(1e-14));
        const double ps = legitimate_fraction(ground, bg, kSig1010);
        for (auto bits : kAcceptedSignatures)
            CHECK(legitimate_fraction(ground, bg, ClickPattern{bits}) ==
                  Catch::Approx(ps).margin(1e-12));
    }
}

TEST_CASE("Monte Carlo: exact limits", "[montecarlo]") {
    const std::array<double, 4> quiet{0, 0, 0, 0};
    const auto dead = monte_carlo_coincidence(0.0, 0.0, quiet, {}, 20000, 1);
    CHECK(dead.accepted == 0);
    CHECK(dead.eta_tot == 0.0);

    const auto ideal = monte_carlo_coincidence(1.0, 1.0, quiet, {}, 1000000, 7);
    CHECK(std::abs(ideal.eta_tot - 0.5) <= 3.0 * ideal.eta_tot_stderr);
    CHECK(ideal.p_s == 1.0);
}

TEST_CASE("Monte Carlo is deterministic and thread-count independent",
          "[montecarlo]") {
    const std::array<double, 4> bg{0.05, 0.05, 0.05, 0.05};
    const auto a = monte_carlo_coincidence(0.6, 0.7, bg, {}, 200000, 42, 1);
    const auto b = monte_carlo_coincidence(0.6, 0.7, bg, {}, 200000, 42, 2);
    const auto c = monte_carlo_coincidence(0.6, 0.7, bg, {}, 200000, 42, 7);
    CHECK(a.accepted == b.accepted);
    CHECK(a.legitimate == b.legitimate);
    CHECK(a.accepted == c.accepted);
    CHECK(a.legitimate == c.legitimate);

    const auto other_seed = monte_carlo_coincidence(0.6, 0.7, bg, {}, 200000, 43);
    CHECK(other_seed.accepted != a.accepted);
}

TEST_CASE("Monte Carlo agrees with the analytic values", "[montecarlo]") {
    oracle::Rand rand(150);
    for (int i = 0; i < 5; ++i) {
        const double eta1 = rand.uniform(0.3, 1.0);
        const double eta2 = rand.uniform(0.3, 1.0);
        const double p = rand.uniform(0.0, 0.15);
        const std::array<double, 4> bg{p, p, p, p};

        const auto ground = ground_pattern_distribution(eta1, eta2);
        const auto backgrounds = uniform_background(p);
        const double eta_tot = total_success(ground, backgrounds);
        const double ps = legitimate_fraction(ground, backgrounds, kSig1010);

        const auto mc = monte_carlo_coincidence(
            eta1, eta2, bg, {}, 1000000, 1234 + static_cast<std::uint64_t>(i));
        CHECK(std::abs(mc.eta_tot - eta_tot) <= 3.0 * mc.eta_tot_stderr);
        CHECK(std::abs(mc.p_s - ps) <= 3.0 * mc.p_s_stderr);
    }
}

TEST_CASE("Monte Carlo error shrinks at the 1/sqrt(N) rate", "[montecarlo]") {
    // Standard-error estimate at 100x the trials should drop by ~10x.
    const std::array<double, 4> bg{0.02, 0.02, 0.02, 0.02};
    const auto small = monte_carlo_coincidence(0.5, 0.5, bg, {}, 10000, 5);
    const auto large = monte_carlo_coincidence(0.5, 0.5, bg, {}, 1000000, 5);
    const double ratio = small.eta_tot_stderr / large.eta_tot_stderr;
    CHECK(ratio > 6.0);
    CHECK(ratio < 16.0);
}

TEST_CASE("Monte Carlo input validation", "[montecarlo]") {
    const std::array<double, 4> bg{0, 0, 0, 0};
    CHECK_THROWS_AS(monte_carlo_coincidence(0.5, 0.5, bg, {}, 100, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(monte_carlo_coincidence(1.5, 0.5, bg, {}, 20000, 0),
                    std::invalid_argument);
}
