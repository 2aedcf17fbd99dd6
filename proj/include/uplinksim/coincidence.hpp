// Click-pattern combinatorics of the four-detector Bell measurement.
//
// Detector tuple d = (d1, d2, d3, d4); detectors 1-2 form the left spatial
// mode, 3-4 the right. A pattern is packed into bits 0..3 (bit i-1 for
// detector i). An accepted signature has exactly one click per mode. A
// detector fires when a ground photon or a background count (or both)
// arrives, so the observed pattern is the bitwise OR of the ground pattern
// and the background pattern.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "uplinksim/rng.hpp"

namespace uplinksim {

struct ClickPattern {
    std::uint8_t bits = 0;  // bit i-1 set when detector i clicked

    static ClickPattern from_tuple(bool d1, bool d2, bool d3, bool d4) {
        return ClickPattern{static_cast<std::uint8_t>(
            (d1 ? 1 : 0) | (d2 ? 2 : 0) | (d3 ? 4 : 0) | (d4 ? 8 : 0))};
    }
    bool detector(int i) const { return (bits >> (i - 1)) & 1u; }
    friend bool operator==(ClickPattern a, ClickPattern b) {
        return a.bits == b.bits;
    }
};

// The four accepted success signatures: one click in each spatial mode.
inline constexpr std::array<std::uint8_t, 4> kAcceptedSignatures = {
    0b0101,  // (1,0,1,0)
    0b0110,  // (0,1,1,0)
    0b1001,  // (1,0,0,1)
    0b1010,  // (0,1,0,1)
};

inline bool is_accepted_signature(ClickPattern m) {
    for (auto s : kAcceptedSignatures)
        if (m.bits == s) return true;
    return false;
}

// Probability mass over the 16 click patterns.
struct DetectorPatternDistribution {
    std::array<double, 16> probabilities{};

    double operator[](ClickPattern d) const { return probabilities[d.bits]; }
    double& operator[](ClickPattern d) { return probabilities[d.bits]; }

    void validate(double tol = 1e-12) const {
        double sum = 0;
        for (double p : probabilities) {
            if (!(p >= 0))
                throw std::invalid_argument(
                    "pattern distribution: negative probability");
            sum += p;
        }
        if (std::abs(sum - 1.0) > tol)
            throw std::invalid_argument(
                "pattern distribution: probabilities sum to " +
                std::to_string(sum) + ", expected 1");
    }
};

// Where a transmitted photon lands. Default: unbiased polarization through
// the PBS network routes it to each detector with probability 1/4. The
// probabilities are configurable so a beam-splitter-faithful variant can
// replace the uniform model.
struct RoutingModel {
    std::array<double, 4> detector_probs = {0.25, 0.25, 0.25, 0.25};

    void validate() const {
        double sum = 0;
        for (double p : detector_probs) {
            if (!(p >= 0))
                throw std::invalid_argument("routing: negative detector probability");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("routing: detector probabilities must sum to 1");
    }
};

// Distribution of detector patterns caused by the two ground photons alone.
// Each photon is independently lost (probability 1 - eta_i) or detected at
// one of the four detectors per the routing model; the pattern is the union
// of the two photons' clicks. Exact enumeration over the 5 x 5 joint
// outcome space.
inline DetectorPatternDistribution ground_pattern_distribution(
    double eta1, double eta2, const RoutingModel& routing = {}) {
    if (!(eta1 >= 0 && eta1 <= 1) || !(eta2 >= 0 && eta2 <= 1))
        throw std::invalid_argument(
            "ground_pattern_distribution: channel efficiencies in [0,1] violated");
    routing.validate();

    // Outcome 0 = lost, outcome 1..4 = detector index.
    std::array<double, 5> outcome1{}, outcome2{};
    outcome1[0] = 1.0 - eta1;
    outcome2[0] = 1.0 - eta2;
    for (int d = 0; d < 4; ++d) {
        outcome1[static_cast<std::size_t>(d + 1)] =
            eta1 * routing.detector_probs[static_cast<std::size_t>(d)];
        outcome2[static_cast<std::size_t>(d + 1)] =
            eta2 * routing.detector_probs[static_cast<std::size_t>(d)];
    }

    DetectorPatternDistribution dist;
    for (int a = 0; a < 5; ++a) {
        for (int b = 0; b < 5; ++b) {
            const std::uint8_t bits =
                static_cast<std::uint8_t>((a ? 1u << (a - 1) : 0u) |
                                          (b ? 1u << (b - 1) : 0u));
            dist.probabilities[bits] += outcome1[static_cast<std::size_t>(a)] *
                                        outcome2[static_cast<std::size_t>(b)];
        }
    }
    return dist;
}

// P_M(M): probability of observing the accepted signature M, summed over all
// (ground, background) pattern pairs whose union is M. Enumerates the
// submasks of M directly; the 16 x 16 filtered double loop is kept as an
// independent oracle in the tests.
inline double signature_prob(ClickPattern m,
                             const DetectorPatternDistribution& ground,
                             const DetectorPatternDistribution& backgrounds) {
    if (!is_accepted_signature(m))
        throw std::invalid_argument(
            "signature_prob: pattern is not one of the four accepted "
            "signatures");
    double total = 0;
    // g runs over submasks of m, b over submasks of m that cover m \ g.
    for (std::uint8_t g = m.bits;; g = static_cast<std::uint8_t>((g - 1) & m.bits)) {
        const std::uint8_t need = m.bits & static_cast<std::uint8_t>(~g);
        double b_sum = 0;
        for (std::uint8_t b = m.bits;; b = static_cast<std::uint8_t>((b - 1) & m.bits)) {
            if ((b & need) == need) b_sum += backgrounds.probabilities[b];
            if (b == 0) break;
        }
        total += ground.probabilities[g] * b_sum;
        if (g == 0) break;
    }
    return total;
}

inline double total_success(double p_m_single) {
    if (!(4.0 * p_m_single <= 1.0 + 1e-12))
        throw std::invalid_argument("total_success: 4 P_M exceeds 1");
    return 4.0 * p_m_single;
}

// eta_tot = 4 P_M(1,0,1,0), valid because the four accepted signatures are
// symmetric for equally configured detectors. The symmetry is checked, not
// assumed.
inline double total_success(const DetectorPatternDistribution& ground,
                            const DetectorPatternDistribution& backgrounds,
                            double symmetry_tol = 1e-9) {
    std::array<double, 4> pm{};
    for (std::size_t i = 0; i < 4; ++i)
        pm[i] = signature_prob(ClickPattern{kAcceptedSignatures[i]}, ground,
                               backgrounds);
    for (std::size_t i = 1; i < 4; ++i)
        if (std::abs(pm[i] - pm[0]) > symmetry_tol)
            throw std::logic_error(
                "total_success: the four signature probabilities are not "
                "symmetric; detector configuration is not symmetric");
    return total_success(pm[0]);
}

// P_S: fraction of signature-M events in which both mode clicks are caused
// by ground photons (a legitimate coincidence), background possibly landing
// on the same detectors.
inline double legitimate_fraction(const DetectorPatternDistribution& ground,
                                  const DetectorPatternDistribution& backgrounds,
                                  ClickPattern m) {
    const double pm = signature_prob(m, ground, backgrounds);
    if (!(pm > 0))
        throw std::domain_error(
            "legitimate_fraction: P_M = 0, conditional undefined");
    double b_within = 0;
    for (std::uint8_t b = m.bits;; b = static_cast<std::uint8_t>((b - 1) & m.bits)) {
        b_within += backgrounds.probabilities[b];
        if (b == 0) break;
    }
    return ground.probabilities[m.bits] * b_within / pm;
}

// F = P_S F_ic + (1 - P_S) / 4: illegitimate coincidences leave a maximally
// mixed pair.
inline double final_fidelity(double p_s, double f_ic) {
    if (!(p_s >= 0 && p_s <= 1))
        throw std::invalid_argument("final_fidelity: P_S in [0,1] violated");
    if (!(f_ic >= 0.5 && f_ic <= 1))
        throw std::invalid_argument("final_fidelity: F_ic in [1/2,1] violated");
    return p_s * f_ic + (1.0 - p_s) * 0.25;
}

struct MonteCarloResult {
    std::uint64_t trials = 0;
    std::uint64_t accepted = 0;    // any of the four signatures observed
    std::uint64_t legitimate = 0;  // ground photons alone formed the signature
    double eta_tot = 0;
    double eta_tot_stderr = 0;
    double p_s = 0;
    double p_s_stderr = 0;
};

// Samples photon loss/routing and per-detector background clicks per trial,
// forms the union pattern, and counts accepted and legitimate signatures.
// Trial i draws only from the (seed, i) counter stream, so results are
// bit-identical for a given (seed, trials) regardless of the thread count.
inline MonteCarloResult monte_carlo_coincidence(
    double eta1, double eta2, const std::array<double, 4>& background_click_probs,
    const RoutingModel& routing, std::uint64_t trials, std::uint64_t seed,
    unsigned n_threads = 0) {
    if (trials < 10000)
        throw std::invalid_argument("monte_carlo_coincidence: trials >= 1e4 violated");
    if (!(eta1 >= 0 && eta1 <= 1) || !(eta2 >= 0 && eta2 <= 1))
        throw std::invalid_argument(
            "monte_carlo_coincidence: channel efficiencies in [0,1] violated");
    routing.validate();
    for (double p : background_click_probs)
        if (!(p >= 0 && p <= 1))
            throw std::invalid_argument(
                "monte_carlo_coincidence: background click probabilities in "
                "[0,1] violated");

    // Cumulative photon outcome thresholds [route 1 .. route 4]; a uniform
    // draw above cuts[3] (= eta) means the photon was lost.
    const auto photon_cuts = [&](double eta) {
        std::array<double, 4> cuts{};
        double acc = 0;
        for (int d = 0; d < 4; ++d) {
            acc += eta * routing.detector_probs[static_cast<std::size_t>(d)];
            cuts[static_cast<std::size_t>(d)] = std::min(acc, 1.0);
        }
        return cuts;
    };
    const auto cuts1 = photon_cuts(eta1);
    const auto cuts2 = photon_cuts(eta2);
    const std::array<double, 4>& bg_cuts = background_click_probs;

    std::array<bool, 16> accepted_lut{};
    for (auto s : kAcceptedSignatures) accepted_lut[s] = true;

    const auto run_range = [&](std::uint64_t lo, std::uint64_t hi,
                               std::uint64_t& acc_count, std::uint64_t& legit_count) {
        std::uint64_t acc = 0, legit = 0;
        for (std::uint64_t i = lo; i < hi; ++i) {
            CounterRng rng(seed, i);
            std::uint8_t ground = 0;
            const double u1 = rng.next_double();
            for (int d = 0; d < 4; ++d) {
                if (u1 < cuts1[static_cast<std::size_t>(d)]) {
                    ground = static_cast<std::uint8_t>(1u << d);
                    break;
                }
            }
            const double u2 = rng.next_double();
            for (int d = 0; d < 4; ++d) {
                if (u2 < cuts2[static_cast<std::size_t>(d)]) {
                    ground |= static_cast<std::uint8_t>(1u << d);
                    break;
                }
            }
            std::uint8_t pattern = ground;
            for (int d = 0; d < 4; ++d)
                if (rng.next_double() < bg_cuts[static_cast<std::size_t>(d)])
                    pattern |= static_cast<std::uint8_t>(1u << d);
            if (accepted_lut[pattern]) {
                ++acc;
                if (ground == pattern) ++legit;
            }
        }
        acc_count = acc;
        legit_count = legit;
    };

    unsigned workers = n_threads ? n_threads
                                 : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(
        std::min<std::uint64_t>(workers, std::max<std::uint64_t>(1, trials / 10000)));

    std::vector<std::uint64_t> acc(workers, 0), legit(workers, 0);
    if (workers == 1) {
        run_range(0, trials, acc[0], legit[0]);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = trials / workers;
        for (unsigned t = 0; t < workers; ++t) {
            const std::uint64_t lo = t * chunk;
            const std::uint64_t hi = (t + 1 == workers) ? trials : lo + chunk;
            pool.emplace_back(run_range, lo, hi, std::ref(acc[t]),
                              std::ref(legit[t]));
        }
        for (auto& th : pool) th.join();
    }

    MonteCarloResult result;
    result.trials = trials;
    for (unsigned t = 0; t < workers; ++t) {
        result.accepted += acc[t];
        result.legitimate += legit[t];
    }
    const double n = static_cast<double>(trials);
    result.eta_tot = static_cast<double>(result.accepted) / n;
    result.eta_tot_stderr =
        std::sqrt(result.eta_tot * (1.0 - result.eta_tot) / n);
    if (result.accepted > 0) {
        const double na = static_cast<double>(result.accepted);
        result.p_s = static_cast<double>(result.legitimate) / na;
        result.p_s_stderr = std::sqrt(result.p_s * (1.0 - result.p_s) / na);
    }
    return result;
}

}  // namespace uplinksim
