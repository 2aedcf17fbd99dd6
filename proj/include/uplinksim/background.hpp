// Stray-photon and dark-count statistics per detector within the gating
// window. Counts are Poissonian; a bucket detector clicks when at least one
// count lands in the window.

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace uplinksim {

enum class SkyRegime { kDay, kNight };

// Pluggable stray-rate model: spectral photon radiance collected by the
// receiver aperture over its field of view and filter bandwidth, split
// equally among the four detectors (symmetric apparatus).
struct RadianceModel {
    double sky_spectral_photon_radiance = 0;  // photons / (s m^2 sr nm)
    double fov_sr = 0;                        // receiver field of view
    double filter_bandwidth_nm = 0;
    double receiver_area_m2 = 0;              // pi R_A^2
    double optical_efficiency = 0;

    void validate() const {
        if (sky_spectral_photon_radiance < 0 || fov_sr < 0 ||
            filter_bandwidth_nm < 0 || receiver_area_m2 < 0 ||
            optical_efficiency < 0)
            throw std::invalid_argument("radiance model: all fields >= 0 violated");
    }
};

// Per-detector stray photon rate in s^-1.
inline double stray_rate(const RadianceModel& m) {
    m.validate();
    return m.sky_spectral_photon_radiance * m.receiver_area_m2 * m.fov_sr *
           m.filter_bandwidth_nm * m.optical_efficiency / 4.0;
}

// How the per-detector rate is obtained for a scenario.
enum class BackgroundRateMode { kDirect, kRadiance };

struct BackgroundEnv {
    SkyRegime regime = SkyRegime::kNight;
    BackgroundRateMode rate_mode = BackgroundRateMode::kDirect;
    double day_rate_per_detector_hz = 0;
    double night_rate_per_detector_hz = 0;
    double dark_count_rate_hz = 0;
    RadianceModel day_radiance{};
    RadianceModel night_radiance{};

    double rate_per_detector_hz() const {
        if (rate_mode == BackgroundRateMode::kRadiance)
            return stray_rate(regime == SkyRegime::kDay ? day_radiance
                                                        : night_radiance);
        return regime == SkyRegime::kDay ? day_rate_per_detector_hz
                                         : night_rate_per_detector_hz;
    }

    void validate() const {
        if (day_rate_per_detector_hz < 0 || night_rate_per_detector_hz < 0 ||
            dark_count_rate_hz < 0)
            throw std::invalid_argument("background: rates >= 0 violated");
        day_radiance.validate();
        night_radiance.validate();
    }
};

// P(n counts in a window of length t) for a Poisson process of rate r.
inline double stray_count_pmf(double rate_hz, double window_s, int count) {
    if (!(rate_hz >= 0))
        throw std::invalid_argument("stray_count_pmf: rate >= 0 violated");
    if (!(window_s > 0))
        throw std::invalid_argument("stray_count_pmf: window length > 0 violated");
    if (count < 0)
        throw std::invalid_argument("stray_count_pmf: count >= 0 violated");
    const double mean = rate_hz * window_s;
    if (mean == 0.0) return count == 0 ? 1.0 : 0.0;
    return std::exp(count * std::log(mean) - mean - std::lgamma(count + 1.0));
}

// Probability of at least one background count (stray or dark) in the window.
inline double detector_click_prob(double stray_rate_hz, double dark_rate_hz,
                                  double window_s) {
    if (!(stray_rate_hz >= 0) || !(dark_rate_hz >= 0))
        throw std::invalid_argument("detector_click_prob: rates >= 0 violated");
    if (!(window_s > 0))
        throw std::invalid_argument("detector_click_prob: window length > 0 violated");
    return -std::expm1(-(stray_rate_hz + dark_rate_hz) * window_s);
}

// P_D(d) for a four-detector click pattern d, with independent detectors:
// product over detectors of p_i^(d_i) (1-p_i)^(1-d_i).
inline double background_pattern_prob(const std::array<bool, 4>& pattern,
                                      const std::array<double, 4>& click_probs) {
    double prob = 1.0;
    for (int i = 0; i < 4; ++i) {
        const double p = click_probs[static_cast<std::size_t>(i)];
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument(
                "background_pattern_prob: click probabilities in [0,1] violated");
        prob *= pattern[static_cast<std::size_t>(i)] ? p : 1.0 - p;
    }
    return prob;
}

}  // namespace uplinksim
