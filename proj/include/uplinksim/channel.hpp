// Per-channel transmissivities of the uplink: beam widening/wandering,
// slant-path atmospheric attenuation, and static optics/detector factors.
//
//   eta_w = 1 - exp(-2 R_A^2 / (w^2 + jitter z^2 + sigma_tr^2))
//   eta_a = exp(-alpha_0 * integral_0^z exp(-h(y,theta)/h_tilde) dy)
//
// The long-term beam width w is under-specified by the main-text model, so
// it is pluggable: a diffraction (+) turbulence-in-quadrature default, a
// directly configured width, or disabled entirely (eta_w = 1) for ideal-limit
// studies.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "uplinksim/geometry.hpp"
#include "uplinksim/quadrature.hpp"

namespace uplinksim {

enum class BeamWidthMode {
    kModel,   // diffraction + Fried-parameter turbulence spreading
    kDirect,  // use direct_width_m as the long-term width
    kOff,     // no widening/wandering loss, eta_w = 1
};

struct BeamParams {
    BeamWidthMode mode = BeamWidthMode::kModel;
    double aperture_radius_m = 0;   // R_A, receiving telescope
    double initial_waist_m = 0;     // w0 at the transmitter
    double fried_parameter_m = 0;   // r0; +inf disables the turbulence term
    double tracking_error_m = 0;    // sigma_tr at the receiver plane
    double pointing_jitter_sq = 1e-12;  // coefficient multiplying z^2
    double direct_width_m = 0;      // used when mode == kDirect

    void validate() const {
        if (!(aperture_radius_m > 0))
            throw std::invalid_argument("beam.aperture_radius_m > 0 violated");
        if (mode == BeamWidthMode::kModel) {
            if (!(initial_waist_m > 0))
                throw std::invalid_argument("beam.initial_waist_m > 0 violated");
            if (!(fried_parameter_m > 0))
                throw std::invalid_argument("beam.fried_parameter_m > 0 violated");
        }
        if (mode == BeamWidthMode::kDirect && !(direct_width_m > 0))
            throw std::invalid_argument("beam.direct_width_m > 0 violated");
        if (!(tracking_error_m >= 0))
            throw std::invalid_argument("beam.tracking_error_m >= 0 violated");
        if (!(pointing_jitter_sq >= 0))
            throw std::invalid_argument("beam.pointing_jitter_sq >= 0 violated");
    }
};

struct AtmosphereParams {
    double alpha0_per_m = 5e-6;   // sea-level extinction coefficient
    double scale_height_m = 6600; // h_tilde

    void validate() const {
        if (!(alpha0_per_m > 0))
            throw std::invalid_argument("atmosphere.alpha0_per_m > 0 violated");
        if (!(scale_height_m > 0))
            throw std::invalid_argument("atmosphere.scale_height_m > 0 violated");
    }
};

struct StaticLosses {
    double optics_efficiency = 1.0;    // transmit + receive optics
    double detector_efficiency = 1.0;

    void validate() const {
        if (!(optics_efficiency > 0 && optics_efficiency <= 1))
            throw std::invalid_argument("losses.optics_efficiency in (0,1] violated");
        if (!(detector_efficiency > 0 && detector_efficiency <= 1))
            throw std::invalid_argument("losses.detector_efficiency in (0,1] violated");
    }
};

// Long-term beam width after propagating a slant range z:
//   w^2 = w_d^2 + w_t^2
//   w_d = w0 sqrt(1 + (z lambda / (pi w0^2))^2)     (diffraction)
//   w_t = sqrt(2) lambda z / (pi r0)                 (turbulence spreading)
inline double long_term_beam_width(double slant_range_m, double wavelength_m,
                                   const BeamParams& beam) {
    if (!(slant_range_m > 0))
        throw std::invalid_argument("long_term_beam_width: z > 0 violated");
    if (!(wavelength_m > 0))
        throw std::invalid_argument("long_term_beam_width: lambda > 0 violated");
    if (!(beam.initial_waist_m > 0))
        throw std::invalid_argument("beam.initial_waist_m > 0 violated");
    if (!(beam.fried_parameter_m > 0))
        throw std::invalid_argument("beam.fried_parameter_m > 0 violated");

    const double w0 = beam.initial_waist_m;
    const double zl = slant_range_m * wavelength_m;
    const double diffraction = zl / (kPi * w0 * w0);
    const double wd_sq = w0 * w0 * (1.0 + diffraction * diffraction);
    double wt_sq = 0.0;
    if (std::isfinite(beam.fried_parameter_m)) {
        const double wt = std::sqrt(2.0) * zl / (kPi * beam.fried_parameter_m);
        wt_sq = wt * wt;
    }
    return std::sqrt(wd_sq + wt_sq);
}

// Channel efficiency due to beam widening and wandering.
inline double widening_wandering_efficiency(double aperture_radius_m,
                                            double beam_width_m,
                                            double slant_range_m,
                                            double tracking_error_m,
                                            double pointing_jitter_sq) {
    if (!(aperture_radius_m > 0))
        throw std::invalid_argument("widening_wandering_efficiency: R_A > 0 violated");
    if (!(beam_width_m > 0))
        throw std::invalid_argument("widening_wandering_efficiency: w > 0 violated");
    if (!(slant_range_m > 0))
        throw std::invalid_argument("widening_wandering_efficiency: z > 0 violated");
    const double denom = beam_width_m * beam_width_m +
                         pointing_jitter_sq * slant_range_m * slant_range_m +
                         tracking_error_m * tracking_error_m;
    return -std::expm1(-2.0 * aperture_radius_m * aperture_radius_m / denom);
}

// Transmissivity of the slant path through an exponential atmosphere.
inline double atmospheric_efficiency(const LinkGeometry& geom,
                                     const AtmosphereParams& atmo,
                                     const EarthModel& earth = {},
                                     const QuadratureOptions& options = {}) {
    atmo.validate();
    const double z = geom.slant_range_m;
    const double theta = geom.zenith_angle_rad;
    auto density = [&](double y) {
        return std::exp(-path_altitude(y, theta, earth) / atmo.scale_height_m);
    };
    // The integrand decays on the scale of one scale height of altitude;
    // seed subdivisions along the first few air-mass lengths.
    QuadratureOptions opts = options;
    const double along = atmo.scale_height_m /
                         std::max(std::cos(theta), 1e-3);
    for (double k : {0.5, 1.0, 2.0, 5.0, 10.0, 30.0})
        if (k * along < z) opts.breakpoints.push_back(k * along);
    const double column = integrate(density, 0.0, z, opts);
    return std::exp(-atmo.alpha0_per_m * column);
}

struct ChannelBudget {
    double eta_a = 1;
    double eta_w = 1;
    double optics_efficiency = 1;
    double detector_efficiency = 1;
    double beam_width_m = 0;  // 0 when the beam model is off

    double product() const {
        return eta_a * eta_w * optics_efficiency * detector_efficiency;
    }
};

// Composes the per-channel efficiency eta_ch = eta_a * eta_w * optics *
// detector, retaining each factor for reporting.
inline ChannelBudget channel_efficiency(const LinkGeometry& geom,
                                        const BeamParams& beam,
                                        const AtmosphereParams& atmo,
                                        const StaticLosses& losses,
                                        double wavelength_m,
                                        const EarthModel& earth = {}) {
    beam.validate();
    losses.validate();
    ChannelBudget budget;
    budget.eta_a = atmospheric_efficiency(geom, atmo, earth);
    switch (beam.mode) {
        case BeamWidthMode::kModel:
            budget.beam_width_m =
                long_term_beam_width(geom.slant_range_m, wavelength_m, beam);
            break;
        case BeamWidthMode::kDirect:
            budget.beam_width_m = beam.direct_width_m;
            break;
        case BeamWidthMode::kOff:
            budget.beam_width_m = 0;
            break;
    }
    budget.eta_w =
        beam.mode == BeamWidthMode::kOff
            ? 1.0
            : widening_wandering_efficiency(
                  beam.aperture_radius_m, budget.beam_width_m,
                  geom.slant_range_m, beam.tracking_error_m,
                  beam.pointing_jitter_sq);
    budget.optics_efficiency = losses.optics_efficiency;
    budget.detector_efficiency = losses.detector_efficiency;
    return budget;
}

}  // namespace uplinksim
