// Gaussian photon wavepacket, gating-window transmission probability, and
// the intrinsic swapped-pair fidelity under temporal mode-mismatch.
//
// The wavepacket is described in the position coordinate x = c * (arrival
// time). Detector clock zero is the nominal arrival of packet 1; a clock
// offset Delta_t places packet 2 at x = c * Delta_t.
//
//   psi(x)  = (2 pi sigma^2)^(-1/4) exp(-(x-x0)^2 / (4 sigma^2))
//                                   exp(i k (x-x0)),   sigma = c sigma_t
//   P_gw    = integral of |psi|^2 over [c t_min, c t_max]
//   F_ic    = 1/2 + |integral of psi1 psi2* over the window|^2
//                   / (2 P_gw1 P_gw2)

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "uplinksim/constants.hpp"
#include "uplinksim/quadrature.hpp"

namespace uplinksim {

struct WavepacketSpec {
    double center_m = 0;           // x0, in c * arrival-time
    double temporal_width_s = 0;   // sigma_t
    double wavelength_m = 0;       // lambda

    double spatial_width_m() const { return kSpeedOfLight * temporal_width_s; }
    double wavenumber() const { return 2.0 * kPi / wavelength_m; }

    void validate() const {
        if (!(temporal_width_s > 0))
            throw std::invalid_argument("wavepacket: temporal_width_s > 0 violated");
        if (!(wavelength_m > 0))
            throw std::invalid_argument("wavepacket: wavelength_m > 0 violated");
    }
};

struct GatingWindow {
    double open_s = 0;   // t_min
    double close_s = 0;  // t_max

    double length_s() const { return close_s - open_s; }

    void validate() const {
        if (!(close_s > open_s))
            throw std::invalid_argument("gating window: close_s > open_s violated");
    }
};

// Clock-synchronization mismatch between the two arrivals, Delta_t = t2 - t1.
struct MismatchSpec {
    double delta_t_s = 0;
    double delta_x_m() const { return kSpeedOfLight * delta_t_s; }
};

// Complex wavepacket amplitude at position x, units m^(-1/2).
inline std::complex<double> amplitude(double x, const WavepacketSpec& p) {
    p.validate();
    const double sigma = p.spatial_width_m();
    const double u = (x - p.center_m) / sigma;
    const double modulus = std::pow(2.0 * kPi * sigma * sigma, -0.25) *
                           std::exp(-0.25 * u * u);
    const double phase = p.wavenumber() * (x - p.center_m);
    return std::polar(modulus, phase);
}

namespace detail {

// |psi|^2 and the envelope of psi1 psi2* are Gaussians of spatial scale
// sigma; seed the adaptive quadrature with their centers so that narrow
// packets inside wide windows are never missed. The ladder extends far
// enough that every sub-interval adjacent to the packet carries sampleable
// mass; beyond the last rung the true tail is below double precision.
inline std::vector<double> packet_breakpoints(const WavepacketSpec& p1,
                                              const WavepacketSpec& p2) {
    std::vector<double> pts;
    for (const auto* p : {&p1, &p2}) {
        const double s = p->spatial_width_m();
        for (double k : {2.0, 4.0, 8.0, 16.0, 32.0}) {
            pts.push_back(p->center_m - k * s);
            pts.push_back(p->center_m + k * s);
        }
        pts.push_back(p->center_m);
    }
    return pts;
}

}  // namespace detail

// Probability that the packet passes the gating window (Eq. form:
// integral of |psi|^2 over [c t_min, c t_max]). Quadrature failure at the
// configured tolerance surfaces as QuadratureError.
inline double gating_probability(const GatingWindow& w, const WavepacketSpec& p,
                                 const QuadratureOptions& options = {}) {
    w.validate();
    p.validate();
    const double sigma = p.spatial_width_m();
    const double norm = 1.0 / std::sqrt(2.0 * kPi * sigma * sigma);
    auto density = [&](double x) {
        const double u = (x - p.center_m) / sigma;
        return norm * std::exp(-0.5 * u * u);
    };
    QuadratureOptions opts = options;
    opts.breakpoints = detail::packet_breakpoints(p, p);
    const double value = integrate(density, kSpeedOfLight * w.open_s,
                                   kSpeedOfLight * w.close_s, opts);
    return std::clamp(value, 0.0, 1.0);
}

// Windowed inner product integral of psi1 psi2* over [c t_min, c t_max].
//
// Both packets must share one wavelength (identical ground sources); the
// product phase k (x - x01) - k (x - x02) is then the constant
// k (x02 - x01), which multiplies a smooth positive envelope. Real and
// imaginary parts are integrated separately.
inline std::complex<double> overlap(const GatingWindow& w,
                                    const WavepacketSpec& p1,
                                    const WavepacketSpec& p2,
                                    const QuadratureOptions& options = {}) {
    w.validate();
    p1.validate();
    p2.validate();
    const double dl = std::abs(p1.wavelength_m - p2.wavelength_m);
    if (dl > 1e-12 * p1.wavelength_m)
        throw std::invalid_argument(
            "overlap: mismatched wavelengths (the model assumes identical "
            "ground sources)");

    const double s1 = p1.spatial_width_m();
    const double s2 = p2.spatial_width_m();
    const double norm = std::pow(2.0 * kPi * s1 * s1, -0.25) *
                        std::pow(2.0 * kPi * s2 * s2, -0.25);
    auto envelope = [&](double x) {
        const double u1 = (x - p1.center_m) / s1;
        const double u2 = (x - p2.center_m) / s2;
        return norm * std::exp(-0.25 * (u1 * u1 + u2 * u2));
    };
    const double phase = p1.wavenumber() * (p2.center_m - p1.center_m);
    const double cos_p = std::cos(phase);
    const double sin_p = std::sin(phase);

    QuadratureOptions opts = options;
    opts.breakpoints = detail::packet_breakpoints(p1, p2);
    const double a = kSpeedOfLight * w.open_s;
    const double b = kSpeedOfLight * w.close_s;
    const double re = integrate([&](double x) { return envelope(x) * cos_p; },
                                a, b, opts);
    const double im = integrate([&](double x) { return envelope(x) * sin_p; },
                                a, b, opts);
    return {re, im};
}

struct IntrinsicFidelity {
    double f_ic = 0;
    double p_gw1 = 0;
    double p_gw2 = 0;
};

// Swapped-pair fidelity from temporal mode-mismatch alone:
//   F_ic = 1/2 + |overlap|^2 / (2 P_gw1 P_gw2), in [1/2, 1].
//
// Fidelity is undefined when (almost) nothing passes the window, so either
// gating probability below gating_floor is an error.
inline IntrinsicFidelity intrinsic_fidelity(const GatingWindow& w,
                                            const WavepacketSpec& p1,
                                            const WavepacketSpec& p2,
                                            double gating_floor = 1e-12,
                                            const QuadratureOptions& options = {}) {
    IntrinsicFidelity out;
    out.p_gw1 = gating_probability(w, p1, options);
    out.p_gw2 = gating_probability(w, p2, options);
    if (out.p_gw1 < gating_floor || out.p_gw2 < gating_floor)
        throw std::domain_error(
            "intrinsic_fidelity: degenerate gating window, gating "
            "probability below floor");
    const double gamma = std::norm(overlap(w, p1, p2, options));
    out.f_ic = 0.5 + gamma / (2.0 * out.p_gw1 * out.p_gw2);
    // Cauchy-Schwarz bounds gamma by P_gw1 * P_gw2; allow quadrature noise.
    out.f_ic = std::min(out.f_ic, 1.0);
    return out;
}

}  // namespace uplinksim
