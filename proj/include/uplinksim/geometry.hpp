// Link geometry for the symmetric snapshot: the satellite sits on the
// perpendicular bisector of the two ground stations, so both stations share
// one slant range and one zenith angle.
//
// Spherical Earth. With central angle delta = (D_G/2)/R_E between a ground
// station and the sub-satellite point, the law of cosines gives the slant
// range z, and the law of cosines at the ground-station vertex gives the
// zenith angle theta.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "uplinksim/constants.hpp"

namespace uplinksim {

struct EarthModel {
    double radius_m = kEarthRadius;

    void validate() const {
        if (!(radius_m > 0))
            throw std::invalid_argument("earth.radius_m > 0 violated");
    }
};

struct LinkGeometry {
    double slant_range_m = 0;    // z
    double zenith_angle_rad = 0; // theta, measured from local vertical
    double altitude_m = 0;       // satellite altitude h
    double ground_separation_m = 0;  // D_G
};

// Slant range and zenith angle for one ground station of the symmetric pair.
//
// Rejects satellites below the local horizon (theta >= pi/2), which happens
// when the ground separation is large compared to the altitude.
inline LinkGeometry link_geometry(double altitude_m, double ground_separation_m,
                                  const EarthModel& earth = {}) {
    earth.validate();
    if (!(altitude_m > 0))
        throw std::invalid_argument("link_geometry: altitude_m > 0 violated");
    if (!(ground_separation_m >= 0))
        throw std::invalid_argument(
            "link_geometry: ground_separation_m >= 0 violated");

    const double re = earth.radius_m;
    const double delta = 0.5 * ground_separation_m / re;
    if (!(delta < 0.5 * kPi))
        throw std::invalid_argument(
            "link_geometry: D_G/2 must subtend a central angle < pi/2");

    const double rs = re + altitude_m;
    // Law of cosines across the central angle. Rearranged as
    // (rs - re)^2 + 2 re rs (1 - cos delta) to avoid cancellation when
    // delta is small.
    const double one_minus_cos = 2.0 * std::pow(std::sin(0.5 * delta), 2);
    const double z = std::sqrt(altitude_m * altitude_m +
                               2.0 * re * rs * one_minus_cos);

    const double cos_theta = (rs * std::cos(delta) - re) / z;
    if (!(cos_theta > 0))
        throw std::invalid_argument(
            "link_geometry: satellite below the local horizon (zenith angle "
            ">= pi/2)");

    LinkGeometry g;
    g.slant_range_m = z;
    g.zenith_angle_rad = std::acos(std::min(1.0, cos_theta));
    g.altitude_m = altitude_m;
    g.ground_separation_m = ground_separation_m;
    return g;
}

// Altitude above the spherical Earth of the point a distance y along the
// line of sight from the ground station:
//   h(y, theta) = sqrt(R_E^2 + y^2 + 2 R_E y cos theta) - R_E.
//
// Evaluated in the cancellation-free form t / (sqrt(R_E^2 + t) + R_E) with
// t = y^2 + 2 R_E y cos theta.
inline double path_altitude(double along_path_m, double zenith_angle_rad,
                            const EarthModel& earth = {}) {
    earth.validate();
    if (!(along_path_m >= 0))
        throw std::invalid_argument("path_altitude: y >= 0 violated");
    const double re = earth.radius_m;
    const double t = along_path_m * along_path_m +
                     2.0 * re * along_path_m * std::cos(zenith_angle_rad);
    return t / (std::sqrt(re * re + t) + re);
}

// Flat-Earth altitude y*cos(theta), kept as a cross-check mode; diverges from
// the spherical form at high zenith angle.
inline double path_altitude_flat(double along_path_m, double zenith_angle_rad) {
    if (!(along_path_m >= 0))
        throw std::invalid_argument("path_altitude_flat: y >= 0 violated");
    return along_path_m * std::cos(zenith_angle_rad);
}

}  // namespace uplinksim
