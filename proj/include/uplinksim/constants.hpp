// Physical constants shared across the simulator. SI units throughout.

#pragma once

namespace uplinksim {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = 3.14159265358979323846;

// Mean Earth radius used for the spherical-Earth link geometry.
inline constexpr double kEarthRadius = 6.371e6;  // m

}  // namespace uplinksim
