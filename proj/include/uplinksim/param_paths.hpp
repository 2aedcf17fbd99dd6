// Named numeric parameter paths into ScenarioParams, used by sweep axes and
// optimizer free variables. Unknown paths are rejected with the full list of
// valid names.

#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uplinksim/scenario.hpp"

namespace uplinksim {

struct ParamPath {
    std::string name;
    std::function<double(const ScenarioParams&)> get;
    std::function<void(ScenarioParams&, double)> set;
};

inline const std::vector<ParamPath>& parameter_paths() {
    static const std::vector<ParamPath> paths = [] {
        std::vector<ParamPath> v;
        auto add = [&](std::string name, auto member) {
            v.push_back({std::move(name),
                         [member](const ScenarioParams& p) { return p.*member; },
                         [member](ScenarioParams& p, double x) { p.*member = x; }});
        };
        add("altitude_m", &ScenarioParams::altitude_m);
        add("ground_separation_m", &ScenarioParams::ground_separation_m);
        add("temporal_width_s", &ScenarioParams::temporal_width_s);
        add("gating_window_s", &ScenarioParams::gating_window_s);
        add("clock_offset_s", &ScenarioParams::clock_offset_s);
        add("clock_offset_spread_s", &ScenarioParams::clock_offset_spread_s);
        add("wavelength_m", &ScenarioParams::wavelength_m);

        auto add_sub = [&](std::string name, auto outer, auto member) {
            v.push_back(
                {std::move(name),
                 [outer, member](const ScenarioParams& p) { return p.*outer.*member; },
                 [outer, member](ScenarioParams& p, double x) { p.*outer.*member = x; }});
        };
        add_sub("beam.aperture_radius_m", &ScenarioParams::beam,
                &BeamParams::aperture_radius_m);
        add_sub("beam.initial_waist_m", &ScenarioParams::beam,
                &BeamParams::initial_waist_m);
        add_sub("beam.fried_parameter_m", &ScenarioParams::beam,
                &BeamParams::fried_parameter_m);
        add_sub("beam.tracking_error_m", &ScenarioParams::beam,
                &BeamParams::tracking_error_m);
        add_sub("beam.pointing_jitter_sq", &ScenarioParams::beam,
                &BeamParams::pointing_jitter_sq);
        add_sub("beam.direct_width_m", &ScenarioParams::beam,
                &BeamParams::direct_width_m);
        add_sub("atmosphere.alpha0_per_m", &ScenarioParams::atmosphere,
                &AtmosphereParams::alpha0_per_m);
        add_sub("atmosphere.scale_height_m", &ScenarioParams::atmosphere,
                &AtmosphereParams::scale_height_m);
        add_sub("losses.optics_efficiency", &ScenarioParams::losses,
                &StaticLosses::optics_efficiency);
        add_sub("losses.detector_efficiency", &ScenarioParams::losses,
                &StaticLosses::detector_efficiency);
        add_sub("background.day_rate_per_detector_hz", &ScenarioParams::background,
                &BackgroundEnv::day_rate_per_detector_hz);
        add_sub("background.night_rate_per_detector_hz", &ScenarioParams::background,
                &BackgroundEnv::night_rate_per_detector_hz);
        add_sub("background.dark_count_rate_hz", &ScenarioParams::background,
                &BackgroundEnv::dark_count_rate_hz);
        add_sub("earth.radius_m", &ScenarioParams::earth, &EarthModel::radius_m);
        return v;
    }();
    return paths;
}

inline const ParamPath& find_parameter_path(const std::string& name) {
    for (const auto& p : parameter_paths())
        if (p.name == name) return p;
    std::string valid;
    for (const auto& p : parameter_paths()) {
        if (!valid.empty()) valid += ", ";
        valid += p.name;
    }
    throw std::invalid_argument("unknown parameter path \"" + name +
                                "\"; valid paths: " + valid);
}

}  // namespace uplinksim
