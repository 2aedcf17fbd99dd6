// JSON configuration documents for scenarios, sweeps, and optimizations.
//
// Strict mode: unknown keys are rejected with the offending key path named.
// Every physical quantity carries its unit suffix in the key name and is
// stored in SI. Fields omitted from a scenario document take the
// table-1-defaults values, so a minimal document may set only what it
// changes.

#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "uplinksim/optimize.hpp"
#include "uplinksim/scenario.hpp"
#include "uplinksim/sweep.hpp"

namespace uplinksim {

using Json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string join_path(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

class StrictObject {
public:
    StrictObject(const Json& node, std::string path)
        : node_(node), path_(std::move(path)) {
        if (!node_.is_object())
            throw ConfigError("config: \"" + path_ + "\" must be an object");
    }

    bool has(const std::string& key) const { return node_.contains(key); }

    double number(const std::string& key, double& target) {
        if (!node_.contains(key)) return target;
        const Json& v = node_.at(key);
        if (!v.is_number())
            throw ConfigError("config: \"" + join_path(path_, key) +
                              "\" must be a number");
        consumed_.push_back(key);
        target = v.get<double>();
        return target;
    }

    std::string text(const std::string& key, std::string fallback) {
        if (!node_.contains(key)) return fallback;
        const Json& v = node_.at(key);
        if (!v.is_string())
            throw ConfigError("config: \"" + join_path(path_, key) +
                              "\" must be a string");
        consumed_.push_back(key);
        return v.get<std::string>();
    }

    const Json* object(const std::string& key) {
        if (!node_.contains(key)) return nullptr;
        consumed_.push_back(key);
        return &node_.at(key);
    }

    // Call after all known keys were consumed.
    void reject_unknown() const {
        for (auto it = node_.begin(); it != node_.end(); ++it) {
            bool known = false;
            for (const auto& k : consumed_)
                if (k == it.key()) known = true;
            if (!known)
                throw ConfigError("config: unknown key \"" +
                                  join_path(path_, it.key()) + "\"");
        }
    }

    const std::string& path() const { return path_; }

private:
    const Json& node_;
    std::string path_;
    std::vector<std::string> consumed_;
};

inline void parse_radiance(const Json& node, const std::string& path,
                           RadianceModel& out) {
    StrictObject obj(node, path);
    obj.number("sky_spectral_photon_radiance", out.sky_spectral_photon_radiance);
    obj.number("fov_sr", out.fov_sr);
    obj.number("filter_bandwidth_nm", out.filter_bandwidth_nm);
    obj.number("receiver_area_m2", out.receiver_area_m2);
    obj.number("optical_efficiency", out.optical_efficiency);
    obj.reject_unknown();
}

}  // namespace detail

// Overlays a scenario document onto the table-1-defaults baseline.
inline ScenarioParams parse_scenario(const Json& doc,
                                     const std::string& path_prefix = "") {
    ScenarioParams p = table1_defaults();
    detail::StrictObject top(doc, path_prefix);

    top.number("altitude_m", p.altitude_m);
    top.number("ground_separation_m", p.ground_separation_m);
    top.number("temporal_width_s", p.temporal_width_s);
    top.number("gating_window_s", p.gating_window_s);
    top.number("clock_offset_s", p.clock_offset_s);
    top.number("clock_offset_spread_s", p.clock_offset_spread_s);
    top.number("wavelength_m", p.wavelength_m);

    if (const Json* node = top.object("beam")) {
        const std::string path = detail::join_path(path_prefix, "beam");
        detail::StrictObject obj(*node, path);
        const std::string mode = obj.text(
            "mode", p.beam.mode == BeamWidthMode::kModel    ? "model"
                    : p.beam.mode == BeamWidthMode::kDirect ? "direct"
                                                            : "off");
        if (mode == "model")
            p.beam.mode = BeamWidthMode::kModel;
        else if (mode == "direct")
            p.beam.mode = BeamWidthMode::kDirect;
        else if (mode == "off")
            p.beam.mode = BeamWidthMode::kOff;
        else
            throw ConfigError("config: \"" + path +
                              ".mode\" must be one of model, direct, off");
        obj.number("aperture_radius_m", p.beam.aperture_radius_m);
        obj.number("initial_waist_m", p.beam.initial_waist_m);
        obj.number("fried_parameter_m", p.beam.fried_parameter_m);
        obj.number("tracking_error_m", p.beam.tracking_error_m);
        obj.number("pointing_jitter_sq", p.beam.pointing_jitter_sq);
        obj.number("direct_width_m", p.beam.direct_width_m);
        obj.reject_unknown();
    }

    if (const Json* node = top.object("atmosphere")) {
        detail::StrictObject obj(*node,
                                 detail::join_path(path_prefix, "atmosphere"));
        obj.number("alpha0_per_m", p.atmosphere.alpha0_per_m);
        obj.number("scale_height_m", p.atmosphere.scale_height_m);
        obj.reject_unknown();
    }

    if (const Json* node = top.object("losses")) {
        detail::StrictObject obj(*node, detail::join_path(path_prefix, "losses"));
        obj.number("optics_efficiency", p.losses.optics_efficiency);
        obj.number("detector_efficiency", p.losses.detector_efficiency);
        obj.reject_unknown();
    }

    if (const Json* node = top.object("background")) {
        const std::string path = detail::join_path(path_prefix, "background");
        detail::StrictObject obj(*node, path);
        const std::string regime = obj.text(
            "regime", p.background.regime == SkyRegime::kDay ? "day" : "night");
        if (regime == "day")
            p.background.regime = SkyRegime::kDay;
        else if (regime == "night")
            p.background.regime = SkyRegime::kNight;
        else
            throw ConfigError("config: \"" + path +
                              ".regime\" must be day or night");
        const std::string mode = obj.text(
            "rate_mode", p.background.rate_mode == BackgroundRateMode::kDirect
                             ? "direct"
                             : "radiance");
        if (mode == "direct")
            p.background.rate_mode = BackgroundRateMode::kDirect;
        else if (mode == "radiance")
            p.background.rate_mode = BackgroundRateMode::kRadiance;
        else
            throw ConfigError("config: \"" + path +
                              ".rate_mode\" must be direct or radiance");
        obj.number("day_rate_per_detector_hz",
                   p.background.day_rate_per_detector_hz);
        obj.number("night_rate_per_detector_hz",
                   p.background.night_rate_per_detector_hz);
        obj.number("dark_count_rate_hz", p.background.dark_count_rate_hz);
        if (const Json* rad = obj.object("day_radiance"))
            detail::parse_radiance(*rad, path + ".day_radiance",
                                   p.background.day_radiance);
        if (const Json* rad = obj.object("night_radiance"))
            detail::parse_radiance(*rad, path + ".night_radiance",
                                   p.background.night_radiance);
        obj.reject_unknown();
    }

    if (const Json* node = top.object("earth")) {
        detail::StrictObject obj(*node, detail::join_path(path_prefix, "earth"));
        obj.number("radius_m", p.earth.radius_m);
        obj.reject_unknown();
    }

    if (const Json* node = top.object("routing")) {
        const std::string path = detail::join_path(path_prefix, "routing");
        detail::StrictObject obj(*node, path);
        if (const Json* probs = obj.object("detector_probs")) {
            if (!probs->is_array() || probs->size() != 4)
                throw ConfigError("config: \"" + path +
                                  ".detector_probs\" must be an array of 4 numbers");
            for (std::size_t i = 0; i < 4; ++i) {
                if (!(*probs)[i].is_number())
                    throw ConfigError("config: \"" + path +
                                      ".detector_probs\" must be an array of 4 numbers");
                p.routing.detector_probs[i] = (*probs)[i].get<double>();
            }
        }
        obj.reject_unknown();
    }

    top.reject_unknown();
    p.validate();
    return p;
}

inline Json serialize_scenario(const ScenarioParams& p) {
    Json doc;
    doc["altitude_m"] = p.altitude_m;
    doc["ground_separation_m"] = p.ground_separation_m;
    doc["temporal_width_s"] = p.temporal_width_s;
    doc["gating_window_s"] = p.gating_window_s;
    doc["clock_offset_s"] = p.clock_offset_s;
    doc["clock_offset_spread_s"] = p.clock_offset_spread_s;
    doc["wavelength_m"] = p.wavelength_m;

    Json& beam = doc["beam"];
    beam["mode"] = p.beam.mode == BeamWidthMode::kModel    ? "model"
                   : p.beam.mode == BeamWidthMode::kDirect ? "direct"
                                                           : "off";
    beam["aperture_radius_m"] = p.beam.aperture_radius_m;
    beam["initial_waist_m"] = p.beam.initial_waist_m;
    beam["fried_parameter_m"] = p.beam.fried_parameter_m;
    beam["tracking_error_m"] = p.beam.tracking_error_m;
    beam["pointing_jitter_sq"] = p.beam.pointing_jitter_sq;
    beam["direct_width_m"] = p.beam.direct_width_m;

    Json& atmo = doc["atmosphere"];
    atmo["alpha0_per_m"] = p.atmosphere.alpha0_per_m;
    atmo["scale_height_m"] = p.atmosphere.scale_height_m;

    Json& losses = doc["losses"];
    losses["optics_efficiency"] = p.losses.optics_efficiency;
    losses["detector_efficiency"] = p.losses.detector_efficiency;

    Json& bg = doc["background"];
    bg["regime"] = p.background.regime == SkyRegime::kDay ? "day" : "night";
    bg["rate_mode"] =
        p.background.rate_mode == BackgroundRateMode::kDirect ? "direct"
                                                              : "radiance";
    bg["day_rate_per_detector_hz"] = p.background.day_rate_per_detector_hz;
    bg["night_rate_per_detector_hz"] = p.background.night_rate_per_detector_hz;
    bg["dark_count_rate_hz"] = p.background.dark_count_rate_hz;
    for (const auto& [key, model] :
         {std::pair<const char*, const RadianceModel&>{"day_radiance",
                                                       p.background.day_radiance},
          {"night_radiance", p.background.night_radiance}}) {
        Json& rad = bg[key];
        rad["sky_spectral_photon_radiance"] = model.sky_spectral_photon_radiance;
        rad["fov_sr"] = model.fov_sr;
        rad["filter_bandwidth_nm"] = model.filter_bandwidth_nm;
        rad["receiver_area_m2"] = model.receiver_area_m2;
        rad["optical_efficiency"] = model.optical_efficiency;
    }

    doc["earth"]["radius_m"] = p.earth.radius_m;
    doc["routing"]["detector_probs"] = p.routing.detector_probs;
    return doc;
}

// Parses a sweep document: {"scenario": {...}, "axes": [...]}. An axis gives
// either an explicit "values" list or an inclusive "start"/"stop" range with
// "count" points or a "step".
inline SweepSpec parse_sweep(const Json& doc) {
    detail::StrictObject top(doc, "");
    SweepSpec spec;
    if (const Json* scenario = top.object("scenario"))
        spec.baseline = parse_scenario(*scenario, "scenario");
    else
        spec.baseline = table1_defaults();

    const Json* axes = top.object("axes");
    if (!axes || !axes->is_array())
        throw ConfigError("config: \"axes\" must be an array of axis objects");
    std::size_t index = 0;
    for (const Json& node : *axes) {
        const std::string path = "axes[" + std::to_string(index++) + "]";
        detail::StrictObject obj(node, path);
        SweepAxis axis;
        axis.path = obj.text("path", "");
        if (axis.path.empty())
            throw ConfigError("config: \"" + path + ".path\" is required");
        if (const Json* values = obj.object("values")) {
            if (!values->is_array() || values->empty())
                throw ConfigError("config: \"" + path +
                                  ".values\" must be a non-empty array");
            for (const Json& v : *values) {
                if (!v.is_number())
                    throw ConfigError("config: \"" + path +
                                      ".values\" must contain numbers");
                axis.values.push_back(v.get<double>());
            }
        } else {
            double start = std::nan(""), stop = std::nan("");
            double count = 0, step = 0;
            obj.number("start", start);
            obj.number("stop", stop);
            obj.number("count", count);
            obj.number("step", step);
            if (std::isnan(start) || std::isnan(stop))
                throw ConfigError("config: \"" + path +
                                  "\" needs either values or start/stop");
            if (count > 0) {
                const auto n = static_cast<std::size_t>(count);
                if (n < 1 || static_cast<double>(n) != count)
                    throw ConfigError("config: \"" + path +
                                      ".count\" must be a positive integer");
                for (std::size_t i = 0; i < n; ++i)
                    axis.values.push_back(
                        n == 1 ? start
                               : start + (stop - start) * static_cast<double>(i) /
                                     static_cast<double>(n - 1));
            } else if (step > 0) {
                for (double v = start; v <= stop + 1e-12 * std::abs(step);
                     v += step)
                    axis.values.push_back(v);
            } else {
                throw ConfigError("config: \"" + path +
                                  "\" needs a positive count or step");
            }
        }
        spec.axes.push_back(std::move(axis));
    }
    top.reject_unknown();
    spec.validate();
    return spec;
}

inline OptimizeSpec parse_optimize(const Json& doc) {
    detail::StrictObject top(doc, "");
    OptimizeSpec spec;
    if (const Json* scenario = top.object("scenario"))
        spec.baseline = parse_scenario(*scenario, "scenario");
    else
        spec.baseline = table1_defaults();

    const Json* free = top.object("free");
    if (!free || !free->is_array() || free->empty())
        throw ConfigError(
            "config: \"free\" must be a non-empty array of parameter boxes");
    std::size_t index = 0;
    for (const Json& node : *free) {
        const std::string path = "free[" + std::to_string(index++) + "]";
        detail::StrictObject obj(node, path);
        FreeParameter f;
        f.path = obj.text("path", "");
        if (f.path.empty())
            throw ConfigError("config: \"" + path + ".path\" is required");
        f.lower = std::nan("");
        f.upper = std::nan("");
        obj.number("lower", f.lower);
        obj.number("upper", f.upper);
        if (std::isnan(f.lower) || std::isnan(f.upper))
            throw ConfigError("config: \"" + path +
                              "\" needs lower and upper bounds");
        obj.reject_unknown();
        spec.free.push_back(std::move(f));
    }

    const std::string objective = top.text("objective",
                                           "max_fidelity_subject_to_eta_floor");
    if (objective == "max_fidelity_subject_to_eta_floor")
        spec.objective = Objective::kMaxFidelitySubjectToEtaFloor;
    else if (objective == "weighted_log_product")
        spec.objective = Objective::kWeightedLogProduct;
    else
        throw ConfigError(
            "config: \"objective\" must be max_fidelity_subject_to_eta_floor "
            "or weighted_log_product");

    top.number("eta_floor", spec.eta_floor);
    top.number("fidelity_weight", spec.fidelity_weight);
    top.number("eta_weight", spec.eta_weight);
    double max_evaluations = static_cast<double>(spec.max_evaluations);
    top.number("max_evaluations", max_evaluations);
    spec.max_evaluations = static_cast<std::size_t>(max_evaluations);
    top.number("tolerance", spec.tolerance);
    double restarts = spec.restarts;
    top.number("restarts", restarts);
    spec.restarts = static_cast<unsigned>(restarts);
    double seed = static_cast<double>(spec.seed);
    top.number("seed", seed);
    spec.seed = static_cast<std::uint64_t>(seed);
    top.reject_unknown();
    spec.validate();
    return spec;
}

// Reads and parses a JSON document, turning parse failures into ConfigError
// with position diagnostics. "//" comments are permitted.
inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open \"" + path + "\" for reading");
    try {
        return Json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config: parse error in \"" + path + "\": " +
                          e.what());
    }
}

inline Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: parse error: ") + e.what());
    }
}

}  // namespace uplinksim
