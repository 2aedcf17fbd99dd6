// uplinksim: scenario evaluation, parameter sweeps, optimization, and
// figure-data generation for the dual-uplink entanglement-swapping model.
//
// Exit codes: 0 success, 1 configuration/validation error, 2 runtime or
// model error, 3 optimizer stopped on budget before reaching tolerance
// (results are still written).

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uplinksim/config.hpp"
#include "uplinksim/emit.hpp"
#include "uplinksim/optimize.hpp"
#include "uplinksim/scenario.hpp"
#include "uplinksim/sweep.hpp"

namespace {

using namespace uplinksim;

void write_or_print(const std::vector<SweepRow>& rows,
                    const std::vector<std::string>& axis_names,
                    OutputFormat format, const std::string& out_path) {
    if (out_path.empty())
        emit_results(rows, axis_names, format, std::cout);
    else
        emit_results_to_file(rows, axis_names, format, out_path);
}

void print_metrics_detail(const ProtocolMetrics& m) {
    std::fprintf(stderr,
                 "slant_range_m=%.6g zenith_deg=%.6g beam_width_m=%.6g\n"
                 "eta_a=%.6g eta_w=%.6g optics=%.6g detector=%.6g eta_ch=%.6g\n"
                 "P_gw1=%.6g P_gw2=%.6g eta_channel=%.6g\n"
                 "stray_rate_hz=%.6g dark_rate_hz=%.6g click_prob=%.6g\n"
                 "F_ic=%.6g P_M=%.6g eta_tot=%.6g P_S=%.6g F=%.6g\n",
                 m.slant_range_m, m.zenith_angle_rad * 180.0 / kPi,
                 m.beam_width_m, m.eta_a, m.eta_w, m.optics_efficiency,
                 m.detector_efficiency, m.eta_ch, m.p_gw1, m.p_gw2,
                 m.eta_channel1, m.stray_rate_hz, m.dark_rate_hz, m.click_prob,
                 m.f_ic, m.p_m_single, m.eta_tot, m.p_s, m.fidelity);
}

SweepSpec figure_preset(const std::string& name) {
    SweepSpec spec;
    spec.baseline = table1_defaults();
    if (name == "fig2") {
        // F and eta_tot vs gating window for several wavepacket widths, at
        // 500 km altitude over 1000 km ground separation.
        spec.baseline.altitude_m = 500e3;
        spec.baseline.ground_separation_m = 1000e3;
        SweepAxis widths{"temporal_width_s", {5e-9, 10e-9, 20e-9, 50e-9}};
        SweepAxis windows{"gating_window_s", {}};
        for (int i = 1; i <= 40; ++i)
            windows.values.push_back(5e-9 * static_cast<double>(i));
        spec.axes = {widths, windows};
    } else if (name == "fig3") {
        // F and eta_tot vs satellite altitude for several ground
        // separations, with 10 ns packets and a 40 ns window.
        spec.baseline.temporal_width_s = 10e-9;
        spec.baseline.gating_window_s = 40e-9;
        SweepAxis separations{"ground_separation_m", {300e3, 600e3, 1000e3}};
        SweepAxis altitudes{"altitude_m", {}};
        for (int i = 0; i < 39; ++i)
            altitudes.values.push_back(100e3 + 50e3 * static_cast<double>(i));
        spec.axes = {separations, altitudes};
    } else {
        throw ConfigError("figure: unknown preset \"" + name +
                          "\" (expected fig2 or fig3)");
    }
    return spec;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Dual-uplink satellite entanglement-swapping simulator: channel "
        "efficiency and swapped-pair fidelity"};
    app.require_subcommand(0, 1);

    bool print_defaults = false;
    int verbosity = 0;
    app.add_flag("--defaults", print_defaults,
                 "print the table-1-defaults scenario document and exit");
    app.add_flag("-v,--verbose", verbosity, "verbose diagnostics on stderr");

    std::string eval_config, eval_out, eval_format = "csv";
    auto* eval_cmd =
        app.add_subcommand("eval", "evaluate a single scenario");
    eval_cmd->fallthrough();
    eval_cmd->add_option("--config", eval_config, "scenario JSON document")
        ->required();
    eval_cmd->add_option("--format", eval_format, "csv or json");
    eval_cmd->add_option("--out", eval_out, "output path (stdout if omitted)");

    std::string sweep_config, sweep_out, sweep_format = "csv";
    auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter grid sweep");
    sweep_cmd->fallthrough();
    sweep_cmd->add_option("--config", sweep_config, "sweep JSON document")
        ->required();
    sweep_cmd->add_option("--format", sweep_format, "csv or json");
    sweep_cmd->add_option("--out", sweep_out, "output path")->required();

    std::string opt_config, opt_out;
    long long opt_seed = -1;
    auto* opt_cmd =
        app.add_subcommand("optimize", "derivative-free parameter optimization");
    opt_cmd->fallthrough();
    opt_cmd->add_option("--config", opt_config, "optimization JSON document")
        ->required();
    opt_cmd->add_option("--out", opt_out, "output path")->required();
    opt_cmd->add_option("--seed", opt_seed,
                        "override the restart seed from the config");

    std::string fig_preset, fig_out;
    auto* fig_cmd =
        app.add_subcommand("figure", "emit the data behind a study figure");
    fig_cmd->fallthrough();
    fig_cmd->add_option("--preset", fig_preset, "fig2 or fig3")->required();
    fig_cmd->add_option("--out", fig_out, "output path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (print_defaults) {
            std::cout << serialize_scenario(table1_defaults()).dump(2) << "\n";
            return 0;
        }

        if (eval_cmd->parsed()) {
            const ScenarioParams params =
                parse_scenario(load_json_file(eval_config));
            SweepRow row;
            row.params = params;
            row.metrics = evaluate_scenario(params);
            if (verbosity > 0) print_metrics_detail(row.metrics);
            write_or_print({row}, {}, parse_output_format(eval_format), eval_out);
            return 0;
        }

        if (sweep_cmd->parsed()) {
            const SweepSpec spec = parse_sweep(load_json_file(sweep_config));
            const auto rows = run_sweep(spec);
            std::vector<std::string> names;
            for (const auto& axis : spec.axes) names.push_back(axis.path);
            write_or_print(rows, names, parse_output_format(sweep_format),
                           sweep_out);
            if (verbosity > 0)
                std::fprintf(stderr, "sweep: %zu rows written to %s\n",
                             rows.size(), sweep_out.c_str());
            return 0;
        }

        if (opt_cmd->parsed()) {
            OptimizeSpec spec = parse_optimize(load_json_file(opt_config));
            if (opt_seed >= 0) spec.seed = static_cast<std::uint64_t>(opt_seed);
            const OptimizeResult result = optimize(spec);

            Json out;
            out["best_scenario"] = serialize_scenario(result.best_params);
            Json& best = out["best"];
            for (std::size_t i = 0; i < spec.free.size(); ++i)
                best[spec.free[i].path] = result.best_x[i];
            Json& metrics = out["metrics"];
            metrics["eta_a"] = result.best_metrics.eta_a;
            metrics["eta_w"] = result.best_metrics.eta_w;
            metrics["P_gw"] = result.best_metrics.p_gw1;
            metrics["F_ic"] = result.best_metrics.f_ic;
            metrics["P_S"] = result.best_metrics.p_s;
            metrics["eta_tot"] = result.best_metrics.eta_tot;
            metrics["F"] = result.best_metrics.fidelity;
            out["objective"] = result.best_objective;
            out["evaluations"] = result.evaluations;
            out["converged"] = result.converged;
            Json trace = Json::array();
            for (const auto& entry : result.trace) {
                Json t;
                t["x"] = entry.x;
                t["objective"] = entry.objective;
                trace.push_back(std::move(t));
            }
            out["trace"] = std::move(trace);

            std::ofstream file(opt_out, std::ios::binary);
            if (!file)
                throw std::runtime_error("optimize: cannot open \"" + opt_out +
                                         "\" for writing");
            file << out.dump(2) << "\n";
            if (verbosity > 0) print_metrics_detail(result.best_metrics);
            return result.converged ? 0 : 3;
        }

        if (fig_cmd->parsed()) {
            const SweepSpec spec = figure_preset(fig_preset);
            const auto rows = run_sweep(spec);
            std::vector<std::string> names;
            for (const auto& axis : spec.axes) names.push_back(axis.path);
            write_or_print(rows, names, OutputFormat::kCsv, fig_out);
            return 0;
        }

        std::cerr << app.help() << "\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
