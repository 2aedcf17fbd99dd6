// Derivative-free protocol parameter optimization: Nelder-Mead simplex with
// deterministic restarts inside a box.
//
// Box constraints are enforced by the coordinate map
//   x_i = lo_i + (hi_i - lo_i) * (1 + sin u_i) / 2,
// so the search is unconstrained in u and the reported optimum can never
// leave the box. The result is the best point found, never claimed globally
// optimal; the trace records every objective evaluation.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "uplinksim/param_paths.hpp"
#include "uplinksim/rng.hpp"
#include "uplinksim/scenario.hpp"

namespace uplinksim {

enum class Objective {
    // Maximize F subject to eta_tot >= eta_floor (penalty formulation).
    kMaxFidelitySubjectToEtaFloor,
    // Maximize fidelity_weight * ln F + eta_weight * ln eta_tot.
    kWeightedLogProduct,
};

struct FreeParameter {
    std::string path;
    double lower = 0;
    double upper = 0;
};

struct OptimizeSpec {
    ScenarioParams baseline{};
    std::vector<FreeParameter> free;
    Objective objective = Objective::kMaxFidelitySubjectToEtaFloor;
    double eta_floor = 1e-6;
    double fidelity_weight = 1.0;
    double eta_weight = 1.0;
    std::size_t max_evaluations = 4000;
    double tolerance = 1e-10;
    unsigned restarts = 3;
    std::uint64_t seed = 0;

    void validate() const {
        if (free.empty())
            throw std::invalid_argument("optimize: at least one free parameter");
        for (const auto& f : free) {
            find_parameter_path(f.path);
            if (!std::isfinite(f.lower) || !std::isfinite(f.upper) ||
                f.lower > f.upper)
                throw std::invalid_argument(
                    "optimize: bounds for \"" + f.path +
                    "\" must be finite and ordered");
        }
        if (!(eta_floor >= 0 && eta_floor <= 1))
            throw std::invalid_argument("optimize: eta_floor in [0,1] violated");
        if (max_evaluations < 1)
            throw std::invalid_argument("optimize: max_evaluations >= 1 violated");
        if (!(tolerance > 0))
            throw std::invalid_argument("optimize: tolerance > 0 violated");
    }
};

struct TraceEntry {
    std::vector<double> x;  // free-parameter values, spec order
    double objective = 0;   // minimized value
};

struct OptimizeResult {
    ScenarioParams best_params{};
    ProtocolMetrics best_metrics{};
    std::vector<double> best_x;
    double best_objective = std::numeric_limits<double>::infinity();
    std::size_t evaluations = 0;
    bool converged = false;
    std::vector<TraceEntry> trace;
};

namespace detail {

// Penalized scalar objective (minimized).
inline double scalar_objective(const OptimizeSpec& spec,
                               const ProtocolMetrics& m) {
    switch (spec.objective) {
        case Objective::kMaxFidelitySubjectToEtaFloor: {
            double penalty = 0;
            if (spec.eta_floor > 0 && m.eta_tot < spec.eta_floor)
                penalty = 1e4 * (spec.eta_floor - m.eta_tot) / spec.eta_floor;
            return -m.fidelity + penalty;
        }
        case Objective::kWeightedLogProduct: {
            if (!(m.fidelity > 0) || !(m.eta_tot > 0))
                return std::numeric_limits<double>::infinity();
            return -(spec.fidelity_weight * std::log(m.fidelity) +
                     spec.eta_weight * std::log(m.eta_tot));
        }
    }
    throw std::logic_error("optimize: unknown objective");
}

}  // namespace detail

inline OptimizeResult optimize(const OptimizeSpec& spec) {
    spec.validate();
    spec.baseline.validate();

    // Split the box into genuinely free dimensions and pinned ones.
    std::vector<std::size_t> free_dims;
    for (std::size_t i = 0; i < spec.free.size(); ++i)
        if (spec.free[i].upper > spec.free[i].lower) free_dims.push_back(i);

    OptimizeResult result;

    auto apply = [&](const std::vector<double>& x, ScenarioParams& params) {
        for (std::size_t i = 0; i < spec.free.size(); ++i)
            find_parameter_path(spec.free[i].path).set(params, x[i]);
    };

    // Evaluate the full-dimension point x, tracking the incumbent.
    auto evaluate_x = [&](const std::vector<double>& x) {
        ScenarioParams params = spec.baseline;
        apply(x, params);
        double value;
        try {
            value = detail::scalar_objective(spec, evaluate_scenario(params));
        } catch (const std::exception&) {
            value = std::numeric_limits<double>::infinity();
        }
        ++result.evaluations;
        result.trace.push_back({x, value});
        if (value < result.best_objective || result.best_x.empty()) {
            result.best_objective = std::min(value, result.best_objective);
            result.best_x = x;
        }
        return value;
    };

    std::vector<double> pinned(spec.free.size());
    for (std::size_t i = 0; i < spec.free.size(); ++i)
        pinned[i] = spec.free[i].lower;

    if (free_dims.empty()) {
        // Degenerate box: a single point.
        evaluate_x(pinned);
        result.converged = true;
    } else {
        const std::size_t n = free_dims.size();
        auto to_x = [&](const std::vector<double>& u) {
            std::vector<double> x = pinned;
            for (std::size_t j = 0; j < n; ++j) {
                const auto& f = spec.free[free_dims[j]];
                x[free_dims[j]] =
                    f.lower + (f.upper - f.lower) * 0.5 * (1.0 + std::sin(u[j]));
            }
            return x;
        };
        auto eval_u = [&](const std::vector<double>& u) {
            return evaluate_x(to_x(u));
        };

        // Restart k starts from a deterministic point: the box center first,
        // then seeded pseudo-random interior points.
        const double pi_half = 1.5707963267948966;
        for (unsigned restart = 0; restart <= spec.restarts; ++restart) {
            if (result.evaluations >= spec.max_evaluations) break;

            std::vector<double> u0(n, 0.0);
            if (restart > 0) {
                CounterRng rng(spec.seed, restart);
                for (std::size_t j = 0; j < n; ++j)
                    u0[j] = pi_half * (2.0 * rng.next_double() - 1.0) * 0.95;
            }

            // Initial simplex around u0.
            std::vector<std::vector<double>> simplex(n + 1, u0);
            std::vector<double> fvals(n + 1);
            for (std::size_t j = 0; j < n; ++j) simplex[j + 1][j] += 0.35;
            for (std::size_t v = 0; v <= n; ++v) {
                if (result.evaluations >= spec.max_evaluations) break;
                fvals[v] = eval_u(simplex[v]);
            }

            const double alpha = 1.0, gamma = 2.0, rho = 0.5, shrink = 0.5;
            while (result.evaluations < spec.max_evaluations) {
                std::vector<std::size_t> order(n + 1);
                for (std::size_t v = 0; v <= n; ++v) order[v] = v;
                std::sort(order.begin(), order.end(), [&](std::size_t a,
                                                          std::size_t b) {
                    return fvals[a] < fvals[b];
                });
                const std::size_t best = order[0], worst = order[n],
                                  second_worst = order[n - 1];
                if (std::abs(fvals[worst] - fvals[best]) <=
                    spec.tolerance *
                        (std::abs(fvals[best]) + std::abs(fvals[worst]) + 1e-30)) {
                    result.converged = true;
                    break;
                }

                std::vector<double> centroid(n, 0.0);
                for (std::size_t v = 0; v <= n; ++v) {
                    if (v == worst) continue;
                    for (std::size_t j = 0; j < n; ++j)
                        centroid[j] += simplex[v][j] / static_cast<double>(n);
                }

                auto blend = [&](double t) {
                    std::vector<double> u(n);
                    for (std::size_t j = 0; j < n; ++j)
                        u[j] = centroid[j] + t * (centroid[j] - simplex[worst][j]);
                    return u;
                };

                const auto reflected = blend(alpha);
                const double f_reflected = eval_u(reflected);
                if (f_reflected < fvals[best]) {
                    const auto expanded = blend(gamma);
                    const double f_expanded = eval_u(expanded);
                    if (f_expanded < f_reflected) {
                        simplex[worst] = expanded;
                        fvals[worst] = f_expanded;
                    } else {
                        simplex[worst] = reflected;
                        fvals[worst] = f_reflected;
                    }
                } else if (f_reflected < fvals[second_worst]) {
                    simplex[worst] = reflected;
                    fvals[worst] = f_reflected;
                } else {
                    const auto contracted = blend(-rho);
                    const double f_contracted = eval_u(contracted);
                    if (f_contracted < fvals[worst]) {
                        simplex[worst] = contracted;
                        fvals[worst] = f_contracted;
                    } else {
                        for (std::size_t v = 0; v <= n; ++v) {
                            if (v == best) continue;
                            for (std::size_t j = 0; j < n; ++j)
                                simplex[v][j] =
                                    simplex[best][j] +
                                    shrink * (simplex[v][j] - simplex[best][j]);
                            if (result.evaluations >= spec.max_evaluations) break;
                            fvals[v] = eval_u(simplex[v]);
                        }
                    }
                }
            }
        }
    }

    result.best_params = spec.baseline;
    apply(result.best_x, result.best_params);
    result.best_metrics = evaluate_scenario(result.best_params);
    return result;
}

}  // namespace uplinksim
