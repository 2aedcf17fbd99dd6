// Grid sweeps over 1-3 scenario parameters. Rows are ordered
// lexicographically over the axes (first axis outermost) and each row is an
// independent evaluate_scenario call, so any row can be reproduced in
// isolation. A failing grid point is recorded as an error row and does not
// abort the sweep.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "uplinksim/param_paths.hpp"
#include "uplinksim/scenario.hpp"

namespace uplinksim {

struct SweepAxis {
    std::string path;
    std::vector<double> values;
};

struct SweepSpec {
    ScenarioParams baseline{};
    std::vector<SweepAxis> axes;

    void validate() const {
        if (axes.empty())
            throw std::invalid_argument("sweep: at least one axis required");
        if (axes.size() > 3)
            throw std::invalid_argument("sweep: at most three axes supported");
        for (const auto& axis : axes) {
            if (axis.values.empty())
                throw std::invalid_argument("sweep: axis \"" + axis.path +
                                            "\" has no values");
            find_parameter_path(axis.path);
        }
    }
};

struct SweepRow {
    std::vector<double> axis_values;  // one per axis, in SweepSpec order
    ScenarioParams params{};          // baseline with axis values applied
    ProtocolMetrics metrics{};
    bool failed = false;
    std::string error;
};

inline std::vector<SweepRow> run_sweep(const SweepSpec& spec,
                                       unsigned n_threads = 0) {
    spec.validate();
    spec.baseline.validate();

    std::size_t total = 1;
    for (const auto& axis : spec.axes) total *= axis.values.size();

    std::vector<SweepRow> rows(total);
    for (std::size_t index = 0; index < total; ++index) {
        std::size_t rest = index;
        SweepRow& row = rows[index];
        row.params = spec.baseline;
        row.axis_values.resize(spec.axes.size());
        for (std::size_t a = spec.axes.size(); a-- > 0;) {
            const auto& axis = spec.axes[a];
            const std::size_t pos = rest % axis.values.size();
            rest /= axis.values.size();
            row.axis_values[a] = axis.values[pos];
            find_parameter_path(axis.path).set(row.params, axis.values[pos]);
        }
    }

    const auto evaluate_row = [](SweepRow& row) {
        try {
            row.metrics = evaluate_scenario(row.params);
        } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
        }
    };

    unsigned workers = n_threads ? n_threads
                                 : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
    if (workers <= 1) {
        for (auto& row : rows) evaluate_row(row);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= rows.size()) return;
                evaluate_row(rows[i]);
            }
        };
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return rows;
}

}  // namespace uplinksim
