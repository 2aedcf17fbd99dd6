// Result-table emission. Fixed header: the swept axes first, then
// eta_a, eta_w, P_gw, F_ic, P_S, eta_tot, F, and a trailing error column
// that is empty for successful rows. Numbers carry 12 significant digits;
// identical inputs produce byte-identical output.

#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "uplinksim/sweep.hpp"

namespace uplinksim {

enum class OutputFormat { kCsv, kJson };

inline OutputFormat parse_output_format(const std::string& name) {
    if (name == "csv") return OutputFormat::kCsv;
    if (name == "json") return OutputFormat::kJson;
    throw std::invalid_argument("output format must be csv or json, got \"" +
                                name + "\"");
}

namespace detail {

inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// RFC-4180: quote when the field contains a comma, quote, or newline.
inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

inline const std::vector<std::string>& metric_columns() {
    static const std::vector<std::string> cols = {
        "eta_a", "eta_w", "P_gw", "F_ic", "P_S", "eta_tot", "F"};
    return cols;
}

inline std::vector<double> metric_values(const ProtocolMetrics& m) {
    return {m.eta_a, m.eta_w, m.p_gw1, m.f_ic, m.p_s, m.eta_tot, m.fidelity};
}

}  // namespace detail

inline void emit_results(const std::vector<SweepRow>& rows,
                         const std::vector<std::string>& axis_names,
                         OutputFormat format, std::ostream& out) {
    if (rows.empty())
        throw std::invalid_argument("emit_results: empty result table");

    if (format == OutputFormat::kCsv) {
        std::string header;
        for (const auto& a : axis_names) header += detail::csv_escape(a) + ",";
        for (const auto& c : detail::metric_columns()) header += c + ",";
        header += "error";
        out << header << "\n";
        for (const auto& row : rows) {
            std::string line;
            for (double v : row.axis_values)
                line += detail::format_number(v) + ",";
            if (row.failed) {
                for (std::size_t i = 0; i < detail::metric_columns().size(); ++i)
                    line += ",";
                line += detail::csv_escape(row.error);
            } else {
                for (double v : detail::metric_values(row.metrics))
                    line += detail::format_number(v) + ",";
            }
            out << line << "\n";
        }
    } else {
        out << "[\n";
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const auto& row = rows[r];
            out << "  {";
            bool first = true;
            auto emit_key = [&](const std::string& key, const std::string& value,
                                bool quoted) {
                out << (first ? "" : ", ") << "\"" << key << "\": ";
                if (quoted)
                    out << "\"" << detail::json_escape(value) << "\"";
                else
                    out << value;
                first = false;
            };
            for (std::size_t a = 0; a < axis_names.size(); ++a)
                emit_key(axis_names[a], detail::format_number(row.axis_values[a]),
                         false);
            if (row.failed) {
                for (const auto& c : detail::metric_columns())
                    emit_key(c, "null", false);
                emit_key("error", row.error, true);
            } else {
                const auto values = detail::metric_values(row.metrics);
                for (std::size_t c = 0; c < values.size(); ++c)
                    emit_key(detail::metric_columns()[c],
                             detail::format_number(values[c]), false);
                emit_key("error", "", true);
            }
            out << "}" << (r + 1 < rows.size() ? "," : "") << "\n";
        }
        out << "]\n";
    }
    if (!out)
        throw std::runtime_error("emit_results: write failed");
}

inline void emit_results_to_file(const std::vector<SweepRow>& rows,
                                 const std::vector<std::string>& axis_names,
                                 OutputFormat format, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("emit_results: cannot open \"" + path +
                                 "\" for writing");
    emit_results(rows, axis_names, format, out);
    out.flush();
    if (!out)
        throw std::runtime_error("emit_results: failed writing \"" + path + "\"");
}

}  // namespace uplinksim
