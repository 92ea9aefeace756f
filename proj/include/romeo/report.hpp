// CSV, JSON and SVG renderings of a simulation result.

#pragma once

#include <algorithm>
#include <cstdio>
#include <iterator>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "romeo/metrics.hpp"

namespace romeo {

namespace detail {

inline std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

inline std::string fixed6(const std::optional<double>& v) { return v ? fixed6(*v) : std::string(); }

inline nlohmann::ordered_json nullable(const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

} // namespace detail

inline constexpr const char* kResultsHeader = "iteration,real_qos,mean_normal_reputation";
inline constexpr const char* kAccuracyHeader = "iteration,active,interactions,fraction";
inline constexpr const char* kSatisfactionHeader =
    "iteration,mean_satisfaction,mean_satisfaction_normal_users";

inline std::string emit_csv(const std::vector<ResultsPoint>& series) {
    std::string out = std::string(kResultsHeader) + "\n";
    for (const auto& p : series) {
        out += std::to_string(p.t) + "," + detail::fixed6(p.real_qos) + "," +
               detail::fixed6(p.mean_normal_reputation) + "\n";
    }
    return out;
}

inline std::string emit_csv(const std::vector<AccuracyPoint>& series) {
    std::string out = std::string(kAccuracyHeader) + "\n";
    for (const auto& p : series) {
        out += std::to_string(p.t) + "," + std::to_string(p.active) + "," +
               std::to_string(p.interactions) + "," + detail::fixed6(p.fraction) + "\n";
    }
    return out;
}

inline std::string emit_csv(const std::vector<SatisfactionPoint>& series) {
    std::string out = std::string(kSatisfactionHeader) + "\n";
    for (const auto& p : series) {
        out += std::to_string(p.t) + "," + detail::fixed6(p.mean) + "," +
               detail::fixed6(p.mean_normal_users) + "\n";
    }
    return out;
}

inline nlohmann::ordered_json summary_json(const SummaryStats& s) {
    nlohmann::ordered_json j;
    j["warmup"] = s.warmup;
    j["mae"] = detail::nullable(s.mae);
    j["mean_satisfaction"] = detail::nullable(s.mean_satisfaction);
    j["mean_interaction_rate"] = detail::nullable(s.mean_interaction_rate);
    return j;
}

/// Canonical JSON document; identical results give identical bytes.
inline std::string emit_json(const SimulationResult& r) {
    nlohmann::ordered_json j;
    j["fingerprint"] = r.fingerprint;
    j["seed"] = r.seed;
    j["iterations"] = r.results.size();
    j["summary"] = summary_json(r.summary);

    std::size_t hits = 0, misses = 0, queries = 0;
    for (const auto& log : r.logs) {
        hits += log.cache_hits;
        misses += log.cache_misses;
        queries += log.external_queries;
    }
    j["counters"] = {{"cache_hits", hits}, {"cache_misses", misses}, {"external_queries", queries}};

    auto& results = j["results"] = nlohmann::ordered_json::array();
    for (const auto& p : r.results) {
        results.push_back({{"iteration", p.t},
                           {"real_qos", p.real_qos},
                           {"mean_normal_reputation", detail::nullable(p.mean_normal_reputation)}});
    }
    auto& accuracy = j["accuracy"] = nlohmann::ordered_json::array();
    for (const auto& p : r.accuracy) {
        accuracy.push_back({{"iteration", p.t},
                            {"active", p.active},
                            {"interactions", p.interactions},
                            {"fraction", detail::nullable(p.fraction)}});
    }
    auto& satisfaction = j["satisfaction"] = nlohmann::ordered_json::array();
    for (const auto& p : r.satisfaction) {
        satisfaction.push_back(
            {{"iteration", p.t},
             {"mean_satisfaction", detail::nullable(p.mean)},
             {"mean_satisfaction_normal_users", detail::nullable(p.mean_normal_users)}});
    }
    return j.dump(2) + "\n";
}

/// One plotted column: label (the CSV header name) and per-iteration values.
struct PlotColumn {
    std::string label;
    std::vector<std::optional<double>> values;
};

/// Standalone SVG line chart. The y axis is fixed to [0,1]; absent values
/// split a column into separate polylines.
inline std::string render_plot(const std::string& title, const std::vector<Iteration>& xs,
                               const std::vector<PlotColumn>& columns) {
    if (xs.empty()) throw UsageError("cannot plot an empty series");

    constexpr double width = 720, height = 400;
    constexpr double left = 60, right = 180, top = 40, bottom = 50;
    constexpr double plot_w = width - left - right, plot_h = height - top - bottom;
    static constexpr const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

    const double x0 = static_cast<double>(xs.front());
    const double span = xs.size() > 1 ? static_cast<double>(xs.back()) - x0 : 1.0;
    auto px = [&](Iteration t) {
        return left + (span > 0 ? (static_cast<double>(t) - x0) / span : 0.0) * plot_w;
    };
    auto py = [&](double v) { return top + (1.0 - v) * plot_h; };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
           num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + num(left) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">" +
           title + "</text>\n";

    // Axes and y ticks.
    svg += "<g stroke=\"black\" stroke-width=\"1\">\n";
    svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" +
           num(top + plot_h) + "\"/>\n";
    svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + plot_h) + "\" x2=\"" +
           num(left + plot_w) + "\" y2=\"" + num(top + plot_h) + "\"/>\n";
    svg += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int i = 0; i <= 4; ++i) {
        double v = i / 4.0;
        svg += "<text x=\"" + num(left - 8) + "\" y=\"" + num(py(v) + 4) +
               "\" text-anchor=\"end\">" + num(v) + "</text>\n";
    }
    svg += "<text x=\"" + num(left) + "\" y=\"" + num(top + plot_h + 18) + "\">" +
           std::to_string(xs.front()) + "</text>\n";
    svg += "<text x=\"" + num(left + plot_w) + "\" y=\"" + num(top + plot_h + 18) +
           "\" text-anchor=\"end\">" + std::to_string(xs.back()) + "</text>\n";
    svg += "<text x=\"" + num(left + plot_w / 2) + "\" y=\"" + num(height - 10) +
           "\" text-anchor=\"middle\">iteration</text>\n</g>\n";

    for (std::size_t c = 0; c < columns.size(); ++c) {
        const auto& col = columns[c];
        const char* color = colors[c % std::size(colors)];
        std::string points;
        auto flush = [&] {
            if (points.empty()) return;
            svg += "<polyline data-series=\"" + col.label + "\" fill=\"none\" stroke=\"" + color +
                   "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
            points.clear();
        };
        for (std::size_t i = 0; i < xs.size() && i < col.values.size(); ++i) {
            if (!col.values[i]) {
                flush();
                continue;
            }
            if (!points.empty()) points += ' ';
            points += num(px(xs[i])) + "," + num(py(std::clamp(*col.values[i], 0.0, 1.0)));
        }
        flush();

        double ly = top + 14 + 20.0 * static_cast<double>(c);
        svg += "<line x1=\"" + num(left + plot_w + 12) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" +
               num(left + plot_w + 32) + "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
        svg += "<text class=\"legend\" x=\"" + num(left + plot_w + 38) + "\" y=\"" + num(ly) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + col.label + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

inline std::string render_plot(const std::vector<ResultsPoint>& series) {
    std::vector<Iteration> xs;
    PlotColumn qos{"real_qos", {}}, rep{"mean_normal_reputation", {}};
    for (const auto& p : series) {
        xs.push_back(p.t);
        qos.values.emplace_back(p.real_qos);
        rep.values.push_back(p.mean_normal_reputation);
    }
    return render_plot("Results", xs, {qos, rep});
}

inline std::string render_plot(const std::vector<AccuracyPoint>& series) {
    std::vector<Iteration> xs;
    PlotColumn fraction{"fraction", {}};
    for (const auto& p : series) {
        xs.push_back(p.t);
        fraction.values.push_back(p.fraction);
    }
    return render_plot("Accuracy", xs, {fraction});
}

inline std::string render_plot(const std::vector<SatisfactionPoint>& series) {
    std::vector<Iteration> xs;
    PlotColumn all{"mean_satisfaction", {}}, normal{"mean_satisfaction_normal_users", {}};
    for (const auto& p : series) {
        xs.push_back(p.t);
        all.values.push_back(p.mean);
        normal.values.push_back(p.mean_normal_users);
    }
    return render_plot("User Satisfaction", xs, {all, normal});
}

} // namespace romeo
