// Chart series and summary statistics derived from iteration logs.
//
// Absent values (nothing to average) are std::nullopt and never 0.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "romeo/domain.hpp"
#include "romeo/simulation.hpp"

namespace romeo {

/// Arithmetic mean, evaluated around the first element so that a constant
/// sequence returns its value exactly. nullopt for an empty sequence.
inline std::optional<double> mean_of(const std::vector<double>& values) {
    if (values.empty()) return std::nullopt;
    const double pivot = values.front();
    double shift = 0.0;
    for (double v : values) shift += v - pivot;
    return pivot + shift / static_cast<double>(values.size());
}

struct ResultsPoint {
    Iteration t = 0;
    double real_qos = 0.0;
    std::optional<double> mean_normal_reputation;

    bool operator==(const ResultsPoint&) const = default;
};

struct AccuracyPoint {
    Iteration t = 0;
    std::size_t active = 0;
    std::size_t interactions = 0;
    std::optional<double> fraction;

    bool operator==(const AccuracyPoint&) const = default;
};

struct SatisfactionPoint {
    Iteration t = 0;
    std::optional<double> mean;
    std::optional<double> mean_normal_users;

    bool operator==(const SatisfactionPoint&) const = default;
};

struct SummaryStats {
    std::optional<double> mae;
    std::optional<double> mean_satisfaction;
    std::optional<double> mean_interaction_rate;
    std::uint64_t warmup = 0;

    bool operator==(const SummaryStats&) const = default;
};

struct SimulationResult {
    std::string fingerprint;
    std::uint64_t seed = 0;
    std::vector<IterationLog> logs;
    std::vector<ResultsPoint> results;
    std::vector<AccuracyPoint> accuracy;
    std::vector<SatisfactionPoint> satisfaction;
    SummaryStats summary;

    bool operator==(const SimulationResult&) const = default;
};

/// Real QoS of the monitored relying party against the mean score presented
/// by Normal providers for it.
inline std::vector<ResultsPoint> results_series(const std::vector<IterationLog>& logs) {
    std::vector<ResultsPoint> out;
    out.reserve(logs.size());
    for (const auto& log : logs) {
        std::vector<double> presented;
        for (const auto& r : log.requests) {
            if (r.monitored && r.provider_normal) presented.push_back(r.presented);
        }
        out.push_back({log.t, mean_of(log.real_qos).value_or(0.0), mean_of(presented)});
    }
    return out;
}

/// Fraction of active requests that ended in an interaction.
inline std::vector<AccuracyPoint> accuracy_series(const std::vector<IterationLog>& logs) {
    std::vector<AccuracyPoint> out;
    out.reserve(logs.size());
    for (const auto& log : logs) {
        AccuracyPoint p{log.t, log.requests.size(), 0, std::nullopt};
        for (const auto& r : log.requests) p.interactions += r.interacted ? 1 : 0;
        if (p.active > 0) {
            p.fraction = static_cast<double>(p.interactions) / static_cast<double>(p.active);
        }
        out.push_back(p);
    }
    return out;
}

/// Mean of 1 - |presented - feedback| over interacting users, overall and
/// restricted to Normal users.
inline std::vector<SatisfactionPoint> satisfaction_series(const std::vector<IterationLog>& logs) {
    std::vector<SatisfactionPoint> out;
    out.reserve(logs.size());
    for (const auto& log : logs) {
        std::vector<double> all;
        std::vector<double> normal;
        for (const auto& r : log.requests) {
            if (!r.interacted || !r.feedback) continue;
            double sat = std::clamp(1.0 - std::abs(r.presented - *r.feedback), 0.0, 1.0);
            all.push_back(sat);
            if (r.user_normal) normal.push_back(sat);
        }
        out.push_back({log.t, mean_of(all), mean_of(normal)});
    }
    return out;
}

/// Post-warmup means over iterations >= warmup, skipping absent entries.
inline SummaryStats summarize(const SimulationResult& result, std::uint64_t warmup) {
    const std::size_t n = result.results.size();
    if (warmup >= n) {
        throw UsageError("warmup " + std::to_string(warmup) + " must be smaller than the " +
                         std::to_string(n) + " iterations");
    }
    std::vector<double> errors;
    std::vector<double> satisfaction;
    std::vector<double> rates;
    for (std::size_t i = warmup; i < n; ++i) {
        const auto& r = result.results[i];
        if (r.mean_normal_reputation) errors.push_back(std::abs(*r.mean_normal_reputation - r.real_qos));
        if (i < result.satisfaction.size() && result.satisfaction[i].mean) {
            satisfaction.push_back(*result.satisfaction[i].mean);
        }
        if (i < result.accuracy.size() && result.accuracy[i].fraction) {
            rates.push_back(*result.accuracy[i].fraction);
        }
    }
    return {mean_of(errors), mean_of(satisfaction), mean_of(rates), warmup};
}

} // namespace romeo
