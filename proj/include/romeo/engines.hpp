// Reputation aggregation engines, the rule engine that pre-filters gathered
// recommendations, and the accuracy-driven source weight update.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "romeo/domain.hpp"

namespace romeo {

/// A recommendation together with the two factors that scale its influence.
struct WeightedInput {
    RecommendationRecord record;
    double weight = 1.0;     // source credibility
    double similarity = 1.0; // preference closeness to the requesting user

    bool operator==(const WeightedInput&) const = default;
};

namespace rules {

/// Keep only the `count` most recent inputs.
struct CapCount {
    std::size_t count = 1;
    bool operator==(const CapCount&) const = default;
};

/// Drop inputs whose source weight is below `threshold`.
struct MinSourceWeight {
    double threshold = 0.0;
    bool operator==(const MinSourceWeight&) const = default;
};

/// Drop inputs older than `max_age` iterations.
struct MaxAge {
    Iteration max_age = 0;
    bool operator==(const MaxAge&) const = default;
};

/// When more than `trigger` inputs were gathered, keep only the `cap` most recent.
struct OverloadCap {
    std::size_t trigger = 1;
    std::size_t cap = 1;
    bool operator==(const OverloadCap&) const = default;
};

} // namespace rules

using Rule = std::variant<rules::CapCount, rules::MinSourceWeight, rules::MaxAge, rules::OverloadCap>;

/// Throws ConfigError when a rule's parameters are out of range.
inline void check_rule(const Rule& rule) {
    std::visit(
        [](const auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, rules::CapCount>) {
                if (r.count < 1) throw ConfigError("cap_count.count must be >= 1");
            } else if constexpr (std::is_same_v<T, rules::MinSourceWeight>) {
                if (!in_unit_interval(r.threshold)) {
                    throw ConfigError("min_source_weight.threshold must be in [0,1]");
                }
            } else if constexpr (std::is_same_v<T, rules::OverloadCap>) {
                if (r.cap < 1) throw ConfigError("overload_cap.cap must be >= 1");
                if (r.cap > r.trigger) throw ConfigError("overload_cap.cap must not exceed trigger");
            }
        },
        rule);
}

namespace detail {

// Recency order: iteration, then source id. Inputs that compare equal keep
// their position in the list.
inline bool more_recent(const WeightedInput& a, const WeightedInput& b) {
    if (a.record.iteration != b.record.iteration) return a.record.iteration > b.record.iteration;
    return a.record.source > b.record.source;
}

inline std::vector<WeightedInput> keep_most_recent(const std::vector<WeightedInput>& inputs,
                                                   std::size_t n) {
    if (inputs.size() <= n) return inputs;
    std::vector<std::size_t> order(inputs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return more_recent(inputs[a], inputs[b]);
    });
    std::vector<bool> keep(inputs.size(), false);
    for (std::size_t i = 0; i < n; ++i) keep[order[i]] = true;
    std::vector<WeightedInput> out;
    out.reserve(n);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (keep[i]) out.push_back(inputs[i]);
    }
    return out;
}

template <typename Pred>
std::vector<WeightedInput> keep_if(const std::vector<WeightedInput>& inputs, Pred pred) {
    std::vector<WeightedInput> out;
    std::copy_if(inputs.begin(), inputs.end(), std::back_inserter(out), pred);
    return out;
}

} // namespace detail

/// Applies `rule_list` in order. Rules only remove inputs; survivors keep
/// their relative order.
inline std::vector<WeightedInput> apply_rules(const std::vector<Rule>& rule_list,
                                              std::vector<WeightedInput> inputs, Iteration now) {
    for (const Rule& rule : rule_list) {
        inputs = std::visit(
            [&](const auto& r) -> std::vector<WeightedInput> {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, rules::CapCount>) {
                    return detail::keep_most_recent(inputs, r.count);
                } else if constexpr (std::is_same_v<T, rules::MinSourceWeight>) {
                    return detail::keep_if(inputs, [&](const WeightedInput& in) {
                        return in.weight >= r.threshold;
                    });
                } else if constexpr (std::is_same_v<T, rules::MaxAge>) {
                    return detail::keep_if(inputs, [&](const WeightedInput& in) {
                        return in.record.iteration + r.max_age >= now;
                    });
                } else {
                    if (inputs.size() <= r.trigger) return inputs;
                    return detail::keep_most_recent(inputs, r.cap);
                }
            },
            rule);
    }
    return inputs;
}

enum class EngineKind { WeightedMean, TimeDecayWeightedMean };

struct EngineConfig {
    EngineKind kind = EngineKind::WeightedMean;
    double decay = 0.9;         // lambda, only used by the time-decay engine
    double default_score = 0.5; // returned when no usable input exists
    double learning_rate = 0.2; // alpha of the weight update

    bool operator==(const EngineConfig&) const = default;
};

inline void check_engine(const EngineConfig& cfg) {
    if (!(cfg.decay > 0.0 && cfg.decay <= 1.0)) throw ConfigError("engine.decay must be in (0,1]");
    if (!in_unit_interval(cfg.default_score)) {
        throw ConfigError("engine.default_score must be in [0,1]");
    }
    if (!in_unit_interval(cfg.learning_rate)) {
        throw ConfigError("engine.learning_rate must be in [0,1]");
    }
}

namespace detail {

// sum(f_i * r_i) / sum(f_i), evaluated around the first contributing value so
// that inputs which all carry the same value return it exactly.
inline double normalized_mean(const std::vector<WeightedInput>& inputs,
                              const std::vector<double>& factors, double fallback) {
    double total = 0.0;
    for (double f : factors) total += f;
    if (!(total > 0.0)) return fallback;
    double pivot = 0.0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (factors[i] > 0.0) {
            pivot = inputs[i].record.value;
            break;
        }
    }
    double shift = 0.0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        shift += factors[i] * (inputs[i].record.value - pivot);
    }
    return std::clamp(pivot + shift / total, 0.0, 1.0);
}

} // namespace detail

/// Sum(w*s*r) / Sum(w*s); `default_score` when the denominator is zero.
inline double weighted_mean(const std::vector<WeightedInput>& inputs, double default_score) {
    std::vector<double> factors;
    factors.reserve(inputs.size());
    for (const auto& in : inputs) factors.push_back(in.weight * in.similarity);
    return detail::normalized_mean(inputs, factors, default_score);
}

/// weighted_mean with every factor also multiplied by decay^(now - iteration).
inline double time_decay_mean(const std::vector<WeightedInput>& inputs, double decay, Iteration now,
                              double default_score) {
    if (!(decay > 0.0 && decay <= 1.0)) throw InvariantError("decay must be in (0,1]");
    // Ages are measured from the newest input; the common factor cancels and
    // old-only input sets no longer underflow to the default.
    Iteration newest = 0;
    for (const auto& in : inputs) {
        if (in.record.iteration > now) throw InvariantError("input from the future");
        newest = std::max(newest, in.record.iteration);
    }
    std::vector<double> factors;
    factors.reserve(inputs.size());
    for (const auto& in : inputs) {
        double age = static_cast<double>(newest - in.record.iteration);
        factors.push_back(in.weight * in.similarity * std::pow(decay, age));
    }
    return detail::normalized_mean(inputs, factors, default_score);
}

/// Dispatches to the engine selected by `cfg`.
inline double compute_score(const EngineConfig& cfg, const std::vector<WeightedInput>& inputs,
                            Iteration now) {
    switch (cfg.kind) {
    case EngineKind::WeightedMean: return weighted_mean(inputs, cfg.default_score);
    case EngineKind::TimeDecayWeightedMean:
        return time_decay_mean(inputs, cfg.decay, now, cfg.default_score);
    }
    return cfg.default_score;
}

/// Moves a source weight toward its accuracy 1 - |r - f| at rate alpha.
inline double adjust_weight(double weight, double recommendation, double feedback, double alpha) {
    double accuracy = 1.0 - std::abs(recommendation - feedback);
    return std::clamp((1.0 - alpha) * weight + alpha * accuracy, 0.0, 1.0);
}

} // namespace romeo
