// How each kind of simulated actor behaves: user ratings, provider answers to
// external recommendation queries, relying-party recommender lists and Sybil
// identity replacement.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "romeo/domain.hpp"
#include "romeo/random.hpp"

namespace romeo {

enum class UserBehavior { Normal, PositiveRater, NegativeRater };

namespace provider {
struct Normal {
    bool operator==(const Normal&) const = default;
};
struct PositiveRater {
    bool operator==(const PositiveRater&) const = default;
};
struct NegativeRater {
    bool operator==(const NegativeRater&) const = default;
};
/// Lies upward `percent`% of the time, honest otherwise.
struct CamouflagedPositive {
    double percent = 0.0;
    bool operator==(const CamouflagedPositive&) const = default;
};
struct CamouflagedNegative {
    double percent = 0.0;
    bool operator==(const CamouflagedNegative&) const = default;
};
/// Positive rater that takes a fresh identity every `period` iterations.
struct SybilPositive {
    std::uint64_t period = 1;
    bool operator==(const SybilPositive&) const = default;
};
struct SybilNegative {
    std::uint64_t period = 1;
    bool operator==(const SybilNegative&) const = default;
};
} // namespace provider

using ProviderBehavior =
    std::variant<provider::Normal, provider::PositiveRater, provider::NegativeRater,
                 provider::CamouflagedPositive, provider::CamouflagedNegative,
                 provider::SybilPositive, provider::SybilNegative>;

namespace relying {
struct Normal {
    bool operator==(const Normal&) const = default;
};
/// Lists only the providers that speak best of it.
struct Malicious {
    bool operator==(const Malicious&) const = default;
};
/// Resets its identity, and with it its reputation, every `period` iterations.
struct Sybil {
    std::uint64_t period = 1;
    bool operator==(const Sybil&) const = default;
};
/// Never returns a recommender list.
struct NotParticipative {
    bool operator==(const NotParticipative&) const = default;
};
} // namespace relying

using RelyingPartyBehavior =
    std::variant<relying::Normal, relying::Malicious, relying::Sybil, relying::NotParticipative>;

// Bands for biased ratings.
inline constexpr double kGoodLow = 0.9;
inline constexpr double kGoodHigh = 1.0;
inline constexpr double kBadLow = 0.0;
inline constexpr double kBadHigh = 0.1;

namespace detail {
inline double good_rating(Rng& rng) { return std::clamp(rng.uniform(kGoodLow, kGoodHigh), 0.0, 1.0); }
inline double bad_rating(Rng& rng) { return std::clamp(rng.uniform(kBadLow, kBadHigh), 0.0, 1.0); }
} // namespace detail

/// Rating a user gives after perceiving quality `quality`.
inline double user_feedback(UserBehavior behavior, double quality, Rng& rng) {
    switch (behavior) {
    case UserBehavior::Normal: return std::clamp(quality, 0.0, 1.0);
    case UserBehavior::PositiveRater: return detail::good_rating(rng);
    case UserBehavior::NegativeRater: return detail::bad_rating(rng);
    }
    return quality;
}

/// Value a provider reports when another provider asks it about a relying
/// party, given its honest internal aggregate.
inline double provider_external_answer(const ProviderBehavior& behavior, double honest, Rng& rng) {
    return std::visit(
        [&](const auto& b) -> double {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, provider::Normal>) {
                return honest;
            } else if constexpr (std::is_same_v<T, provider::PositiveRater> ||
                                 std::is_same_v<T, provider::SybilPositive>) {
                return detail::good_rating(rng);
            } else if constexpr (std::is_same_v<T, provider::NegativeRater> ||
                                 std::is_same_v<T, provider::SybilNegative>) {
                return detail::bad_rating(rng);
            } else if constexpr (std::is_same_v<T, provider::CamouflagedPositive>) {
                return rng.bernoulli(b.percent / 100.0) ? detail::good_rating(rng) : honest;
            } else {
                return rng.bernoulli(b.percent / 100.0) ? detail::bad_rating(rng) : honest;
            }
        },
        behavior);
}

/// Sybil period of a provider behavior, if it has one.
inline std::optional<std::uint64_t> sybil_period(const ProviderBehavior& behavior) {
    if (auto* b = std::get_if<provider::SybilPositive>(&behavior)) return b->period;
    if (auto* b = std::get_if<provider::SybilNegative>(&behavior)) return b->period;
    return std::nullopt;
}

inline std::optional<std::uint64_t> sybil_period(const RelyingPartyBehavior& behavior) {
    if (auto* b = std::get_if<relying::Sybil>(&behavior)) return b->period;
    return std::nullopt;
}

/// A provider the relying party could name as a recommender.
struct RecommenderCandidate {
    EntityId provider;
    Iteration last_interaction = 0;
    double aggregate = 0.0; // what the provider currently says about the relying party

    bool operator==(const RecommenderCandidate&) const = default;
};

/// Recommender list returned by a relying party, or nullopt when it refuses.
inline std::optional<std::vector<EntityId>> rp_recommender_list(
    const RelyingPartyBehavior& behavior, std::vector<RecommenderCandidate> candidates,
    std::size_t list_size) {
    if (std::holds_alternative<relying::NotParticipative>(behavior)) return std::nullopt;

    if (std::holds_alternative<relying::Malicious>(behavior)) {
        std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
            if (a.aggregate != b.aggregate) return a.aggregate > b.aggregate;
            return a.provider < b.provider;
        });
    } else {
        std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
            if (a.last_interaction != b.last_interaction) {
                return a.last_interaction > b.last_interaction;
            }
            return a.provider < b.provider;
        });
    }
    std::vector<EntityId> out;
    for (const auto& c : candidates) {
        if (out.size() >= list_size) break;
        if (std::find(out.begin(), out.end(), c.provider) == out.end()) out.push_back(c.provider);
    }
    return out;
}

/// The replacement identity when `t` is a positive multiple of `period`.
inline std::optional<EntityId> sybil_tick(const EntityId& id, std::uint64_t period, Iteration t) {
    if (period == 0) throw InvariantError("sybil period must be >= 1");
    if (t > 0 && t % period == 0) return id.next_incarnation();
    return std::nullopt;
}

// Scenario spellings.

inline const char* behavior_name(UserBehavior b) {
    switch (b) {
    case UserBehavior::Normal: return "normal";
    case UserBehavior::PositiveRater: return "positive_rater";
    case UserBehavior::NegativeRater: return "negative_rater";
    }
    return "?";
}

inline const char* behavior_name(const ProviderBehavior& b) {
    static constexpr const char* names[] = {"normal",
                                            "positive_rater",
                                            "negative_rater",
                                            "camouflaged_positive",
                                            "camouflaged_negative",
                                            "sybil_positive",
                                            "sybil_negative"};
    return names[b.index()];
}

inline const char* behavior_name(const RelyingPartyBehavior& b) {
    static constexpr const char* names[] = {"normal", "malicious", "sybil", "not_participative"};
    return names[b.index()];
}

inline bool is_normal(const ProviderBehavior& b) { return std::holds_alternative<provider::Normal>(b); }

} // namespace romeo
