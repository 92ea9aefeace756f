// Scenario builders and independent oracles shared by the test suites.

#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "romeo/romeo.hpp"

namespace romeo::test {

/// Providers op0..op{n-1}, `users_per_provider` fixed-preference users each,
/// one relying party "rp" with one service "svc" of constant quality.
inline Scenario world_scenario(std::size_t providers, std::size_t users_per_provider,
                               double quality, std::uint64_t iterations) {
    Scenario s;
    s.iterations = iterations;
    s.p_active = 0.3;
    s.preference_dimension = 2;
    s.recommender_list_size = 3;
    for (std::size_t i = 0; i < providers; ++i) {
        std::string id = "op" + std::to_string(i);
        s.providers.push_back({id, provider::Normal{}});
        s.users.push_back({users_per_provider, UserBehavior::Normal, id, std::vector<double>{0.5, 0.5}});
    }
    RelyingPartySpec rp;
    rp.id = "rp";
    rp.services.push_back({"svc", {{0, quality}}});
    s.relying_parties.push_back(rp);
    return s;
}

inline std::vector<QualityPiece>& schedule_of(Scenario& s) {
    return s.relying_parties.front().services.front().schedule;
}

/// Straight Sum(w*s*r) / Sum(w*s) in extended precision.
inline double oracle_weighted_mean(const std::vector<WeightedInput>& inputs, double fallback) {
    long double num = 0, den = 0;
    for (const auto& in : inputs) {
        long double f = static_cast<long double>(in.weight) * in.similarity;
        num += f * in.record.value;
        den += f;
    }
    return den > 0 ? static_cast<double>(num / den) : fallback;
}

/// Same, with each factor multiplied by decay^(now - iteration).
inline double oracle_decay_mean(const std::vector<WeightedInput>& inputs, double decay,
                                Iteration now, double fallback) {
    long double num = 0, den = 0;
    for (const auto& in : inputs) {
        long double age = static_cast<long double>(now - in.record.iteration);
        long double f = static_cast<long double>(in.weight) * in.similarity *
                        std::pow(static_cast<long double>(decay), age);
        num += f * in.record.value;
        den += f;
    }
    return den > 0 ? static_cast<double>(num / den) : fallback;
}

inline WeightedInput make_input(double value, double weight, double similarity,
                                Iteration iteration = 0, std::uint32_t source = 0) {
    WeightedInput in;
    in.record.source = {EntityKind::Provider, source, 0};
    in.record.subject = {EntityKind::RelyingParty, 0, 0};
    in.record.value = value;
    in.record.prefs = PrefVector::neutral(1);
    in.record.iteration = iteration;
    in.weight = weight;
    in.similarity = similarity;
    return in;
}

/// Random engine input list, sizes 0..max_size, ages 0..max_age before `now`.
inline std::vector<WeightedInput> random_inputs(Rng& rng, std::size_t max_size, Iteration now,
                                                Iteration max_age) {
    std::size_t n = rng.index(max_size + 1);
    std::vector<WeightedInput> out;
    for (std::size_t i = 0; i < n; ++i) {
        Iteration age = rng.index(max_age + 1);
        out.push_back(make_input(rng.uniform(), rng.uniform(), rng.uniform(), now - age,
                                 static_cast<std::uint32_t>(rng.index(50))));
    }
    return out;
}

/// Mean of 1 - |presented - feedback| over all interacting requests, computed
/// straight from the raw log pairs.
inline std::vector<std::optional<double>> oracle_satisfaction(const std::vector<IterationLog>& logs) {
    std::vector<std::optional<double>> out;
    for (const auto& log : logs) {
        double sum = 0;
        int n = 0;
        for (const auto& r : log.requests) {
            if (!r.interacted) continue;
            sum += 1.0 - std::fabs(r.presented - *r.feedback);
            ++n;
        }
        out.push_back(n ? std::optional<double>(sum / n) : std::nullopt);
    }
    return out;
}

} // namespace romeo::test
