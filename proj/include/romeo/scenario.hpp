// Declarative description of one simulated world.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "romeo/behaviors.hpp"
#include "romeo/domain.hpp"
#include "romeo/engines.hpp"

namespace romeo {

struct UserGroup {
    std::size_t count = 1;
    UserBehavior behavior = UserBehavior::Normal;
    std::string provider;
    /// Fixed preference vector; nullopt draws each component uniformly.
    std::optional<std::vector<double>> preferences;

    bool operator==(const UserGroup&) const = default;
};

struct ProviderSpec {
    std::string id;
    ProviderBehavior behavior = provider::Normal{};

    bool operator==(const ProviderSpec&) const = default;
};

struct ServiceSpec {
    std::string id;
    std::vector<QualityPiece> schedule;

    bool operator==(const ServiceSpec&) const = default;
};

struct RelyingPartySpec {
    std::string id;
    RelyingPartyBehavior behavior = relying::Normal{};
    std::vector<ServiceSpec> services;
    /// Overrides Scenario::feedback_noise for this relying party.
    std::optional<double> noise;

    bool operator==(const RelyingPartySpec&) const = default;
};

/// Which relying party an active user asks about.
enum class TargetSelection { Monitored, Uniform };

struct Scenario {
    std::uint64_t iterations = 0;
    std::uint64_t seed = 0;
    double p_active = 0.5;
    std::size_t preference_dimension = 1;
    EngineConfig engine;
    std::vector<Rule> rules;
    std::uint64_t cache_ttl = 0;
    std::size_t recommender_list_size = 5;
    double feedback_noise = 0.0;
    /// Burn-in for summary statistics; nullopt means 10% of iterations.
    std::optional<std::uint64_t> warmup;
    /// Empty means the first declared relying party.
    std::string monitored_relying_party;
    TargetSelection target = TargetSelection::Monitored;

    std::vector<UserGroup> users;
    std::vector<ProviderSpec> providers;
    std::vector<RelyingPartySpec> relying_parties;

    bool operator==(const Scenario&) const = default;

    std::size_t user_count() const {
        std::size_t n = 0;
        for (const auto& g : users) n += g.count;
        return n;
    }

    std::uint64_t effective_warmup() const { return warmup.value_or(iterations / 10); }

    std::size_t monitored_index() const {
        for (std::size_t i = 0; i < relying_parties.size(); ++i) {
            if (relying_parties[i].id == monitored_relying_party) return i;
        }
        return 0;
    }

    std::size_t provider_index(const std::string& id) const {
        for (std::size_t i = 0; i < providers.size(); ++i) {
            if (providers[i].id == id) return i;
        }
        throw ConfigError("undefined provider '" + id + "'");
    }
};

/// QoS profile of one relying party as seen by the simulator.
inline QoSProfile qos_profile(const Scenario& s, const RelyingPartySpec& rp) {
    QoSProfile profile;
    for (const auto& svc : rp.services) profile.schedules[svc.id] = svc.schedule;
    profile.noise = rp.noise.value_or(s.feedback_noise);
    return profile;
}

/// Every semantic problem with `s`, each naming the offending key. Empty when
/// valid. A zero iteration count is legal here (an empty run); documents
/// must ask for at least one.
inline std::vector<std::string> validation_errors(const Scenario& s) {
    std::vector<std::string> errors;
    auto need = [&](bool ok, std::string msg) {
        if (!ok) errors.push_back(std::move(msg));
    };

    need(in_unit_interval(s.p_active), "p_active: must be in [0,1]");
    need(s.preference_dimension >= 1, "preference_dimension: must be >= 1");
    need(s.recommender_list_size >= 1, "recommender_list_size: must be >= 1");
    need(s.feedback_noise >= 0.0 && s.feedback_noise <= 0.5, "feedback_noise: must be in [0,0.5]");
    if (s.warmup && s.iterations >= 1) {
        need(*s.warmup < s.iterations, "warmup: must be smaller than iterations");
    }
    try {
        check_engine(s.engine);
    } catch (const ConfigError& e) {
        errors.push_back(e.what());
    }
    for (std::size_t i = 0; i < s.rules.size(); ++i) {
        try {
            check_rule(s.rules[i]);
        } catch (const ConfigError& e) {
            errors.push_back("rule[" + std::to_string(i) + "]: " + e.what());
        }
    }

    need(!s.users.empty(), "user: at least one user group is required");
    need(!s.providers.empty(), "provider: at least one provider is required");
    need(!s.relying_parties.empty(), "relying_party: at least one relying party is required");

    std::set<std::string> provider_ids;
    for (std::size_t i = 0; i < s.providers.size(); ++i) {
        const auto& p = s.providers[i];
        std::string where = "provider[" + std::to_string(i) + "]";
        need(!p.id.empty(), where + ".id: must not be empty");
        need(provider_ids.insert(p.id).second, where + ".id: duplicate id '" + p.id + "'");
        if (auto* c = std::get_if<provider::CamouflagedPositive>(&p.behavior)) {
            need(c->percent >= 0.0 && c->percent <= 100.0, where + ".percent: must be in [0,100]");
        }
        if (auto* c = std::get_if<provider::CamouflagedNegative>(&p.behavior)) {
            need(c->percent >= 0.0 && c->percent <= 100.0, where + ".percent: must be in [0,100]");
        }
        if (auto k = sybil_period(p.behavior)) need(*k >= 1, where + ".period: must be >= 1");
    }

    for (std::size_t i = 0; i < s.users.size(); ++i) {
        const auto& u = s.users[i];
        std::string where = "user[" + std::to_string(i) + "]";
        need(u.count >= 1, where + ".count: must be >= 1");
        need(provider_ids.count(u.provider) == 1,
             where + ".provider: undefined provider '" + u.provider + "'");
        if (u.preferences) {
            need(u.preferences->size() == s.preference_dimension,
                 where + ".preferences: length must equal preference_dimension (" +
                     std::to_string(s.preference_dimension) + ")");
            for (double c : *u.preferences) {
                if (!in_unit_interval(c)) {
                    errors.push_back(where + ".preferences: components must be in [0,1]");
                    break;
                }
            }
        }
    }

    std::set<std::string> rp_ids;
    for (std::size_t i = 0; i < s.relying_parties.size(); ++i) {
        const auto& rp = s.relying_parties[i];
        std::string where = "relying_party[" + std::to_string(i) + "]";
        need(!rp.id.empty(), where + ".id: must not be empty");
        need(rp_ids.insert(rp.id).second, where + ".id: duplicate id '" + rp.id + "'");
        if (auto k = sybil_period(rp.behavior)) need(*k >= 1, where + ".period: must be >= 1");
        if (rp.noise) need(*rp.noise >= 0.0 && *rp.noise <= 0.5, where + ".noise: must be in [0,0.5]");
        need(!rp.services.empty(), where + ": relying party '" + rp.id + "' declares no service");
        std::set<std::string> service_ids;
        for (const auto& svc : rp.services) {
            need(service_ids.insert(svc.id).second,
                 "service: duplicate service '" + svc.id + "' for relying party '" + rp.id + "'");
            try {
                check_schedule(svc.id, svc.schedule);
            } catch (const ConfigError& e) {
                errors.push_back(std::string("service.schedule: ") + e.what());
            }
        }
    }
    if (!s.monitored_relying_party.empty()) {
        need(rp_ids.count(s.monitored_relying_party) == 1,
             "monitored_relying_party: undefined relying party '" + s.monitored_relying_party + "'");
    }
    return errors;
}

} // namespace romeo
