// The simulation state machine. A WorldState is advanced one iteration at a
// time by step(); each provider acts as its own reputation manager: it keeps
// a store of user feedback, a table of source weights, an optional score
// cache, and asks other providers for recommendations through the recommender
// list returned by the relying party.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "romeo/behaviors.hpp"
#include "romeo/domain.hpp"
#include "romeo/engines.hpp"
#include "romeo/random.hpp"
#include "romeo/scenario.hpp"

namespace romeo {

/// Weight given to a source the first time it is seen.
inline constexpr double kInitialWeight = 0.5;

/// (relying party, service) pair a score or record is about.
struct SubjectKey {
    EntityId subject;
    ServiceIndex service = 0;

    auto operator<=>(const SubjectKey&) const = default;
};

/// Source weights are learned per relying party: the accuracy evidence behind
/// them comes from feedback about that relying party, and disappears with it.
struct WeightKey {
    EntityId source;
    EntityId subject;

    auto operator<=>(const WeightKey&) const = default;
};

struct CacheEntry {
    double score = 0.0;
    Iteration computed_at = 0;
    std::vector<WeightedInput> used; // inputs behind `score`, for weight updates

    bool operator==(const CacheEntry&) const = default;
};

struct ProviderState {
    EntityId id;
    ProviderBehavior behavior;
    std::map<SubjectKey, std::vector<RecommendationRecord>> store;
    std::map<WeightKey, double> weights;
    std::map<SubjectKey, CacheEntry> cache;

    bool operator==(const ProviderState&) const = default;

    double weight_of(const EntityId& source, const EntityId& subject) const {
        auto it = weights.find({source, subject});
        return it == weights.end() ? kInitialWeight : it->second;
    }

    std::size_t record_count() const {
        std::size_t n = 0;
        for (const auto& [key, records] : store) n += records.size();
        return n;
    }

    std::vector<SourceWeight> source_weights() const {
        std::vector<SourceWeight> out;
        for (const auto& [key, w] : weights) out.push_back({id, key.source, w});
        return out;
    }
};

struct UserState {
    EntityId id;
    UserBehavior behavior = UserBehavior::Normal;
    PrefVector prefs;
    std::size_t home = 0; // index into WorldState::providers

    bool operator==(const UserState&) const = default;
};

struct RelyingPartyState {
    EntityId id;
    RelyingPartyBehavior behavior;
    QoSProfile qos;
    std::vector<std::string> services; // ServiceIndex -> service id
    std::map<EntityId, Iteration> last_interaction;

    bool operator==(const RelyingPartyState&) const = default;
};

struct WorldState {
    Iteration t = 0;
    std::size_t dimension = 1;
    std::vector<UserState> users;
    std::vector<ProviderState> providers;
    std::vector<RelyingPartyState> relying_parties;
    Rng rng;

    bool operator==(const WorldState&) const = default;
};

/// What happened to one user's request during an iteration.
struct RequestLog {
    EntityId user;
    EntityId provider;
    EntityId relying_party;
    ServiceIndex service = 0;
    bool user_normal = true;
    bool provider_normal = true;
    bool monitored = true; // request targets the monitored relying party
    double presented = 0.0;
    bool interacted = false;
    std::optional<double> feedback;
    std::optional<double> satisfaction;
    bool cache_hit = false;

    bool operator==(const RequestLog&) const = default;
};

struct IterationLog {
    Iteration t = 0;
    std::vector<RequestLog> requests;
    std::vector<double> real_qos; // per service of the monitored relying party
    std::size_t cache_hits = 0;
    std::size_t cache_misses = 0;
    std::size_t external_queries = 0;
    std::vector<EntityId> replaced; // identities retired at the start of the iteration

    bool operator==(const IterationLog&) const = default;
};

/// Builds the initial world: empty stores, neutral weights, t = 0.
/// Uniform user preferences are drawn from the run's stream in user order.
inline WorldState initial_world(const Scenario& s, std::uint64_t seed) {
    if (auto errors = validation_errors(s); !errors.empty()) {
        std::string msg = "invalid scenario:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
    WorldState w;
    w.rng = Rng(seed);
    w.dimension = s.preference_dimension;

    for (std::size_t i = 0; i < s.providers.size(); ++i) {
        ProviderState p;
        p.id = {EntityKind::Provider, static_cast<std::uint32_t>(i), 0};
        p.behavior = s.providers[i].behavior;
        w.providers.push_back(std::move(p));
    }
    for (std::size_t i = 0; i < s.relying_parties.size(); ++i) {
        const auto& spec = s.relying_parties[i];
        RelyingPartyState rp;
        rp.id = {EntityKind::RelyingParty, static_cast<std::uint32_t>(i), 0};
        rp.behavior = spec.behavior;
        rp.qos = qos_profile(s, spec);
        for (const auto& svc : spec.services) rp.services.push_back(svc.id);
        w.relying_parties.push_back(std::move(rp));
    }
    std::uint32_t ordinal = 0;
    for (const auto& group : s.users) {
        std::size_t home = s.provider_index(group.provider);
        for (std::size_t k = 0; k < group.count; ++k) {
            UserState u;
            u.id = {EntityKind::User, ordinal++, 0};
            u.behavior = group.behavior;
            u.home = home;
            if (group.preferences) {
                u.prefs = PrefVector(*group.preferences);
            } else {
                std::vector<double> c(s.preference_dimension);
                for (double& x : c) x = w.rng.uniform();
                u.prefs = PrefVector(std::move(c));
            }
            w.users.push_back(std::move(u));
        }
    }
    return w;
}

/// Start of the stored records that can still survive `rule_list` once any
/// later inputs are appended. Stores are in append order, so iterations never
/// decrease along them; internal records have weight 1 and pass every
/// MinSourceWeight rule. Trimming stops at the first rule that depends on
/// the total input count.
inline std::size_t surviving_suffix(const std::vector<RecommendationRecord>& records,
                                    const std::vector<Rule>& rule_list, Iteration now) {
    std::size_t start = 0;
    for (const Rule& rule : rule_list) {
        if (const auto* age = std::get_if<rules::MaxAge>(&rule)) {
            auto first = std::partition_point(
                records.begin() + static_cast<std::ptrdiff_t>(start), records.end(),
                [&](const RecommendationRecord& r) { return r.iteration + age->max_age < now; });
            start = static_cast<std::size_t>(first - records.begin());
        } else if (const auto* cap = std::get_if<rules::CapCount>(&rule)) {
            if (records.size() - start > cap->count) {
                std::size_t cut = records.size() - cap->count;
                // Same-iteration ties are ranked by source, so keep the whole group.
                while (cut > start && records[cut - 1].iteration == records[cut].iteration) --cut;
                start = cut;
            }
            break;
        } else if (!std::holds_alternative<rules::MinSourceWeight>(rule)) {
            break;
        }
    }
    return start;
}

/// Internal records of `provider` about (rp, service), as engine inputs.
/// Internal user records carry weight 1 inside their home provider. Records
/// that `rule_list` would drop regardless of other inputs are skipped.
inline std::vector<WeightedInput> internal_inputs(const ProviderState& provider,
                                                  const SubjectKey& key, const PrefVector& prefs,
                                                  const std::vector<Rule>& rule_list = {},
                                                  Iteration now = 0) {
    std::vector<WeightedInput> out;
    auto it = provider.store.find(key);
    if (it == provider.store.end()) return out;
    const auto& records = it->second;
    std::size_t start = surviving_suffix(records, rule_list, now);
    out.reserve(records.size() - start);
    for (std::size_t i = start; i < records.size(); ++i) {
        out.push_back({records[i], 1.0, preference_similarity(prefs, records[i].prefs)});
    }
    return out;
}

/// A provider's own view of (rp, service): its rule-filtered internal records
/// aggregated against the neutral preference vector, plus the mean preference
/// vector of the records that contributed.
struct HonestAggregate {
    double score = 0.0;
    PrefVector prefs;
};

inline HonestAggregate honest_aggregate(const WorldState& w, const Scenario& s,
                                        const ProviderState& provider, const SubjectKey& key) {
    auto neutral = PrefVector::neutral(w.dimension);
    auto inputs = apply_rules(s.rules, internal_inputs(provider, key, neutral, s.rules, w.t), w.t);
    std::vector<const PrefVector*> contributing;
    contributing.reserve(inputs.size());
    for (const auto& in : inputs) contributing.push_back(&in.record.prefs);
    return {compute_score(s.engine, inputs, w.t), mean_preferences(contributing, w.dimension)};
}

struct GatherResult {
    std::vector<WeightedInput> inputs;
    std::size_t external_queries = 0;
};

/// Data collection for one request: the provider's internal records plus one
/// answer from every provider on the relying party's recommender list.
inline GatherResult gather(WorldState& w, const Scenario& s, std::size_t provider_idx,
                           std::size_t rp_idx, ServiceIndex service, const PrefVector& prefs) {
    const ProviderState& self = w.providers.at(provider_idx);
    const RelyingPartyState& rp = w.relying_parties.at(rp_idx);
    SubjectKey key{rp.id, service};

    GatherResult result;
    result.inputs = internal_inputs(self, key, prefs, s.rules, w.t);

    std::vector<RecommenderCandidate> candidates;
    for (const auto& [pid, last] : rp.last_interaction) {
        if (pid == self.id) continue;
        candidates.push_back({pid, last, 0.0});
    }

    auto answer_of = [&](const EntityId& pid) {
        const ProviderState& other = w.providers.at(pid.ordinal);
        auto honest = honest_aggregate(w, s, other, key);
        double value = provider_external_answer(other.behavior, honest.score, w.rng);
        return std::pair{value, std::move(honest.prefs)};
    };

    // A malicious relying party ranks candidates by the answer each would give;
    // that answer is then the one delivered.
    std::map<EntityId, std::pair<double, PrefVector>> answers;
    if (std::holds_alternative<relying::Malicious>(rp.behavior)) {
        for (auto& c : candidates) {
            auto a = answer_of(c.provider);
            c.aggregate = a.first;
            answers.emplace(c.provider, std::move(a));
        }
    }

    auto list = rp_recommender_list(rp.behavior, std::move(candidates), s.recommender_list_size);
    if (!list) return result;

    for (const EntityId& pid : *list) {
        auto it = answers.find(pid);
        auto answer = it != answers.end() ? it->second : answer_of(pid);
        RecommendationRecord rec{pid, rp.id, service, answer.first, std::move(answer.second), w.t};
        double weight = self.weight_of(pid, rp.id);
        double sim = preference_similarity(prefs, rec.prefs);
        result.inputs.push_back({std::move(rec), weight, sim});
        ++result.external_queries;
    }
    return result;
}

struct Assessment {
    double score = 0.0;
    std::vector<WeightedInput> used;
    bool cache_hit = false;
    std::size_t external_queries = 0;
};

/// Reputation of (rp, service) presented by the provider to one of its users.
inline Assessment request_reputation(WorldState& w, const Scenario& s, std::size_t provider_idx,
                                     std::size_t user_idx, std::size_t rp_idx, ServiceIndex service) {
    const UserState& user = w.users.at(user_idx);
    if (user.home != provider_idx) throw InvariantError("user does not belong to this provider");
    const RelyingPartyState& rp = w.relying_parties.at(rp_idx);
    if (service >= rp.services.size()) {
        throw ConfigError("unknown service index " + std::to_string(service) + " of " +
                          to_string(rp.id));
    }
    SubjectKey key{rp.id, service};

    ProviderState& self = w.providers[provider_idx];
    if (s.cache_ttl > 0) {
        auto it = self.cache.find(key);
        if (it != self.cache.end()) {
            if (w.t - it->second.computed_at < s.cache_ttl) {
                return {it->second.score, it->second.used, true, 0};
            }
            self.cache.erase(it);
        }
    }

    auto gathered = gather(w, s, provider_idx, rp_idx, service, user.prefs);
    auto used = apply_rules(s.rules, std::move(gathered.inputs), w.t);
    double score = compute_score(s.engine, used, w.t);
    if (s.cache_ttl > 0) w.providers[provider_idx].cache[key] = {score, w.t, used};
    return {score, std::move(used), false, gathered.external_queries};
}

struct Outcome {
    double feedback = 0.0;
    double satisfaction = 0.0;
};

/// The user decides to interact with probability equal to the presented
/// score; on interaction its feedback is stored and every external source
/// behind the score has its weight adjusted.
inline std::optional<Outcome> interact_and_feedback(WorldState& w, const Scenario& s,
                                                    std::size_t user_idx, std::size_t rp_idx,
                                                    ServiceIndex service,
                                                    const Assessment& assessment) {
    double presented = assessment.score;
    if (!in_unit_interval(presented)) throw InvariantError("presented score outside [0,1]");
    if (!w.rng.bernoulli(presented)) return std::nullopt;

    const UserState& user = w.users.at(user_idx);
    RelyingPartyState& rp = w.relying_parties.at(rp_idx);
    ProviderState& provider = w.providers.at(user.home);

    double sigma = rp.qos.noise;
    double noise = sigma * (2.0 * w.rng.uniform() - 1.0);
    double perceived = std::clamp(qos_at(rp.qos, rp.services.at(service), w.t) + noise, 0.0, 1.0);
    double feedback = user_feedback(user.behavior, perceived, w.rng);

    provider.store[{rp.id, service}].push_back(
        {user.id, rp.id, service, feedback, user.prefs, w.t});
    rp.last_interaction[provider.id] = w.t;

    for (const auto& in : assessment.used) {
        if (in.record.source.kind != EntityKind::Provider) continue;
        WeightKey k{in.record.source, rp.id};
        double current = provider.weight_of(k.source, k.subject);
        provider.weights[k] =
            adjust_weight(current, in.record.value, feedback, s.engine.learning_rate);
    }
    return Outcome{feedback, 1.0 - std::abs(presented - feedback)};
}

/// Retires a provider identity: every other provider forgets its weights and
/// cached scores built on it, and relying parties forget its interactions.
inline void replace_provider_identity(WorldState& w, std::size_t idx) {
    EntityId old_id = w.providers[idx].id;
    w.providers[idx].id = old_id.next_incarnation();
    for (auto& p : w.providers) {
        std::erase_if(p.weights, [&](const auto& kv) { return kv.first.source == old_id; });
        std::erase_if(p.cache, [&](const auto& kv) {
            for (const auto& in : kv.second.used) {
                if (in.record.source == old_id) return true;
            }
            return false;
        });
    }
    for (auto& rp : w.relying_parties) rp.last_interaction.erase(old_id);
}

/// Retires a relying party identity together with all reputation about it.
inline void replace_relying_party_identity(WorldState& w, std::size_t idx) {
    EntityId old_id = w.relying_parties[idx].id;
    w.relying_parties[idx].id = old_id.next_incarnation();
    w.relying_parties[idx].last_interaction.clear();
    for (auto& p : w.providers) {
        std::erase_if(p.store, [&](const auto& kv) { return kv.first.subject == old_id; });
        std::erase_if(p.cache, [&](const auto& kv) { return kv.first.subject == old_id; });
        std::erase_if(p.weights, [&](const auto& kv) { return kv.first.subject == old_id; });
    }
}

/// Phase 1 of an iteration: Sybil identity replacement. Returns retired ids.
inline std::vector<EntityId> apply_identity_replacements(WorldState& w) {
    std::vector<EntityId> retired;
    for (std::size_t i = 0; i < w.providers.size(); ++i) {
        if (auto k = sybil_period(w.providers[i].behavior)) {
            if (sybil_tick(w.providers[i].id, *k, w.t)) {
                retired.push_back(w.providers[i].id);
                replace_provider_identity(w, i);
            }
        }
    }
    for (std::size_t i = 0; i < w.relying_parties.size(); ++i) {
        if (auto k = sybil_period(w.relying_parties[i].behavior)) {
            if (sybil_tick(w.relying_parties[i].id, *k, w.t)) {
                retired.push_back(w.relying_parties[i].id);
                replace_relying_party_identity(w, i);
            }
        }
    }
    return retired;
}

/// Advances the world by one iteration and reports what happened.
inline IterationLog step(WorldState& w, const Scenario& s) {
    IterationLog log;
    log.t = w.t;
    log.replaced = apply_identity_replacements(w);

    const std::size_t monitored = s.monitored_index();
    struct Target {
        std::size_t user;
        std::size_t rp;
        ServiceIndex service;
    };
    std::vector<Target> active;
    for (std::size_t u = 0; u < w.users.size(); ++u) {
        if (!w.rng.bernoulli(s.p_active)) continue;
        std::size_t rp = monitored;
        if (s.target == TargetSelection::Uniform) rp = w.rng.index(w.relying_parties.size());
        auto service = static_cast<ServiceIndex>(w.rng.index(w.relying_parties[rp].services.size()));
        active.push_back({u, rp, service});
    }

    for (const Target& target : active) {
        const std::size_t home = w.users[target.user].home;
        auto assessment = request_reputation(w, s, home, target.user, target.rp, target.service);
        auto outcome = interact_and_feedback(w, s, target.user, target.rp, target.service, assessment);

        RequestLog r;
        r.user = w.users[target.user].id;
        r.provider = w.providers[home].id;
        r.relying_party = w.relying_parties[target.rp].id;
        r.service = target.service;
        r.user_normal = w.users[target.user].behavior == UserBehavior::Normal;
        r.provider_normal = is_normal(w.providers[home].behavior);
        r.monitored = target.rp == monitored;
        r.presented = assessment.score;
        r.cache_hit = assessment.cache_hit;
        if (outcome) {
            r.interacted = true;
            r.feedback = outcome->feedback;
            r.satisfaction = outcome->satisfaction;
        }
        log.requests.push_back(std::move(r));

        if (assessment.cache_hit) {
            ++log.cache_hits;
        } else {
            ++log.cache_misses;
        }
        log.external_queries += assessment.external_queries;
    }

    const auto& mrp = w.relying_parties[monitored];
    for (const auto& svc : mrp.services) log.real_qos.push_back(qos_at(mrp.qos, svc, w.t));

    ++w.t;
    return log;
}

/// True when every stored source weight lies in [0,1].
inline bool weights_in_range(const WorldState& w) {
    for (const auto& p : w.providers) {
        for (const auto& [key, weight] : p.weights) {
            if (!in_unit_interval(weight)) return false;
        }
    }
    return true;
}

} // namespace romeo
