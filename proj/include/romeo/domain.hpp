// Core value types shared by every part of the simulator: entity identities,
// preference vectors, ground-truth QoS schedules and recommendation records.

#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace romeo {

/// Raised when a scenario references something it never declared, or a value
/// is out of its legal range.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a caller breaks a precondition of a pure operation.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Raised for bad command-line or API usage (e.g. warmup past the end).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Iteration = std::uint64_t;

enum class EntityKind : std::uint8_t { User, Provider, RelyingParty };

inline const char* to_string(EntityKind kind) {
    switch (kind) {
    case EntityKind::User: return "user";
    case EntityKind::Provider: return "provider";
    case EntityKind::RelyingParty: return "relying_party";
    }
    return "?";
}

/// Identity of a simulated actor. The incarnation is bumped whenever a Sybil
/// actor sheds its identity; the ordinal keeps pointing at the same actor.
struct EntityId {
    EntityKind kind = EntityKind::User;
    std::uint32_t ordinal = 0;
    std::uint32_t incarnation = 0;

    auto operator<=>(const EntityId&) const = default;

    EntityId next_incarnation() const { return {kind, ordinal, incarnation + 1}; }
};

inline std::string to_string(const EntityId& id) {
    std::string s = to_string(id.kind);
    s += '#';
    s += std::to_string(id.ordinal);
    if (id.incarnation != 0) {
        s += '.';
        s += std::to_string(id.incarnation);
    }
    return s;
}

using ServiceIndex = std::uint32_t;

/// A point in the unit hypercube describing what a user cares about.
/// Components are immutable and shared between copies.
class PrefVector {
public:
    PrefVector() = default;

    explicit PrefVector(std::vector<double> components) {
        if (components.empty()) {
            throw InvariantError("preference vector must have dimension >= 1");
        }
        for (double c : components) {
            if (!(c >= 0.0 && c <= 1.0)) {
                throw InvariantError("preference component outside [0,1]: " + std::to_string(c));
            }
        }
        components_ = std::make_shared<const std::vector<double>>(std::move(components));
    }

    /// All components at 0.5.
    static PrefVector neutral(std::size_t dimension) {
        return PrefVector(std::vector<double>(dimension, 0.5));
    }

    std::size_t dimension() const { return components_ ? components_->size() : 0; }
    const std::vector<double>& components() const {
        static const std::vector<double> empty;
        return components_ ? *components_ : empty;
    }
    double operator[](std::size_t i) const { return (*components_)[i]; }

    bool operator==(const PrefVector& other) const {
        return components_ == other.components_ || components() == other.components();
    }

private:
    std::shared_ptr<const std::vector<double>> components_;
};

/// Normalized L1 closeness: 1 - |a - b|_1 / d.
inline double preference_similarity(const PrefVector& a, const PrefVector& b) {
    if (a.dimension() != b.dimension() || a.dimension() == 0) {
        throw InvariantError("preference dimension mismatch: " + std::to_string(a.dimension()) +
                             " vs " + std::to_string(b.dimension()));
    }
    double distance = 0.0;
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        distance += std::abs(a[i] - b[i]);
    }
    return std::clamp(1.0 - distance / static_cast<double>(a.dimension()), 0.0, 1.0);
}

/// Componentwise mean; the neutral vector when `vectors` is empty.
inline PrefVector mean_preferences(const std::vector<const PrefVector*>& vectors,
                                   std::size_t dimension) {
    if (vectors.empty()) return PrefVector::neutral(dimension);
    std::vector<double> sum(dimension, 0.0);
    for (const PrefVector* v : vectors) {
        for (std::size_t i = 0; i < dimension; ++i) sum[i] += (*v)[i];
    }
    for (double& c : sum) c = std::clamp(c / static_cast<double>(vectors.size()), 0.0, 1.0);
    return PrefVector(std::move(sum));
}

/// One step of a piecewise-constant quality schedule.
struct QualityPiece {
    Iteration start = 0;
    double quality = 0.0;

    bool operator==(const QualityPiece&) const = default;
};

/// Ground-truth quality of one relying party, per service, over time.
struct QoSProfile {
    std::map<std::string, std::vector<QualityPiece>> schedules;
    /// Amplitude of uniform per-interaction noise, in [0, 0.5].
    double noise = 0.0;

    bool operator==(const QoSProfile&) const = default;
};

/// Throws ConfigError describing the first broken schedule invariant.
inline void check_schedule(const std::string& service, const std::vector<QualityPiece>& pieces) {
    if (pieces.empty()) throw ConfigError("service '" + service + "' has an empty schedule");
    if (pieces.front().start != 0) {
        throw ConfigError("service '" + service + "' schedule must start at iteration 0");
    }
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (!(pieces[i].quality >= 0.0 && pieces[i].quality <= 1.0)) {
            throw ConfigError("service '" + service + "' quality outside [0,1]");
        }
        if (i > 0 && pieces[i].start <= pieces[i - 1].start) {
            throw ConfigError("service '" + service + "' schedule starts must strictly increase");
        }
    }
}

/// Quality of `service` at iteration `t`. Noise is not applied here.
inline double qos_at(const QoSProfile& profile, const std::string& service, Iteration t) {
    auto it = profile.schedules.find(service);
    if (it == profile.schedules.end()) {
        throw ConfigError("unknown service '" + service + "'");
    }
    const auto& pieces = it->second;
    auto past = std::upper_bound(pieces.begin(), pieces.end(), t,
                                 [](Iteration v, const QualityPiece& p) { return v < p.start; });
    if (past == pieces.begin()) {
        throw ConfigError("service '" + service + "' schedule does not cover iteration " +
                          std::to_string(t));
    }
    return std::prev(past)->quality;
}

/// A single rating of one relying party's service.
struct RecommendationRecord {
    EntityId source;
    EntityId subject;
    ServiceIndex service = 0;
    double value = 0.0;
    PrefVector prefs;
    Iteration iteration = 0;

    bool operator==(const RecommendationRecord&) const = default;
};

/// Credibility a provider assigns to one recommendation source.
struct SourceWeight {
    EntityId owner;
    EntityId source;
    double weight = 0.5;

    bool operator==(const SourceWeight&) const = default;
};

inline bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

} // namespace romeo
