#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "romeo/behaviors.hpp"

using namespace romeo;

namespace {

EntityId provider_id(std::uint32_t n) { return {EntityKind::Provider, n, 0}; }

std::vector<RecommenderCandidate> abc() {
    return {{provider_id(0), 10, 0.2}, {provider_id(1), 50, 0.9}, {provider_id(2), 30, 0.6}};
}

std::vector<ProviderBehavior> all_provider_behaviors() {
    return {provider::Normal{},
            provider::PositiveRater{},
            provider::NegativeRater{},
            provider::CamouflagedPositive{40},
            provider::CamouflagedNegative{40},
            provider::SybilPositive{10},
            provider::SybilNegative{10}};
}

} // namespace

TEST_CASE("user_feedback follows the rater type", "[behaviors][users]") {
    Rng rng(1);
    CHECK(user_feedback(UserBehavior::Normal, 0.7, rng) == 0.7);
    for (int i = 0; i < 1000; ++i) {
        double good = user_feedback(UserBehavior::PositiveRater, 0.1, rng);
        CHECK(good >= 0.9);
        CHECK(good <= 1.0);
        double bad = user_feedback(UserBehavior::NegativeRater, 0.95, rng);
        CHECK(bad >= 0.0);
        CHECK(bad <= 0.1);
    }
}

TEST_CASE("provider answers stay in [0,1]", "[behaviors][providers][property]") {
    Rng rng(2);
    for (const auto& b : all_provider_behaviors()) {
        for (int i = 0; i < 2000; ++i) {
            double a = rng.uniform();
            double v = provider_external_answer(b, a, rng);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("normal providers answer with the honest aggregate", "[behaviors][providers]") {
    Rng rng(3);
    CHECK(provider_external_answer(provider::Normal{}, 0.42, rng) == 0.42);
    for (int i = 0; i < 500; ++i) {
        double a = rng.uniform();
        CHECK(provider_external_answer(provider::Normal{}, a, rng) == a);
        CHECK(provider_external_answer(provider::CamouflagedNegative{0}, 0.6, rng) == 0.6);
    }
}

TEST_CASE("biased providers answer inside their bands", "[behaviors][providers]") {
    Rng rng(4);
    for (int i = 0; i < 1000; ++i) {
        for (ProviderBehavior b : {ProviderBehavior{provider::PositiveRater{}},
                                   ProviderBehavior{provider::SybilPositive{3}},
                                   ProviderBehavior{provider::CamouflagedPositive{100}}}) {
            double v = provider_external_answer(b, 0.2, rng);
            CHECK(v >= 0.9);
        }
        for (ProviderBehavior b : {ProviderBehavior{provider::NegativeRater{}},
                                   ProviderBehavior{provider::SybilNegative{3}},
                                   ProviderBehavior{provider::CamouflagedNegative{100}}}) {
            double v = provider_external_answer(b, 0.7, rng);
            CHECK(v <= 0.1);
        }
    }
}

TEST_CASE("camouflaged providers lie p% of the time", "[behaviors][providers][property]") {
    const int draws = 20000;
    for (double p : {10.0, 30.0, 75.0}) {
        Rng rng(static_cast<std::uint64_t>(p));
        int lies_up = 0, lies_down = 0;
        for (int i = 0; i < draws; ++i) {
            lies_up += provider_external_answer(provider::CamouflagedPositive{p}, 0.5, rng) >= 0.9;
            lies_down += provider_external_answer(provider::CamouflagedNegative{p}, 0.5, rng) <= 0.1;
        }
        double expected = p / 100.0;
        double se = std::sqrt(expected * (1 - expected) / draws);
        CHECK(std::abs(lies_up / double(draws) - expected) < 3 * se);
        CHECK(std::abs(lies_down / double(draws) - expected) < 3 * se);
    }
}

TEST_CASE("recommender lists per relying-party behavior", "[behaviors][rp]") {
    auto normal = rp_recommender_list(relying::Normal{}, abc(), 2);
    REQUIRE(normal);
    CHECK(*normal == std::vector<EntityId>{provider_id(1), provider_id(2)});

    auto sybil = rp_recommender_list(relying::Sybil{5}, abc(), 2);
    REQUIRE(sybil);
    CHECK(*sybil == *normal);

    auto malicious = rp_recommender_list(relying::Malicious{}, abc(), 2);
    REQUIRE(malicious);
    CHECK(*malicious == std::vector<EntityId>{provider_id(1), provider_id(2)});

    auto flipped = abc();
    flipped[0].aggregate = 0.95;
    malicious = rp_recommender_list(relying::Malicious{}, flipped, 2);
    CHECK(*malicious == std::vector<EntityId>{provider_id(0), provider_id(1)});

    CHECK_FALSE(rp_recommender_list(relying::NotParticipative{}, abc(), 2).has_value());
}

TEST_CASE("recommender list ties break by provider id", "[behaviors][rp]") {
    std::vector<RecommenderCandidate> tied{
        {provider_id(4), 7, 0.5}, {provider_id(2), 7, 0.5}, {provider_id(9), 7, 0.5}};
    CHECK(*rp_recommender_list(relying::Normal{}, tied, 2) ==
          std::vector<EntityId>{provider_id(2), provider_id(4)});
    CHECK(*rp_recommender_list(relying::Malicious{}, tied, 2) ==
          std::vector<EntityId>{provider_id(2), provider_id(4)});
}

TEST_CASE("recommender lists are bounded, distinct and drawn from candidates",
          "[behaviors][rp][property]") {
    Rng rng(5);
    std::vector<RelyingPartyBehavior> behaviors{relying::Normal{}, relying::Malicious{},
                                                relying::Sybil{3}};
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<RecommenderCandidate> candidates;
        std::size_t n = rng.index(12);
        for (std::size_t i = 0; i < n; ++i) {
            candidates.push_back({provider_id(static_cast<std::uint32_t>(rng.index(8))),
                                  rng.index(100), rng.uniform()});
        }
        std::size_t list_size = 1 + rng.index(6);
        for (const auto& b : behaviors) {
            auto list = rp_recommender_list(b, candidates, list_size);
            REQUIRE(list);
            CHECK(list->size() <= list_size);
            CHECK(list->size() <= candidates.size());
            std::set<EntityId> distinct(list->begin(), list->end());
            CHECK(distinct.size() == list->size());
            for (const auto& id : *list) {
                bool found = false;
                for (const auto& c : candidates) found = found || c.provider == id;
                CHECK(found);
            }
        }
    }
}

TEST_CASE("sybil_tick fires on positive period multiples", "[behaviors][sybil]") {
    EntityId rp{EntityKind::RelyingParty, 0, 0};
    auto bumped = sybil_tick(rp, 100, 200);
    REQUIRE(bumped);
    CHECK(bumped->incarnation == 1);
    CHECK(bumped->ordinal == 0);
    CHECK_FALSE(sybil_tick(rp, 100, 150));
    CHECK_FALSE(sybil_tick(rp, 100, 0));
    CHECK(sybil_tick(rp, 1, 1));
    CHECK_THROWS_AS(sybil_tick(rp, 0, 5), InvariantError);
}

TEST_CASE("sybil_tick fires at most once per iteration", "[behaviors][sybil][property]") {
    EntityId id{EntityKind::Provider, 3, 0};
    for (std::uint64_t k : {1u, 7u, 50u}) {
        int fired = 0;
        for (Iteration t = 0; t <= 350; ++t) {
            if (auto next = sybil_tick(id, k, t)) {
                CHECK(next->incarnation == id.incarnation + 1);
                id = *next;
                ++fired;
            }
        }
        CHECK(fired == static_cast<int>(350 / k));
        id.incarnation = 0;
    }
}

TEST_CASE("behavior names use scenario spellings", "[behaviors]") {
    CHECK(std::string(behavior_name(UserBehavior::PositiveRater)) == "positive_rater");
    CHECK(std::string(behavior_name(ProviderBehavior{provider::CamouflagedNegative{3}})) ==
          "camouflaged_negative");
    CHECK(std::string(behavior_name(RelyingPartyBehavior{relying::NotParticipative{}})) ==
          "not_participative");
}
