#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "romeo/metrics.hpp"
#include "romeo/scenario.hpp"
#include "romeo/scenario_text.hpp"
#include "romeo/simulation.hpp"

namespace romeo {

/// Called after every iteration with the world and the iteration's log.
using StepObserver = std::function<void(const WorldState&, const IterationLog&)>;

/// Runs `s.iterations` steps from a fresh world seeded with `seed`.
/// A pure function of (s, seed).
inline SimulationResult run(const Scenario& s, std::uint64_t seed, const StepObserver& observer = {}) {
    WorldState world = initial_world(s, seed);

    SimulationResult result;
    result.seed = seed;
    result.fingerprint = scenario_fingerprint(s, seed);
    result.logs.reserve(s.iterations);
    for (std::uint64_t i = 0; i < s.iterations; ++i) {
        result.logs.push_back(step(world, s));
        if (observer) observer(world, result.logs.back());
    }
    result.results = results_series(result.logs);
    result.accuracy = accuracy_series(result.logs);
    result.satisfaction = satisfaction_series(result.logs);
    if (s.iterations > 0) {
        std::uint64_t warmup = s.effective_warmup();
        result.summary = summarize(result, warmup < s.iterations ? warmup : s.iterations - 1);
    }
    return result;
}

} // namespace romeo
