#pragma once

#include <cstdint>
#include <random>

namespace romeo {

/// The single random stream of a simulation run.
///
/// Built on std::mt19937_64, whose output sequence is fixed by the C++
/// standard, seeded with the 64-bit run seed. Doubles are formed from the top
/// 53 bits of one engine output, `(x >> 11) * 2^-53`, so every draw is
/// reproducible across compilers and standard libraries (the std
/// distributions are not).
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// True with probability p (p <= 0 never, p >= 1 always).
    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform index in [0, n); n must be positive.
    std::uint64_t index(std::uint64_t n) {
        auto i = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

    bool operator==(const Rng&) const = default;

private:
    std::mt19937_64 engine_;
};

} // namespace romeo
