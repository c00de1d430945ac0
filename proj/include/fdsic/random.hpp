#pragma once

#include <cstdint>
#include <random>

#include "fdsic/common.hpp"

namespace fdsic {

/// Seeded random source. One instance per trial; never shared across threads.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    bool coin() { return (engine_() >> 63) != 0; }

    /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    cdouble cscg(double variance) {
        const double s = std::sqrt(variance / 2.0);
        const double re = normal();
        const double im = normal();
        return {s * re, s * im};
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

/// Independent stream for trial `trial_index` under `master_seed`.
Rng trial_rng(std::uint64_t master_seed, std::uint64_t trial_index);

}  // namespace fdsic
