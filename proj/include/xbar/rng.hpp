#pragma once

#include <cstdint>
#include <random>

namespace xbar {

// Deterministic Gaussian stream. std::normal_distribution is not pinned by the
// standard, so the Box-Muller transform is done by hand to keep sequences
// byte-identical across standard libraries.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

    // Uniform in (0, 1]: the +1 before scaling keeps log() away from zero.
    double next_uniform() {
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1p-53;
    }

    // Standard normal, one value per call; the second Box-Muller output is
    // cached so a pair of engine draws yields two samples.
    double next_normal();

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

// Multiplicative device variation: N(1, sigma) truncated from below so a
// conductance can never flip sign or vanish. sigma == 0 returns exactly 1.
double sample_variation(GaussianStream& stream, double sigma);

}  // namespace xbar
