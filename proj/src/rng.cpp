#include "xbar/rng.hpp"

#include <algorithm>
#include <cmath>

namespace xbar {

double GaussianStream::next_normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
}

double sample_variation(GaussianStream& stream, double sigma) {
    if (sigma == 0.0) return 1.0;
    const double sample = 1.0 + sigma * stream.next_normal();
    return std::max(1e-3, sample);
}

}  // namespace xbar
