// Counter-based random stream: draw i is a pure function of (seed, i), so
// any index range can be generated on any thread without changing values.
// The generator is the splitmix64 finalizer over a Weyl sequence, which is
// statistically solid for Monte Carlo work.

#pragma once

#include <cstdint>

#include "envc/stats.hpp"

namespace envc {

namespace detail {
inline std::uint64_t mix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}
} // namespace detail

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed)
        : state_(detail::mix64(seed ^ 0x6A09E667F3BCC908ull)) {}

    std::uint64_t bits(std::uint64_t index) const {
        return detail::mix64(state_ + (index + 1) * 0x9E3779B97F4A7C15ull);
    }

    // Uniform on the open interval (0,1); never returns 0 or 1, so logs and
    // normal quantiles of the result are always finite.
    double uniform(std::uint64_t index) const {
        return (static_cast<double>(bits(index) >> 12) + 0.5) * 0x1.0p-52;
    }

    // Standard normal via the inverse CDF (keeps the one-index-one-draw
    // property that Box-Muller would break).
    double normal(std::uint64_t index) const {
        return stats::normal_quantile(uniform(index));
    }

    // Independent derived stream, e.g. one per direction or bootstrap block.
    CounterRng substream(std::uint64_t tag) const {
        return CounterRng(bits(~tag) ^ 0x94D049BB133111EBull);
    }

private:
    std::uint64_t state_;
};

} // namespace envc
