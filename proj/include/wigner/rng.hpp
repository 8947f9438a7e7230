#pragma once

#include <cmath>
#include <cstdint>

namespace wigner {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based random stream. The value at position k is a pure function of
/// (master seed, stream id, k), so trials can be generated on any number of
/// workers, in any order, and still reproduce bit-identical samples.
class CounterRng {
public:
    CounterRng(std::uint64_t master_seed, std::uint64_t stream) {
        const std::uint64_t gamma = 0x9E3779B97F4A7C15ULL;
        std::uint64_t k = mix64(master_seed ^ 0x5851F42D4C957F2DULL);
        key_ = mix64(k + gamma * (stream + 1));
    }

    std::uint64_t bits_at(std::uint64_t counter) const {
        return mix64(key_ + 0x9E3779B97F4A7C15ULL * (counter + 1));
    }

    // Uniform on (0, 1]; never returns 0, so log() is safe.
    double uniform_at(std::uint64_t counter) const {
        return static_cast<double>((bits_at(counter) >> 11) + 1) * 0x1p-53;
    }

    // Uniform on the open interval (0, 1); safe for inverse-CDF sampling.
    double uniform_open_at(std::uint64_t counter) const {
        return (static_cast<double>(bits_at(counter) >> 11) + 0.5) * 0x1p-53;
    }

    double normal_at(std::uint64_t counter) const;

    double rademacher_at(std::uint64_t counter) const {
        return (bits_at(counter) >> 63) ? 1.0 : -1.0;
    }

private:
    std::uint64_t key_;
};

/// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Inverse standard normal CDF (Acklam's rational approximation refined with
/// one Halley step; accurate to full double precision for p in (0,1)).
double inverse_normal_cdf(double p);

inline double CounterRng::normal_at(std::uint64_t counter) const {
    return inverse_normal_cdf(uniform_open_at(counter));
}

}  // namespace wigner
