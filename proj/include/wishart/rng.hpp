#pragma once

#include <cstdint>

#include "wishart/normal.hpp"

namespace wishart {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer (Stafford mix 13).
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

}  // namespace detail

// Derives an independent sub-seed; used to decouple paired Monte Carlo runs.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return detail::mix64(seed + (stream + 1) * detail::kGolden);
}

// Counter-based standard-normal stream keyed by (seed, path). Output k is a
// pure function of (key, k), so path streams are independent of scheduling
// and of each other. Normals come from the inverse distribution function
// applied to a 53-bit uniform in (0, 1).
class NormalStream {
  public:
    NormalStream(std::uint64_t seed, std::uint64_t path)
        : key_(detail::mix64(detail::mix64(seed + detail::kGolden) ^
                             detail::mix64((path + 1) * detail::kGolden))) {}

    double next() {
        const std::uint64_t z = detail::mix64(key_ + (++counter_) * detail::kGolden);
        const double u = (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
        return normal_quantile(u);
    }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace wishart
