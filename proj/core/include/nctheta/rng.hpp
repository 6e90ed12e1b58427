#pragma once

#include <cstdint>
#include <string_view>

namespace nctheta {

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// SplitMix64 stream. Doubles take the top 53 bits so sequences are identical on every platform.
class SplitMix64 {
public:
    static constexpr const char* kName = "splitmix64";

    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept;
    /// Uniform in [0, 1).
    double uniform() noexcept;
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [lo, hi].
    int uniform_int(int lo, int hi) noexcept;
    /// Independent child stream keyed by a label; does not advance this stream.
    SplitMix64 split(std::string_view label) const noexcept;

private:
    std::uint64_t state_;
};

}  // namespace nctheta
