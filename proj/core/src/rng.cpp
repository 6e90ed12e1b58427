#include "nctheta/rng.hpp"

namespace nctheta {

namespace {

std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t SplitMix64::next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
}

double SplitMix64::uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

int SplitMix64::uniform_int(int lo, int hi) noexcept {
    const std::uint64_t span = static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) - lo + 1);
    // Multiply-shift keeps the mapping deterministic; the bias is below 2^-32 for the spans used here.
    const std::uint64_t r = (next() >> 32) * span >> 32;
    return lo + static_cast<int>(r);
}

SplitMix64 SplitMix64::split(std::string_view label) const noexcept {
    return SplitMix64(mix(state_ ^ fnv1a64(label)));
}

}  // namespace nctheta
