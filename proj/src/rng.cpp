#include "zwise/rng.hpp"

namespace zwise {

namespace {

std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace

SplitMix64 SplitMix64::stream(std::uint64_t seed, std::uint64_t stream_index) {
    return SplitMix64(mix(seed + kGolden * (stream_index + 1)));
}

std::uint64_t SplitMix64::next() {
    return mix(state_ += kGolden);
}

double SplitMix64::next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::size_t SplitMix64::next_index(std::size_t n) {
    using u128 = unsigned __int128;
    return static_cast<std::size_t>((static_cast<u128>(next()) * n) >> 64);
}

} // namespace zwise
