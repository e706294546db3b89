#pragma once

#include <cstddef>
#include <cstdint>

namespace zwise {

// SplitMix64 used in counter mode. Every draw is a pure function of
// (seed, stream, position), so per-resample streams can be evaluated in any
// order, or in parallel, and still reproduce bit-identical results.
//
// Stream derivation contract (tests re-implement this independently):
//   state0 = mix(seed + GOLDEN * (stream_index + 1))
//   next() = mix(state += GOLDEN)        with the SplitMix64 finalizer mix()
//   next_double() = (next() >> 11) * 2^-53
//   next_index(n) = high 64 bits of next() * n   (128-bit multiply)
class SplitMix64 {
public:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    static SplitMix64 stream(std::uint64_t seed, std::uint64_t stream_index);

    std::uint64_t next();
    double next_double();                 // uniform in [0,1), 53 bits
    std::size_t next_index(std::size_t n); // uniform in [0,n)

private:
    std::uint64_t state_;
};

} // namespace zwise
