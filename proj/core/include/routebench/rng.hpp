#pragma once

#include <cstdint>

namespace routebench {

/// splitmix64 stream. All randomness in the pipeline flows from one root
/// seed through forked child streams, so results are reproducible on any
/// platform and independent of worker scheduling.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t bounded(std::uint64_t n) {
        // Lemire multiply-shift with rejection on the short range.
        std::uint64_t x = next();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                x = next();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    bool coin() { return (next() & 1) != 0; }

    /// Child stream decorrelated from this one; forking does not disturb
    /// the parent sequence. Used to give every sample its own stream.
    RngStream fork(std::uint64_t stream_id) const {
        RngStream seeder(state_ + 0x9e3779b97f4a7c15ULL * (stream_id + 1));
        return RngStream(seeder.next());
    }

  private:
    std::uint64_t state_;
};

}  // namespace routebench
