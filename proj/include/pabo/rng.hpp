#pragma once

#include <cstdint>
#include <string_view>

namespace pabo {

// FNV-1a, used for stream names and scenario hashing. Stable across
// platforms, which matters because seeds are derived from it.
constexpr uint64_t fnv1a64(std::string_view s, uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr uint64_t mix_seed(uint64_t base, uint64_t salt) {
    uint64_t s = base ^ (salt + 0x9e3779b97f4a7c15ULL + (base << 6) + (base >> 2));
    return splitmix64(s);
}

// A named deterministic random stream. Each decision site in the simulator
// owns its own stream so changing one scenario knob never perturbs draws
// made elsewhere. splitmix64 is used directly as the generator: the draw
// sequence depends only on (seed), never on platform or libc.
class RngStream {
  public:
    RngStream() = default;
    explicit RngStream(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        ++draws_;
        return splitmix64(state_);
    }

    // Uniform over [0,1) with 53 bits of mantissa.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n).
    uint64_t next_below(uint64_t n) { return next_u64() % n; }

    uint64_t draw_count() const { return draws_; }

  private:
    uint64_t state_ = 0;
    uint64_t draws_ = 0;
};

}  // namespace pabo
