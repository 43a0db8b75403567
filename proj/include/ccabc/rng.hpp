#pragma once

#include <cstdint>

namespace ccabc {

// splitmix64-based generator. std::uniform_int_distribution is
// implementation-defined, so bounded draws are rolled by hand to keep
// run outputs bit-identical across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, bound), bound > 0; rejection-free modulo bias is
    // negligible for the bounds used here but we reject anyway.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    // uniform double in [0, 1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // derive an independent stream for a named purpose
    Rng fork(std::uint64_t tag) const {
        Rng r(state_ ^ (tag * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
        r.next_u64();
        return r;
    }

private:
    std::uint64_t state_;
};

// FNV-1a over bytes, used for config hashing and seed derivation.
inline std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace ccabc
