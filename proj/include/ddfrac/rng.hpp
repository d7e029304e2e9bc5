#ifndef DDFRAC_RNG_HPP
#define DDFRAC_RNG_HPP

#include <cstdint>
#include <random>

namespace ddfrac {

/// Seeded generator with a platform-independent uniform double in [lo, hi).
/// std::uniform_real_distribution is implementation-defined, so the mapping
/// from raw 64-bit draws is done by hand.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer, used to decorrelate derived seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic per-stream seed: every harness consumer derives its own
/// stream from the single experiment seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
    return mix_seed(mix_seed(base + 0x632be59bd9b4e019ULL * (stream + 1)) + index);
}

}  // namespace ddfrac

#endif
