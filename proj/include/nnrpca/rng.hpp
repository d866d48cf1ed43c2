#pragma once

#include <cstdint>
#include <random>

namespace nnrpca {

// Mixes a base seed with a stream index so that independent draws (omega vs
// noise, trial i vs trial j) never share an underlying generator state.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Thin wrapper around mt19937_64 with a platform-independent uniform mapping.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform in (0, 1].
    double uniform_open_closed() { return 1.0 - uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    std::uint64_t next_u64() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace nnrpca
