#pragma once

#include <cstdint>
#include <vector>

#include "coopsig/errors.h"

namespace coopsig {

// Counter-based random stream built on the splitmix64 finalizer.
//
// Two properties the simulations depend on, and the reason this is not
// std::mt19937 + std::uniform_int_distribution:
//   1. Output bytes are identical on every platform/toolchain (the standard
//      distributions are implementation-defined).
//   2. Streams split cheaply: derive(label...) produces an independent child
//      stream from the parent KEY alone, so per-trial / per-rollout streams
//      depend only on (master seed, purpose labels), never on how much
//      randomness anyone else consumed. That is what makes worker count
//      irrelevant to the output.
class RandomStream {
  public:
    explicit RandomStream(uint64_t key) : key_(key), state_(mix(key ^ kSalt)) {}

    uint64_t key() const { return key_; }

    uint64_t next_u64() {
        state_ += kGamma;
        return mix(state_);
    }

    // Uniform in [0,1), 53-bit mantissa.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, bound) via rejection sampling — exactly uniform, no modulo bias.
    int next_int(int bound) {
        if (bound <= 0) throw EmptyChoiceSet("next_int: bound must be positive");
        const uint64_t n = static_cast<uint64_t>(bound);
        const uint64_t limit = UINT64_MAX - (UINT64_MAX % n + 1) % n;
        uint64_t v = next_u64();
        while (v > limit) v = next_u64();
        return static_cast<int>(v % n);
    }

    // Child stream keyed by the parent key and the label sequence. Order of
    // labels matters; derivation ignores the parent's counter position.
    template <typename... Labels>
    RandomStream derive(Labels... labels) const {
        uint64_t k = key_;
        uint64_t position = 1;
        ((k = mix(k ^ (mix(static_cast<uint64_t>(labels) + kSalt) + kGamma * position++))), ...);
        return RandomStream(k);
    }

    // First k of a uniform random permutation of {0..population-1} (partial Fisher-Yates).
    std::vector<int> sample_without_replacement(int population, int k) {
        if (k < 0 || k > population)
            throw EmptyChoiceSet("sample_without_replacement: k out of range");
        std::vector<int> pool(population);
        for (int i = 0; i < population; ++i) pool[i] = i;
        for (int i = 0; i < k; ++i) {
            const int j = i + next_int(population - i);
            std::swap(pool[i], pool[j]);
        }
        pool.resize(k);
        return pool;
    }

    // Draw an index from an (approximately normalized) discrete distribution.
    // Rounding slack at the tail falls to the last positive-mass entry.
    int sample_index(const std::vector<double>& probs) {
        if (probs.empty()) throw EmptyChoiceSet("sample_index: empty distribution");
        double u = next_double();
        int last_positive = -1;
        for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
            if (probs[i] <= 0.0) continue;
            last_positive = i;
            if (u < probs[i]) return i;
            u -= probs[i];
        }
        if (last_positive < 0) throw EmptyChoiceSet("sample_index: all mass zero");
        return last_positive;
    }

  private:
    static constexpr uint64_t kGamma = 0x9e3779b97f4a7c15ull;
    static constexpr uint64_t kSalt = 0x5851f42d4c957f2dull;

    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    uint64_t key_;
    uint64_t state_;
};

}  // namespace coopsig
