#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace affect {

// splitmix64 stream. Used for every stochastic step in the library so that
// results are bit-identical across platforms; std:: distributions are
// implementation-defined and would break the reproducibility contract.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n); multiply-shift range reduction
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[static_cast<std::size_t>(next_below(i))]);
        }
    }

private:
    std::uint64_t state_;
};

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// Per-run-unit seeds (grid cells, LDA categories, OVR binaries) derive from
// the global seed and a stable textual tag. Documented in the README.
inline std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view tag) {
    Rng r(global_seed ^ fnv1a(tag));
    return r.next_u64();
}

} // namespace affect
