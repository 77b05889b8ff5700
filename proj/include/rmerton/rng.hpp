#ifndef RMERTON_RNG_HPP
#define RMERTON_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace rmerton {

// splitmix64 finalizer; used to spread (seed, path index) into engine seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t stream_index) {
    return mix64(mix64(master_seed) ^ mix64(stream_index + 0x51aefcd1ULL));
}

// Standard normal sampler on top of mt19937_64 (whose output sequence is
// fully specified), using Box-Muller written out explicitly. Results are
// therefore bit-reproducible for a given (seed, stream) on any platform
// with the same libm, and independent of std::normal_distribution internals.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t engine_seed)
        : engine_(engine_seed), spare_(0.0), has_spare_(false) {}

    static NormalStream for_path(std::uint64_t master_seed, std::uint64_t path_index) {
        return NormalStream(substream_seed(master_seed, path_index));
    }

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // u1 in (0,1], u2 in [0,1)
        const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    double spare_;
    bool has_spare_;
};

}  // namespace rmerton

#endif  // RMERTON_RNG_HPP
