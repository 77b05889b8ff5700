#ifndef RMERTON_REDUCE_HPP
#define RMERTON_REDUCE_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace rmerton {

// Fixed-shape pairwise reduction with Neumaier-compensated leaves.
// The association order depends only on the element count, so serial and
// parallel callers that materialize the same array get the same bits.
inline double pairwise_sum(std::span<const double> v) {
    constexpr std::size_t kLeaf = 64;
    if (v.size() <= kLeaf) {
        double sum = 0.0, comp = 0.0;
        for (double x : v) {
            const double t = sum + x;
            comp += (std::abs(sum) >= std::abs(x)) ? (sum - t) + x : (x - t) + sum;
            sum = t;
        }
        return sum + comp;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline double mean(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("mean: empty sample");
    return pairwise_sum(v) / static_cast<double>(v.size());
}

struct MeanSe {
    double mean;
    double se;
};

// Sample mean and standard error of the mean.
inline MeanSe mean_and_se(std::span<const double> v) {
    const double m = mean(v);
    if (v.size() < 2) return {m, 0.0};
    double ss = 0.0;
    for (double x : v) {
        const double d = x - m;
        ss += d * d;
    }
    const auto n = static_cast<double>(v.size());
    return {m, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace rmerton

#endif  // RMERTON_REDUCE_HPP
