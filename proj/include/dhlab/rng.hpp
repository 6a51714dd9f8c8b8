#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <string_view>

#include "dhlab/common.hpp"

namespace dhlab {

// One named substream of a run's root seed. Streams derived from different
// names are independent, so toggling one noise source never shifts the draws
// of another. Gaussian sampling is done explicitly (Box-Muller) instead of
// through std::normal_distribution so that trajectories are reproducible
// bit-for-bit for a given build.
class RngStream {
  public:
    RngStream(std::uint64_t root_seed, std::string_view name)
        : gen_(mix(root_seed, fnv1a(name))) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform_symmetric(double amp) {  // [-amp, amp)
        return amp * (2.0 * uniform() - 1.0);
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Rejection-sampled N(0,1) restricted to [-bound, bound]; keeps the
    // zero-mean bounded-noise assumption exact.
    double gaussian_truncated(double bound = 3.0) {
        double z = gaussian();
        while (std::abs(z) > bound) z = gaussian();
        return z;
    }

    Vec gaussian_vec(Eigen::Index n) {
        Vec v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = gaussian();
        return v;
    }

    Vec gaussian_truncated_vec(Eigen::Index n, double bound = 3.0) {
        Vec v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = gaussian_truncated(bound);
        return v;
    }

    Mat gaussian_mat(Eigen::Index r, Eigen::Index c) {
        Mat m(r, c);
        for (Eigen::Index j = 0; j < c; ++j)
            for (Eigen::Index i = 0; i < r; ++i) m(i, j) = gaussian();
        return m;
    }

    std::uint64_t raw() { return gen_(); }

  private:
    static std::uint64_t fnv1a(std::string_view s) {
        std::uint64_t h = 1469598103934665603ull;
        for (const char c : s) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
        return h;
    }

    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        // splitmix64 finalizer over the combined word
        std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b | 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace dhlab
