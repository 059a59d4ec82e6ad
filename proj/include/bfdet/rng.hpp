#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace bfdet {

/// mt19937 with hand-rolled distributions. std::*_distribution output is
/// implementation-defined, which would break byte-stable artifacts; these
/// mappings are pinned here instead.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(static_cast<std::uint32_t>(seed ^ (seed >> 32))) {}

    std::uint32_t next_u32() { return engine_(); }

    /// Uniform in [0, n), unbiased via rejection.
    std::uint32_t uniform_int(std::uint32_t n) {
        if (n == 0) return 0;
        const std::uint32_t limit = UINT32_MAX - UINT32_MAX % n;
        std::uint32_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    /// Uniform in [0, 1).
    double uniform() { return engine_() * (1.0 / 4294967296.0); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (one value per call; the pair's twin is cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do {
            u1 = uniform();
        } while (u1 <= 1e-12);
        u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double sigma) { return mean + sigma * normal(); }

    /// k distinct indices from [0, n), in selection order (partial Fisher-Yates).
    std::vector<std::uint32_t> sample_without_replacement(std::uint32_t n, std::uint32_t k) {
        if (k > n) k = n;
        std::vector<std::uint32_t> pool(n);
        for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
        std::vector<std::uint32_t> out(k);
        for (std::uint32_t i = 0; i < k; ++i) {
            const std::uint32_t j = i + uniform_int(n - i);
            std::swap(pool[i], pool[j]);
            out[i] = pool[i];
        }
        return out;
    }

  private:
    std::mt19937 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace bfdet
