#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fdi {

// Deterministic normal deviates: mt19937_64 + Box-Muller. The standard
// library's normal_distribution is implementation-defined, which would break
// the bitwise reproducibility promise attached to a fixed seed.
class GaussianRng {
  public:
    explicit GaussianRng(uint64_t seed) : engine_(seed) {}

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = unit_open_();   // (0, 1], keeps log finite
        const double u2 = unit_half_();   // [0, 1)
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    uint64_t raw() { return engine_(); }

  private:
    double unit_open_() {
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }
    double unit_half_() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace fdi
