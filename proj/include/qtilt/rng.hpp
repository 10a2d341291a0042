#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace qtilt {

/// Name of the generator recorded in run manifests. Both the engine and
/// the uniform-double construction are fully specified, so equal seeds
/// give bit-identical streams on any conforming platform.
inline constexpr const char* kRngAlgorithm = "mt19937_64/u53";

/// Seedable RNG used for all sampling. Wraps std::mt19937_64 and derives
/// uniforms from the top 53 bits so the double stream does not depend on
/// the standard library's distribution implementations.
class Rng {
  public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Index drawn from the (unnormalized) cumulative weight table:
    /// the first i with cum[i] > u * cum.back().
    int pick(const std::vector<double>& cum) {
        const double target = uniform() * cum.back();
        for (size_t i = 0; i < cum.size(); ++i) {
            if (cum[i] > target) return static_cast<int>(i);
        }
        return static_cast<int>(cum.size()) - 1;
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace qtilt
