#pragma once

#include <cstdint>
#include <random>

#include "osid/core.hpp"

namespace osid {

/// Deterministic random source for synthetic data and test fixtures.
///
/// Built on std::mt19937_64 (whose output sequence the C++ standard pins
/// down exactly) with explicit value mappings, so the same seed produces
/// the same stream on every platform and standard library:
///  - uniform doubles map 53 high bits into (0, 1);
///  - gaussians come from the Box-Muller transform of two uniforms.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in the open interval (0, 1).
    double next_uniform() {
        const std::uint64_t bits = engine_();
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal deviate.
    double next_gaussian();

    /// Uniform direction on the unit sphere in `dim` dimensions.
    FeatureVector next_unit_vector(std::size_t dim);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace osid
