#include "osid/rng.hpp"

#include <cmath>
#include <numbers>

namespace osid {

double SeededRng::next_gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

FeatureVector SeededRng::next_unit_vector(std::size_t dim) {
    if (dim == 0) throw InvalidInputError("unit vector needs dimension >= 1");
    FeatureVector v(dim);
    double norm_sq = 0.0;
    do {
        norm_sq = 0.0;
        for (double& x : v) {
            x = next_gaussian();
            norm_sq += x * x;
        }
    } while (norm_sq == 0.0);
    const double inv_norm = 1.0 / std::sqrt(norm_sq);
    for (double& x : v) x *= inv_norm;
    return v;
}

}  // namespace osid
