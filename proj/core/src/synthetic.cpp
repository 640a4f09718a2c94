#include "osid/synthetic.hpp"

#include <cmath>
#include <cstdio>

#include "osid/rng.hpp"

namespace osid {

namespace {

std::string identity_name(char prefix, int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%c%04d", prefix, index);
    return buf;
}

void validate(const SyntheticSpec& spec) {
    if (spec.dimension < 1) throw InvalidInputError("dimension must be >= 1");
    if (spec.known < 1) throw InvalidInputError("at least one known identity required");
    if (spec.known_unknown < 0 || spec.unknown_unknown < 0) {
        throw InvalidInputError("identity counts must be >= 0");
    }
    if (spec.images_per_known < 4) {
        throw InvalidInputError("known identities need at least 4 images");
    }
    if (!(spec.sigma > 0.0)) throw InvalidInputError("sigma must be > 0");
}

}  // namespace

Dataset generate_synthetic(const SyntheticSpec& spec) {
    validate(spec);
    SeededRng rng(spec.seed);
    Dataset d;

    auto emit_identity = [&](const std::string& identity, int image_count) {
        const FeatureVector mean = rng.next_unit_vector(spec.dimension);
        for (int img = 1; img <= image_count; ++img) {
            FeatureVector x(spec.dimension);
            double norm_sq = 0.0;
            for (std::size_t i = 0; i < spec.dimension; ++i) {
                x[i] = mean[i] + spec.sigma * rng.next_gaussian();
                norm_sq += x[i] * x[i];
            }
            if (norm_sq > 0.0) {
                const double inv_norm = 1.0 / std::sqrt(norm_sq);
                for (double& v : x) v *= inv_norm;
            }
            d.records.push_back({identity, img, std::move(x)});
        }
    };

    for (int i = 0; i < spec.known; ++i) {
        emit_identity(identity_name('g', i), spec.images_per_known);
    }
    for (int i = 0; i < spec.known_unknown; ++i) {
        emit_identity(identity_name('k', i), 2);
    }
    for (int i = 0; i < spec.unknown_unknown; ++i) {
        emit_identity(identity_name('u', i), 1);
    }
    return d;
}

}  // namespace osid
