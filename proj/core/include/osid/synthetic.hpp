#pragma once

#include <cstdint>

#include "osid/core.hpp"

namespace osid {

/// Parameters for a synthetic feature table: spherical class clusters with
/// enough identities of each kind to exercise the full open-set protocol.
/// Known-unknown identities get 2 images, unknown-unknowns 1.
struct SyntheticSpec {
    std::size_t dimension = 64;
    int known = 50;             // identities with images_per_known images
    int known_unknown = 50;     // identities with 2 images
    int unknown_unknown = 100;  // identities with 1 image
    int images_per_known = 6;   // must be >= 4 so the identity counts as known
    double sigma = 0.05;        // isotropic cluster noise, > 0
    std::uint64_t seed = 1;
};

/// Generates the dataset: one mean direction per identity drawn uniformly
/// on the unit sphere, each image the mean plus Gaussian noise re-normalized
/// to unit length. Identities are named g####/k####/u#### by category;
/// image indices run from 1. Deterministic per seed.
Dataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace osid
