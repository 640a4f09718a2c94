#include "osid/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace osid {

[[noreturn]] void rethrow_annotated(const Error& e, const std::string& context) {
    const std::string message = context + ": " + e.what();
    if (dynamic_cast<const InvalidInputError*>(&e)) throw InvalidInputError(message);
    if (dynamic_cast<const ParseError*>(&e)) throw ParseError(message);
    if (dynamic_cast<const DataError*>(&e)) throw DataError(message);
    if (dynamic_cast<const NumericError*>(&e)) throw NumericError(message);
    throw Error(message);
}

double dot_product(const FeatureVector& a, const FeatureVector& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double l2_norm(const FeatureVector& v) {
    return std::sqrt(dot_product(v, v));
}

static void require_same_dimension(const FeatureVector& a, const FeatureVector& b) {
    if (a.size() != b.size()) {
        std::ostringstream msg;
        msg << "dimension mismatch: " << a.size() << " vs " << b.size();
        throw InvalidInputError(msg.str());
    }
}

double cosine_similarity(const FeatureVector& a, const FeatureVector& b) {
    require_same_dimension(a, b);
    if (a.empty()) throw InvalidInputError("cosine of zero-dimensional vectors");
    const double na = l2_norm(a);
    const double nb = l2_norm(b);
    if (na == 0.0 || nb == 0.0) {
        throw InvalidInputError("cosine undefined for a zero-norm vector");
    }
    return std::clamp(dot_product(a, b) / (na * nb), -1.0, 1.0);
}

double cosine_distance(const FeatureVector& a, const FeatureVector& b) {
    return 1.0 - cosine_similarity(a, b);
}

FeatureVector template_mean(const std::vector<FeatureVector>& features) {
    if (features.empty()) {
        throw InvalidInputError("template_mean of an empty feature set");
    }
    const std::size_t dim = features.front().size();
    FeatureVector mean(dim, 0.0);
    for (const auto& f : features) {
        require_same_dimension(features.front(), f);
        for (std::size_t i = 0; i < dim; ++i) mean[i] += f[i];
    }
    const double n = static_cast<double>(features.size());
    for (double& x : mean) x /= n;
    return mean;
}

GalleryTemplate make_gallery_template(std::string identity,
                                      std::vector<FeatureVector> features) {
    GalleryTemplate t;
    t.mean = template_mean(features);
    t.identity = std::move(identity);
    t.features = std::move(features);
    return t;
}

std::string to_string(Violation::Kind kind) {
    switch (kind) {
        case Violation::Kind::EmptyDataset: return "empty-dataset";
        case Violation::Kind::DuplicateKey: return "duplicate-key";
        case Violation::Kind::DimensionMismatch: return "dimension-mismatch";
        case Violation::Kind::ZeroDimension: return "zero-dimension";
        case Violation::Kind::InvalidImageIndex: return "invalid-image-index";
        case Violation::Kind::NonFinite: return "non-finite";
        case Violation::Kind::ZeroVector: return "zero-vector";
    }
    return "unknown";
}

std::vector<Violation> validate_dataset(const Dataset& d) {
    std::vector<Violation> report;
    if (d.records.empty()) {
        report.push_back({Violation::Kind::EmptyDataset, "dataset has no records"});
        return report;
    }

    const std::size_t dim = d.records.front().feature.size();
    if (dim == 0) {
        report.push_back({Violation::Kind::ZeroDimension,
                          "feature dimension must be at least 1"});
    }

    std::set<RecordKey> seen;
    for (const auto& rec : d.records) {
        const std::string where =
            "record (" + rec.identity + ", " + std::to_string(rec.image_index) + ")";

        if (!seen.insert({rec.identity, rec.image_index}).second) {
            report.push_back({Violation::Kind::DuplicateKey, where + " appears twice"});
        }
        if (rec.image_index < 1) {
            report.push_back({Violation::Kind::InvalidImageIndex,
                              where + " has image index < 1"});
        }
        if (rec.feature.size() != dim) {
            report.push_back({Violation::Kind::DimensionMismatch,
                              where + " has dimension " +
                                  std::to_string(rec.feature.size()) + ", expected " +
                                  std::to_string(dim)});
            continue;
        }

        bool finite = true;
        bool all_zero = true;
        for (double x : rec.feature) {
            if (!std::isfinite(x)) finite = false;
            if (x != 0.0) all_zero = false;
        }
        if (!finite) {
            report.push_back({Violation::Kind::NonFinite,
                              where + " contains a NaN or infinity"});
        }
        if (all_zero && dim > 0) {
            report.push_back({Violation::Kind::ZeroVector, where + " is the zero vector"});
        }
    }
    return report;
}

}  // namespace osid
