#pragma once

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace osid {

// Error taxonomy. The CLI maps these onto exit codes: invalid input and
// data problems exit with 2, numeric/convergence failures with 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A caller violated an operation's precondition (bad dimension, zero
// vector, out-of-range parameter, ...).
class InvalidInputError : public Error {
public:
    using Error::Error;
};

// The data itself is unusable: validation failures, degenerate samples,
// impossible protocol constructions, malformed files.
class DataError : public Error {
public:
    using Error::Error;
};

// File could not be parsed; message carries the line number.
class ParseError : public DataError {
public:
    using DataError::DataError;
};

// An iterative solver failed to converge or a decomposition broke down.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Rethrows `e` with `context` prepended, preserving the concrete error
/// type so exit-code mapping survives annotation.
[[noreturn]] void rethrow_annotated(const Error& e, const std::string& context);

/// A dense embedding vector. All computation is done in 64-bit floats.
using FeatureVector = std::vector<double>;

/// One feature vector tagged with its identity and per-identity image number.
struct LabeledFeature {
    std::string identity;
    int image_index = 0;  // 1-based, e.g. 1 for the "0001" image
    FeatureVector feature;
};

/// Identifies a single record: (identity, image_index).
struct RecordKey {
    std::string identity;
    int image_index = 0;

    auto operator<=>(const RecordKey&) const = default;
};

/// A collection of labeled features sharing one dimension.
struct Dataset {
    std::vector<LabeledFeature> records;

    bool empty() const { return records.empty(); }
    std::size_t size() const { return records.size(); }

    /// Dimension of the first record (0 for an empty dataset).
    std::size_t dimension() const {
        return records.empty() ? 0 : records.front().feature.size();
    }
};

/// Per-subject enrollment data: the enrolled feature vectors and their
/// component-wise mean.
struct GalleryTemplate {
    std::string identity;
    std::vector<FeatureVector> features;
    FeatureVector mean;
};

/// Builds a GalleryTemplate, computing the mean from the given features.
GalleryTemplate make_gallery_template(std::string identity,
                                      std::vector<FeatureVector> features);

/// Dense probes x gallery-subjects score matrix, row-major.
struct ScoreMatrix {
    std::vector<RecordKey> probe_keys;          // row labels
    std::vector<std::string> gallery_subjects;  // column labels
    std::vector<double> scores;                 // rows() * cols(), row-major

    std::size_t rows() const { return probe_keys.size(); }
    std::size_t cols() const { return gallery_subjects.size(); }

    double at(std::size_t row, std::size_t col) const {
        return scores[row * cols() + col];
    }
    double& at(std::size_t row, std::size_t col) {
        return scores[row * cols() + col];
    }
};

double dot_product(const FeatureVector& a, const FeatureVector& b);
double l2_norm(const FeatureVector& v);

/// Cosine similarity <a,b>/(|a||b|), clamped into [-1, 1].
/// Throws InvalidInputError on dimension mismatch or zero-norm input.
double cosine_similarity(const FeatureVector& a, const FeatureVector& b);

/// Cosine distance 1 - cosine_similarity, in [0, 2].
double cosine_distance(const FeatureVector& a, const FeatureVector& b);

/// Component-wise arithmetic mean. The result is not re-normalized.
/// Throws InvalidInputError on an empty or dimension-mismatched input.
FeatureVector template_mean(const std::vector<FeatureVector>& features);

/// One dataset-invariant violation found by validate_dataset.
struct Violation {
    enum class Kind {
        EmptyDataset,
        DuplicateKey,
        DimensionMismatch,
        ZeroDimension,
        InvalidImageIndex,
        NonFinite,
        ZeroVector,
    };

    Kind kind;
    std::string detail;
};

std::string to_string(Violation::Kind kind);

/// Reports every invariant violation in the dataset. The report is empty
/// exactly when the dataset is valid: non-empty, uniform dimension >= 1,
/// unique (identity, image_index) keys, image indices >= 1, and all
/// vectors finite and nonzero.
std::vector<Violation> validate_dataset(const Dataset& d);

}  // namespace osid
