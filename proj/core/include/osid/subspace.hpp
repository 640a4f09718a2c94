#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "osid/core.hpp"

namespace osid {

/// Principal component analysis of a training sample.
///
/// `components` holds every computed direction as a row (orthonormal,
/// ordered by decreasing variance); `retained` marks how many of them are
/// needed to cover the requested variance fraction.
struct PcaModel {
    Eigen::VectorXd mean;
    Eigen::MatrixXd components;          // rows = principal directions
    Eigen::VectorXd explained_variance;  // one entry per row, non-increasing
    int retained = 0;
    double retention = 0.99;

    int input_dim() const { return static_cast<int>(mean.size()); }
};

/// Linear discriminant analysis in PCA space.
struct LdaModel {
    Eigen::MatrixXd projection;   // pca_dim x out_dim, columns = discriminants
    Eigen::VectorXd eigenvalues;  // generalized eigenvalues, descending
    int class_count = 0;

    int output_dim() const { return static_cast<int>(projection.cols()); }
};

/// The combined PCA+LDA map y = W^T (x - mean).
struct SubspaceModel {
    Eigen::VectorXd mean;  // training mean, input space
    Eigen::MatrixXd w;     // input_dim x output_dim
    double retention = 0.99;

    int input_dim() const { return static_cast<int>(w.rows()); }
    int output_dim() const { return static_cast<int>(w.cols()); }
};

/// Fits PCA by SVD of the centered sample; variances use the (n-1)
/// denominator. Each direction's sign is fixed so its largest-magnitude
/// component is positive. Requires >= 2 samples, retention in (0, 1];
/// throws DataError when the sample has zero total variance.
PcaModel fit_pca(const std::vector<FeatureVector>& training, double retention = 0.99);

/// Projects onto the first `retained` principal directions.
Eigen::VectorXd project_pca(const PcaModel& m, const FeatureVector& x);

/// Reconstructs from a PCA projection (inverse of project_pca on the
/// retained subspace).
FeatureVector reconstruct_pca(const PcaModel& m, const Eigen::VectorXd& y);

/// Fisher discriminant directions from labeled samples in PCA space.
///
/// Solves the generalized eigenproblem of between-class versus
/// within-class scatter, keeping the min(classes - 1, dim) leading
/// directions. The within-class scatter is regularized with
/// 1e-6 * trace(Sw)/dim * I before solving. Labels are arbitrary
/// non-negative class ids. Requires >= 2 classes and at least one class
/// with >= 2 samples.
LdaModel fit_lda(const std::vector<Eigen::VectorXd>& samples,
                 const std::vector<int>& labels);

/// Composes PCA (retained rows) and LDA into a single projection model.
SubspaceModel combine(const PcaModel& pca, const LdaModel& lda);

/// fit_pca + project + fit_lda + combine in one step.
SubspaceModel fit_subspace(const std::vector<FeatureVector>& training,
                           const std::vector<int>& labels, double retention = 0.99);

/// Applies y = W^T (x - mean). Throws InvalidInputError on a dimension
/// mismatch.
FeatureVector project(const SubspaceModel& m, const FeatureVector& x);

std::string subspace_to_json(const SubspaceModel& m);
SubspaceModel subspace_from_json(const std::string& text);

}  // namespace osid
