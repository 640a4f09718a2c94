#pragma once

#include <string>
#include <vector>

#include "osid/core.hpp"
#include "osid/evm.hpp"
#include "osid/subspace.hpp"

namespace osid {

enum class Method { Cosine, Lda, Evm };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

/// A fully specified scorer: the method, the fusion, and the model it
/// needs (subspace for Lda, gallery model for Evm). The Evm fusion must
/// match the model's trained fusion mode.
struct ScoringMethod {
    Method method = Method::Cosine;
    Fusion fusion = Fusion::Max;
    const SubspaceModel* subspace = nullptr;
    const EvmGalleryModel* evm = nullptr;
};

/// Highest cosine similarity between the probe and any enrolled feature.
double score_cosine_max(const GalleryTemplate& g, const FeatureVector& probe);

/// Cosine similarity between the template mean and the probe.
/// Throws InvalidInputError when the mean is the zero vector.
double score_cosine_avg(const GalleryTemplate& g, const FeatureVector& probe);

/// Cosine scoring after projecting enrolled features (Max) or the template
/// mean (Avg) and the probe into the discriminant subspace.
double score_lda(const SubspaceModel& m, const GalleryTemplate& g,
                 const FeatureVector& probe, Fusion fusion);

/// Scores every probe against every gallery subject. Each entry equals the
/// corresponding single-pair scoring call exactly; rows and columns follow
/// the input order. Rows are scored in parallel; failures are annotated
/// with the probe key and subject.
ScoreMatrix score_all(const ScoringMethod& method,
                      const std::vector<GalleryTemplate>& gallery,
                      const std::vector<LabeledFeature>& probes);

/// CSV with header "identity,image,<subject_1>,...,<subject_N>", floats at
/// 17 significant digits.
std::string score_matrix_to_csv(const ScoreMatrix& m);
ScoreMatrix score_matrix_from_csv(const std::string& text);

}  // namespace osid
