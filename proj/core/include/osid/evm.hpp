#pragma once

#include <string>
#include <vector>

#include "osid/core.hpp"
#include "osid/evt.hpp"

namespace osid {

/// How per-subject scores are fused from per-feature evidence.
enum class Fusion { Max, Avg };

std::string to_string(Fusion f);
Fusion fusion_from_string(const std::string& s);

/// Extreme value machine hyperparameters.
struct EvmConfig {
    double alpha = 0.7;  // distance multiplier applied to cross-class distances
    int tail_size = 500;
    Fusion fusion = Fusion::Max;
    // Apply alpha to the query-time distance fed into the survival function
    // as well, so the fitted variable and the scored variable agree. Turn
    // off to scale training distances only.
    bool scale_query_distance = true;
};

/// One anchor of an EVM model: a gallery feature (or template mean) with
/// the Weibull fitted to its scaled cross-class distance tail.
struct EvmEntry {
    FeatureVector feature;
    WeibullFit fit;
};

struct EvmSubjectModel {
    std::string identity;
    std::vector<EvmEntry> entries;  // Max: one per enrolled feature; Avg: exactly one
};

/// Per-gallery EVM: every enrolled feature keeps its own Weibull (no model
/// reduction), or one fit per subject on the template mean in Avg mode.
struct EvmGalleryModel {
    EvmConfig config;
    std::vector<EvmSubjectModel> subjects;

    std::vector<std::string> subject_identities() const;
};

/// Scaled cosine distances from `anchor` to every training feature of a
/// different identity, in training record order. Throws DataError when no
/// other-identity feature exists.
std::vector<double> negative_distances(const FeatureVector& anchor,
                                       const std::string& anchor_identity,
                                       const Dataset& training, double alpha);

/// Fits one Weibull per enrolled feature (Max) or per template mean (Avg)
/// on the low tail of its scaled cross-class distances. Anchors train
/// independently (parallel over anchors) and the result is assembled in
/// gallery order, so the model is deterministic for fixed inputs and
/// config. Per-anchor failures are annotated with the subject identity.
EvmGalleryModel train_evm(const std::vector<GalleryTemplate>& gallery,
                          const Dataset& training, const EvmConfig& cfg);

/// Max-fusion probabilities of inclusion, one per subject in model order.
/// Requires a Max-mode model.
std::vector<double> score_max(const EvmGalleryModel& model, const FeatureVector& probe);

/// Avg-fusion probabilities of inclusion against each template mean.
/// Requires an Avg-mode model.
std::vector<double> score_avg(const EvmGalleryModel& model, const FeatureVector& probe);

std::string evm_to_json(const EvmGalleryModel& model);
EvmGalleryModel evm_from_json(const std::string& text);

}  // namespace osid
