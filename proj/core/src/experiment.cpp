#include "osid/experiment.hpp"

#include <filesystem>
#include <limits>
#include <map>

#include "json_io.hpp"
#include "osid/dataset_io.hpp"

namespace osid {

namespace {

template <typename F>
auto staged(const std::string& stage, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        rethrow_annotated(e, "while " + stage);
    }
}

// One class per gallery subject, one shared class for every other
// (known-unknown) training identity.
std::vector<int> lda_labels(const Dataset& training, const ProtocolPartition& p) {
    std::map<std::string, int> class_of;
    int next = 0;
    for (const auto& [identity, indices] : p.gallery) class_of[identity] = next++;
    const int known_unknown_class = next;

    std::vector<int> labels;
    labels.reserve(training.records.size());
    for (const auto& rec : training.records) {
        const auto it = class_of.find(rec.identity);
        labels.push_back(it == class_of.end() ? known_unknown_class : it->second);
    }
    return labels;
}

}  // namespace

ExperimentResult run_experiment(const Dataset& dataset, const RunConfig& cfg) {
    ExperimentResult result;
    result.config = cfg;

    staged("validating the dataset", [&] {
        const auto report = validate_dataset(dataset);
        if (!report.empty()) {
            throw DataError("dataset invalid: " + to_string(report.front().kind) +
                            " (" + report.front().detail + ")");
        }
        return 0;
    });

    for (const auto& [identity, category] : categorize_identities(dataset)) {
        switch (category) {
            case IdentityCategory::Known: ++result.known_identities; break;
            case IdentityCategory::KnownUnknown: ++result.known_unknown_identities; break;
            case IdentityCategory::UnknownUnknown:
                ++result.unknown_unknown_identities;
                break;
        }
    }

    result.partition =
        staged("building the protocol partition", [&] { return build_partition(dataset); });
    const auto gallery = staged("assembling gallery templates", [&] {
        return make_gallery_templates(dataset, result.partition);
    });
    const Dataset training = staged("collecting the training set", [&] {
        return training_subset(dataset, result.partition);
    });

    SubspaceModel subspace;
    EvmGalleryModel evm;
    ScoringMethod method;
    method.method = cfg.method;
    method.fusion = cfg.fusion;
    switch (cfg.method) {
        case Method::Cosine:
            break;
        case Method::Lda:
            subspace = staged("fitting the PCA+LDA subspace", [&] {
                std::vector<FeatureVector> features;
                features.reserve(training.size());
                for (const auto& rec : training.records) features.push_back(rec.feature);
                return fit_subspace(features, lda_labels(training, result.partition),
                                    cfg.pca_retention);
            });
            method.subspace = &subspace;
            break;
        case Method::Evm:
            evm = staged("training the extreme value machine", [&] {
                EvmConfig evm_cfg;
                evm_cfg.alpha = cfg.alpha;
                evm_cfg.tail_size = cfg.tail_size;
                evm_cfg.fusion = cfg.fusion;
                evm_cfg.scale_query_distance = cfg.evm_scale_query;
                return train_evm(gallery, training, evm_cfg);
            });
            method.evm = &evm;
            break;
    }

    result.scores = staged("scoring the probe set", [&] {
        const auto probes = subset(dataset, probe_set(result.partition, cfg.probe_set));
        return score_all(method, gallery, probes);
    });

    staged("evaluating", [&] {
        result.cmc = cmc_curve(result.scores, result.partition);
        result.rank1 = result.cmc.empty() ? 0.0 : result.cmc.front().y;
        if (cfg.probe_set == ProbeSetId::C) {
            result.roc = roc_curve(result.scores, result.partition);
        } else {
            result.dir = dir_curve(result.scores, result.partition, cfg.probe_set,
                                   cfg.rank, cfg.policy);

            std::vector<RecordKey> unknown_keys;
            if (cfg.probe_set != ProbeSetId::O2) {
                unknown_keys.insert(unknown_keys.end(),
                                    result.partition.probes_known_unknown.begin(),
                                    result.partition.probes_known_unknown.end());
            }
            if (cfg.probe_set != ProbeSetId::O1) {
                unknown_keys.insert(unknown_keys.end(),
                                    result.partition.probes_unknown_unknown.begin(),
                                    result.partition.probes_unknown_unknown.end());
            }
            for (double target : cfg.far_targets) {
                FarTargetResult far_result;
                far_result.target = target;
                const auto threshold = threshold_for_far(result.scores, unknown_keys,
                                                         target, cfg.policy);
                if (threshold) {
                    far_result.threshold = *threshold;
                    far_result.achieved_far =
                        far_at(result.scores, unknown_keys, *threshold);
                    far_result.dir =
                        dir_at(result.scores, result.partition, *threshold, cfg.rank);
                }
                result.far_results.push_back(far_result);
            }
        }
        return 0;
    });
    return result;
}

std::string experiment_file_prefix(const RunConfig& cfg) {
    return to_string(cfg.method) + "_" + to_string(cfg.fusion) + "_" +
           to_string(cfg.probe_set);
}

std::string summary_to_json(const ExperimentResult& result) {
    const RunConfig& cfg = result.config;
    detail::ordered_json j;
    j["method"] = to_string(cfg.method);
    j["fusion"] = to_string(cfg.fusion);
    j["probe_set"] = to_string(cfg.probe_set);
    j["config"] = {
        {"alpha", cfg.alpha},
        {"tail_size", cfg.tail_size},
        {"pca_retention", cfg.pca_retention},
        {"evm_scale_query", cfg.evm_scale_query},
        {"rank", cfg.rank},
        {"threshold_policy", to_string(cfg.policy)},
    };
    j["identity_counts"] = {
        {"known", result.known_identities},
        {"known_unknown", result.known_unknown_identities},
        {"unknown_unknown", result.unknown_unknown_identities},
    };
    const ProtocolPartition& p = result.partition;
    j["partition_counts"] = {
        {"training", p.training.size()},
        {"gallery_subjects", p.gallery.size()},
        {"probes_known", p.probes_known.size()},
        {"probes_known_unknown", p.probes_known_unknown.size()},
        {"probes_unknown_unknown", p.probes_unknown_unknown.size()},
    };
    j["rank1"] = result.rank1;
    if (cfg.probe_set != ProbeSetId::C) {
        auto targets = detail::ordered_json::array();
        for (const auto& far_result : result.far_results) {
            detail::ordered_json t;
            t["target"] = far_result.target;
            t["achievable"] = far_result.threshold.has_value();
            t["threshold"] = far_result.threshold
                                 ? detail::ordered_json(*far_result.threshold)
                                 : detail::ordered_json(nullptr);
            t["achieved_far"] = far_result.achieved_far
                                    ? detail::ordered_json(*far_result.achieved_far)
                                    : detail::ordered_json(nullptr);
            t["dir"] = far_result.dir ? detail::ordered_json(*far_result.dir)
                                      : detail::ordered_json(nullptr);
            targets.push_back(t);
        }
        j["dir_at_far"] = targets;
    }
    return detail::dump_json(j);
}

std::vector<std::string> write_experiment_outputs(const ExperimentResult& result,
                                                  const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const std::string prefix = experiment_file_prefix(result.config);
    std::vector<std::string> written;

    auto emit = [&](const std::string& name, const std::string& content) {
        const std::string path = (fs::path(out_dir) / name).string();
        write_text_file(path, content);
        written.push_back(path);
    };

    if (result.config.probe_set == ProbeSetId::C) {
        emit(prefix + "_cmc.csv", cmc_to_csv(result.cmc));
        emit(prefix + "_roc.csv", roc_to_csv(result.roc));
    } else {
        emit(prefix + "_dir.csv", dir_to_csv(result.dir));
    }
    emit(prefix + "_summary.json", summary_to_json(result));
    return written;
}

}  // namespace osid
