#include "osid/evm.hpp"

#include <cmath>
#include <utility>

#include "json_io.hpp"
#include "parallel.hpp"

namespace osid {

std::string to_string(Fusion f) {
    return f == Fusion::Max ? "max" : "avg";
}

Fusion fusion_from_string(const std::string& s) {
    if (s == "max") return Fusion::Max;
    if (s == "avg") return Fusion::Avg;
    throw InvalidInputError("unknown fusion '" + s + "' (expected max or avg)");
}

std::vector<std::string> EvmGalleryModel::subject_identities() const {
    std::vector<std::string> ids;
    ids.reserve(subjects.size());
    for (const auto& s : subjects) ids.push_back(s.identity);
    return ids;
}

std::vector<double> negative_distances(const FeatureVector& anchor,
                                       const std::string& anchor_identity,
                                       const Dataset& training, double alpha) {
    if (!(alpha > 0.0)) throw InvalidInputError("alpha must be positive");
    std::vector<double> distances;
    distances.reserve(training.records.size());
    for (const auto& rec : training.records) {
        if (rec.identity == anchor_identity) continue;
        distances.push_back(alpha * cosine_distance(anchor, rec.feature));
    }
    if (distances.empty()) {
        throw DataError("no training feature with an identity other than '" +
                        anchor_identity + "'");
    }
    return distances;
}

static void validate_config(const EvmConfig& cfg) {
    if (!(cfg.alpha > 0.0)) throw InvalidInputError("alpha must be positive");
    if (cfg.tail_size < 2) throw InvalidInputError("tail size must be at least 2");
}

EvmGalleryModel train_evm(const std::vector<GalleryTemplate>& gallery,
                          const Dataset& training, const EvmConfig& cfg) {
    validate_config(cfg);
    if (gallery.empty()) throw InvalidInputError("empty gallery");

    // Flatten anchors so training can fan out per anchor.
    struct Anchor {
        std::size_t subject;
        std::size_t entry;
        const FeatureVector* feature;
    };
    EvmGalleryModel model;
    model.config = cfg;
    model.subjects.resize(gallery.size());
    std::vector<Anchor> anchors;
    for (std::size_t s = 0; s < gallery.size(); ++s) {
        model.subjects[s].identity = gallery[s].identity;
        if (cfg.fusion == Fusion::Max) {
            model.subjects[s].entries.resize(gallery[s].features.size());
            for (std::size_t i = 0; i < gallery[s].features.size(); ++i) {
                anchors.push_back({s, i, &gallery[s].features[i]});
            }
        } else {
            model.subjects[s].entries.resize(1);
            anchors.push_back({s, 0, &gallery[s].mean});
        }
    }

    detail::parallel_for(anchors.size(), [&](std::size_t a) {
        const Anchor& anchor = anchors[a];
        const std::string& identity = gallery[anchor.subject].identity;
        try {
            const auto distances =
                negative_distances(*anchor.feature, identity, training, cfg.alpha);
            const Tail tail = extract_tail(distances, cfg.tail_size);
            WeibullFit fit = fit_weibull_mle(apply_distance_floor(tail.values));
            fit.tail_clamped = tail.clamped;
            auto& entry = model.subjects[anchor.subject].entries[anchor.entry];
            entry.feature = *anchor.feature;
            entry.fit = fit;
        } catch (const Error& e) {
            rethrow_annotated(e, "EVM training, subject '" + identity + "' anchor " +
                                     std::to_string(anchor.entry));
        }
    });
    return model;
}

static double query_distance(const EvmConfig& cfg, const FeatureVector& feature,
                             const FeatureVector& probe) {
    const double d = cosine_distance(feature, probe);
    return cfg.scale_query_distance ? cfg.alpha * d : d;
}

std::vector<double> score_max(const EvmGalleryModel& model, const FeatureVector& probe) {
    if (model.config.fusion != Fusion::Max) {
        throw InvalidInputError("score_max requires a max-fusion model");
    }
    std::vector<double> scores;
    scores.reserve(model.subjects.size());
    for (const auto& subject : model.subjects) {
        double best = 0.0;
        for (const auto& entry : subject.entries) {
            best = std::max(best, psi(entry.fit,
                                      query_distance(model.config, entry.feature, probe)));
        }
        scores.push_back(best);
    }
    return scores;
}

std::vector<double> score_avg(const EvmGalleryModel& model, const FeatureVector& probe) {
    if (model.config.fusion != Fusion::Avg) {
        throw InvalidInputError("score_avg requires an avg-fusion model");
    }
    std::vector<double> scores;
    scores.reserve(model.subjects.size());
    for (const auto& subject : model.subjects) {
        const auto& entry = subject.entries.front();
        scores.push_back(
            psi(entry.fit, query_distance(model.config, entry.feature, probe)));
    }
    return scores;
}

std::string evm_to_json(const EvmGalleryModel& model) {
    detail::ordered_json j;
    j["config"] = {
        {"alpha", model.config.alpha},
        {"tail_size", model.config.tail_size},
        {"fusion", to_string(model.config.fusion)},
        {"scale_query_distance", model.config.scale_query_distance},
    };
    auto subjects = detail::ordered_json::array();
    for (const auto& subject : model.subjects) {
        auto entries = detail::ordered_json::array();
        for (const auto& entry : subject.entries) {
            entries.push_back({
                {"feature", entry.feature},
                {"shape", entry.fit.shape},
                {"scale", entry.fit.scale},
                {"tail_size_used", entry.fit.tail_size_used},
                {"clamped", entry.fit.tail_clamped},
            });
        }
        subjects.push_back({{"identity", subject.identity}, {"entries", entries}});
    }
    j["subjects"] = subjects;
    return detail::dump_json(j);
}

EvmGalleryModel evm_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("EVM model: ") + e.what());
    }
    try {
        EvmGalleryModel model;
        const auto& cfg = j.at("config");
        model.config.alpha = cfg.at("alpha").get<double>();
        model.config.tail_size = cfg.at("tail_size").get<int>();
        model.config.fusion = fusion_from_string(cfg.at("fusion").get<std::string>());
        model.config.scale_query_distance = cfg.at("scale_query_distance").get<bool>();
        for (const auto& subject : j.at("subjects")) {
            EvmSubjectModel sm;
            sm.identity = subject.at("identity").get<std::string>();
            for (const auto& entry : subject.at("entries")) {
                EvmEntry e;
                e.feature = entry.at("feature").get<FeatureVector>();
                e.fit.shape = entry.at("shape").get<double>();
                e.fit.scale = entry.at("scale").get<double>();
                e.fit.tail_size_used = entry.at("tail_size_used").get<int>();
                e.fit.tail_clamped = entry.at("clamped").get<bool>();
                sm.entries.push_back(std::move(e));
            }
            model.subjects.push_back(std::move(sm));
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("EVM model: ") + e.what());
    }
}

}  // namespace osid
