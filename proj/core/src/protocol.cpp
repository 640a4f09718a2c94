#include "osid/protocol.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "json_io.hpp"

namespace osid {

std::string to_string(IdentityCategory c) {
    switch (c) {
        case IdentityCategory::Known: return "known";
        case IdentityCategory::KnownUnknown: return "known-unknown";
        case IdentityCategory::UnknownUnknown: return "unknown-unknown";
    }
    return "unknown";
}

std::string to_string(ProbeSetId id) {
    switch (id) {
        case ProbeSetId::C: return "C";
        case ProbeSetId::O1: return "O1";
        case ProbeSetId::O2: return "O2";
        case ProbeSetId::O3: return "O3";
    }
    return "?";
}

ProbeSetId probe_set_from_string(const std::string& s) {
    if (s == "C") return ProbeSetId::C;
    if (s == "O1") return ProbeSetId::O1;
    if (s == "O2") return ProbeSetId::O2;
    if (s == "O3") return ProbeSetId::O3;
    throw InvalidInputError("unknown probe set '" + s + "' (expected C, O1, O2 or O3)");
}

// identity -> sorted image indices
static std::map<std::string, std::vector<int>> images_by_identity(const Dataset& d) {
    std::map<std::string, std::vector<int>> images;
    for (const auto& rec : d.records) images[rec.identity].push_back(rec.image_index);
    for (auto& [identity, indices] : images) std::sort(indices.begin(), indices.end());
    return images;
}

std::map<std::string, IdentityCategory> categorize_identities(const Dataset& d) {
    std::map<std::string, IdentityCategory> categories;
    for (const auto& [identity, indices] : images_by_identity(d)) {
        const std::size_t n = indices.size();
        categories[identity] = n > 3   ? IdentityCategory::Known
                               : n > 1 ? IdentityCategory::KnownUnknown
                                       : IdentityCategory::UnknownUnknown;
    }
    return categories;
}

ProtocolPartition build_partition(const Dataset& d) {
    const auto images = images_by_identity(d);
    const auto categories = categorize_identities(d);

    ProtocolPartition p;
    for (const auto& [identity, indices] : images) {
        switch (categories.at(identity)) {
            case IdentityCategory::Known: {
                // 3 smallest indices enroll and train; the rest probe as S.
                auto& enrolled = p.gallery[identity];
                for (std::size_t i = 0; i < indices.size(); ++i) {
                    if (i < 3) {
                        enrolled.push_back(indices[i]);
                        p.training.push_back({identity, indices[i]});
                    } else {
                        p.probes_known.push_back({identity, indices[i]});
                    }
                }
                break;
            }
            case IdentityCategory::KnownUnknown:
                // Smallest index trains; the rest probe as K.
                p.training.push_back({identity, indices.front()});
                for (std::size_t i = 1; i < indices.size(); ++i) {
                    p.probes_known_unknown.push_back({identity, indices[i]});
                }
                break;
            case IdentityCategory::UnknownUnknown:
                p.probes_unknown_unknown.push_back({identity, indices.front()});
                break;
        }
    }
    if (p.gallery.empty()) {
        throw DataError(
            "protocol construction failed: no identity has more than 3 images, "
            "so no gallery can be enrolled");
    }
    // images_by_identity iterates identities lexicographically with ascending
    // indices, so every key list is already sorted.
    return p;
}

std::vector<RecordKey> probe_set(const ProtocolPartition& p, ProbeSetId id) {
    std::vector<RecordKey> keys = p.probes_known;
    auto append = [&keys](const std::vector<RecordKey>& more) {
        keys.insert(keys.end(), more.begin(), more.end());
    };
    switch (id) {
        case ProbeSetId::C: break;
        case ProbeSetId::O1: append(p.probes_known_unknown); break;
        case ProbeSetId::O2: append(p.probes_unknown_unknown); break;
        case ProbeSetId::O3:
            append(p.probes_known_unknown);
            append(p.probes_unknown_unknown);
            break;
    }
    std::sort(keys.begin(), keys.end());
    return keys;
}

std::vector<LabeledFeature> subset(const Dataset& d, const std::vector<RecordKey>& keys) {
    std::map<RecordKey, const LabeledFeature*> index;
    for (const auto& rec : d.records) index[{rec.identity, rec.image_index}] = &rec;

    std::vector<LabeledFeature> out;
    out.reserve(keys.size());
    for (const auto& key : keys) {
        auto it = index.find(key);
        if (it == index.end()) {
            throw InvalidInputError("no record for (" + key.identity + ", " +
                                    std::to_string(key.image_index) + ")");
        }
        out.push_back(*it->second);
    }
    return out;
}

std::vector<GalleryTemplate> make_gallery_templates(const Dataset& d,
                                                    const ProtocolPartition& p) {
    std::vector<GalleryTemplate> templates;
    templates.reserve(p.gallery.size());
    for (const auto& [identity, indices] : p.gallery) {
        std::vector<RecordKey> keys;
        keys.reserve(indices.size());
        for (int idx : indices) keys.push_back({identity, idx});
        std::vector<FeatureVector> features;
        for (const auto& rec : subset(d, keys)) features.push_back(rec.feature);
        templates.push_back(make_gallery_template(identity, std::move(features)));
    }
    return templates;
}

Dataset training_subset(const Dataset& d, const ProtocolPartition& p) {
    return Dataset{subset(d, p.training)};
}

static detail::ordered_json keys_to_json(const std::vector<RecordKey>& keys) {
    auto arr = detail::ordered_json::array();
    for (const auto& key : keys) {
        arr.push_back(detail::ordered_json::array({key.identity, key.image_index}));
    }
    return arr;
}

std::string partition_to_json(const ProtocolPartition& p) {
    detail::ordered_json j;
    j["training"] = keys_to_json(p.training);
    auto gallery = detail::ordered_json::object();
    for (const auto& [identity, indices] : p.gallery) gallery[identity] = indices;
    j["gallery"] = gallery;
    j["probes_known"] = keys_to_json(p.probes_known);
    j["probes_known_unknown"] = keys_to_json(p.probes_known_unknown);
    j["probes_unknown_unknown"] = keys_to_json(p.probes_unknown_unknown);
    j["counts"] = {
        {"training", p.training.size()},
        {"gallery_subjects", p.gallery.size()},
        {"probes_known", p.probes_known.size()},
        {"probes_known_unknown", p.probes_known_unknown.size()},
        {"probes_unknown_unknown", p.probes_unknown_unknown.size()},
    };
    return detail::dump_json(j);
}

}  // namespace osid
