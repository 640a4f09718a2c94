#pragma once

#include <map>
#include <string>
#include <vector>

#include "osid/core.hpp"

namespace osid {

/// How an identity participates in the open-set protocol, decided purely
/// by its image count: more than 3 images -> Known (enrollable), 2 or 3
/// -> KnownUnknown (training background only), exactly 1 -> UnknownUnknown
/// (query-time only).
enum class IdentityCategory { Known, KnownUnknown, UnknownUnknown };

std::string to_string(IdentityCategory c);

/// The deterministic split of a dataset into training set T, gallery G and
/// the three probe pools S (known), K (known unknown), U (unknown unknown).
///
/// All key lists are sorted by (identity, image_index) so that two
/// partitions built from the same records compare and serialize equal
/// regardless of record order.
struct ProtocolPartition {
    std::vector<RecordKey> training;                   // T
    std::map<std::string, std::vector<int>> gallery;   // G: identity -> 3 ascending indices
    std::vector<RecordKey> probes_known;               // S
    std::vector<RecordKey> probes_known_unknown;       // K
    std::vector<RecordKey> probes_unknown_unknown;     // U

    bool operator==(const ProtocolPartition&) const = default;
};

/// The four evaluation probe sets: C = S, O1 = S u K, O2 = S u U, O3 = S u K u U.
enum class ProbeSetId { C, O1, O2, O3 };

std::string to_string(ProbeSetId id);
ProbeSetId probe_set_from_string(const std::string& s);

/// Image count per identity decides the category.
std::map<std::string, IdentityCategory> categorize_identities(const Dataset& d);

/// Builds the partition:
///  - gallery: for each Known identity, its 3 numerically smallest image indices;
///  - T: all gallery images plus the smallest-index image of each KnownUnknown;
///  - S: remaining images of Known identities;
///  - K: remaining images of KnownUnknown identities;
///  - U: every image of every UnknownUnknown identity.
/// Throws DataError when the dataset has no Known identity (no gallery possible).
ProtocolPartition build_partition(const Dataset& d);

/// Probe keys of the requested probe set, sorted by (identity, image_index).
std::vector<RecordKey> probe_set(const ProtocolPartition& p, ProbeSetId id);

/// Extracts the records matching `keys`, in key order.
/// Throws InvalidInputError if a key has no record.
std::vector<LabeledFeature> subset(const Dataset& d, const std::vector<RecordKey>& keys);

/// Gallery templates (features plus mean) in lexicographic identity order.
std::vector<GalleryTemplate> make_gallery_templates(const Dataset& d,
                                                    const ProtocolPartition& p);

/// The training records T as a Dataset, in key order.
Dataset training_subset(const Dataset& d, const ProtocolPartition& p);

/// JSON document listing the five sets with stable ordering.
std::string partition_to_json(const ProtocolPartition& p);

}  // namespace osid
