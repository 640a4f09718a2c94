#include "osid/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>

#include "json_io.hpp"

namespace osid {

std::string to_string(ThresholdPolicy p) {
    return p == ThresholdPolicy::PaperStrict ? "paper-strict" : "above-max";
}

ThresholdPolicy threshold_policy_from_string(const std::string& s) {
    if (s == "paper-strict") return ThresholdPolicy::PaperStrict;
    if (s == "above-max") return ThresholdPolicy::AboveMax;
    throw InvalidInputError("unknown threshold policy '" + s +
                            "' (expected paper-strict or above-max)");
}

std::size_t rank_of(std::span<const double> row_scores, std::size_t correct_col) {
    if (correct_col >= row_scores.size()) {
        throw InvalidInputError("correct subject column out of range");
    }
    const double reference = row_scores[correct_col];
    std::size_t rank = 0;
    for (double s : row_scores) {
        if (s >= reference) ++rank;
    }
    return rank;
}

namespace {

std::size_t column_of(const ScoreMatrix& m, const std::string& subject) {
    for (std::size_t c = 0; c < m.gallery_subjects.size(); ++c) {
        if (m.gallery_subjects[c] == subject) return c;
    }
    throw InvalidInputError("subject '" + subject + "' is not a gallery column");
}

std::span<const double> row_span(const ScoreMatrix& m, std::size_t row) {
    return {m.scores.data() + row * m.cols(), m.cols()};
}

std::map<RecordKey, std::size_t> row_index(const ScoreMatrix& m) {
    std::map<RecordKey, std::size_t> index;
    for (std::size_t r = 0; r < m.rows(); ++r) index[m.probe_keys[r]] = r;
    return index;
}

std::size_t require_row(const std::map<RecordKey, std::size_t>& index,
                        const RecordKey& key) {
    const auto it = index.find(key);
    if (it == index.end()) {
        throw InvalidInputError("no score row for probe (" + key.identity + ", " +
                                std::to_string(key.image_index) + ")");
    }
    return it->second;
}

double row_max(const ScoreMatrix& m, std::size_t row) {
    const auto span = row_span(m, row);
    return *std::max_element(span.begin(), span.end());
}

// Rank and genuine score of every known probe; the basis of CMC and DIR.
struct KnownProbeOutcome {
    std::size_t rank;
    double genuine_score;
};

std::vector<KnownProbeOutcome> known_outcomes(const ScoreMatrix& m,
                                              const ProtocolPartition& p) {
    if (p.probes_known.empty()) {
        throw InvalidInputError("the known probe set is empty");
    }
    const auto rows = row_index(m);
    std::map<std::string, std::size_t> columns;
    for (std::size_t c = 0; c < m.gallery_subjects.size(); ++c) {
        columns[m.gallery_subjects[c]] = c;
    }

    std::vector<KnownProbeOutcome> outcomes;
    outcomes.reserve(p.probes_known.size());
    for (const auto& key : p.probes_known) {
        const std::size_t r = require_row(rows, key);
        const auto col = columns.find(key.identity);
        if (col == columns.end()) {
            throw InvalidInputError("known probe identity '" + key.identity +
                                    "' is not a gallery column");
        }
        outcomes.push_back({rank_of(row_span(m, r), col->second), m.at(r, col->second)});
    }
    return outcomes;
}

std::vector<double> unknown_max_scores(const ScoreMatrix& m,
                                       const std::vector<RecordKey>& unknown_keys) {
    if (unknown_keys.empty()) {
        throw InvalidInputError("open-set metrics need a non-empty unknown probe set");
    }
    const auto rows = row_index(m);
    std::vector<double> maxes;
    maxes.reserve(unknown_keys.size());
    for (const auto& key : unknown_keys) {
        maxes.push_back(row_max(m, require_row(rows, key)));
    }
    return maxes;
}

}  // namespace

std::size_t rank_of(const ScoreMatrix& m, std::size_t row,
                    const std::string& correct_subject) {
    if (row >= m.rows()) throw InvalidInputError("probe row out of range");
    return rank_of(row_span(m, row), column_of(m, correct_subject));
}

std::vector<CurvePoint> cmc_curve(const ScoreMatrix& m, const ProtocolPartition& p) {
    const auto outcomes = known_outcomes(m, p);
    const std::size_t n_ranks = m.cols();

    std::vector<std::size_t> reached(n_ranks + 1, 0);
    for (const auto& o : outcomes) ++reached[std::min(o.rank, n_ranks)];

    std::vector<CurvePoint> curve;
    curve.reserve(n_ranks);
    std::size_t cumulative = 0;
    for (std::size_t r = 1; r <= n_ranks; ++r) {
        cumulative += reached[r];
        curve.push_back({static_cast<double>(r),
                         static_cast<double>(cumulative) /
                             static_cast<double>(outcomes.size())});
    }
    return curve;
}

double far_at(const ScoreMatrix& m, const std::vector<RecordKey>& unknown_keys,
              double threshold) {
    const auto maxes = unknown_max_scores(m, unknown_keys);
    std::size_t alarms = 0;
    for (double s : maxes) {
        if (s >= threshold) ++alarms;
    }
    return static_cast<double>(alarms) / static_cast<double>(maxes.size());
}

double dir_at(const ScoreMatrix& m, const ProtocolPartition& p, double threshold,
              int rank) {
    if (rank < 1) throw InvalidInputError("rank must be at least 1");
    const auto outcomes = known_outcomes(m, p);
    std::size_t detected = 0;
    for (const auto& o : outcomes) {
        if (o.rank <= static_cast<std::size_t>(rank) && o.genuine_score >= threshold) {
            ++detected;
        }
    }
    return static_cast<double>(detected) / static_cast<double>(outcomes.size());
}

std::optional<double> threshold_for_far(const ScoreMatrix& m,
                                        const std::vector<RecordKey>& unknown_keys,
                                        double target_far, ThresholdPolicy policy) {
    if (!(target_far > 0.0 && target_far <= 1.0)) {
        throw InvalidInputError("false-alarm target must lie in (0, 1]");
    }
    std::vector<double> maxes = unknown_max_scores(m, unknown_keys);
    std::sort(maxes.begin(), maxes.end(), std::greater<>());

    const std::size_t n = maxes.size();
    const auto raw_index = static_cast<std::size_t>(
        std::floor(target_far * static_cast<double>(n)));
    const double cut = maxes[std::min(raw_index, n - 1)];

    // Smallest observed score strictly above the cut.
    std::optional<double> threshold;
    for (double s : maxes) {
        if (s > cut) {
            threshold = threshold ? std::min(*threshold, s) : s;
        }
    }
    if (!threshold && policy == ThresholdPolicy::AboveMax) {
        threshold = std::nextafter(maxes.front(),
                                   std::numeric_limits<double>::infinity());
    }
    return threshold;
}

std::vector<CurvePoint> dir_curve(const ScoreMatrix& m, const ProtocolPartition& p,
                                  ProbeSetId probe_set, int rank,
                                  ThresholdPolicy policy) {
    if (rank < 1) throw InvalidInputError("rank must be at least 1");
    std::vector<RecordKey> unknown_keys;
    switch (probe_set) {
        case ProbeSetId::C:
            throw InvalidInputError("probe set C has no unknowns; "
                                    "open-set curves need O1, O2 or O3");
        case ProbeSetId::O1: unknown_keys = p.probes_known_unknown; break;
        case ProbeSetId::O2: unknown_keys = p.probes_unknown_unknown; break;
        case ProbeSetId::O3:
            unknown_keys = p.probes_known_unknown;
            unknown_keys.insert(unknown_keys.end(), p.probes_unknown_unknown.begin(),
                                p.probes_unknown_unknown.end());
            break;
    }

    std::vector<double> maxes = unknown_max_scores(m, unknown_keys);
    const auto outcomes = known_outcomes(m, p);

    std::set<double> thresholds(maxes.begin(), maxes.end());
    thresholds.insert(*std::min_element(m.scores.begin(), m.scores.end()));
    if (policy == ThresholdPolicy::AboveMax) {
        thresholds.insert(std::nextafter(*std::max_element(maxes.begin(), maxes.end()),
                                         std::numeric_limits<double>::infinity()));
    }

    // Sorted copies allow exact counting via binary search; counts match
    // far_at / dir_at element-wise comparisons by construction.
    std::sort(maxes.begin(), maxes.end());
    std::vector<double> detected_scores;
    for (const auto& o : outcomes) {
        if (o.rank <= static_cast<std::size_t>(rank)) {
            detected_scores.push_back(o.genuine_score);
        }
    }
    std::sort(detected_scores.begin(), detected_scores.end());

    const auto count_at_least = [](const std::vector<double>& sorted, double theta) {
        return static_cast<double>(
            sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), theta));
    };

    std::vector<CurvePoint> curve;
    curve.reserve(thresholds.size());
    // Descending thresholds give ascending false-alarm rates.
    for (auto it = thresholds.rbegin(); it != thresholds.rend(); ++it) {
        const double far =
            count_at_least(maxes, *it) / static_cast<double>(maxes.size());
        const double dir = count_at_least(detected_scores, *it) /
                           static_cast<double>(outcomes.size());
        curve.push_back({far, dir});
    }
    return curve;
}

std::vector<RocPoint> roc_curve(const ScoreMatrix& m, const ProtocolPartition& p) {
    if (p.probes_known.empty()) {
        throw InvalidInputError("the known probe set is empty");
    }
    const auto rows = row_index(m);
    std::map<std::string, std::size_t> columns;
    for (std::size_t c = 0; c < m.gallery_subjects.size(); ++c) {
        columns[m.gallery_subjects[c]] = c;
    }

    std::vector<double> genuine;
    std::vector<double> impostor;
    for (const auto& key : p.probes_known) {
        const std::size_t r = require_row(rows, key);
        const auto col = columns.find(key.identity);
        if (col == columns.end()) {
            throw InvalidInputError("known probe identity '" + key.identity +
                                    "' is not a gallery column");
        }
        for (std::size_t c = 0; c < m.cols(); ++c) {
            (c == col->second ? genuine : impostor).push_back(m.at(r, c));
        }
    }

    std::set<double> thresholds(genuine.begin(), genuine.end());
    thresholds.insert(impostor.begin(), impostor.end());

    std::sort(genuine.begin(), genuine.end());
    std::sort(impostor.begin(), impostor.end());
    const auto count_at_least = [](const std::vector<double>& sorted, double theta) {
        return static_cast<double>(
            sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), theta));
    };

    std::vector<RocPoint> curve;
    curve.reserve(thresholds.size());
    for (auto it = thresholds.rbegin(); it != thresholds.rend(); ++it) {
        RocPoint pt;
        pt.threshold = *it;
        pt.fmr = impostor.empty()
                     ? 0.0
                     : count_at_least(impostor, *it) / static_cast<double>(impostor.size());
        pt.tmr = count_at_least(genuine, *it) / static_cast<double>(genuine.size());
        curve.push_back(pt);
    }
    return curve;
}

std::string cmc_to_csv(const std::vector<CurvePoint>& curve) {
    std::string out = "rank,cmc\n";
    for (const auto& pt : curve) {
        out += std::to_string(static_cast<long long>(pt.x));
        out += ',';
        out += detail::format_double(pt.y);
        out += '\n';
    }
    return out;
}

std::string dir_to_csv(const std::vector<CurvePoint>& curve) {
    std::string out = "far,dir\n";
    for (const auto& pt : curve) {
        out += detail::format_double(pt.x);
        out += ',';
        out += detail::format_double(pt.y);
        out += '\n';
    }
    return out;
}

std::string roc_to_csv(const std::vector<RocPoint>& curve) {
    std::string out = "fmr,tmr,threshold\n";
    for (const auto& pt : curve) {
        out += detail::format_double(pt.fmr);
        out += ',';
        out += detail::format_double(pt.tmr);
        out += ',';
        out += detail::format_double(pt.threshold);
        out += '\n';
    }
    return out;
}

}  // namespace osid
