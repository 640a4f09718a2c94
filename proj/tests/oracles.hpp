#pragma once

// Test-only reference implementations, written as direct enumerations so
// they stay independent of the library code they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "osid/core.hpp"
#include "osid/protocol.hpp"
#include "osid/rng.hpp"

namespace oracle {

// ---- metric oracles -------------------------------------------------------

// Rank by explicit membership: collect the columns scoring at least as
// high as the reference and count them.
inline std::size_t rank(const osid::ScoreMatrix& m, std::size_t row,
                        std::size_t correct_col) {
    std::vector<std::size_t> at_least;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        if (m.at(row, c) >= m.at(row, correct_col)) at_least.push_back(c);
    }
    return at_least.size();
}

struct MetricInstance {
    osid::ScoreMatrix matrix;
    osid::ProtocolPartition partition;
    std::vector<osid::RecordKey> unknown_keys;  // K then U
    std::vector<std::size_t> known_rows;        // rows of S, partition order
    std::vector<std::size_t> known_cols;        // correct column per S row
    std::vector<std::size_t> unknown_rows;
};

// A random open-set scoring outcome: known probes over a handful of
// subjects plus known-unknown and unknown-unknown rows. Roughly a fifth of
// the entries are quantized to one decimal to exercise score ties.
inline MetricInstance random_instance(osid::SeededRng& rng, std::size_t subjects = 8,
                                      std::size_t known = 12, std::size_t ku = 4,
                                      std::size_t uu = 4) {
    MetricInstance inst;
    for (std::size_t c = 0; c < subjects; ++c) {
        const std::string id = "s" + std::to_string(c);
        inst.matrix.gallery_subjects.push_back(id);
        inst.partition.gallery[id] = {1, 2, 3};
    }

    std::size_t row = 0;
    for (std::size_t i = 0; i < known; ++i, ++row) {
        const std::size_t col = i % subjects;
        const osid::RecordKey key{"s" + std::to_string(col),
                                  static_cast<int>(4 + i / subjects)};
        inst.partition.probes_known.push_back(key);
        inst.matrix.probe_keys.push_back(key);
        inst.known_rows.push_back(row);
        inst.known_cols.push_back(col);
    }
    for (std::size_t i = 0; i < ku; ++i, ++row) {
        const osid::RecordKey key{"k" + std::to_string(i), 2};
        inst.partition.probes_known_unknown.push_back(key);
        inst.matrix.probe_keys.push_back(key);
        inst.unknown_keys.push_back(key);
        inst.unknown_rows.push_back(row);
    }
    for (std::size_t i = 0; i < uu; ++i, ++row) {
        const osid::RecordKey key{"u" + std::to_string(i), 1};
        inst.partition.probes_unknown_unknown.push_back(key);
        inst.matrix.probe_keys.push_back(key);
        inst.unknown_keys.push_back(key);
        inst.unknown_rows.push_back(row);
    }

    inst.matrix.scores.resize(inst.matrix.rows() * inst.matrix.cols());
    for (double& s : inst.matrix.scores) {
        s = rng.next_uniform();
        if (rng.next_uniform() < 0.2) s = std::round(s * 10.0) / 10.0;
    }
    return inst;
}

inline double max_in_row(const osid::ScoreMatrix& m, std::size_t row) {
    double best = m.at(row, 0);
    for (std::size_t c = 1; c < m.cols(); ++c) best = std::max(best, m.at(row, c));
    return best;
}

inline double far(const MetricInstance& inst, double threshold) {
    std::size_t alarms = 0;
    for (std::size_t r : inst.unknown_rows) {
        if (max_in_row(inst.matrix, r) >= threshold) ++alarms;
    }
    return static_cast<double>(alarms) / static_cast<double>(inst.unknown_rows.size());
}

inline double dir(const MetricInstance& inst, double threshold, std::size_t r) {
    std::size_t detected = 0;
    for (std::size_t i = 0; i < inst.known_rows.size(); ++i) {
        const std::size_t row = inst.known_rows[i];
        const std::size_t col = inst.known_cols[i];
        if (rank(inst.matrix, row, col) <= r && inst.matrix.at(row, col) >= threshold) {
            ++detected;
        }
    }
    return static_cast<double>(detected) / static_cast<double>(inst.known_rows.size());
}

inline std::vector<double> cmc(const MetricInstance& inst) {
    std::vector<double> curve;
    for (std::size_t r = 1; r <= inst.matrix.cols(); ++r) {
        std::size_t reached = 0;
        for (std::size_t i = 0; i < inst.known_rows.size(); ++i) {
            if (rank(inst.matrix, inst.known_rows[i], inst.known_cols[i]) <= r) {
                ++reached;
            }
        }
        curve.push_back(static_cast<double>(reached) /
                        static_cast<double>(inst.known_rows.size()));
    }
    return curve;
}

inline std::optional<double> threshold_for_far(const MetricInstance& inst,
                                               double target, bool above_max) {
    std::vector<double> scores;
    for (std::size_t r : inst.unknown_rows) scores.push_back(max_in_row(inst.matrix, r));
    std::sort(scores.begin(), scores.end());
    std::reverse(scores.begin(), scores.end());

    std::size_t index =
        static_cast<std::size_t>(std::floor(target * static_cast<double>(scores.size())));
    if (index >= scores.size()) index = scores.size() - 1;
    const double cut = scores[index];

    std::optional<double> best;
    for (double s : scores) {
        if (s > cut && (!best || s < *best)) best = s;
    }
    if (!best && above_max) {
        const double max = *std::max_element(scores.begin(), scores.end());
        best = std::nextafter(max, std::numeric_limits<double>::infinity());
    }
    return best;
}

// (fmr, tmr) at every distinct observed score, descending threshold.
inline std::vector<std::pair<double, double>> roc(const MetricInstance& inst) {
    std::vector<double> genuine;
    std::vector<double> impostor;
    for (std::size_t i = 0; i < inst.known_rows.size(); ++i) {
        for (std::size_t c = 0; c < inst.matrix.cols(); ++c) {
            (c == inst.known_cols[i] ? genuine : impostor)
                .push_back(inst.matrix.at(inst.known_rows[i], c));
        }
    }
    std::vector<double> thresholds = genuine;
    thresholds.insert(thresholds.end(), impostor.begin(), impostor.end());
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                     thresholds.end());
    std::reverse(thresholds.begin(), thresholds.end());

    std::vector<std::pair<double, double>> curve;
    for (double theta : thresholds) {
        std::size_t fm = 0;
        for (double s : impostor) {
            if (s >= theta) ++fm;
        }
        std::size_t tm = 0;
        for (double s : genuine) {
            if (s >= theta) ++tm;
        }
        curve.emplace_back(static_cast<double>(fm) / static_cast<double>(impostor.size()),
                           static_cast<double>(tm) / static_cast<double>(genuine.size()));
    }
    return curve;
}

// (far, dir) over each distinct unknown max-score plus the matrix minimum,
// ascending FAR; mirrors the contract of the library's open-set curve.
inline std::vector<std::pair<double, double>> dir_curve(const MetricInstance& inst,
                                                        std::size_t rank_limit) {
    std::vector<double> thresholds;
    for (std::size_t r : inst.unknown_rows) {
        thresholds.push_back(max_in_row(inst.matrix, r));
    }
    thresholds.push_back(
        *std::min_element(inst.matrix.scores.begin(), inst.matrix.scores.end()));
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                     thresholds.end());
    std::reverse(thresholds.begin(), thresholds.end());

    std::vector<std::pair<double, double>> curve;
    for (double theta : thresholds) {
        curve.emplace_back(far(inst, theta), dir(inst, theta, rank_limit));
    }
    return curve;
}

// ---- statistical oracles ---------------------------------------------------

// Inverse-CDF Weibull sample: lambda * (-ln u)^(1/kappa).
inline std::vector<double> weibull_sample(osid::SeededRng& rng, double kappa,
                                          double lambda, std::size_t n) {
    std::vector<double> xs(n);
    for (double& x : xs) {
        x = lambda * std::pow(-std::log(rng.next_uniform()), 1.0 / kappa);
    }
    return xs;
}

// Closed-form two-class Fisher direction Sw^-1 (mu1 - mu2).
inline Eigen::VectorXd fisher_direction(const std::vector<osid::FeatureVector>& class1,
                                        const std::vector<osid::FeatureVector>& class2) {
    const auto dim = static_cast<Eigen::Index>(class1.front().size());
    auto mean_of = [dim](const std::vector<osid::FeatureVector>& xs) {
        Eigen::VectorXd m = Eigen::VectorXd::Zero(dim);
        for (const auto& x : xs) m += Eigen::Map<const Eigen::VectorXd>(x.data(), dim);
        return Eigen::VectorXd(m / static_cast<double>(xs.size()));
    };
    const Eigen::VectorXd mu1 = mean_of(class1);
    const Eigen::VectorXd mu2 = mean_of(class2);

    Eigen::MatrixXd sw = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& x : class1) {
        const Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(x.data(), dim) - mu1;
        sw += d * d.transpose();
    }
    for (const auto& x : class2) {
        const Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(x.data(), dim) - mu2;
        sw += d * d.transpose();
    }
    return sw.ldlt().solve(mu1 - mu2);
}

}  // namespace oracle
