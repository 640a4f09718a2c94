#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "osid/core.hpp"
#include "osid/protocol.hpp"

namespace osid {

/// What to return for a false-alarm target whose cut index already sits on
/// the maximum unknown score: PaperStrict reports the threshold as absent,
/// AboveMax returns the next representable value above the maximum.
enum class ThresholdPolicy { PaperStrict, AboveMax };

std::string to_string(ThresholdPolicy p);
ThresholdPolicy threshold_policy_from_string(const std::string& s);

struct EvalConfig {
    int rank = 1;
    std::vector<double> far_targets = {0.001, 0.01, 0.1};  // ascending, in (0, 1]
    ThresholdPolicy policy = ThresholdPolicy::PaperStrict;
};

struct CurvePoint {
    double x = 0.0;
    double y = 0.0;
};

struct RocPoint {
    double fmr = 0.0;
    double tmr = 0.0;
    double threshold = 0.0;
};

/// Identification rank of the correct subject: the number of subjects
/// scoring at least as high as the correct one (so a strict winner has
/// rank 1 and ties count against the probe).
std::size_t rank_of(std::span<const double> row_scores, std::size_t correct_col);

/// Rank within a matrix row; the subject must be one of the columns.
std::size_t rank_of(const ScoreMatrix& m, std::size_t row,
                    const std::string& correct_subject);

/// Cumulative match characteristic over ranks 1..N (N = gallery size):
/// point r holds the fraction of known probes with rank <= r. Requires a
/// row for every known probe.
std::vector<CurvePoint> cmc_curve(const ScoreMatrix& m, const ProtocolPartition& p);

/// Fraction of unknown probes whose best gallery score reaches the
/// threshold. Requires a non-empty unknown set with rows in the matrix.
double far_at(const ScoreMatrix& m, const std::vector<RecordKey>& unknown_keys,
              double threshold);

/// Fraction of known probes identified within the rank whose genuine score
/// reaches the threshold.
double dir_at(const ScoreMatrix& m, const ProtocolPartition& p, double threshold,
              int rank);

/// Operating threshold for a false-alarm target: after sorting the unknown
/// max-scores descendingly, the cut sits at index floor(target * n)
/// (clamped to n-1) and the threshold is the smallest observed score
/// strictly above the cut. Returns nullopt under PaperStrict when the cut
/// is already the maximum. The achieved FAR never exceeds the target.
std::optional<double> threshold_for_far(const ScoreMatrix& m,
                                        const std::vector<RecordKey>& unknown_keys,
                                        double target_far, ThresholdPolicy policy);

/// Detection-and-identification versus false-alarm curve over every
/// achievable threshold: each distinct unknown max-score, the loosest
/// threshold (the matrix minimum, where FAR = 1 and DIR = CMC(rank)), and
/// under AboveMax one point past the largest unknown score (FAR = 0).
/// Points are sorted by ascending FAR. The probe set must contain unknowns
/// (O1, O2 or O3).
std::vector<CurvePoint> dir_curve(const ScoreMatrix& m, const ProtocolPartition& p,
                                  ProbeSetId probe_set, int rank,
                                  ThresholdPolicy policy = ThresholdPolicy::PaperStrict);

/// Verification ROC on the known probes: genuine scores pair each probe
/// with its own subject, impostor scores with every other subject; the
/// curve sweeps all distinct observed scores.
std::vector<RocPoint> roc_curve(const ScoreMatrix& m, const ProtocolPartition& p);

/// CSV exports ("rank,cmc" / "far,dir" / "fmr,tmr,threshold"), rows sorted
/// ascending by the first column, floats at 17 significant digits.
std::string cmc_to_csv(const std::vector<CurvePoint>& curve);
std::string dir_to_csv(const std::vector<CurvePoint>& curve);
std::string roc_to_csv(const std::vector<RocPoint>& curve);

}  // namespace osid
