#pragma once

#include <optional>
#include <string>
#include <vector>

#include "osid/core.hpp"
#include "osid/evaluation.hpp"
#include "osid/evm.hpp"
#include "osid/protocol.hpp"
#include "osid/scoring.hpp"
#include "osid/subspace.hpp"

namespace osid {

/// One cell of the comparison grid: a method, a fusion and a probe set,
/// plus every tunable the pipeline takes. Defaults are the tuned values.
struct RunConfig {
    Method method = Method::Cosine;
    Fusion fusion = Fusion::Max;
    ProbeSetId probe_set = ProbeSetId::C;
    double alpha = 0.7;
    int tail_size = 500;
    double pca_retention = 0.99;
    bool evm_scale_query = true;
    int rank = 1;
    std::vector<double> far_targets = {0.001, 0.01, 0.1};
    ThresholdPolicy policy = ThresholdPolicy::PaperStrict;
};

/// Outcome of one false-alarm target: absent fields mean the threshold
/// does not exist under the configured policy.
struct FarTargetResult {
    double target = 0.0;
    std::optional<double> threshold;
    std::optional<double> achieved_far;
    std::optional<double> dir;
};

struct ExperimentResult {
    RunConfig config;
    std::size_t known_identities = 0;
    std::size_t known_unknown_identities = 0;
    std::size_t unknown_unknown_identities = 0;
    ProtocolPartition partition;
    ScoreMatrix scores;
    std::vector<CurvePoint> cmc;          // always computed (on the known probes)
    std::vector<RocPoint> roc;            // probe set C only
    std::vector<CurvePoint> dir;          // open probe sets only
    std::vector<FarTargetResult> far_results;  // open probe sets only
    double rank1 = 0.0;
};

/// Runs the full pipeline on one grid cell: build the partition, fit the
/// models the method needs on the training set, score the chosen probe
/// set, and evaluate. Deterministic for fixed input and config; errors are
/// annotated with the failing stage.
ExperimentResult run_experiment(const Dataset& dataset, const RunConfig& cfg);

/// "cos_max_C"-style stem used for the cell's output files.
std::string experiment_file_prefix(const RunConfig& cfg);

/// JSON summary: configuration echo, partition counts, rank-1 rate, and
/// the per-target open-set results.
std::string summary_to_json(const ExperimentResult& result);

/// Writes the cell's outputs into `out_dir` (created if missing):
/// <prefix>_cmc.csv and <prefix>_roc.csv for probe set C,
/// <prefix>_dir.csv for O1/O2/O3, and <prefix>_summary.json always.
/// Returns the written paths.
std::vector<std::string> write_experiment_outputs(const ExperimentResult& result,
                                                  const std::string& out_dir);

}  // namespace osid
