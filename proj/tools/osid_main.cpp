// osid - command line front end for the open-set identification toolkit.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "osid/dataset_io.hpp"
#include "osid/evaluation.hpp"
#include "osid/evm.hpp"
#include "osid/experiment.hpp"
#include "osid/protocol.hpp"
#include "osid/scoring.hpp"
#include "osid/subspace.hpp"
#include "osid/synthetic.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

// A bad --config file or key is an invocation problem (exit 1).
struct ConfigUsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trimmed(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

// Applies a flat key=value file to the subcommand's options. Options
// already given on the command line keep their values.
void apply_flat_config(CLI::App& cmd, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigUsageError("cannot open config file '" + path + "'");
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const std::string entry = trimmed(line);
        if (entry.empty() || entry.front() == '#') continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos) {
            throw ConfigUsageError(path + ":" + std::to_string(line_number) +
                                   ": expected key=value");
        }
        const std::string key = trimmed(entry.substr(0, eq));
        const std::string value = trimmed(entry.substr(eq + 1));
        if (key == "config") {
            throw ConfigUsageError(path + ": config cannot nest config files");
        }
        CLI::Option* option = cmd.get_option_no_throw("--" + key);
        if (option == nullptr) {
            throw ConfigUsageError(path + ":" + std::to_string(line_number) +
                                   ": unknown key '" + key + "'");
        }
        if (option->count() > 0) continue;  // explicit flag wins
        option->add_result(value);
        option->run_callback();
    }
}

struct SynthOptions {
    osid::SyntheticSpec spec;

    void attach(CLI::App* cmd) {
        cmd->add_option("--dim", spec.dimension, "Feature dimension")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--known", spec.known, "Known identities")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--known-unknown", spec.known_unknown,
                        "Known-unknown identities (2 images each)")
            ->check(CLI::NonNegativeNumber)
            ->capture_default_str();
        cmd->add_option("--unknown-unknown", spec.unknown_unknown,
                        "Unknown-unknown identities (1 image each)")
            ->check(CLI::NonNegativeNumber)
            ->capture_default_str();
        cmd->add_option("--images-per-known", spec.images_per_known,
                        "Images per known identity (>= 4)")
            ->check(CLI::Range(4, 1 << 20))
            ->capture_default_str();
        cmd->add_option("--sigma", spec.sigma, "Cluster noise")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--seed", spec.seed, "Random seed")->capture_default_str();
    }
};

std::string method_fusion_help() {
    return "Scoring method (cos, lda, evm)";
}

osid::ScoreMatrix load_scores(const std::string& path) {
    return osid::score_matrix_from_csv(osid::read_text_file(path));
}

int run_command(const std::function<int()>& body) {
    return body();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"osid - open-set identification on precomputed feature vectors"};
    app.require_subcommand(1);
    std::function<int()> action;

    std::map<const CLI::App*, std::shared_ptr<std::string>> config_paths;
    const auto add_config_option = [&config_paths](CLI::App* cmd) {
        auto path = std::make_shared<std::string>();
        cmd->add_option("--config", *path,
                        "Flat key=value config file; explicit flags win");
        config_paths.emplace(cmd, std::move(path));
    };

    // ---- validate ----------------------------------------------------
    {
        auto* cmd = app.add_subcommand("validate", "Check a feature table");
        add_config_option(cmd);
        auto features = std::make_shared<std::string>();
        cmd->add_option("--features", *features, "Feature table CSV")->required();
        cmd->callback([&action, features] {
            action = [features]() -> int {
                const osid::Dataset d =
                    osid::parse_feature_table(osid::read_text_file(*features));
                const auto report = osid::validate_dataset(d);
                if (report.empty()) {
                    std::cout << "OK: " << d.size() << " records, dimension "
                              << d.dimension() << "\n";
                    return kExitOk;
                }
                for (const auto& v : report) {
                    std::cout << osid::to_string(v.kind) << ": " << v.detail << "\n";
                }
                std::cout << report.size() << " violation(s)\n";
                return kExitData;
            };
        });
    }

    // ---- protocol ----------------------------------------------------
    {
        auto* cmd = app.add_subcommand("protocol", "Build the open-set partition");
        add_config_option(cmd);
        auto features = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        cmd->add_option("--features", *features, "Feature table CSV")->required();
        cmd->add_option("--out", *out, "Write the partition JSON here");
        cmd->callback([&action, features, out] {
            action = [features, out]() -> int {
                const osid::Dataset d = osid::read_feature_table(*features);
                const auto partition = osid::build_partition(d);
                const std::string json = osid::partition_to_json(partition);
                if (out->empty()) {
                    std::cout << json << "\n";
                } else {
                    osid::write_text_file(*out, json);
                    std::cout << "partition: " << partition.gallery.size()
                              << " gallery subjects, |S|=" << partition.probes_known.size()
                              << " |K|=" << partition.probes_known_unknown.size()
                              << " |U|=" << partition.probes_unknown_unknown.size()
                              << " -> " << *out << "\n";
                }
                return kExitOk;
            };
        });
    }

    // ---- synth ---------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("synth", "Generate a synthetic feature table");
        add_config_option(cmd);
        auto options = std::make_shared<SynthOptions>();
        auto out = std::make_shared<std::string>();
        options->attach(cmd);
        cmd->add_option("--out", *out, "Output CSV path")->required();
        cmd->callback([&action, options, out] {
            action = [options, out]() -> int {
                const osid::Dataset d = osid::generate_synthetic(options->spec);
                osid::write_text_file(*out, osid::write_feature_table(d));
                std::cout << "wrote " << d.size() << " records to " << *out << "\n";
                return kExitOk;
            };
        });
    }

    // ---- fit-subspace ---------------------------------------------------
    {
        auto* cmd = app.add_subcommand("fit-subspace",
                                       "Fit the PCA+LDA projection on the training set");
        add_config_option(cmd);
        auto features = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto retention = std::make_shared<double>(0.99);
        cmd->add_option("--features", *features, "Feature table CSV")->required();
        cmd->add_option("--out", *out, "Model JSON path")->required();
        cmd->add_option("--retention", *retention, "PCA variance retention")
            ->check(CLI::Range(1e-9, 1.0))
            ->capture_default_str();
        cmd->callback([&action, features, out, retention] {
            action = [features, out, retention]() -> int {
                const osid::Dataset d = osid::read_feature_table(*features);
                osid::RunConfig cfg;
                cfg.method = osid::Method::Lda;
                cfg.pca_retention = *retention;
                // Reuse the pipeline's label assignment via a direct fit.
                const auto partition = osid::build_partition(d);
                const osid::Dataset training = osid::training_subset(d, partition);
                std::map<std::string, int> class_of;
                int next = 0;
                for (const auto& [identity, indices] : partition.gallery) {
                    class_of[identity] = next++;
                }
                std::vector<osid::FeatureVector> feats;
                std::vector<int> labels;
                for (const auto& rec : training.records) {
                    feats.push_back(rec.feature);
                    const auto it = class_of.find(rec.identity);
                    labels.push_back(it == class_of.end() ? next : it->second);
                }
                const auto model = osid::fit_subspace(feats, labels, *retention);
                osid::write_text_file(*out, osid::subspace_to_json(model));
                std::cout << "subspace: " << model.input_dim() << " -> "
                          << model.output_dim() << " dims -> " << *out << "\n";
                return kExitOk;
            };
        });
    }

    // ---- fit-evm ---------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("fit-evm",
                                       "Train the extreme value machine gallery model");
        add_config_option(cmd);
        auto features = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto cfg = std::make_shared<osid::EvmConfig>();
        auto fusion = std::make_shared<std::string>("max");
        auto raw_query = std::make_shared<bool>(false);
        cmd->add_option("--features", *features, "Feature table CSV")->required();
        cmd->add_option("--out", *out, "Model JSON path")->required();
        cmd->add_option("--alpha", cfg->alpha, "Distance multiplier")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--tail", cfg->tail_size, "Weibull tail size")
            ->check(CLI::Range(2, 1 << 30))
            ->capture_default_str();
        cmd->add_option("--fusion", *fusion, "max or avg")
            ->check(CLI::IsMember({"max", "avg"}))
            ->capture_default_str();
        cmd->add_flag("--raw-query-distance", *raw_query,
                      "Do not apply alpha to query-time distances");
        cmd->callback([&action, features, out, cfg, fusion, raw_query] {
            action = [features, out, cfg, fusion, raw_query]() -> int {
                const osid::Dataset d = osid::read_feature_table(*features);
                const auto partition = osid::build_partition(d);
                cfg->fusion = osid::fusion_from_string(*fusion);
                cfg->scale_query_distance = !*raw_query;
                const auto model =
                    osid::train_evm(osid::make_gallery_templates(d, partition),
                                    osid::training_subset(d, partition), *cfg);
                osid::write_text_file(*out, osid::evm_to_json(model));
                std::size_t fits = 0;
                for (const auto& s : model.subjects) fits += s.entries.size();
                std::cout << "evm: " << model.subjects.size() << " subjects, " << fits
                          << " Weibull fits -> " << *out << "\n";
                return kExitOk;
            };
        });
    }

    // ---- score ------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("score", "Score a probe set against the gallery");
        add_config_option(cmd);
        auto features = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto method = std::make_shared<std::string>("cos");
        auto fusion = std::make_shared<std::string>("max");
        auto probe_set = std::make_shared<std::string>("C");
        auto subspace_path = std::make_shared<std::string>();
        auto evm_path = std::make_shared<std::string>();
        cmd->add_option("--features", *features, "Feature table CSV")->required();
        cmd->add_option("--out", *out, "Score matrix CSV path")->required();
        cmd->add_option("--method", *method, method_fusion_help())
            ->check(CLI::IsMember({"cos", "lda", "evm"}))
            ->capture_default_str();
        cmd->add_option("--fusion", *fusion, "max or avg")
            ->check(CLI::IsMember({"max", "avg"}))
            ->capture_default_str();
        cmd->add_option("--probe-set", *probe_set, "C, O1, O2 or O3")
            ->check(CLI::IsMember({"C", "O1", "O2", "O3"}))
            ->capture_default_str();
        cmd->add_option("--subspace-model", *subspace_path,
                        "Subspace model JSON (required for lda)");
        cmd->add_option("--evm-model", *evm_path, "EVM model JSON (required for evm)");
        cmd->callback([&action, features, out, method, fusion, probe_set, subspace_path,
                       evm_path] {
            action = [features, out, method, fusion, probe_set, subspace_path,
                      evm_path]() -> int {
                const osid::Dataset d = osid::read_feature_table(*features);
                const auto partition = osid::build_partition(d);
                const auto gallery = osid::make_gallery_templates(d, partition);
                const auto probes = osid::subset(
                    d, osid::probe_set(partition, osid::probe_set_from_string(*probe_set)));

                osid::ScoringMethod scoring;
                scoring.method = osid::method_from_string(*method);
                scoring.fusion = osid::fusion_from_string(*fusion);
                osid::SubspaceModel subspace;
                osid::EvmGalleryModel evm;
                if (scoring.method == osid::Method::Lda) {
                    if (subspace_path->empty()) {
                        throw osid::InvalidInputError(
                            "--subspace-model is required for method lda");
                    }
                    subspace =
                        osid::subspace_from_json(osid::read_text_file(*subspace_path));
                    scoring.subspace = &subspace;
                } else if (scoring.method == osid::Method::Evm) {
                    if (evm_path->empty()) {
                        throw osid::InvalidInputError(
                            "--evm-model is required for method evm");
                    }
                    evm = osid::evm_from_json(osid::read_text_file(*evm_path));
                    scoring.evm = &evm;
                }

                const auto matrix = osid::score_all(scoring, gallery, probes);
                osid::write_text_file(*out, osid::score_matrix_to_csv(matrix));
                std::cout << "scores: " << matrix.rows() << " x " << matrix.cols()
                          << " -> " << *out << "\n";
                return kExitOk;
            };
        });
    }

    // ---- eval-cmc / eval-roc / eval-dir -----------------------------------
    {
        auto* cmd = app.add_subcommand("eval-cmc", "Cumulative match curve from scores");
        add_config_option(cmd);
        auto scores = std::make_shared<std::string>();
        auto features = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        cmd->add_option("--scores", *scores, "Score matrix CSV")->required();
        cmd->add_option("--features", *features, "Feature table CSV (for the partition)")
            ->required();
        cmd->add_option("--out", *out, "Curve CSV path")->required();
        cmd->callback([&action, scores, features, out] {
            action = [scores, features, out]() -> int {
                const auto partition =
                    osid::build_partition(osid::read_feature_table(*features));
                const auto curve = osid::cmc_curve(load_scores(*scores), partition);
                osid::write_text_file(*out, osid::cmc_to_csv(curve));
                std::cout << "cmc(1) = " << curve.front().y << " -> " << *out << "\n";
                return kExitOk;
            };
        });
    }
    {
        auto* cmd = app.add_subcommand("eval-roc", "Verification ROC from scores");
        add_config_option(cmd);
        auto scores = std::make_shared<std::string>();
        auto features = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        cmd->add_option("--scores", *scores, "Score matrix CSV")->required();
        cmd->add_option("--features", *features, "Feature table CSV (for the partition)")
            ->required();
        cmd->add_option("--out", *out, "Curve CSV path")->required();
        cmd->callback([&action, scores, features, out] {
            action = [scores, features, out]() -> int {
                const auto partition =
                    osid::build_partition(osid::read_feature_table(*features));
                const auto curve = osid::roc_curve(load_scores(*scores), partition);
                osid::write_text_file(*out, osid::roc_to_csv(curve));
                std::cout << curve.size() << " ROC points -> " << *out << "\n";
                return kExitOk;
            };
        });
    }
    {
        auto* cmd = app.add_subcommand(
            "eval-dir", "Detection and identification rate curve from scores");
        add_config_option(cmd);
        auto scores = std::make_shared<std::string>();
        auto features = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto probe_set = std::make_shared<std::string>("O3");
        auto rank = std::make_shared<int>(1);
        auto policy = std::make_shared<std::string>("paper-strict");
        cmd->add_option("--scores", *scores, "Score matrix CSV")->required();
        cmd->add_option("--features", *features, "Feature table CSV (for the partition)")
            ->required();
        cmd->add_option("--out", *out, "Curve CSV path")->required();
        cmd->add_option("--probe-set", *probe_set, "O1, O2 or O3")
            ->check(CLI::IsMember({"O1", "O2", "O3"}))
            ->capture_default_str();
        cmd->add_option("--rank", *rank, "Identification rank")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--policy", *policy, "paper-strict or above-max")
            ->check(CLI::IsMember({"paper-strict", "above-max"}))
            ->capture_default_str();
        cmd->callback([&action, scores, features, out, probe_set, rank, policy] {
            action = [scores, features, out, probe_set, rank, policy]() -> int {
                const auto partition =
                    osid::build_partition(osid::read_feature_table(*features));
                const auto curve = osid::dir_curve(
                    load_scores(*scores), partition,
                    osid::probe_set_from_string(*probe_set), *rank,
                    osid::threshold_policy_from_string(*policy));
                osid::write_text_file(*out, osid::dir_to_csv(curve));
                std::cout << curve.size() << " DIR points -> " << *out << "\n";
                return kExitOk;
            };
        });
    }

    // ---- run ---------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand(
            "run", "End-to-end experiment grid (methods x fusions x probe sets)");
        add_config_option(cmd);
        auto features = std::make_shared<std::string>();
        auto out_dir = std::make_shared<std::string>("osid-out");
        auto methods = std::make_shared<std::vector<std::string>>();
        auto fusions = std::make_shared<std::vector<std::string>>();
        auto probe_sets = std::make_shared<std::vector<std::string>>();
        auto base = std::make_shared<osid::RunConfig>();
        auto policy = std::make_shared<std::string>("paper-strict");
        auto use_synth = std::make_shared<bool>(false);
        auto synth = std::make_shared<SynthOptions>();
        auto raw_query = std::make_shared<bool>(false);

        cmd->add_option("--features", *features, "Feature table CSV");
        cmd->add_flag("--synth", *use_synth,
                      "Generate a synthetic dataset instead of reading --features");
        synth->attach(cmd);
        cmd->add_option("--out-dir", *out_dir, "Output directory")
            ->capture_default_str();
        cmd->add_option("--method", *methods, "Restrict to these methods")
            ->check(CLI::IsMember({"cos", "lda", "evm"}))
            ->delimiter(',');
        cmd->add_option("--fusion", *fusions, "Restrict to these fusions")
            ->check(CLI::IsMember({"max", "avg"}))
            ->delimiter(',');
        cmd->add_option("--probe-set", *probe_sets, "Restrict to these probe sets")
            ->check(CLI::IsMember({"C", "O1", "O2", "O3"}))
            ->delimiter(',');
        cmd->add_option("--alpha", base->alpha, "EVM distance multiplier")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--tail", base->tail_size, "EVM Weibull tail size")
            ->check(CLI::Range(2, 1 << 30))
            ->capture_default_str();
        cmd->add_option("--retention", base->pca_retention, "PCA variance retention")
            ->check(CLI::Range(1e-9, 1.0))
            ->capture_default_str();
        cmd->add_option("--rank", base->rank, "Identification rank")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--far-targets", base->far_targets,
                        "False-alarm targets for the summary")
            ->delimiter(',')
            ->capture_default_str();
        cmd->add_option("--policy", *policy, "Threshold policy")
            ->check(CLI::IsMember({"paper-strict", "above-max"}))
            ->capture_default_str();
        cmd->add_flag("--raw-query-distance", *raw_query,
                      "Do not apply alpha to EVM query-time distances");

        cmd->callback([&action, features, out_dir, methods, fusions, probe_sets, base,
                       policy, use_synth, synth, raw_query] {
            action = [features, out_dir, methods, fusions, probe_sets, base, policy,
                      use_synth, synth, raw_query]() -> int {
                osid::Dataset dataset;
                fs::create_directories(*out_dir);
                if (*use_synth) {
                    dataset = osid::generate_synthetic(synth->spec);
                    osid::write_text_file(
                        (fs::path(*out_dir) / "synthetic_features.csv").string(),
                        osid::write_feature_table(dataset));
                } else if (!features->empty()) {
                    dataset = osid::read_feature_table(*features);
                } else {
                    throw osid::InvalidInputError(
                        "run needs --features FILE or --synth");
                }

                base->policy = osid::threshold_policy_from_string(*policy);
                base->evm_scale_query = !*raw_query;

                std::vector<osid::Method> method_list = {
                    osid::Method::Cosine, osid::Method::Lda, osid::Method::Evm};
                if (!methods->empty()) {
                    method_list.clear();
                    for (const auto& m : *methods) {
                        method_list.push_back(osid::method_from_string(m));
                    }
                }
                std::vector<osid::Fusion> fusion_list = {osid::Fusion::Max,
                                                         osid::Fusion::Avg};
                if (!fusions->empty()) {
                    fusion_list.clear();
                    for (const auto& f : *fusions) {
                        fusion_list.push_back(osid::fusion_from_string(f));
                    }
                }
                std::vector<osid::ProbeSetId> set_list = {
                    osid::ProbeSetId::C, osid::ProbeSetId::O1, osid::ProbeSetId::O2,
                    osid::ProbeSetId::O3};
                if (!probe_sets->empty()) {
                    set_list.clear();
                    for (const auto& s : *probe_sets) {
                        set_list.push_back(osid::probe_set_from_string(s));
                    }
                }

                std::string grid = "[";
                bool first = true;
                for (const auto method : method_list) {
                    for (const auto fusion : fusion_list) {
                        for (const auto probe_set : set_list) {
                            osid::RunConfig cfg = *base;
                            cfg.method = method;
                            cfg.fusion = fusion;
                            cfg.probe_set = probe_set;
                            const auto result = osid::run_experiment(dataset, cfg);
                            osid::write_experiment_outputs(result, *out_dir);
                            if (!first) grid += ",";
                            first = false;
                            grid += osid::summary_to_json(result);
                            std::cout << osid::experiment_file_prefix(cfg)
                                      << ": rank1 = " << result.rank1 << "\n";
                        }
                    }
                }
                grid += "]";
                osid::write_text_file((fs::path(*out_dir) / "run_summary.json").string(),
                                      grid);
                std::cout << "outputs in " << *out_dir << "\n";
                return kExitOk;
            };
        });
    }

    try {
        app.parse(argc, argv);
        for (CLI::App* sub : app.get_subcommands()) {
            const auto it = config_paths.find(sub);
            if (it != config_paths.end() && !it->second->empty()) {
                apply_flat_config(*sub, *it->second);
            }
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const ConfigUsageError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        return run_command(action);
    } catch (const osid::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const osid::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitNumeric;
    }
}
