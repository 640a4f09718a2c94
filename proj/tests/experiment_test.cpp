#include <cstdlib>
#include <filesystem>

#include <doctest.h>

#include "osid/dataset_io.hpp"
#include "osid/experiment.hpp"
#include "osid/synthetic.hpp"

using namespace osid;

namespace {

Dataset small_dataset() {
    SyntheticSpec spec;
    spec.dimension = 16;
    spec.known = 4;
    spec.known_unknown = 3;
    spec.unknown_unknown = 5;
    spec.images_per_known = 5;
    spec.sigma = 0.05;
    spec.seed = 31;
    return generate_synthetic(spec);
}

}  // namespace

TEST_CASE("a single-subject gallery is always rank 1") {
    SyntheticSpec spec;
    spec.dimension = 8;
    spec.known = 1;
    spec.known_unknown = 2;
    spec.unknown_unknown = 2;
    spec.images_per_known = 5;
    spec.seed = 7;

    RunConfig cfg;  // cosine / max / C
    const auto result = run_experiment(generate_synthetic(spec), cfg);
    CHECK(result.rank1 == 1.0);
    CHECK(result.cmc.size() == 1);
    CHECK(result.known_identities == 1);
}

TEST_CASE("max and avg EVM cells produce distinct but valid models") {
    const Dataset d = small_dataset();
    RunConfig cfg;
    cfg.method = Method::Evm;
    cfg.probe_set = ProbeSetId::O3;
    cfg.tail_size = 8;

    cfg.fusion = Fusion::Max;
    const auto max_result = run_experiment(d, cfg);
    cfg.fusion = Fusion::Avg;
    const auto avg_result = run_experiment(d, cfg);

    CHECK(max_result.dir.size() > 1);
    CHECK(avg_result.dir.size() > 1);
    for (std::size_t i = 1; i < max_result.dir.size(); ++i) {
        CHECK(max_result.dir[i].x >= max_result.dir[i - 1].x);
        CHECK(max_result.dir[i].y >= max_result.dir[i - 1].y);
    }
    // Same pipeline, different fusion: the score matrices differ.
    CHECK(max_result.scores.scores != avg_result.scores.scores);
}

TEST_CASE("open-set summaries report the far targets") {
    const Dataset d = small_dataset();
    RunConfig cfg;
    cfg.probe_set = ProbeSetId::O1;
    cfg.far_targets = {0.5, 1.0};
    const auto result = run_experiment(d, cfg);
    REQUIRE(result.far_results.size() == 2);
    CHECK(result.far_results[0].target == 0.5);
    for (const auto& far_result : result.far_results) {
        if (far_result.threshold) {
            CHECK(*far_result.achieved_far <= far_result.target);
        }
    }
    const std::string json = summary_to_json(result);
    CHECK(json.find("\"dir_at_far\"") != std::string::npos);
    CHECK(json.find("\"partition_counts\"") != std::string::npos);
}

TEST_CASE("experiment errors name the failing stage") {
    Dataset bad;
    bad.records.push_back({"only", 1, {1.0, 0.0}});
    bad.records.push_back({"only", 2, {1.0, 0.1}});
    RunConfig cfg;
    try {
        run_experiment(bad, cfg);
        FAIL("expected a protocol error");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("while building the protocol partition") !=
              std::string::npos);
    }
}

TEST_CASE("outputs are deterministic across runs and worker counts") {
    namespace fs = std::filesystem;
    const Dataset d = small_dataset();
    RunConfig cfg;
    cfg.method = Method::Evm;
    cfg.fusion = Fusion::Max;
    cfg.probe_set = ProbeSetId::O3;
    cfg.tail_size = 8;

    const auto run_with_workers = [&](const char* workers, const std::string& dir) {
        setenv("OSID_WORKERS", workers, 1);
        const auto result = run_experiment(d, cfg);
        const auto files = write_experiment_outputs(result, dir);
        std::string combined;
        for (const auto& f : files) combined += read_text_file(f);
        return combined;
    };

    const auto base = fs::temp_directory_path() / "osid_determinism";
    fs::remove_all(base);
    const std::string a = run_with_workers("1", (base / "a").string());
    const std::string b = run_with_workers("4", (base / "b").string());
    const std::string c = run_with_workers("1", (base / "c").string());
    unsetenv("OSID_WORKERS");
    CHECK(a == b);
    CHECK(a == c);
    CHECK(!a.empty());
}

TEST_CASE("closed-set outputs include CMC and ROC files") {
    namespace fs = std::filesystem;
    const Dataset d = small_dataset();
    RunConfig cfg;  // cosine / max / C
    const auto result = run_experiment(d, cfg);
    const auto dir = fs::temp_directory_path() / "osid_outputs_c";
    fs::remove_all(dir);
    const auto files = write_experiment_outputs(result, dir.string());
    REQUIRE(files.size() == 3);
    CHECK(files[0].ends_with("cos_max_C_cmc.csv"));
    CHECK(files[1].ends_with("cos_max_C_roc.csv"));
    CHECK(files[2].ends_with("cos_max_C_summary.json"));
    for (const auto& f : files) CHECK(fs::exists(f));
}
