#include <cmath>

#include <doctest.h>

#include "osid/evm.hpp"
#include "osid/rng.hpp"

using namespace osid;

namespace {

FeatureVector on_circle(double radians) {
    return {std::cos(radians), std::sin(radians)};
}

// Two subjects with 3 well-separated features each, plus background
// identities, all on the unit circle.
struct ToySetup {
    std::vector<GalleryTemplate> gallery;
    Dataset training;
};

ToySetup toy_setup() {
    ToySetup s;
    s.gallery.push_back(make_gallery_template(
        "a", {on_circle(0.00), on_circle(0.05), on_circle(-0.05)}));
    s.gallery.push_back(make_gallery_template(
        "b", {on_circle(2.00), on_circle(2.05), on_circle(1.95)}));
    for (const auto& t : s.gallery) {
        int img = 1;
        for (const auto& f : t.features) {
            s.training.records.push_back({t.identity, img++, f});
        }
    }
    int bg = 0;
    for (double angle : {0.7, 1.1, 1.4, 2.9, 3.5, 4.2, 5.0, 5.6}) {
        s.training.records.push_back({"bg" + std::to_string(bg++), 1, on_circle(angle)});
    }
    return s;
}

}  // namespace

TEST_CASE("negative distances exclude the anchor identity") {
    Dataset training;
    training.records.push_back({"a", 1, {1.0, 0.0}});
    training.records.push_back({"a", 2, {0.9, 0.1}});
    training.records.push_back({"b", 1, {0.0, 1.0}});

    const auto d = negative_distances({1.0, 0.0}, "a", training, 0.7);
    REQUIRE(d.size() == 1);
    CHECK(d[0] == doctest::Approx(0.7).epsilon(1e-12));

    // Same anchor against only own-identity features: nothing remains.
    training.records.pop_back();
    CHECK_THROWS_AS(negative_distances({1.0, 0.0}, "a", training, 0.7), DataError);
}

TEST_CASE("alpha scales the distance set") {
    Dataset training;
    training.records.push_back({"b", 1, {0.0, 1.0}});
    const auto half = negative_distances({1.0, 0.0}, "a", training, 0.5);
    CHECK(half[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(negative_distances({1.0, 0.0}, "a", training, 0.0),
                    InvalidInputError);
}

TEST_CASE("training retains every extreme vector") {
    const ToySetup s = toy_setup();
    EvmConfig cfg;
    cfg.tail_size = 5;

    SUBCASE("max mode keeps one fit per enrolled feature") {
        cfg.fusion = Fusion::Max;
        const EvmGalleryModel model = train_evm(s.gallery, s.training, cfg);
        REQUIRE(model.subjects.size() == 2);
        CHECK(model.subjects[0].entries.size() == 3);
        CHECK(model.subjects[1].entries.size() == 3);
    }
    SUBCASE("avg mode keeps one fit per subject") {
        cfg.fusion = Fusion::Avg;
        const EvmGalleryModel model = train_evm(s.gallery, s.training, cfg);
        REQUIRE(model.subjects.size() == 2);
        CHECK(model.subjects[0].entries.size() == 1);
        CHECK(model.subjects[1].entries.size() == 1);
        CHECK(model.subjects[0].entries[0].feature == s.gallery[0].mean);
    }
}

TEST_CASE("oversized tails clamp and record it") {
    const ToySetup s = toy_setup();
    EvmConfig cfg;
    cfg.tail_size = 500;
    const EvmGalleryModel model = train_evm(s.gallery, s.training, cfg);
    for (const auto& subject : model.subjects) {
        for (const auto& entry : subject.entries) {
            CHECK(entry.fit.tail_clamped);
            // 8 background + 3 other-subject features.
            CHECK(entry.fit.tail_size_used == 11);
        }
    }
}

TEST_CASE("probe equal to an enrolled feature scores 1") {
    const ToySetup s = toy_setup();
    EvmConfig cfg;
    cfg.tail_size = 5;
    const EvmGalleryModel model = train_evm(s.gallery, s.training, cfg);
    const auto scores = score_max(model, s.gallery[0].features[1]);
    CHECK(scores[0] == 1.0);  // psi(0) for the matching feature
    CHECK(scores[1] < scores[0]);
}

TEST_CASE("near subject outranks the far subject") {
    const ToySetup s = toy_setup();
    EvmConfig cfg;
    cfg.tail_size = 5;
    const EvmGalleryModel model = train_evm(s.gallery, s.training, cfg);
    const auto scores = score_max(model, on_circle(1.9));  // close to subject b
    CHECK(scores[1] > scores[0]);

    // Verify against a direct survival-function evaluation.
    double expected = 0.0;
    for (const auto& entry : model.subjects[1].entries) {
        const double d = cfg.alpha * cosine_distance(entry.feature, on_circle(1.9));
        expected = std::max(expected, psi(entry.fit, d));
    }
    CHECK(scores[1] == expected);
}

TEST_CASE("avg scores match a hand-composed survival evaluation") {
    const ToySetup s = toy_setup();
    EvmConfig cfg;
    cfg.fusion = Fusion::Avg;
    cfg.tail_size = 5;
    const EvmGalleryModel model = train_evm(s.gallery, s.training, cfg);

    const FeatureVector probe = on_circle(0.3);
    const auto scores = score_avg(model, probe);
    REQUIRE(scores.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& entry = model.subjects[i].entries[0];
        const double expected =
            psi(entry.fit, cfg.alpha * cosine_distance(entry.feature, probe));
        CHECK(scores[i] == doctest::Approx(expected).epsilon(1e-12));
        CHECK(scores[i] >= 0.0);
        CHECK(scores[i] <= 1.0);
    }

    CHECK(score_avg(model, model.subjects[0].entries[0].feature)[0] == 1.0);
    CHECK_THROWS_AS(score_max(model, probe), InvalidInputError);
}

TEST_CASE("query scaling flag changes the scored distance") {
    const ToySetup s = toy_setup();
    EvmConfig cfg;
    cfg.tail_size = 5;
    cfg.scale_query_distance = false;
    const EvmGalleryModel raw = train_evm(s.gallery, s.training, cfg);
    cfg.scale_query_distance = true;
    const EvmGalleryModel scaled = train_evm(s.gallery, s.training, cfg);

    const FeatureVector probe = on_circle(0.4);
    // Unscaled query distances are larger, so inclusion drops.
    CHECK(score_max(raw, probe)[0] < score_max(scaled, probe)[0]);
}

TEST_CASE("max-mode score never decreases when all distances shrink") {
    const ToySetup s = toy_setup();
    EvmConfig cfg;
    cfg.tail_size = 5;
    const EvmGalleryModel model = train_evm(s.gallery, s.training, cfg);
    // Walking toward subject a shrinks the distance to each of its features.
    double previous = 0.0;
    for (double angle : {1.5, 1.2, 0.9, 0.6, 0.3, 0.1}) {
        const double score = score_max(model, on_circle(angle))[0];
        CHECK(score >= previous);
        previous = score;
    }
}

TEST_CASE("same-identity training features cannot influence the fit") {
    ToySetup s = toy_setup();
    EvmConfig cfg;
    cfg.tail_size = 5;
    const EvmGalleryModel before = train_evm(s.gallery, s.training, cfg);

    for (auto& rec : s.training.records) {
        if (rec.identity == "a") rec.feature = on_circle(0.8);  // heavy perturbation
    }
    const EvmGalleryModel after = train_evm(s.gallery, s.training, cfg);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(after.subjects[0].entries[i].fit.shape ==
              before.subjects[0].entries[i].fit.shape);
        CHECK(after.subjects[0].entries[i].fit.scale ==
              before.subjects[0].entries[i].fit.scale);
    }
    // Subject b saw its cross-class distances change.
    CHECK(after.subjects[1].entries[0].fit.scale !=
          before.subjects[1].entries[0].fit.scale);
}

TEST_CASE("training errors carry the subject identity") {
    ToySetup s = toy_setup();
    s.training.records.clear();
    s.training.records.push_back({"a", 1, on_circle(0.0)});
    s.training.records.push_back({"a", 2, on_circle(0.1)});
    EvmConfig cfg;
    cfg.tail_size = 5;
    try {
        train_evm(s.gallery, s.training, cfg);
        FAIL("expected a training error");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("subject 'a'") != std::string::npos);
    }
}

TEST_CASE("serialized models are deterministic and round-trip") {
    const ToySetup s = toy_setup();
    EvmConfig cfg;
    cfg.tail_size = 6;
    const std::string first = evm_to_json(train_evm(s.gallery, s.training, cfg));
    const std::string second = evm_to_json(train_evm(s.gallery, s.training, cfg));
    CHECK(first == second);

    const EvmGalleryModel back = evm_from_json(first);
    CHECK(evm_to_json(back) == first);
    CHECK(back.config.tail_size == 6);
    CHECK(back.subjects.size() == 2);

    CHECK_THROWS_AS(evm_from_json("not json"), ParseError);
    CHECK_THROWS_AS(evm_from_json("{\"config\":{}}"), ParseError);
}
