#include <filesystem>

#include <doctest.h>

#include "osid/dataset_io.hpp"
#include "osid/synthetic.hpp"

using namespace osid;

namespace {

const std::string kValidTable =
    "identity,image,f0,f1\n"
    "alice,1,0.5,-0.25\n"
    "bob,2,1,2\n";

std::string temp_file(const std::string& name, const std::string& content) {
    const auto path =
        (std::filesystem::temp_directory_path() / ("osid_test_" + name)).string();
    write_text_file(path, content);
    return path;
}

}  // namespace

TEST_CASE("feature table parses valid input") {
    const Dataset d = parse_feature_table(kValidTable);
    REQUIRE(d.size() == 2);
    CHECK(d.dimension() == 2);
    CHECK(d.records[0].identity == "alice");
    CHECK(d.records[0].image_index == 1);
    CHECK(d.records[0].feature == FeatureVector{0.5, -0.25});
    CHECK(d.records[1].feature == FeatureVector{1.0, 2.0});
}

TEST_CASE("feature table parse errors cite the line") {
    const auto check_line = [](const std::string& text, const std::string& needle) {
        try {
            parse_feature_table(text);
            FAIL("expected a parse error for: ", text);
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    check_line("identity,image,f0\nx,1,0.5,9\n", "line 2");
    check_line("identity,image,f0\nx,1\n", "line 2");
    check_line("identity,image,f0\nx,one,0.5\n", "line 2");
    check_line("identity,image,f0\nx,1,abc\n", "line 2");
    check_line("id,image,f0\n", "line 1");
    check_line("identity,image,g0\n", "line 1");
    check_line("", "line 1");
}

TEST_CASE("read_feature_table rejects invariant violations") {
    const auto path = temp_file("dup.csv",
                                "identity,image,f0\n"
                                "x,1,0.5\n"
                                "x,1,0.75\n");
    CHECK_THROWS_AS(read_feature_table(path), DataError);

    const auto nan_path = temp_file("nan.csv",
                                    "identity,image,f0\n"
                                    "x,1,nan\n");
    CHECK_THROWS_AS(read_feature_table(nan_path), DataError);

    CHECK_THROWS_AS(read_feature_table("/nonexistent/osid.csv"), DataError);

    const auto ok_path = temp_file("ok.csv", kValidTable);
    CHECK(read_feature_table(ok_path).size() == 2);
}

TEST_CASE("write then parse is the identity on canonical tables") {
    const Dataset d = parse_feature_table(kValidTable);
    const std::string text = write_feature_table(d);
    const Dataset back = parse_feature_table(text);
    REQUIRE(back.size() == d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(back.records[i].identity == d.records[i].identity);
        CHECK(back.records[i].image_index == d.records[i].image_index);
        CHECK(back.records[i].feature == d.records[i].feature);
    }
    CHECK(write_feature_table(back) == text);  // canonical form is a fixed point

    Dataset bad;
    bad.records.push_back({"with,comma", 1, {1.0}});
    CHECK_THROWS_AS(write_feature_table(bad), InvalidInputError);
}

TEST_CASE("synthetic generation is deterministic") {
    SyntheticSpec spec;
    spec.dimension = 8;
    spec.known = 3;
    spec.known_unknown = 2;
    spec.unknown_unknown = 4;
    spec.images_per_known = 4;
    spec.seed = 123;

    const Dataset a = generate_synthetic(spec);
    const Dataset b = generate_synthetic(spec);
    CHECK(write_feature_table(a) == write_feature_table(b));

    spec.seed = 124;
    CHECK(write_feature_table(generate_synthetic(spec)) != write_feature_table(a));
}

TEST_CASE("synthetic record counts match the spec") {
    SyntheticSpec spec;
    spec.dimension = 16;
    spec.known = 50;
    spec.known_unknown = 50;
    spec.unknown_unknown = 100;
    spec.images_per_known = 6;
    const Dataset d = generate_synthetic(spec);
    CHECK(d.size() == 50 * 6 + 50 * 2 + 100);
    CHECK(validate_dataset(d).empty());
}

TEST_CASE("vanishing noise collapses each identity onto one direction") {
    SyntheticSpec spec;
    spec.dimension = 8;
    spec.known = 2;
    spec.known_unknown = 0;
    spec.unknown_unknown = 0;
    spec.sigma = 1e-300;
    const Dataset d = generate_synthetic(spec);
    for (std::size_t i = 1; i < d.size(); ++i) {
        if (d.records[i].identity == d.records[i - 1].identity) {
            CHECK(d.records[i].feature == d.records[i - 1].feature);
        } else {
            CHECK(d.records[i].feature != d.records[i - 1].feature);
        }
    }
}

TEST_CASE("synthetic spec validation") {
    SyntheticSpec spec;
    spec.known = 0;
    CHECK_THROWS_AS(generate_synthetic(spec), InvalidInputError);
    spec.known = 1;
    spec.images_per_known = 3;
    CHECK_THROWS_AS(generate_synthetic(spec), InvalidInputError);
    spec.images_per_known = 4;
    spec.sigma = 0.0;
    CHECK_THROWS_AS(generate_synthetic(spec), InvalidInputError);
    spec.sigma = 0.1;
    spec.dimension = 0;
    CHECK_THROWS_AS(generate_synthetic(spec), InvalidInputError);
}
