#include <doctest.h>

#include <fstream>

#include "skinmap/errors.hpp"
#include "skinmap/model_file.hpp"
#include "skinmap/random.hpp"
#include "test_support.hpp"

using namespace skinmap;

namespace {

ModelFile sample_model(Algorithm algorithm) {
    Eigen::Matrix3d a;
    a << 0.0031, 0.0007, -0.0002, 0.0007, 0.0024, 0.0001, -0.0002, 0.0001, 0.0052;
    TrainingInfo info;
    info.clusters = 2;
    if (algorithm == Algorithm::fcm) info.fuzzifier = 2.0;
    info.pixels_requested = 23000;
    info.pixels_used = 9000;
    info.pixels_available = 9000;
    info.iterations = 41;
    info.converged = true;
    GaussianMixtured mixture({{0.1 + 1.0 / 3.0, Eigen::Vector3d(0.61, 0.42, 0.6789012345678901), a},
                              {1.0 - (0.1 + 1.0 / 3.0), Eigen::Vector3d(0.3, 1.0 / 7.0, 0.55),
                               Eigen::Matrix3d::Identity() * 1e-3}});
    return ModelFile{{ColorSpace::ycbcr, ChannelMode::full3}, algorithm, 12345678901234ULL, info, std::move(mixture)};
}

nlohmann::json valid_doc() { return model_to_json(sample_model(Algorithm::em)); }

}  // namespace

TEST_CASE("round trip preserves the density") {
    const auto dir = testing::scratch_dir("model_file");
    for (auto algorithm : {Algorithm::em, Algorithm::fcm}) {
        const auto model = sample_model(algorithm);
        write_model(dir / "m.json", model);
        const auto back = read_model(dir / "m.json");
        CHECK(back.space == model.space);
        CHECK(back.algorithm == algorithm);
        CHECK(back.seed == model.seed);
        CHECK(back.training.iterations == 41);
        CHECK(back.training.fuzzifier.has_value() == (algorithm == Algorithm::fcm));
        REQUIRE(back.mixture.size() == 2);

        Rng rng(1);
        for (int i = 0; i < 200; ++i) {
            const Eigen::Vector3d x(0.2 + 0.6 * rng.uniform01(), 0.1 + 0.5 * rng.uniform01(), 0.4 + 0.4 * rng.uniform01());
            const double p0 = mixture_pdf(x, model.mixture);
            const double p1 = mixture_pdf(x, back.mixture);
            CHECK(std::abs(p1 - p0) <= 1e-12 * std::max(1.0, std::abs(p0)));
        }
    }
}

TEST_CASE("document layout") {
    const auto doc = model_to_json(sample_model(Algorithm::fcm));
    CHECK(doc.at("format_version") == kModelFormatVersion);
    CHECK(doc.at("space") == "YCBCR");
    CHECK(doc.at("mode") == "FULL3");
    CHECK(doc.at("algorithm") == "FCM");
    CHECK(doc.at("dim") == 3);
    CHECK(doc.at("training").at("fuzzifier") == 2.0);
    CHECK(doc.at("components").size() == 2);
    CHECK(doc.at("components")[0].at("covariance").size() == 3);
    CHECK_FALSE(model_to_json(sample_model(Algorithm::em)).at("training").contains("fuzzifier"));
}

TEST_CASE("malformed documents are data errors") {
    const auto dir = testing::scratch_dir("model_file_bad");
    {
        std::ofstream out(dir / "broken.json");
        out << "{ \"format_version\": 1, ";
    }
    CHECK_THROWS_AS(read_model(dir / "broken.json"), DataError);
    CHECK_THROWS_AS(read_model(dir / "absent.json"), MissingFileError);

    auto doc = valid_doc();
    doc.erase("components");
    CHECK_THROWS_AS(model_from_json(doc), DataError);

    doc = valid_doc();
    doc["format_version"] = 99;
    CHECK_THROWS_AS(model_from_json(doc), DataError);

    doc = valid_doc();
    doc["space"] = "LAB";
    CHECK_THROWS_AS(model_from_json(doc), DataError);

    doc = valid_doc();
    doc["mode"] = "CHROMA2";  // components still carry 3-vectors
    CHECK_THROWS_AS(model_from_json(doc), DataError);

    doc = valid_doc();
    doc["components"][0]["mean"] = {0.1, 0.2};
    CHECK_THROWS_AS(model_from_json(doc), DataError);

    doc = valid_doc();
    doc["components"][0]["weight"] = 0.9;  // weights no longer sum to 1
    CHECK_THROWS_AS(model_from_json(doc), DataError);

    doc = valid_doc();
    doc["components"][1]["covariance"] = {{1.0, 0.0, 0.0}, {0.0, -1.0, 0.0}, {0.0, 0.0, 1.0}};
    CHECK_THROWS_AS(model_from_json(doc), DataError);

    doc = valid_doc();
    doc["components"][0]["weight"] = "heavy";
    CHECK_THROWS_AS(model_from_json(doc), DataError);
}
