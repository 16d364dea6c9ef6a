#include <doctest.h>

#include <fstream>
#include <sstream>

#include "skinmap/cli.hpp"
#include "skinmap/png_io.hpp"
#include "test_support.hpp"

using namespace skinmap;
namespace fs = std::filesystem;
using skinmap::testing::scratch_dir;
using skinmap::testing::slurp;

namespace {

const fs::path kData = SKINMAP_TEST_DATA;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

// Shared synthetic dataset, generated once per process.
const fs::path& synth_root() {
    static const fs::path root = [] {
        const auto dir = scratch_dir("cli_synth");
        const auto r = invoke({"synth", "--out", dir.string(), "--seed", "5"});
        REQUIRE(r.code == 0);
        return dir;
    }();
    return root;
}

fs::path manifest() { return synth_root() / "manifest.txt"; }

}  // namespace

TEST_CASE("usage and version") {
    auto r = invoke({"--version"});
    CHECK(r.code == 0);
    CHECK(r.out.find(std::string("skinmap ") + cli::kVersion) != std::string::npos);

    CHECK(invoke({}).code == cli::kExitUsage);
    CHECK(invoke({"frobnicate"}).code == cli::kExitUsage);
    CHECK(invoke({"train", "--out", "x.json"}).code == cli::kExitUsage);
    CHECK(invoke({"train", "--manifest", "m", "--out", "x", "--space", "lab"}).code == cli::kExitUsage);
    CHECK(invoke({"train", "--manifest", "m", "--out", "x", "--fuzzifier", "1"}).code == cli::kExitUsage);
    CHECK(invoke({"train", "--manifest", "m", "--out", "x", "--clusters", "0"}).code == cli::kExitUsage);

    r = invoke({"train", "--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("23000") != std::string::npos);
    CHECK(r.out.find("--fuzzifier") != std::string::npos);
    CHECK(r.out.find("--clusters") != std::string::npos);
}

TEST_CASE("fit defaults") {
    const cli::FitOptions fit;
    CHECK(fit.clusters == 3);
    CHECK(fit.fuzzifier == 2.0);
    CHECK(fit.pixels == 23000);
    CHECK(cli::sampling_seed(10) == 10);
    CHECK(cli::fcm_seed(10) == 11);
    CHECK(cli::em_seed(10) == 12);
}

TEST_CASE("synth output") {
    const auto root = synth_root();
    const auto lines = lines_of(slurp(manifest()));
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "images/synth_000.png,masks/synth_000.png");
    CHECK(fs::exists(root / "spec.json"));
    const auto mask = read_png_mask(root / "masks" / "synth_002.png");
    CHECK(mask.width == 48);
    CHECK(mask.skin_count() == 900);

    const auto again = scratch_dir("cli_synth_again");
    REQUIRE(invoke({"synth", "--out", again.string(), "--seed", "5"}).code == 0);
    CHECK(slurp(again / "images" / "synth_003.png") == slurp(root / "images" / "synth_003.png"));
    CHECK(slurp(again / "spec.json") == slurp(root / "spec.json"));

    // spec.json reproduces the dataset
    const auto from_spec = scratch_dir("cli_synth_spec");
    REQUIRE(invoke({"synth", "--spec", (root / "spec.json").string(), "--out", from_spec.string(), "--seed", "5"}).code ==
            0);
    CHECK(slurp(from_spec / "images" / "synth_001.png") == slurp(root / "images" / "synth_001.png"));

    std::ofstream(from_spec / "bad.json") << "{\"images\": -2}";
    CHECK(invoke({"synth", "--spec", (from_spec / "bad.json").string(), "--out", from_spec.string()}).code ==
          cli::kExitData);
}

TEST_CASE("train, spm and eval") {
    const auto dir = scratch_dir("cli_pipeline");
    for (const char* algorithm : {"em", "fcm"}) {
        const auto model = dir / (std::string(algorithm) + ".json");
        const std::vector<std::string> args{"train", "--manifest", manifest().string(), "--space", "YCbCr", "--mode",
                                            "chroma2", "--algorithm", algorithm, "--pixels", "1500", "--seed", "3",
                                            "--out", model.string()};
        auto r = invoke(args);
        REQUIRE_MESSAGE(r.code == 0, r.err);
        const auto first = slurp(model);
        REQUIRE(invoke(args).code == 0);
        CHECK(slurp(model) == first);

        const auto loaded = read_model(model);
        CHECK(loaded.space == FeatureSpace{ColorSpace::ycbcr, ChannelMode::chroma2});
        CHECK(loaded.training.pixels_used == 1500);
        CHECK(loaded.training.pixels_available == 3600);

        const auto csv = dir / (std::string(algorithm) + "_roc.csv");
        const auto svg = dir / (std::string(algorithm) + "_roc.svg");
        r = invoke({"eval", "--model", model.string(), "--manifest", manifest().string(), "--out", csv.string(), "--svg",
                    svg.string()});
        REQUIRE_MESSAGE(r.code == 0, r.err);
        const auto lines = lines_of(slurp(csv));
        REQUIRE(lines.size() == 1001);
        CHECK(lines[0] == "threshold,fpr,tpr");
        CHECK(lines.back().rfind("# auc=", 0) == 0);
        CHECK(r.out.find("auc=") != std::string::npos);
        CHECK(slurp(svg).rfind("<svg", 0) == 0);

        const auto png = dir / (std::string(algorithm) + "_spm.png");
        const auto spm_csv = dir / (std::string(algorithm) + "_spm.csv");
        r = invoke({"spm", "--model", model.string(), "--image", (synth_root() / "images" / "synth_000.png").string(),
                    "--out", png.string(), "--csv", spm_csv.string()});
        REQUIRE_MESSAGE(r.code == 0, r.err);
        CHECK(read_png_rgb(png).width == 48);
        CHECK(lines_of(slurp(spm_csv)).size() == 48);

        const auto gray = read_png_rgb(png);
        const auto mask = read_png_mask(synth_root() / "masks" / "synth_000.png");
        double skin_sum = 0, other_sum = 0;
        for (std::size_t i = 0; i < mask.size(); ++i) (mask.is_skin(i) ? skin_sum : other_sum) += gray.pixels[i].r;
        const double skin_mean = skin_sum / mask.skin_count();
        const double other_mean = other_sum / (mask.size() - mask.skin_count());
        CHECK(skin_mean > other_mean);
    }
}

TEST_CASE("eval ignores manifest order") {
    const auto dir = scratch_dir("cli_shuffle");
    const auto model = dir / "m.json";
    REQUIRE(invoke({"train", "--manifest", manifest().string(), "--pixels", "1000", "--out", model.string()}).code == 0);

    auto lines = lines_of(slurp(manifest()));
    {
        std::ofstream out(synth_root() / "shuffled.txt");
        for (std::size_t i : {2, 0, 3, 1}) out << lines[i] << "\n";
    }
    REQUIRE(invoke({"eval", "--model", model.string(), "--manifest", manifest().string(), "--out",
                    (dir / "a.csv").string()})
                .code == 0);
    REQUIRE(invoke({"eval", "--model", model.string(), "--manifest", (synth_root() / "shuffled.txt").string(), "--out",
                    (dir / "b.csv").string()})
                .code == 0);
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
}

TEST_CASE("single-pixel image maps to mid gray") {
    const auto dir = scratch_dir("cli_one_pixel");
    write_png_rgb(dir / "one.png", ImageBuffer(1, 1, {{210, 150, 120}}));
    const auto model = dir / "m.json";
    REQUIRE(invoke({"train", "--manifest", manifest().string(), "--pixels", "800", "--out", model.string()}).code == 0);
    REQUIRE(invoke({"spm", "--model", model.string(), "--image", (dir / "one.png").string(), "--out",
                    (dir / "spm.png").string()})
                .code == 0);
    const auto gray = read_png_rgb(dir / "spm.png");
    REQUIRE(gray.pixels.size() == 1);
    CHECK(gray.pixels[0].r == 128);
}

TEST_CASE("error exit codes") {
    const auto dir = scratch_dir("cli_errors");
    CHECK(invoke({"train", "--manifest", (dir / "absent.txt").string(), "--out", (dir / "m.json").string()}).code ==
          cli::kExitData);

    // eight skin pixels cannot fill five FCM clusters with full covariances
    std::ofstream(dir / "checker.txt") << (kData / "checker_image.png").string() << ","
                                       << (kData / "checker_mask.png").string() << "\n";
    auto r = invoke({"train", "--manifest", (dir / "checker.txt").string(), "--algorithm", "fcm", "--space", "rgb",
                     "--clusters", "5", "--out", (dir / "m.json").string()});
    CHECK(r.code == cli::kExitNumeric);
    CHECK(r.err.find("cluster") != std::string::npos);

    const auto model = dir / "ok.json";
    REQUIRE(invoke({"train", "--manifest", manifest().string(), "--pixels", "500", "--out", model.string()}).code == 0);
    CHECK(invoke({"spm", "--model", model.string(), "--image", (kData / "not_a_png.png").string(), "--out",
                  (dir / "x.png").string()})
              .code == cli::kExitData);
    std::ofstream(dir / "plain_file") << "x";
    CHECK(invoke({"spm", "--model", model.string(), "--image", (kData / "checker_image.png").string(), "--out",
                  (dir / "plain_file" / "x.png").string()})
              .code == cli::kExitIo);

    // all-skin evaluation set has no negatives
    write_png_mask(dir / "full.png", MaskBuffer(4, 4, std::vector<std::uint8_t>(16, 1)));
    std::ofstream(dir / "full.txt") << (kData / "checker_image.png").string() << "," << (dir / "full.png").string()
                                    << "\n";
    CHECK(invoke({"eval", "--model", model.string(), "--manifest", (dir / "full.txt").string(), "--out",
                  (dir / "roc.csv").string()})
              .code == cli::kExitNumeric);
}

TEST_CASE("compare writes every artifact") {
    const auto out = scratch_dir("cli_compare");
    const auto r = invoke({"compare", "--manifest", manifest().string(), "--out", out.string(), "--pixels", "1500",
                           "--seed", "2"});
    REQUIRE_MESSAGE(r.code == 0, r.err);

    const auto report = lines_of(slurp(out / "report.csv"));
    REQUIRE(report.size() == 13);
    CHECK(report[0] == "space,mode,algorithm,auc,training_n,iterations,status");
    double previous = 2.0;
    for (std::size_t i = 1; i < report.size(); ++i) {
        std::istringstream row(report[i]);
        std::vector<std::string> cells;
        for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
        REQUIRE(cells.size() == 7);
        CHECK(cells[6] == "ok");
        const double auc = std::stod(cells[3]);
        CHECK(auc <= previous);
        previous = auc;
    }

    int csvs = 0, svgs = 0, models = 0;
    for (const auto& entry : fs::directory_iterator(out)) {
        const auto name = entry.path().filename().string();
        csvs += name.rfind("roc_", 0) == 0;
        models += name.rfind("model_", 0) == 0;
        svgs += entry.path().extension() == ".svg";
    }
    CHECK(csvs == 12);
    CHECK(models == 12);
    CHECK(svgs == 14);
    CHECK(fs::exists(out / "roc_ycbcr_chroma2_fcm.csv"));
    CHECK(fs::exists(out / "em_vs_fcm_hsv_full3.svg"));
    CHECK(fs::exists(out / "full3_vs_chroma2_em_rgb.svg"));
    CHECK(fs::exists(out / "all_spaces_fcm.svg"));
    CHECK(fs::exists(out / "spm_rgb_full3_em.png"));
}
