#ifndef SKINMAP_CLI_HPP
#define SKINMAP_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "skinmap/colorspace.hpp"
#include "skinmap/dataset.hpp"
#include "skinmap/model_file.hpp"
#include "skinmap/roc.hpp"

namespace skinmap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitIo = 4;

inline constexpr int kDefaultClusters = 3;
inline constexpr double kDefaultFuzzifier = 2.0;
inline constexpr std::size_t kDefaultTrainingPixels = 23000;

inline constexpr const char* kVersion = "0.1.0";

struct FitOptions {
    FeatureSpace space{ColorSpace::hsv, ChannelMode::full3};
    Algorithm algorithm = Algorithm::em;
    int clusters = kDefaultClusters;
    double fuzzifier = kDefaultFuzzifier;
    std::size_t pixels = kDefaultTrainingPixels;
    std::uint64_t seed = 0;
};

/// Sub-seeds derived from the one global seed.
inline std::uint64_t sampling_seed(std::uint64_t seed) { return seed; }
inline std::uint64_t fcm_seed(std::uint64_t seed) { return seed + 1; }
inline std::uint64_t em_seed(std::uint64_t seed) { return seed + 2; }

/// Samples skin pixels and fits a mixture with EM or with FCM followed by
/// hardening into Gaussian parameters.
ModelFile train_model(std::span<const LabeledImage> images, const FitOptions& options);

/// Pooled ROC of `model` over the labeled images.
RocCurve evaluate_model(const ModelFile& model, std::span<const LabeledImage> images);

struct TrainArgs {
    std::filesystem::path manifest;
    FitOptions fit;
    std::filesystem::path out_model;
};
ModelFile cmd_train(const TrainArgs& args);

struct SpmArgs {
    std::filesystem::path model;
    std::filesystem::path image;
    std::filesystem::path out_png;
    std::optional<std::filesystem::path> out_csv;
};
SkinProbabilityMap cmd_spm(const SpmArgs& args);

struct EvalArgs {
    std::filesystem::path model;
    std::filesystem::path manifest;
    std::filesystem::path out_csv;
    std::optional<std::filesystem::path> out_svg;
};
RocCurve cmd_eval(const EvalArgs& args);

struct CompareRow {
    FeatureSpace space;
    Algorithm algorithm = Algorithm::em;
    bool ok = false;
    double auc = 0.0;
    std::size_t training_n = 0;
    int iterations = 0;
    std::string failure;
};

/// One row per configuration, sorted by auc descending; failed rows last.
struct CompareReport {
    std::vector<CompareRow> rows;

    std::string to_csv() const;
    std::size_t succeeded() const;
};

struct CompareArgs {
    std::filesystem::path train_manifest;
    std::filesystem::path test_manifest;
    std::filesystem::path out_dir;
    std::uint64_t seed = 0;
    int clusters = kDefaultClusters;
    std::size_t pixels = kDefaultTrainingPixels;
};

/// Trains and evaluates RGB/HSV/YCbCr x FULL3/CHROMA2 x EM/FCM, writing
/// per-configuration ROC CSVs, overlay SVGs and report.csv into out_dir.
CompareReport cmd_compare(const CompareArgs& args);

/// Synthetic dataset description: shared image parameters plus image count.
struct SynthDatasetSpec {
    int images = 4;
    SynthSpec image;
};

/// Bayes-separable default: warm skin tones against blue and green backgrounds.
nlohmann::json default_synth_spec_json();

/// Throws DataError on a malformed or invalid spec.
SynthDatasetSpec synth_spec_from_json(const nlohmann::json& doc);

struct SynthArgs {
    std::optional<std::filesystem::path> spec_file;
    std::filesystem::path out_dir;
    std::uint64_t seed = 0;
};

/// Writes images/, masks/, manifest.txt and spec.json; returns the manifest path.
std::filesystem::path cmd_synth(const SynthArgs& args);

/// Full command-line entry point. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace skinmap::cli

#endif  // SKINMAP_CLI_HPP
