#ifndef SKINMAP_MODEL_FILE_HPP
#define SKINMAP_MODEL_FILE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>

#include <json.hpp>

#include "skinmap/colorspace.hpp"
#include "skinmap/gmm.hpp"

namespace skinmap {

enum class Algorithm { em, fcm };

std::string_view to_string(Algorithm algorithm) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view text);

inline constexpr int kModelFormatVersion = 1;

/// How a model was fitted; stored alongside the parameters.
struct TrainingInfo {
    int clusters = 3;
    std::optional<double> fuzzifier;  // FCM only
    std::size_t pixels_requested = 0;
    std::size_t pixels_used = 0;
    std::size_t pixels_available = 0;
    int iterations = 0;
    bool converged = false;
};

/// Persisted skin model: the mixture plus the feature space it lives in.
struct ModelFile {
    FeatureSpace space;
    Algorithm algorithm = Algorithm::em;
    std::uint64_t seed = 0;
    TrainingInfo training;
    GaussianMixtured mixture;
};

nlohmann::json model_to_json(const ModelFile& model);

/// Throws DataError when the document is malformed or inconsistent.
ModelFile model_from_json(const nlohmann::json& doc);

void write_model(const std::filesystem::path& path, const ModelFile& model);
ModelFile read_model(const std::filesystem::path& path);

}  // namespace skinmap

#endif  // SKINMAP_MODEL_FILE_HPP
