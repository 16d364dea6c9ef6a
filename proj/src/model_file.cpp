#include "skinmap/model_file.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <string>

#include "skinmap/errors.hpp"

namespace skinmap {

using nlohmann::json;

std::string_view to_string(Algorithm algorithm) noexcept { return algorithm == Algorithm::em ? "EM" : "FCM"; }

std::optional<Algorithm> parse_algorithm(std::string_view text) {
    std::string t(text);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (t == "em") return Algorithm::em;
    if (t == "fcm") return Algorithm::fcm;
    return std::nullopt;
}

json model_to_json(const ModelFile& model) {
    json components = json::array();
    for (const auto& c : model.mixture.components()) {
        json cov = json::array();
        for (Eigen::Index r = 0; r < c.covariance.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index k = 0; k < c.covariance.cols(); ++k) row.push_back(c.covariance(r, k));
            cov.push_back(std::move(row));
        }
        components.push_back({{"weight", c.weight},
                              {"mean", std::vector<double>(c.mean.data(), c.mean.data() + c.mean.size())},
                              {"covariance", std::move(cov)}});
    }

    json training = {{"clusters", model.training.clusters},
                     {"pixels_requested", model.training.pixels_requested},
                     {"pixels_used", model.training.pixels_used},
                     {"pixels_available", model.training.pixels_available},
                     {"iterations", model.training.iterations},
                     {"converged", model.training.converged}};
    if (model.training.fuzzifier) training["fuzzifier"] = *model.training.fuzzifier;

    return {{"format_version", kModelFormatVersion},
            {"space", std::string(to_string(model.space.space))},
            {"mode", std::string(to_string(model.space.mode))},
            {"algorithm", std::string(to_string(model.algorithm))},
            {"seed", model.seed},
            {"dim", model.mixture.dim()},
            {"training", std::move(training)},
            {"components", std::move(components)}};
}

ModelFile model_from_json(const json& doc) {
    try {
        if (doc.at("format_version").get<int>() != kModelFormatVersion)
            throw DataError("unsupported model format_version");
        const auto space = parse_color_space(doc.at("space").get<std::string>());
        const auto mode = parse_channel_mode(doc.at("mode").get<std::string>());
        const auto algorithm = parse_algorithm(doc.at("algorithm").get<std::string>());
        if (!space || !mode || !algorithm) throw DataError("model has unknown space, mode or algorithm");
        const FeatureSpace fs{*space, *mode};
        const auto d = static_cast<Eigen::Index>(fs.dim());

        std::vector<GaussianComponent<double>> components;
        for (const auto& jc : doc.at("components")) {
            GaussianComponent<double> c;
            c.weight = jc.at("weight").get<double>();
            const auto mean = jc.at("mean").get<std::vector<double>>();
            const auto cov = jc.at("covariance").get<std::vector<std::vector<double>>>();
            if (static_cast<Eigen::Index>(mean.size()) != d || static_cast<Eigen::Index>(cov.size()) != d)
                throw DataError("model component dimension does not match " + to_string(fs));
            c.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), d);
            c.covariance.resize(d, d);
            for (Eigen::Index r = 0; r < d; ++r) {
                if (static_cast<Eigen::Index>(cov[static_cast<std::size_t>(r)].size()) != d)
                    throw DataError("model covariance is not square");
                for (Eigen::Index k = 0; k < d; ++k)
                    c.covariance(r, k) = cov[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)];
            }
            components.push_back(std::move(c));
        }

        TrainingInfo training;
        if (doc.contains("training")) {
            const auto& t = doc.at("training");
            training.clusters = t.value("clusters", static_cast<int>(components.size()));
            if (t.contains("fuzzifier")) training.fuzzifier = t.at("fuzzifier").get<double>();
            training.pixels_requested = t.value("pixels_requested", std::size_t{0});
            training.pixels_used = t.value("pixels_used", std::size_t{0});
            training.pixels_available = t.value("pixels_available", std::size_t{0});
            training.iterations = t.value("iterations", 0);
            training.converged = t.value("converged", false);
        }

        return {fs, *algorithm, doc.value("seed", std::uint64_t{0}), training,
                GaussianMixtured(std::move(components))};
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed model file: ") + e.what());
    } catch (const DataError&) {
        throw;
    } catch (const Error& e) {
        throw DataError(std::string("invalid model parameters: ") + e.what());
    }
}

void write_model(const std::filesystem::path& path, const ModelFile& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << model_to_json(model).dump(2) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

ModelFile read_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MissingFileError(path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw DataError("cannot parse model " + path.string() + ": " + e.what());
    }
    return model_from_json(doc);
}

}  // namespace skinmap
