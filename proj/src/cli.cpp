#include "skinmap/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "skinmap/fcm.hpp"
#include "skinmap/gmm.hpp"
#include "skinmap/png_io.hpp"
#include "skinmap/spm.hpp"
#include "skinmap/svg_plot.hpp"

namespace skinmap::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void ensure_parent(const fs::path& path) {
    const auto parent = path.parent_path();
    if (parent.empty()) return;
    std::error_code ec;
    fs::create_directories(parent, ec);
    if (ec) throw IoError("cannot create directory " + parent.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& content) {
    ensure_parent(path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw IoError("failed writing " + path.string());
}

std::string lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string config_slug(FeatureSpace space, Algorithm algorithm) {
    return lower(to_string(space.space)) + "_" + lower(to_string(space.mode)) + "_" + lower(to_string(algorithm));
}

std::string config_label(FeatureSpace space, Algorithm algorithm) {
    return std::string(to_string(algorithm)) + " " + to_string(space);
}

std::vector<std::pair<double, double>> curve_xy(const RocCurve& curve) {
    std::vector<std::pair<double, double>> xy;
    xy.reserve(curve.points.size());
    for (const auto& p : curve.points) xy.emplace_back(p.fpr, p.tpr);
    return xy;
}

std::string format_auc(double auc) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", auc);
    return buf;
}

std::string spm_to_csv(const SkinProbabilityMap& spm) {
    std::string out;
    char buf[32];
    for (int y = 0; y < spm.height; ++y) {
        for (int x = 0; x < spm.width; ++x) {
            std::snprintf(buf, sizeof(buf), x == 0 ? "%.6f" : ",%.6f",
                          spm.values[static_cast<std::size_t>(y) * spm.width + x]);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

json component_to_json(const GaussianComponent<double>& c) {
    json cov = json::array();
    for (Eigen::Index r = 0; r < c.covariance.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index k = 0; k < c.covariance.cols(); ++k) row.push_back(c.covariance(r, k));
        cov.push_back(std::move(row));
    }
    return {{"weight", c.weight},
            {"mean", std::vector<double>(c.mean.data(), c.mean.data() + c.mean.size())},
            {"covariance", std::move(cov)}};
}

std::vector<GaussianComponent<double>> mixture_from_json(const json& doc, const std::string& name) {
    if (!doc.is_array() || doc.empty()) throw DataError("synth spec: '" + name + "' must be a non-empty array");
    std::vector<GaussianComponent<double>> out;
    for (const auto& jc : doc) {
        GaussianComponent<double> c;
        c.weight = jc.at("weight").get<double>();
        const auto mean = jc.at("mean").get<std::vector<double>>();
        const auto cov = jc.at("covariance").get<std::vector<std::vector<double>>>();
        if (mean.size() != 3 || cov.size() != 3)
            throw DataError("synth spec: '" + name + "' components need a 3-entry mean and 3x3 covariance");
        c.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), 3);
        c.covariance.resize(3, 3);
        for (std::size_t r = 0; r < 3; ++r) {
            if (cov[r].size() != 3) throw DataError("synth spec: covariance rows need 3 entries");
            for (std::size_t k = 0; k < 3; ++k)
                c.covariance(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = cov[r][k];
        }
        out.push_back(std::move(c));
    }
    return out;
}

GaussianComponent<double> isotropic(double weight, double r, double g, double b, double variance) {
    GaussianComponent<double> c;
    c.weight = weight;
    c.mean = Eigen::Vector3d(r, g, b);
    c.covariance = Eigen::Matrix3d::Identity() * variance;
    return c;
}

}  // namespace

ModelFile train_model(std::span<const LabeledImage> images, const FitOptions& options) {
    if (options.clusters < 1) throw ContractViolation("--clusters must be >= 1");
    if (options.pixels < 1) throw ContractViolation("--pixels must be >= 1");

    const auto training = sample_skin_pixels(images, options.pixels, options.space, sampling_seed(options.seed));
    TrainingInfo info;
    info.clusters = options.clusters;
    info.pixels_requested = options.pixels;
    info.pixels_used = static_cast<std::size_t>(training.features.rows());
    info.pixels_available = training.source_count;

    if (options.algorithm == Algorithm::em) {
        EmConfig config;
        config.components = options.clusters;
        config.seed = em_seed(options.seed);
        auto fit = em_fit(training.features, config);
        info.iterations = fit.iterations;
        info.converged = fit.converged;
        return {options.space, options.algorithm, options.seed, info, std::move(fit.mixture)};
    }

    FcmConfig config;
    config.clusters = options.clusters;
    config.fuzzifier = options.fuzzifier;
    config.seed = fcm_seed(options.seed);
    const auto fit = fcm_fit(training.features, config);
    info.fuzzifier = options.fuzzifier;
    info.iterations = fit.iterations;
    info.converged = fit.converged;
    return {options.space, options.algorithm, options.seed, info, fcm_to_gmm(training.features, fit)};
}

RocCurve evaluate_model(const ModelFile& model, std::span<const LabeledImage> images) {
    std::vector<SkinProbabilityMap> spms;
    std::vector<MaskBuffer> masks;
    spms.reserve(images.size());
    masks.reserve(images.size());
    for (const auto& img : images) {
        spms.push_back(compute_spm(img.image, model.mixture, model.space));
        masks.push_back(img.mask);
    }
    return aggregate_roc(spms, masks);
}

ModelFile cmd_train(const TrainArgs& args) {
    const auto images = load_manifest(args.manifest);
    auto model = train_model(images, args.fit);
    ensure_parent(args.out_model);
    write_model(args.out_model, model);
    return model;
}

SkinProbabilityMap cmd_spm(const SpmArgs& args) {
    const auto model = read_model(args.model);
    const auto image = read_png_rgb(args.image);
    auto spm = compute_spm(image, model.mixture, model.space);
    ensure_parent(args.out_png);
    write_png_gray(args.out_png, spm_to_gray8(spm));
    if (args.out_csv) write_text(*args.out_csv, spm_to_csv(spm));
    return spm;
}

RocCurve cmd_eval(const EvalArgs& args) {
    const auto model = read_model(args.model);
    const auto images = load_manifest(args.manifest);
    auto curve = evaluate_model(model, images);
    write_text(args.out_csv, roc_to_csv(curve));
    if (args.out_svg) {
        const std::vector<PlotSeries> series{
            {config_label(model.space, model.algorithm) + " (AUC " + format_auc(curve.auc).substr(0, 5) + ")",
             curve_xy(curve)}};
        write_text(*args.out_svg, render_roc_svg("ROC " + config_label(model.space, model.algorithm), series));
    }
    return curve;
}

std::string CompareReport::to_csv() const {
    std::string out = "space,mode,algorithm,auc,training_n,iterations,status\n";
    for (const auto& row : rows) {
        out += std::string(to_string(row.space.space)) + "," + std::string(to_string(row.space.mode)) + "," +
               std::string(to_string(row.algorithm)) + ",";
        if (row.ok) {
            out += format_auc(row.auc) + "," + std::to_string(row.training_n) + "," + std::to_string(row.iterations) +
                   ",ok\n";
        } else {
            std::string reason = row.failure;
            std::replace(reason.begin(), reason.end(), ',', ';');
            std::replace(reason.begin(), reason.end(), '\n', ' ');
            out += "NA,NA,NA,FAILED: " + reason + "\n";
        }
    }
    return out;
}

std::size_t CompareReport::succeeded() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.ok; }));
}

CompareReport cmd_compare(const CompareArgs& args) {
    const auto train_images = load_manifest(args.train_manifest);
    const auto test_images =
        args.test_manifest.empty() ? train_images : load_manifest(args.test_manifest);

    constexpr ColorSpace kSpaces[] = {ColorSpace::rgb, ColorSpace::hsv, ColorSpace::ycbcr};
    constexpr ChannelMode kModes[] = {ChannelMode::full3, ChannelMode::chroma2};
    constexpr Algorithm kAlgorithms[] = {Algorithm::em, Algorithm::fcm};

    std::map<std::string, RocCurve> curves;
    CompareReport report;
    for (auto space : kSpaces) {
        for (auto mode : kModes) {
            for (auto algorithm : kAlgorithms) {
                CompareRow row;
                row.space = {space, mode};
                row.algorithm = algorithm;
                const auto slug = config_slug(row.space, algorithm);
                try {
                    FitOptions fit;
                    fit.space = row.space;
                    fit.algorithm = algorithm;
                    fit.clusters = args.clusters;
                    fit.pixels = args.pixels;
                    fit.seed = args.seed;
                    const auto model = train_model(train_images, fit);
                    auto curve = evaluate_model(model, test_images);
                    write_text(args.out_dir / ("roc_" + slug + ".csv"), roc_to_csv(curve));
                    write_model(args.out_dir / ("model_" + slug + ".json"), model);
                    if (!test_images.empty()) {
                        const auto spm = compute_spm(test_images.front().image, model.mixture, model.space);
                        write_png_gray(args.out_dir / ("spm_" + slug + ".png"), spm_to_gray8(spm));
                    }
                    row.ok = true;
                    row.auc = curve.auc;
                    row.training_n = model.training.pixels_used;
                    row.iterations = model.training.iterations;
                    curves.emplace(slug, std::move(curve));
                } catch (const IoError&) {
                    throw;
                } catch (const Error& e) {
                    row.failure = e.what();
                }
                report.rows.push_back(std::move(row));
            }
        }
    }

    const auto series_for = [&curves](FeatureSpace space, Algorithm algorithm,
                                      std::vector<PlotSeries>& out) {
        const auto it = curves.find(config_slug(space, algorithm));
        if (it == curves.end()) return;
        out.push_back({config_label(space, algorithm) + " (AUC " + format_auc(it->second.auc).substr(0, 5) + ")",
                       curve_xy(it->second)});
    };
    const auto write_overlay = [&args](const std::string& name, const std::string& title,
                                       const std::vector<PlotSeries>& series) {
        write_text(args.out_dir / name, render_roc_svg(title, series));
    };

    // EM against FCM per color space and channel mode.
    for (auto space : kSpaces) {
        for (auto mode : kModes) {
            std::vector<PlotSeries> series;
            for (auto algorithm : kAlgorithms) series_for({space, mode}, algorithm, series);
            const FeatureSpace fs{space, mode};
            write_overlay("em_vs_fcm_" + lower(to_string(space)) + "_" + lower(to_string(mode)) + ".svg",
                          "EM vs FCM, " + to_string(fs), series);
        }
    }
    // Three against two channels per algorithm and color space.
    for (auto algorithm : kAlgorithms) {
        for (auto space : kSpaces) {
            std::vector<PlotSeries> series;
            for (auto mode : kModes) series_for({space, mode}, algorithm, series);
            write_overlay("full3_vs_chroma2_" + lower(to_string(algorithm)) + "_" + lower(to_string(space)) + ".svg",
                          std::string(to_string(algorithm)) + ", " + std::string(to_string(space)) + ": 3 vs 2 channels",
                          series);
        }
    }
    // All color spaces per algorithm.
    for (auto algorithm : kAlgorithms) {
        std::vector<PlotSeries> series;
        for (auto space : kSpaces)
            for (auto mode : kModes) series_for({space, mode}, algorithm, series);
        write_overlay("all_spaces_" + lower(to_string(algorithm)) + ".svg",
                      std::string(to_string(algorithm)) + " across color spaces", series);
    }

    std::stable_sort(report.rows.begin(), report.rows.end(), [](const CompareRow& a, const CompareRow& b) {
        if (a.ok != b.ok) return a.ok;
        return a.ok && a.auc > b.auc;
    });
    write_text(args.out_dir / "report.csv", report.to_csv());
    return report;
}

json default_synth_spec_json() {
    const std::vector<GaussianComponent<double>> skin = {
        isotropic(0.40, 200, 145, 105, 36),
        isotropic(0.35, 175, 120, 80, 36),
        isotropic(0.25, 220, 170, 130, 36),
    };
    const std::vector<GaussianComponent<double>> background = {
        isotropic(0.5, 60, 110, 190, 100),
        isotropic(0.5, 80, 170, 90, 100),
    };
    json doc = {{"images", 4}, {"width", 48}, {"height", 48}, {"skin_pixels", 900}};
    doc["skin"] = json::array();
    for (const auto& c : skin) doc["skin"].push_back(component_to_json(c));
    doc["background"] = json::array();
    for (const auto& c : background) doc["background"].push_back(component_to_json(c));
    return doc;
}

SynthDatasetSpec synth_spec_from_json(const json& doc) {
    try {
        SynthDatasetSpec spec;
        spec.images = doc.at("images").get<int>();
        spec.image.width = doc.at("width").get<int>();
        spec.image.height = doc.at("height").get<int>();
        spec.image.skin_pixels = doc.at("skin_pixels").get<std::size_t>();
        spec.image.skin = mixture_from_json(doc.at("skin"), "skin");
        spec.image.background = mixture_from_json(doc.at("background"), "background");
        if (spec.images < 1) throw DataError("synth spec: 'images' must be >= 1");
        spec.image.validate();
        return spec;
    } catch (const json::exception& e) {
        throw DataError(std::string("synth spec: ") + e.what());
    } catch (const DataError&) {
        throw;
    } catch (const Error& e) {
        throw DataError(std::string("synth spec: ") + e.what());
    }
}

fs::path cmd_synth(const SynthArgs& args) {
    json doc;
    if (args.spec_file) {
        std::ifstream in(*args.spec_file);
        if (!in) throw MissingFileError(args.spec_file->string());
        try {
            doc = json::parse(in);
        } catch (const json::exception& e) {
            throw DataError("cannot parse synth spec " + args.spec_file->string() + ": " + e.what());
        }
    } else {
        doc = default_synth_spec_json();
    }
    const auto spec = synth_spec_from_json(doc);

    std::string manifest;
    for (int i = 0; i < spec.images; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "synth_%03d", i);
        const auto sample = synth_dataset(spec.image, args.seed + static_cast<std::uint64_t>(i), name);
        const auto image_rel = fs::path("images") / (std::string(name) + ".png");
        const auto mask_rel = fs::path("masks") / (std::string(name) + ".png");
        ensure_parent(args.out_dir / image_rel);
        ensure_parent(args.out_dir / mask_rel);
        write_png_rgb(args.out_dir / image_rel, sample.image);
        write_png_mask(args.out_dir / mask_rel, sample.mask);
        manifest += image_rel.generic_string() + "," + mask_rel.generic_string() + "\n";
    }
    write_text(args.out_dir / "spec.json", doc.dump(2) + "\n");
    const auto manifest_path = args.out_dir / "manifest.txt";
    write_text(manifest_path, manifest);
    return manifest_path;
}

namespace {

int exit_code_for(const Error& e) {
    switch (e.category()) {
        case ErrorCategory::data: return kExitData;
        case ErrorCategory::numeric: return kExitNumeric;
        case ErrorCategory::io: return kExitIo;
    }
    return kExitNumeric;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Skin probability maps from Gaussian mixtures fitted by EM or Fuzzy C-Means", "skinmap"};
    app.set_version_flag("--version", std::string("skinmap ") + kVersion);
    app.require_subcommand(1);

    TrainArgs train;
    std::string train_out;
    auto* train_cmd = app.add_subcommand("train", "Fit a skin model on the skin pixels of a manifest");
    train_cmd->add_option("--manifest", train.manifest, "Manifest of image_path,mask_path lines")->required();
    std::string space_name = "hsv", mode_name = "full3", algorithm_name = "em";
    train_cmd->add_option("--space", space_name, "Color space")
        ->check(CLI::IsMember({"rgb", "hsv", "ycbcr"}, CLI::ignore_case))
        ->capture_default_str();
    train_cmd->add_option("--mode", mode_name, "Channels: full3 or chroma2")
        ->check(CLI::IsMember({"full3", "chroma2"}, CLI::ignore_case))
        ->capture_default_str();
    train_cmd->add_option("--algorithm", algorithm_name, "Fitting algorithm")
        ->check(CLI::IsMember({"em", "fcm"}, CLI::ignore_case))
        ->capture_default_str();
    train_cmd->add_option("--clusters", train.fit.clusters, "Mixture components / FCM clusters")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--fuzzifier", train.fit.fuzzifier, "FCM fuzzifier m (> 1)")
        ->capture_default_str()
        ->check(CLI::Validator(
            [](std::string& text) {
                return std::stod(text) > 1.0 ? std::string{} : std::string("fuzzifier must be > 1");
            },
            "> 1"));
    train_cmd->add_option("--pixels", train.fit.pixels, "Training skin pixels to sample")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--seed", train.fit.seed, "Global seed")->capture_default_str();
    train_cmd->add_option("--out,--model", train_out, "Output model JSON")->required();

    SpmArgs spm;
    std::string spm_csv;
    auto* spm_cmd = app.add_subcommand("spm", "Write the skin probability map of one image");
    spm_cmd->add_option("--model", spm.model, "Model JSON")->required();
    spm_cmd->add_option("--image", spm.image, "Input PNG")->required();
    spm_cmd->add_option("--out", spm.out_png, "Output grayscale PNG")->required();
    spm_cmd->add_option("--csv", spm_csv, "Optional CSV of normalized values");

    EvalArgs eval;
    std::string eval_svg;
    auto* eval_cmd = app.add_subcommand("eval", "Pooled ROC of a model over a manifest");
    eval_cmd->add_option("--model", eval.model, "Model JSON")->required();
    eval_cmd->add_option("--manifest", eval.manifest, "Test manifest")->required();
    eval_cmd->add_option("--out", eval.out_csv, "Output ROC CSV")->required();
    eval_cmd->add_option("--svg", eval_svg, "Optional ROC plot");

    CompareArgs compare;
    auto* compare_cmd = app.add_subcommand("compare", "Train and evaluate all 12 configurations");
    compare_cmd->add_option("--manifest", compare.train_manifest, "Training manifest")->required();
    compare_cmd->add_option("--test-manifest", compare.test_manifest, "Test manifest (defaults to --manifest)");
    compare_cmd->add_option("--out", compare.out_dir, "Output directory")->required();
    compare_cmd->add_option("--seed", compare.seed, "Global seed")->capture_default_str();
    compare_cmd->add_option("--clusters", compare.clusters, "Mixture components / FCM clusters")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    compare_cmd->add_option("--pixels", compare.pixels, "Training skin pixels to sample")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);

    SynthArgs synth;
    std::string synth_spec;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic labeled dataset");
    synth_cmd->add_option("--spec", synth_spec, "Synthetic dataset spec JSON (built-in default if omitted)");
    synth_cmd->add_option("--out", synth.out_dir, "Output directory")->required();
    synth_cmd->add_option("--seed", synth.seed, "Global seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*train_cmd) {
            train.out_model = train_out;
            train.fit.space = {*parse_color_space(space_name), *parse_channel_mode(mode_name)};
            train.fit.algorithm = *parse_algorithm(algorithm_name);
            const auto model = cmd_train(train);
            out << "wrote " << train.out_model.string() << " (" << to_string(model.algorithm) << ", "
                << to_string(model.space) << ", " << model.training.pixels_used << " pixels, "
                << model.training.iterations << " iterations)\n";
        } else if (*spm_cmd) {
            if (!spm_csv.empty()) spm.out_csv = spm_csv;
            cmd_spm(spm);
            out << "wrote " << spm.out_png.string() << "\n";
        } else if (*eval_cmd) {
            if (!eval_svg.empty()) eval.out_svg = eval_svg;
            const auto curve = cmd_eval(eval);
            out << "auc=" << format_auc(curve.auc) << "\n";
        } else if (*compare_cmd) {
            const auto report = cmd_compare(compare);
            out << report.to_csv();
            if (report.succeeded() == 0) {
                err << "error: every configuration failed\n";
                return kExitNumeric;
            }
        } else if (*synth_cmd) {
            if (!synth_spec.empty()) synth.spec_file = synth_spec;
            out << "wrote " << cmd_synth(synth).string() << "\n";
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("skinmap");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace skinmap::cli
