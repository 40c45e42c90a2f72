// greenseg command line: room/block/view pre-processing, attribute and hop
// feature extraction, boosted-tree training, prediction, and evaluation of
// indoor point cloud segmentation runs.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "greenseg/greenseg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

greenseg::Precision parse_precision(const std::string& name) {
    if (name == "f32") return greenseg::Precision::f32;
    if (name == "f16") return greenseg::Precision::f16;
    throw greenseg::ArgumentError("unknown precision '" + name + "' (use f32 or f16)");
}

std::vector<double> parse_ratios(const std::string& csv) {
    std::vector<double> ratios;
    std::size_t start = 0;
    while (start <= csv.size()) {
        const std::size_t comma = csv.find(',', start);
        const std::string tok = csv.substr(start, comma == std::string::npos ? csv.size() - start
                                                                             : comma - start);
        if (!tok.empty()) ratios.push_back(std::stod(tok));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return ratios;
}

// A stage input is either a flat directory of files or a train/test pair.
std::vector<std::pair<fs::path, std::string>> stage_dirs(const fs::path& in) {
    std::vector<std::pair<fs::path, std::string>> dirs;
    if (fs::is_directory(in / "train")) dirs.push_back({in / "train", "train"});
    if (fs::is_directory(in / "test")) dirs.push_back({in / "test", "test"});
    if (dirs.empty()) dirs.push_back({in, ""});
    return dirs;
}

json report_json(const greenseg::EvalReport& report) {
    json j;
    j["fold"] = report.fold;
    j["point_count"] = report.point_count;
    j["oa"] = report.oa;
    j["miou"] = report.miou;
    j["miou_present"] = report.miou_present;
    json per_class = json::object();
    for (std::size_t c = 0; c < report.per_class_iou.size(); ++c)
        per_class[std::string(greenseg::ClassTable::name_of(c))] = report.per_class_iou[c];
    j["per_class_iou"] = per_class;
    return j;
}

void print_stats_group(const std::string& name, const greenseg::DatasetStats& stats) {
    std::printf("%-8s %8zu %10zu %10zu %12.1f %14zu\n", name.c_str(), stats.unit_count,
                stats.min_unit_size, stats.max_unit_size, stats.mean_unit_size,
                stats.total_points);
    const std::string prefix = name.empty() ? "units" : name;
    std::printf("%s.units=%zu\n", prefix.c_str(), stats.unit_count);
    std::printf("%s.min_unit_size=%zu\n", prefix.c_str(), stats.min_unit_size);
    std::printf("%s.max_unit_size=%zu\n", prefix.c_str(), stats.max_unit_size);
    std::printf("%s.mean_unit_size=%.3f\n", prefix.c_str(), stats.mean_unit_size);
    std::printf("%s.total_points=%zu\n", prefix.c_str(), stats.total_points);
}

int cmd_convert(const fs::path& root, const fs::path& out) {
    fs::create_directories(out);
    const std::size_t rooms = greenseg::convert_s3dis(root, out);
    std::printf("converted %zu rooms into %s\n", rooms, out.string().c_str());
    return 0;
}

struct PreprocessOptions {
    std::string style = "room";
    double grid = 0.04;
    int test_area = 6;
    std::uint64_t seed = 0;
    fs::path in, out;
    double block_size = 1.0;
    std::size_t points_per_unit = 4096;
    std::size_t unit_size = 40960;
    std::size_t train_target_units = 3000;
    std::size_t test_target_units = 2000;
};

int cmd_preprocess(const PreprocessOptions& opt) {
    const std::vector<greenseg::AreaRoom> rooms = greenseg::load_area_rooms(opt.in);

    std::vector<greenseg::PointCloud> train_rooms, test_rooms;
    for (const greenseg::AreaRoom& r : rooms)
        (r.area == opt.test_area ? test_rooms : train_rooms).push_back(r.room);
    if (train_rooms.empty() || test_rooms.empty())
        throw greenseg::ArgumentError("preprocess: both splits need rooms; check --test-area");

    const auto build = [&](const std::vector<greenseg::PointCloud>& split_rooms,
                           greenseg::Split split, std::uint64_t seed) {
        greenseg::UnitSet set;
        if (opt.style == "room") {
            set = greenseg::make_room_units(split_rooms, opt.grid, seed);
        } else if (opt.style == "block") {
            set = greenseg::make_block_units(split_rooms, opt.block_size, opt.points_per_unit,
                                             seed);
        } else if (opt.style == "view") {
            greenseg::ViewParams params;
            params.unit_size = opt.unit_size;
            params.grid_size = opt.grid;
            params.seed = seed;
            params.target_units = split == greenseg::Split::train ? opt.train_target_units
                                                                  : opt.test_target_units;
            set = greenseg::make_view_units(split_rooms, params);
        } else {
            throw greenseg::ArgumentError("unknown style '" + opt.style + "'");
        }
        set.split = split;
        set.fold = opt.test_area;
        return set;
    };

    const greenseg::UnitSet train =
        build(train_rooms, greenseg::Split::train, opt.seed);
    const greenseg::UnitSet test =
        build(test_rooms, greenseg::Split::test, greenseg::mix_seed(opt.seed, 0x7e57));

    for (const auto& [set, name] :
         {std::pair<const greenseg::UnitSet&, const char*>{train, "train"},
          std::pair<const greenseg::UnitSet&, const char*>{test, "test"}}) {
        const fs::path dir = opt.out / name;
        fs::create_directories(dir);
        for (const greenseg::PointCloud& unit : set.units)
            greenseg::write_room_file(unit, dir / (unit.unit_id + ".txt"));
    }
    std::printf("%s style: %zu train units, %zu test units (test area %d)\n", opt.style.c_str(),
                train.units.size(), test.units.size(), opt.test_area);
    return 0;
}

int cmd_stats(const fs::path& in) {
    std::printf("%-8s %8s %10s %10s %12s %14s\n", "group", "units", "min", "max", "mean", "total");
    for (const auto& [dir, name] : stage_dirs(in)) {
        greenseg::UnitSet set;
        for (const fs::path& file : greenseg::list_files(dir, ".txt"))
            set.units.push_back(greenseg::read_room_file(file));
        if (set.units.empty()) continue;
        print_stats_group(name.empty() ? "all" : name, greenseg::dataset_stats(set));
    }
    return 0;
}

int cmd_attributes(const fs::path& in, const fs::path& out, std::size_t k_local, int threads) {
    for (const auto& [dir, name] : stage_dirs(in)) {
        const fs::path out_dir = name.empty() ? out : out / name;
        fs::create_directories(out_dir);
        const auto files = greenseg::list_files(dir, ".txt");
        greenseg::parallel_for(files.size(), threads, [&](std::size_t i) {
            const greenseg::PointCloud unit = greenseg::read_room_file(files[i]);
            const greenseg::PointCloud with_attrs = greenseg::build_attributes(unit, k_local);
            const std::string stem = files[i].stem().string();
            greenseg::write_feature_file(with_attrs, greenseg::Precision::f32,
                                         out_dir / (stem + ".feat"));
            if (unit.has_labels())
                greenseg::write_labels_file(unit.labels, out_dir / (stem + ".labels"));
        });
        std::printf("attributes: %zu units -> %s\n", files.size(), out_dir.string().c_str());
    }
    return 0;
}

struct ExtractOptions {
    fs::path in, out, params;
    greenseg::HopConfig hops;
    greenseg::Precision precision = greenseg::Precision::f32;
    int threads = 1;
};

// Loads the 21-D attribute files of one directory as attribute-carrying
// units (positions are attribute columns 0-2).
std::vector<greenseg::PointCloud> load_attribute_units(const fs::path& dir) {
    std::vector<greenseg::PointCloud> units;
    for (const fs::path& file : greenseg::list_files(dir, ".feat")) {
        greenseg::Matrix attrs = greenseg::read_feature_file(file);
        greenseg::PointCloud unit;
        unit.unit_id = file.stem().string();
        unit.positions.resize(attrs.rows());
        unit.colors.resize(attrs.rows());
        for (std::size_t i = 0; i < attrs.rows(); ++i)
            unit.positions[i] = {attrs(i, 0), attrs(i, 1), attrs(i, 2)};
        unit.attributes = std::move(attrs);
        units.push_back(std::move(unit));
    }
    return units;
}

void copy_labels_through(const fs::path& in_dir, const fs::path& out_dir) {
    for (const fs::path& file : greenseg::list_files(in_dir, ".labels"))
        fs::copy_file(file, out_dir / file.filename(), fs::copy_options::overwrite_existing);
}

int cmd_extract(const ExtractOptions& opt) {
    const auto dirs = stage_dirs(opt.in);

    greenseg::ExtractorParams params;
    bool have_params = fs::exists(opt.params);
    if (have_params) params = greenseg::ExtractorParams::load(opt.params);

    for (const auto& [dir, name] : dirs) {
        const fs::path out_dir = name.empty() ? opt.out : opt.out / name;
        fs::create_directories(out_dir);
        std::vector<greenseg::PointCloud> units = load_attribute_units(dir);
        if (units.empty()) continue;

        std::vector<greenseg::Matrix> decoded(units.size());
        if (!have_params && name != "test") {
            // training pass: fit the per-hop standardization scalars here
            auto [pyramids, fitted] =
                greenseg::encode_training(units, opt.hops, opt.threads);
            params = std::move(fitted);
            params.save(opt.params);
            have_params = true;
            greenseg::parallel_for(units.size(), opt.threads, [&](std::size_t u) {
                decoded[u] = greenseg::decode(pyramids[u], opt.hops);
                greenseg::quantize_features(decoded[u], opt.precision);
            });
        } else {
            if (!have_params)
                throw greenseg::StateError("extract: test split needs an existing --params file");
            greenseg::parallel_for(units.size(), opt.threads, [&](std::size_t u) {
                greenseg::HopPyramid pyramid = greenseg::encode(units[u], opt.hops, &params);
                decoded[u] = greenseg::decode(pyramid, opt.hops);
                greenseg::quantize_features(decoded[u], opt.precision);
            });
        }
        for (std::size_t u = 0; u < units.size(); ++u)
            greenseg::write_feature_file(decoded[u], opt.precision,
                                         out_dir / (units[u].unit_id + ".feat"));
        copy_labels_through(dir, out_dir);
        std::printf("extract: %zu units -> %s (%s)\n", units.size(), out_dir.string().c_str(),
                    std::string(greenseg::precision_name(opt.precision)).c_str());
    }
    return 0;
}

struct TrainOptions {
    fs::path features, out;
    greenseg::GbdtConfig gbdt;
    int threads = 1;
};

int cmd_train(const TrainOptions& opt) {
    fs::path dir = opt.features;
    if (fs::is_directory(opt.features / "train")) dir = opt.features / "train";

    std::size_t total_rows = 0, width = 0;
    std::vector<greenseg::Matrix> features;
    std::vector<std::vector<std::uint8_t>> labels;
    for (const fs::path& file : greenseg::list_files(dir, ".feat")) {
        features.push_back(greenseg::read_feature_file(file));
        const fs::path label_file = dir / (file.stem().string() + ".labels");
        labels.push_back(greenseg::read_labels_file(label_file));
        if (labels.back().size() != features.back().rows())
            throw greenseg::StateError("train: label/feature row mismatch for '" +
                                       file.stem().string() + "'");
        total_rows += features.back().rows();
        width = features.back().cols();
    }
    if (features.empty()) throw greenseg::ArgumentError("train: no .feat files found");

    greenseg::TrainSet train;
    train.features = greenseg::Matrix(total_rows, width);
    train.labels.reserve(total_rows);
    std::size_t row = 0;
    for (std::size_t u = 0; u < features.size(); ++u) {
        for (std::size_t i = 0; i < features[u].rows(); ++i, ++row) {
            auto dst = train.features.row(row);
            const auto src = features[u].row(i);
            std::copy(src.begin(), src.end(), dst.begin());
            train.labels.push_back(labels[u][i]);
        }
    }
    features.clear();

    const greenseg::GbdtModel model = greenseg::fit(train, opt.gbdt, opt.threads);
    model.save(opt.out);
    std::printf("trained %zu trees on %zu points (%zu parameters) -> %s\n", model.num_trees(),
                total_rows, model.count_parameters(), opt.out.string().c_str());
    return 0;
}

int cmd_predict(const fs::path& model_path, const fs::path& features_dir, const fs::path& out,
                int threads) {
    const greenseg::GbdtModel model = greenseg::GbdtModel::load(model_path);
    for (const auto& [dir, name] : stage_dirs(features_dir)) {
        const fs::path out_dir = name.empty() ? out : out / name;
        fs::create_directories(out_dir);
        const auto files = greenseg::list_files(dir, ".feat");
        for (const fs::path& file : files) {
            const greenseg::Matrix features = greenseg::read_feature_file(file);
            const std::vector<std::uint8_t> pred = model.predict(features, threads);
            greenseg::write_labels_file(pred, out_dir / (file.stem().string() + ".labels"));
        }
        std::printf("predict: %zu units -> %s\n", files.size(), out_dir.string().c_str());
    }
    return 0;
}

int cmd_eval(const fs::path& pred_dir, const fs::path& truth_dir, const fs::path& report_path,
             const fs::path& json_path) {
    fs::path pred = pred_dir, truth = truth_dir;
    if (fs::is_directory(pred / "test")) pred = pred / "test";
    if (fs::is_directory(truth / "test")) truth = truth / "test";

    greenseg::ConfusionMatrix cm;
    std::size_t units = 0;
    for (const fs::path& file : greenseg::list_files(pred, ".labels")) {
        const std::vector<std::uint8_t> predicted = greenseg::read_labels_file(file);
        const fs::path truth_file = truth / file.filename();
        std::vector<std::uint8_t> expected;
        if (fs::exists(truth_file)) {
            expected = greenseg::read_labels_file(truth_file);
        } else {
            const fs::path room_file = truth / (file.stem().string() + ".txt");
            const greenseg::PointCloud room = greenseg::read_room_file(room_file);
            if (!room.has_labels())
                throw greenseg::StateError("eval: '" + room_file.string() + "' has no labels");
            expected = room.labels;
        }
        cm.accumulate(expected, predicted);
        ++units;
    }
    if (units == 0) throw greenseg::ArgumentError("eval: no .labels files in --pred");

    const greenseg::EvalReport report = greenseg::compute_iou(cm);
    const std::string text = greenseg::format_report(report, "evaluation over " +
                                                                 std::to_string(units) + " units");
    std::fputs(text.c_str(), stdout);
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        out << text;
    }
    if (!json_path.empty()) {
        std::ofstream out(json_path);
        out << report_json(report).dump(2) << "\n";
    }
    return 0;
}

struct CrossvalOptions {
    fs::path data;
    int folds = 6;
    greenseg::PipelineConfig pipeline;
    fs::path json_path;
};

int cmd_crossval(const CrossvalOptions& opt) {
    const std::vector<greenseg::AreaRoom> rooms = greenseg::load_area_rooms(opt.data);
    std::set<int> areas;
    for (const auto& r : rooms) areas.insert(r.area);
    if (static_cast<int>(areas.size()) != opt.folds)
        std::printf("note: %zu areas found, running %zu folds\n", areas.size(), areas.size());

    const std::vector<greenseg::EvalReport> reports =
        greenseg::cross_validate(rooms, opt.pipeline);
    const greenseg::EvalReport mean =
        greenseg::aggregate_folds(std::span<const greenseg::EvalReport>(reports));

    std::printf("%-10s", "class");
    for (const greenseg::EvalReport& r : reports) std::printf(" %6d", r.fold);
    std::printf(" %6s\n", "mean");
    for (std::size_t c = 0; c < greenseg::ClassTable::size(); ++c) {
        std::printf("%-10s", std::string(greenseg::ClassTable::name_of(c)).c_str());
        for (const greenseg::EvalReport& r : reports)
            std::printf(" %6.1f", 100.0 * r.per_class_iou[c]);
        std::printf(" %6.1f\n", 100.0 * mean.per_class_iou[c]);
    }
    std::printf("%-10s", "mIoU");
    for (const greenseg::EvalReport& r : reports) std::printf(" %6.1f", 100.0 * r.miou);
    std::printf(" %6.1f\n", 100.0 * mean.miou);
    std::printf("%-10s", "OA");
    for (const greenseg::EvalReport& r : reports) std::printf(" %6.1f", 100.0 * r.oa);
    std::printf(" %6.1f\n", 100.0 * mean.oa);

    if (!opt.json_path.empty()) {
        json j;
        j["folds"] = json::array();
        for (const greenseg::EvalReport& r : reports) j["folds"].push_back(report_json(r));
        j["mean"] = report_json(mean);
        std::ofstream out(opt.json_path);
        out << j.dump(2) << "\n";
    }
    return 0;
}

int cmd_visualize(const fs::path& in, const fs::path& out, const std::string& drop_class) {
    const greenseg::PointCloud cloud = greenseg::read_room_file(in);
    if (!cloud.has_labels())
        throw greenseg::StateError("visualize: '" + in.string() + "' has no labels");
    std::optional<std::uint8_t> drop;
    if (!drop_class.empty()) {
        drop = greenseg::ClassTable::id_of(drop_class);
        if (!drop) throw greenseg::ArgumentError("unknown class '" + drop_class + "'");
    }
    greenseg::export_colored_cloud(cloud, cloud.labels, out, drop);
    std::printf("wrote %s\n", out.string().c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"greenseg: green semantic segmentation of indoor point clouds"};
    app.require_subcommand(1);

    // convert
    fs::path s3dis_root, convert_out;
    auto* convert = app.add_subcommand("convert", "S3DIS Annotations layout -> labeled room files");
    convert->add_option("--s3dis-root", s3dis_root, "S3DIS root with Area_*/room/Annotations")
        ->required();
    convert->add_option("--out", convert_out, "output directory")->required();

    // preprocess
    PreprocessOptions pre;
    auto* preprocess = app.add_subcommand("preprocess", "build train/test units from rooms");
    preprocess->add_option("--style", pre.style, "block|view|room")
        ->check(CLI::IsMember({"block", "view", "room"}));
    preprocess->add_option("--grid", pre.grid, "voxel grid size in meters");
    preprocess->add_option("--test-area", pre.test_area, "held-out area index")
        ->check(CLI::Range(1, 6));
    preprocess->add_option("--seed", pre.seed, "random seed");
    preprocess->add_option("--in", pre.in, "converted rooms root (Area_* dirs)")->required();
    preprocess->add_option("--out", pre.out, "output directory")->required();
    preprocess->add_option("--block-size", pre.block_size, "block footprint in meters");
    preprocess->add_option("--points-per-unit", pre.points_per_unit, "points per block unit");
    preprocess->add_option("--unit-size", pre.unit_size, "points per view unit");
    preprocess->add_option("--train-target-units", pre.train_target_units, "view units, train");
    preprocess->add_option("--test-target-units", pre.test_target_units, "view units, test");

    // stats
    fs::path stats_in;
    auto* stats = app.add_subcommand("stats", "unit statistics of a preprocessed directory");
    stats->add_option("--in", stats_in, "units directory (or parent of train/test)")->required();

    // attributes
    fs::path attr_in, attr_out;
    std::size_t k_local = 16;
    int attr_threads = 1;
    auto* attributes = app.add_subcommand("attributes", "21-D per-point input attributes");
    attributes->add_option("--in", attr_in, "units directory")->required();
    attributes->add_option("--out", attr_out, "output directory")->required();
    attributes->add_option("--k-local", k_local, "neighborhood size for normals/geometry");
    attributes->add_option("--threads", attr_threads, "worker threads");

    // extract
    ExtractOptions ext;
    std::string ext_precision = "f32", ext_ratios = "0.25,0.25,0.5,0.5";
    auto* extract = app.add_subcommand("extract", "hop encoder/decoder point features");
    extract->add_option("--in", ext.in, "attribute directory")->required();
    extract->add_option("--out", ext.out, "output directory")->required();
    extract->add_option("--hops", ext.hops.num_hops, "number of encoder hops");
    extract->add_option("--k", ext.hops.k_neighbors, "KNN size per hop");
    extract->add_option("--ratios", ext_ratios, "comma-separated per-hop sample ratios");
    extract->add_option("--interp-neighbors", ext.hops.interp_neighbors, "decoder neighbors");
    extract->add_option("--precision", ext_precision, "f32|f16")
        ->check(CLI::IsMember({"f32", "f16"}));
    extract->add_option("--seed", ext.hops.seed, "random seed");
    extract->add_option("--params", ext.params, "standardization scalars file (fit or apply)")
        ->required();
    extract->add_option("--threads", ext.threads, "worker threads");

    // train
    TrainOptions tr;
    auto* train = app.add_subcommand("train", "fit the boosted-tree classifier");
    train->add_option("--features", tr.features, "feature directory")->required();
    train->add_option("--out", tr.out, "model output path")->required();
    train->add_option("--trees", tr.gbdt.total_trees, "total tree budget");
    train->add_option("--max-depth", tr.gbdt.max_depth, "maximum tree depth");
    train->add_option("--seed", tr.gbdt.seed, "random seed");
    train->add_option("--learning-rate", tr.gbdt.learning_rate, "shrinkage");
    train->add_option("--classes", tr.gbdt.num_classes, "number of classes");
    train->add_option("--bins", tr.gbdt.histogram_bins, "histogram bins");
    train->add_flag("--exact", tr.gbdt.exact_split, "exact greedy split finding");
    train->add_flag("--allow-missing-classes", tr.gbdt.allow_missing_classes,
                    "permit classes with no samples");
    train->add_option("--threads", tr.threads, "worker threads");

    // predict
    fs::path model_path, pred_features, pred_out;
    int pred_threads = 1;
    auto* predict = app.add_subcommand("predict", "label feature files with a trained model");
    predict->add_option("--model", model_path, "model file")->required();
    predict->add_option("--features", pred_features, "feature directory")->required();
    predict->add_option("--out", pred_out, "labels output directory")->required();
    predict->add_option("--threads", pred_threads, "worker threads");

    // eval
    fs::path eval_pred, eval_truth, eval_report, eval_json;
    auto* eval = app.add_subcommand("eval", "score predictions against ground truth");
    eval->add_option("--pred", eval_pred, "predicted labels directory")->required();
    eval->add_option("--truth", eval_truth, "ground-truth labels directory")->required();
    eval->add_option("--report", eval_report, "text report path");
    eval->add_option("--json", eval_json, "JSON report path");

    // crossval
    CrossvalOptions cv;
    std::string cv_precision = "f32";
    std::uint64_t cv_seed = 0;
    auto* crossval = app.add_subcommand("crossval", "k-fold room-style pipeline");
    crossval->add_option("--data", cv.data, "converted rooms root (Area_* dirs)")->required();
    crossval->add_option("--folds", cv.folds, "fold count");
    crossval->add_option("--grid", cv.pipeline.grid_size, "voxel grid size");
    crossval->add_option("--k-local", cv.pipeline.k_local, "attribute neighborhood");
    crossval->add_option("--k", cv.pipeline.hops.k_neighbors, "KNN size per hop");
    crossval->add_option("--trees", cv.pipeline.gbdt.total_trees, "total tree budget");
    crossval->add_option("--max-depth", cv.pipeline.gbdt.max_depth, "maximum tree depth");
    crossval->add_option("--precision", cv_precision, "f32|f16")
        ->check(CLI::IsMember({"f32", "f16"}));
    crossval->add_option("--seed", cv_seed, "random seed");
    crossval->add_option("--threads", cv.pipeline.threads, "worker threads");
    crossval->add_option("--json", cv.json_path, "JSON report path");

    // visualize
    fs::path vis_in, vis_out;
    std::string vis_drop;
    auto* visualize = app.add_subcommand("visualize", "palette-colored cloud for a labeled file");
    visualize->add_option("--in", vis_in, "labeled room file")->required();
    visualize->add_option("--out", vis_out, "colored cloud output")->required();
    visualize->add_option("--drop-class", vis_drop, "class name to omit (e.g. ceiling)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*convert) return cmd_convert(s3dis_root, convert_out);
        if (*preprocess) return cmd_preprocess(pre);
        if (*stats) return cmd_stats(stats_in);
        if (*attributes) return cmd_attributes(attr_in, attr_out, k_local, attr_threads);
        if (*extract) {
            ext.hops.sample_ratios = parse_ratios(ext_ratios);
            ext.precision = parse_precision(ext_precision);
            return cmd_extract(ext);
        }
        if (*train) return cmd_train(tr);
        if (*predict) return cmd_predict(model_path, pred_features, pred_out, pred_threads);
        if (*eval) return cmd_eval(eval_pred, eval_truth, eval_report, eval_json);
        if (*crossval) {
            cv.pipeline.precision = parse_precision(cv_precision);
            cv.pipeline.reseed(cv_seed);
            return cmd_crossval(cv);
        }
        if (*visualize) return cmd_visualize(vis_in, vis_out, vis_drop);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
