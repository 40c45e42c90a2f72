#ifndef GREENSEG_PIPELINE_HPP
#define GREENSEG_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "greenseg/attributes.hpp"
#include "greenseg/dataset.hpp"
#include "greenseg/error.hpp"
#include "greenseg/evaluation.hpp"
#include "greenseg/extractor.hpp"
#include "greenseg/gbdt.hpp"
#include "greenseg/parallel.hpp"
#include "greenseg/point_cloud.hpp"
#include "greenseg/preprocess.hpp"

namespace greenseg {

struct PipelineConfig {
    double grid_size = 0.04;
    std::size_t k_local = 16;
    HopConfig hops;
    GbdtConfig gbdt;
    Precision precision = Precision::f32;
    std::uint64_t seed = 0;
    int threads = 1;

    /// Propagates the shared seed into the stage configs.
    void reseed(std::uint64_t s) {
        seed = s;
        hops.seed = s;
        gbdt.seed = s;
    }
};

struct FoldOutcome {
    EvalReport report;
    ExtractorParams params;
    GbdtModel model;
    std::vector<std::string> test_unit_ids;
    std::vector<std::vector<std::uint8_t>> test_predictions;
};

namespace detail {

inline std::vector<PointCloud> attach_attributes(std::vector<PointCloud> units,
                                                 std::size_t k_local, int threads) {
    parallel_for(units.size(), threads,
                 [&](std::size_t i) { units[i] = build_attributes(units[i], k_local); });
    return units;
}

inline Matrix decode_quantized(const HopPyramid& pyramid, const HopConfig& hops,
                               Precision precision, int threads) {
    Matrix features = decode(pyramid, hops, threads);
    quantize_features(features, precision);
    return features;
}

} // namespace detail

/// Room-style fold: rooms in `test_area` are held out, the rest train the
/// extractor statistics and the classifier; the held-out rooms are
/// voxel-downsampled, featurized with the stored statistics, predicted,
/// and scored.
inline FoldOutcome run_fold_on_rooms(std::span<const AreaRoom> rooms, int test_area,
                                     const PipelineConfig& config) {
    std::vector<PointCloud> train_rooms, test_rooms;
    for (const AreaRoom& r : rooms) {
        if (!r.room.has_labels())
            throw StateError("run_fold: room '" + r.room.unit_id + "' has no labels");
        (r.area == test_area ? test_rooms : train_rooms).push_back(r.room);
    }
    if (train_rooms.empty()) throw ArgumentError("run_fold: no training rooms");
    if (test_rooms.empty())
        throw ArgumentError("run_fold: no rooms in test area " + std::to_string(test_area));

    UnitSet train_units = make_room_units(train_rooms, config.grid_size, config.seed);
    train_units.split = Split::train;
    train_units.fold = test_area;
    UnitSet test_units =
        make_room_units(test_rooms, config.grid_size, mix_seed(config.seed, 0x7e57));
    test_units.split = Split::test;
    test_units.fold = test_area;

    train_units.units = detail::attach_attributes(std::move(train_units.units), config.k_local,
                                                  config.threads);
    test_units.units =
        detail::attach_attributes(std::move(test_units.units), config.k_local, config.threads);

    FoldOutcome outcome;
    auto [pyramids, params] = encode_training(train_units.units, config.hops, config.threads);
    outcome.params = std::move(params);

    std::size_t total_rows = 0, width = 0;
    std::vector<Matrix> train_features(pyramids.size());
    parallel_for(pyramids.size(), config.threads, [&](std::size_t u) {
        train_features[u] =
            detail::decode_quantized(pyramids[u], config.hops, config.precision, 1);
    });
    pyramids.clear();
    for (const Matrix& f : train_features) {
        total_rows += f.rows();
        width = f.cols();
    }

    TrainSet train;
    train.features = Matrix(total_rows, width);
    train.labels.reserve(total_rows);
    std::size_t row = 0;
    for (std::size_t u = 0; u < train_features.size(); ++u) {
        const Matrix& f = train_features[u];
        for (std::size_t i = 0; i < f.rows(); ++i, ++row) {
            auto dst = train.features.row(row);
            const auto src = f.row(i);
            std::copy(src.begin(), src.end(), dst.begin());
            train.labels.push_back(train_units.units[u].labels[i]);
        }
    }
    train_features.clear();

    GbdtConfig gbdt = config.gbdt;
    gbdt.allow_missing_classes = true; // folds need not contain every class
    outcome.model = fit(train, gbdt, config.threads);

    ConfusionMatrix cm(gbdt.num_classes);
    for (const PointCloud& unit : test_units.units) {
        HopPyramid pyramid = encode(unit, config.hops, &outcome.params, nullptr, config.threads);
        const Matrix features =
            detail::decode_quantized(pyramid, config.hops, config.precision, config.threads);
        std::vector<std::uint8_t> pred = outcome.model.predict(features, config.threads);
        cm.accumulate(unit.labels, pred);
        outcome.test_unit_ids.push_back(unit.unit_id);
        outcome.test_predictions.push_back(std::move(pred));
    }
    outcome.report = compute_iou(cm, test_area);
    return outcome;
}

inline EvalReport run_fold(const std::filesystem::path& data_root, int test_area,
                           const PipelineConfig& config) {
    const std::vector<AreaRoom> rooms = load_area_rooms(data_root);
    return run_fold_on_rooms(rooms, test_area, config).report;
}

/// Runs one fold per distinct area (the standard 6-fold setup on S3DIS)
/// and returns the per-fold reports in area order.
inline std::vector<EvalReport> cross_validate(std::span<const AreaRoom> rooms,
                                              const PipelineConfig& config) {
    std::set<int> areas;
    for (const AreaRoom& r : rooms) areas.insert(r.area);
    if (areas.size() < 2) throw ArgumentError("cross_validate: need at least 2 areas");
    std::vector<EvalReport> reports;
    for (int area : areas) reports.push_back(run_fold_on_rooms(rooms, area, config).report);
    return reports;
}

} // namespace greenseg

#endif // GREENSEG_PIPELINE_HPP
