#ifndef GREENSEG_EVALUATION_HPP
#define GREENSEG_EVALUATION_HPP

#include <array>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "greenseg/error.hpp"
#include "greenseg/point_cloud.hpp"

namespace greenseg {

/// Rows are ground truth, columns are predictions.
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(std::size_t num_classes = kNumClasses)
        : num_classes_(num_classes), counts_(num_classes * num_classes, 0) {}

    std::size_t num_classes() const { return num_classes_; }
    std::uint64_t at(std::size_t truth, std::size_t pred) const {
        return counts_[truth * num_classes_ + pred];
    }

    void accumulate(std::span<const std::uint8_t> truth, std::span<const std::uint8_t> pred) {
        if (truth.size() != pred.size())
            throw ArgumentError("accumulate: truth and prediction lengths differ");
        for (std::size_t i = 0; i < truth.size(); ++i) {
            if (truth[i] >= num_classes_ || pred[i] >= num_classes_)
                throw ArgumentError("accumulate: label out of range");
            ++counts_[truth[i] * num_classes_ + pred[i]];
        }
    }

    void add(const ConfusionMatrix& other) {
        if (other.num_classes_ != num_classes_)
            throw ArgumentError("ConfusionMatrix::add: class count mismatch");
        for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    }

    std::uint64_t total() const {
        std::uint64_t t = 0;
        for (std::uint64_t v : counts_) t += v;
        return t;
    }

private:
    std::size_t num_classes_;
    std::vector<std::uint64_t> counts_;
};

struct EvalReport {
    std::vector<double> per_class_iou;        // one entry per class
    std::vector<std::uint64_t> per_class_union; // |truth_c ∪ pred_c|
    double miou = 0.0;         // mean over all classes, zero-union classes count as 0
    double miou_present = 0.0; // mean over classes with nonzero union only
    double oa = 0.0;
    int fold = 0;
    std::uint64_t point_count = 0;
};

/// Per-class IoU, mIoU and overall accuracy. A class with zero union
/// contributes IoU 0 to `miou` (keeping fold means comparable across
/// areas); `miou_present` averages only classes that occur in truth or
/// prediction.
inline EvalReport compute_iou(const ConfusionMatrix& cm, int fold = 0) {
    const std::uint64_t total = cm.total();
    if (total == 0) throw StateError("compute_iou: empty confusion matrix");
    const std::size_t c = cm.num_classes();

    EvalReport report;
    report.fold = fold;
    report.point_count = total;
    report.per_class_iou.resize(c, 0.0);
    report.per_class_union.resize(c, 0);

    std::uint64_t trace = 0;
    double iou_sum = 0.0, present_sum = 0.0;
    std::size_t present = 0;
    for (std::size_t k = 0; k < c; ++k) {
        std::uint64_t row = 0, col = 0;
        for (std::size_t j = 0; j < c; ++j) {
            row += cm.at(k, j);
            col += cm.at(j, k);
        }
        const std::uint64_t diagonal = cm.at(k, k);
        const std::uint64_t unions = row + col - diagonal;
        report.per_class_union[k] = unions;
        if (unions > 0) {
            report.per_class_iou[k] = static_cast<double>(diagonal) / static_cast<double>(unions);
            present_sum += report.per_class_iou[k];
            ++present;
        }
        iou_sum += report.per_class_iou[k];
        trace += diagonal;
    }
    report.miou = iou_sum / static_cast<double>(c);
    report.miou_present = present > 0 ? present_sum / static_cast<double>(present) : 0.0;
    report.oa = static_cast<double>(trace) / static_cast<double>(total);
    return report;
}

/// Averages per-class IoU and OA across folds (the paper's "mean"
/// column); order of the input reports does not matter.
inline EvalReport aggregate_folds(std::span<const EvalReport> reports) {
    if (reports.empty()) throw ArgumentError("aggregate_folds: no reports");
    const std::size_t c = reports.front().per_class_iou.size();
    for (const EvalReport& r : reports)
        if (r.per_class_iou.size() != c)
            throw ArgumentError("aggregate_folds: class count mismatch");

    EvalReport agg;
    agg.fold = 0;
    agg.per_class_iou.assign(c, 0.0);
    agg.per_class_union.assign(c, 0);
    for (const EvalReport& r : reports) {
        for (std::size_t k = 0; k < c; ++k) {
            agg.per_class_iou[k] += r.per_class_iou[k];
            agg.per_class_union[k] += r.per_class_union[k];
        }
        agg.oa += r.oa;
        agg.point_count += r.point_count;
    }
    const double n = static_cast<double>(reports.size());
    double iou_sum = 0.0, present_sum = 0.0;
    std::size_t present = 0;
    for (std::size_t k = 0; k < c; ++k) {
        agg.per_class_iou[k] /= n;
        iou_sum += agg.per_class_iou[k];
        if (agg.per_class_union[k] > 0) {
            present_sum += agg.per_class_iou[k];
            ++present;
        }
    }
    agg.miou = iou_sum / static_cast<double>(c);
    agg.miou_present = present > 0 ? present_sum / static_cast<double>(present) : 0.0;
    agg.oa /= n;
    return agg;
}

/// Fixed 13-color palette for prediction dumps, indexed by class id.
inline const std::array<Rgb8, kNumClasses>& class_palette() {
    static const std::array<Rgb8, kNumClasses> palette = {{
        {170, 170, 170}, // ceiling
        {95, 156, 196},  // floor
        {218, 165, 32},  // wall
        {222, 49, 99},   // beam
        {128, 0, 128},   // column
        {0, 200, 200},   // window
        {160, 82, 45},   // door
        {60, 179, 113},  // table
        {255, 127, 80},  // chair
        {153, 50, 204},  // sofa
        {139, 69, 19},   // bookcase
        {25, 25, 112},   // board
        {128, 128, 0},   // clutter
    }};
    return palette;
}

/// Writes "x y z r g b" lines with each point colored by its predicted
/// class; an optional class id is dropped from the output (the paper
/// removes ceilings to expose room interiors).
inline void export_colored_cloud(const PointCloud& cloud, std::span<const std::uint8_t> pred,
                                 const std::filesystem::path& path,
                                 std::optional<std::uint8_t> drop_class = std::nullopt) {
    if (pred.size() != cloud.size())
        throw ArgumentError("export_colored_cloud: prediction count != point count");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    char buf[128];
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (pred[i] >= kNumClasses) throw ArgumentError("export_colored_cloud: label out of range");
        if (drop_class && pred[i] == *drop_class) continue;
        const Rgb8 c = class_palette()[pred[i]];
        const Vec3& p = cloud.positions[i];
        const int n = std::snprintf(buf, sizeof(buf), "%.6f %.6f %.6f %d %d %d\n", p.x, p.y, p.z,
                                    int(c.r), int(c.g), int(c.b));
        out.write(buf, n);
    }
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

/// Table-style text report: one row per class plus mIoU/OA, percentages
/// with one decimal.
inline std::string format_report(const EvalReport& report, std::string_view title) {
    std::string text;
    char buf[128];
    text += std::string(title) + "\n";
    for (std::size_t k = 0; k < report.per_class_iou.size(); ++k) {
        const std::string name =
            k < ClassTable::size() ? std::string(ClassTable::name_of(k)) : std::to_string(k);
        std::snprintf(buf, sizeof(buf), "  %-10s %5.1f\n", name.c_str(),
                      100.0 * report.per_class_iou[k]);
        text += buf;
    }
    std::snprintf(buf, sizeof(buf), "  %-10s %5.1f\n", "mIoU", 100.0 * report.miou);
    text += buf;
    std::snprintf(buf, sizeof(buf), "  %-10s %5.1f\n", "OA", 100.0 * report.oa);
    text += buf;
    return text;
}

} // namespace greenseg

#endif // GREENSEG_EVALUATION_HPP
