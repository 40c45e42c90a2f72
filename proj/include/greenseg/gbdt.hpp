#ifndef GREENSEG_GBDT_HPP
#define GREENSEG_GBDT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "greenseg/error.hpp"
#include "greenseg/matrix.hpp"
#include "greenseg/parallel.hpp"
#include "greenseg/point_cloud.hpp"

namespace greenseg {

struct GbdtConfig {
    std::size_t num_classes = kNumClasses;
    std::size_t total_trees = 128; // rounds = ceil(total_trees / num_classes)
    std::size_t max_depth = 6;
    double learning_rate = 0.3;
    double reg_lambda = 1.0;
    bool class_weighting = true; // inverse-frequency sample weights
    bool exact_split = false;    // exact greedy instead of histograms
    std::size_t histogram_bins = 256;
    bool allow_missing_classes = false;
    std::uint64_t seed = 0; // reserved for row subsampling; training is deterministic

    std::size_t rounds() const {
        return std::max<std::size_t>(1, (total_trees + num_classes - 1) / num_classes);
    }

    void validate() const {
        if (num_classes < 2) throw ArgumentError("GbdtConfig: need at least 2 classes");
        if (total_trees == 0) throw ArgumentError("GbdtConfig: total_trees must be positive");
        if (max_depth == 0) throw ArgumentError("GbdtConfig: max_depth must be positive");
        if (!(learning_rate > 0.0)) throw ArgumentError("GbdtConfig: learning rate must be positive");
        if (reg_lambda < 0.0) throw ArgumentError("GbdtConfig: reg_lambda must be >= 0");
        if (histogram_bins < 2 || histogram_bins > 256)
            throw ArgumentError("GbdtConfig: histogram_bins must be in [2, 256]");
    }
};

struct TrainSet {
    Matrix features;                  // T x D
    std::vector<std::uint8_t> labels; // T class ids
    std::vector<double> weights;      // optional per-sample weights (empty = uniform)
};

inline constexpr std::uint32_t kLeafMarker = 0xffffffffu;

struct TreeNode {
    std::uint32_t feature = kLeafMarker;
    float threshold = 0.0f;
    std::int32_t left = -1;
    std::int32_t right = -1;
    float value = 0.0f; // leaf output with the learning rate folded in

    bool is_leaf() const { return feature == kLeafMarker; }
};

struct Tree {
    std::vector<TreeNode> nodes;

    double predict(std::span<const double> row) const {
        std::size_t n = 0;
        while (!nodes[n].is_leaf()) {
            const TreeNode& t = nodes[n];
            n = static_cast<std::size_t>(row[t.feature] < static_cast<double>(t.threshold)
                                             ? t.left
                                             : t.right);
        }
        return static_cast<double>(nodes[n].value);
    }

    std::size_t internal_count() const {
        std::size_t c = 0;
        for (const TreeNode& n : nodes)
            if (!n.is_leaf()) ++c;
        return c;
    }
    std::size_t leaf_count() const { return nodes.size() - internal_count(); }
};

/// Multiclass gradient-boosted tree ensemble (one tree per class per
/// round, softmax objective). Trees store float thresholds and leaf
/// values, so the binary serialization round-trips predictions bit
/// exactly.
class GbdtModel {
public:
    GbdtModel() = default;
    GbdtModel(std::size_t num_classes, std::size_t feature_dim, std::size_t max_depth,
              double learning_rate, std::vector<double> class_weights, std::vector<Tree> trees)
        : num_classes_(num_classes),
          feature_dim_(feature_dim),
          max_depth_(max_depth),
          learning_rate_(learning_rate),
          class_weights_(std::move(class_weights)),
          trees_(std::move(trees)) {}

    std::size_t num_classes() const { return num_classes_; }
    std::size_t feature_dim() const { return feature_dim_; }
    std::size_t max_depth() const { return max_depth_; }
    double learning_rate() const { return learning_rate_; }
    std::size_t num_trees() const { return trees_.size(); }
    const std::vector<Tree>& trees() const { return trees_; }
    const std::vector<double>& class_weights() const { return class_weights_; }

    /// Per-round training log-loss recorded by fit (rounds + 1 entries,
    /// the first before any tree). Not serialized.
    const std::vector<double>& training_loss() const { return training_loss_; }

    /// Raw additive margins per class.
    std::vector<double> predict_margins(std::span<const double> row) const {
        std::vector<double> margins(num_classes_, 0.0);
        for (std::size_t t = 0; t < trees_.size(); ++t)
            margins[t % num_classes_] += trees_[t].predict(row);
        return margins;
    }

    /// Softmax scores; they sum to 1 per point.
    std::vector<double> predict_scores(std::span<const double> row) const {
        std::vector<double> s = predict_margins(row);
        const double top = *std::max_element(s.begin(), s.end());
        double sum = 0.0;
        for (double& v : s) {
            v = std::exp(v - top);
            sum += v;
        }
        for (double& v : s) v /= sum;
        return s;
    }

    /// Argmax class; ties go to the lower class id.
    std::uint8_t predict_row(std::span<const double> row) const {
        const std::vector<double> m = predict_margins(row);
        std::size_t best = 0;
        for (std::size_t c = 1; c < m.size(); ++c)
            if (m[c] > m[best]) best = c;
        return static_cast<std::uint8_t>(best);
    }

    std::vector<std::uint8_t> predict(const Matrix& features, int threads = 1) const {
        if (!trees_.empty() && features.cols() != feature_dim_)
            throw ArgumentError("predict: feature width " + std::to_string(features.cols()) +
                                " does not match model dimension " + std::to_string(feature_dim_));
        std::vector<std::uint8_t> out(features.rows());
        parallel_for(features.rows(), threads,
                     [&](std::size_t i) { out[i] = predict_row(features.row(i)); });
        return out;
    }

    /// 2 parameters per internal node (feature id, threshold) and 1 per
    /// leaf (value).
    std::size_t count_parameters() const {
        std::size_t total = 0;
        for (const Tree& t : trees_) total += 2 * t.internal_count() + t.leaf_count();
        return total;
    }

    // --- serialization -------------------------------------------------
    // "GSIPGBDT", u32 version, u32 classes, u32 feature_dim, u32 depth,
    // f32 learning_rate, u32 tree count, f64 class weights, then per tree
    // a u32 node count and (u32 feature, f32 threshold, i32 left,
    // i32 right, f32 value) records.

    void save(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write '" + path.string() + "'");
        out.write(kMagic, 8);
        write_u32(out, kVersion);
        write_u32(out, static_cast<std::uint32_t>(num_classes_));
        write_u32(out, static_cast<std::uint32_t>(feature_dim_));
        write_u32(out, static_cast<std::uint32_t>(max_depth_));
        const float lr = static_cast<float>(learning_rate_);
        out.write(reinterpret_cast<const char*>(&lr), 4);
        write_u32(out, static_cast<std::uint32_t>(trees_.size()));
        out.write(reinterpret_cast<const char*>(class_weights_.data()),
                  static_cast<std::streamsize>(class_weights_.size() * 8));
        for (const Tree& t : trees_) {
            write_u32(out, static_cast<std::uint32_t>(t.nodes.size()));
            for (const TreeNode& n : t.nodes) {
                out.write(reinterpret_cast<const char*>(&n.feature), 4);
                out.write(reinterpret_cast<const char*>(&n.threshold), 4);
                out.write(reinterpret_cast<const char*>(&n.left), 4);
                out.write(reinterpret_cast<const char*>(&n.right), 4);
                out.write(reinterpret_cast<const char*>(&n.value), 4);
            }
        }
        if (!out) throw IoError("write failed for '" + path.string() + "'");
    }

    static GbdtModel load(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open '" + path.string() + "'");
        char magic[8];
        in.read(magic, 8);
        if (!in || std::memcmp(magic, kMagic, 8) != 0)
            throw FormatError("'" + path.string() + "': bad magic");
        const std::uint32_t version = read_u32(in, path);
        if (version != kVersion)
            throw FormatError("'" + path.string() + "': unsupported version " +
                              std::to_string(version));

        GbdtModel m;
        m.num_classes_ = read_u32(in, path);
        m.feature_dim_ = read_u32(in, path);
        m.max_depth_ = read_u32(in, path);
        float lr = 0.0f;
        in.read(reinterpret_cast<char*>(&lr), 4);
        m.learning_rate_ = static_cast<double>(lr);
        const std::uint32_t tree_count = read_u32(in, path);
        if (m.num_classes_ == 0 || m.num_classes_ > 4096)
            throw FormatError("'" + path.string() + "': implausible class count");
        m.class_weights_.resize(m.num_classes_);
        in.read(reinterpret_cast<char*>(m.class_weights_.data()),
                static_cast<std::streamsize>(m.num_classes_ * 8));
        if (!in) throw FormatError("'" + path.string() + "': truncated header");

        m.trees_.resize(tree_count);
        for (Tree& t : m.trees_) {
            const std::uint32_t node_count = read_u32(in, path);
            t.nodes.resize(node_count);
            for (TreeNode& n : t.nodes) {
                in.read(reinterpret_cast<char*>(&n.feature), 4);
                in.read(reinterpret_cast<char*>(&n.threshold), 4);
                in.read(reinterpret_cast<char*>(&n.left), 4);
                in.read(reinterpret_cast<char*>(&n.right), 4);
                in.read(reinterpret_cast<char*>(&n.value), 4);
            }
            if (!in) throw FormatError("'" + path.string() + "': truncated tree table");
            for (const TreeNode& n : t.nodes) {
                if (n.is_leaf()) continue;
                if (n.feature >= m.feature_dim_)
                    throw FormatError("'" + path.string() + "': split feature out of range");
                if (n.left < 0 || n.right < 0 ||
                    static_cast<std::size_t>(n.left) >= t.nodes.size() ||
                    static_cast<std::size_t>(n.right) >= t.nodes.size())
                    throw FormatError("'" + path.string() + "': child offset out of range");
            }
        }
        return m;
    }

private:
    static constexpr char kMagic[8] = {'G', 'S', 'I', 'P', 'G', 'B', 'D', 'T'};
    static constexpr std::uint32_t kVersion = 1;

    static void write_u32(std::ofstream& out, std::uint32_t v) {
        out.write(reinterpret_cast<const char*>(&v), 4);
    }
    static std::uint32_t read_u32(std::ifstream& in, const std::filesystem::path& path) {
        std::uint32_t v = 0;
        in.read(reinterpret_cast<char*>(&v), 4);
        if (!in) throw FormatError("'" + path.string() + "': truncated");
        return v;
    }

    std::size_t num_classes_ = kNumClasses;
    std::size_t feature_dim_ = 0;
    std::size_t max_depth_ = 6;
    double learning_rate_ = 0.3;
    std::vector<double> class_weights_;
    std::vector<Tree> trees_;
    std::vector<double> training_loss_;

    friend GbdtModel fit(const TrainSet&, const GbdtConfig&, int);
};

namespace detail {

struct SplitCandidate {
    bool valid = false;
    double gain = -std::numeric_limits<double>::infinity();
    std::uint32_t feature = 0;
    float threshold = 0.0f;

    // Deterministic total order: higher gain, then lower feature, then
    // lower threshold.
    bool better_than(const SplitCandidate& o) const {
        if (!o.valid) return valid;
        if (!valid) return false;
        if (gain != o.gain) return gain > o.gain;
        if (feature != o.feature) return feature < o.feature;
        return threshold < o.threshold;
    }
};

inline double split_gain(double gl, double hl, double gr, double hr, double lambda) {
    const double g = gl + gr, h = hl + hr;
    return 0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda) - g * g / (h + lambda));
}

/// Quantile cut points per feature, rounded to float so training-time
/// partitions agree bit-exactly with the serialized thresholds.
struct FeatureBins {
    std::vector<std::vector<float>> cuts; // per feature, ascending
    std::vector<std::uint8_t> binned;     // feature-major, T entries per feature
    std::size_t rows = 0;

    std::uint8_t bin_of(std::size_t feature, std::size_t row) const {
        return binned[feature * rows + row];
    }
};

inline FeatureBins build_bins(const Matrix& features, std::size_t max_bins) {
    const std::size_t t = features.rows(), d = features.cols();
    FeatureBins bins;
    bins.rows = t;
    bins.cuts.resize(d);
    bins.binned.resize(t * d);

    std::vector<double> column(t);
    for (std::size_t f = 0; f < d; ++f) {
        for (std::size_t i = 0; i < t; ++i) column[i] = features(i, f);
        std::vector<double> sorted = column;
        std::sort(sorted.begin(), sorted.end());

        std::vector<float>& cuts = bins.cuts[f];
        for (std::size_t j = 1; j < max_bins; ++j) {
            const double v = sorted[j * t / max_bins];
            const float c = static_cast<float>(v);
            // drop cuts that cannot separate anything
            if (static_cast<double>(c) <= sorted.front()) continue;
            if (cuts.empty() || c > cuts.back()) cuts.push_back(c);
        }
        for (std::size_t i = 0; i < t; ++i) {
            // bin = number of cuts <= x; split at cut s keeps bins [0, s] left
            std::size_t lo = 0, hi = cuts.size();
            while (lo < hi) {
                const std::size_t mid = (lo + hi) / 2;
                if (static_cast<double>(cuts[mid]) <= column[i]) lo = mid + 1;
                else hi = mid;
            }
            bins.binned[f * t + i] = static_cast<std::uint8_t>(lo);
        }
    }
    return bins;
}

struct BinStats {
    double g = 0.0, h = 0.0;
    std::uint32_t count = 0;
};

inline SplitCandidate best_histogram_split(const FeatureBins& bins, std::size_t feature,
                                           std::span<const std::uint32_t> rows,
                                           std::span<const double> grad,
                                           std::span<const double> hess, double total_g,
                                           double total_h, double lambda) {
    const std::vector<float>& cuts = bins.cuts[feature];
    SplitCandidate best;
    if (cuts.empty()) return best;

    std::array<BinStats, 256> hist{};
    for (std::uint32_t r : rows) {
        BinStats& b = hist[bins.bin_of(feature, r)];
        b.g += grad[r];
        b.h += hess[r];
        ++b.count;
    }

    double gl = 0.0, hl = 0.0;
    std::uint32_t count_left = 0;
    for (std::size_t s = 0; s < cuts.size(); ++s) {
        gl += hist[s].g;
        hl += hist[s].h;
        count_left += hist[s].count;
        if (count_left == 0) continue;
        if (count_left == rows.size()) break;
        const double gain = split_gain(gl, hl, total_g - gl, total_h - hl, lambda);
        SplitCandidate cand{true, gain, static_cast<std::uint32_t>(feature), cuts[s]};
        if (cand.better_than(best)) best = cand;
    }
    return best;
}

inline SplitCandidate best_exact_split(const Matrix& features, std::size_t feature,
                                       std::span<const std::uint32_t> rows,
                                       std::span<const double> grad,
                                       std::span<const double> hess, double total_g,
                                       double total_h, double lambda,
                                       std::vector<std::pair<double, std::uint32_t>>& scratch) {
    SplitCandidate best;
    scratch.clear();
    scratch.reserve(rows.size());
    for (std::uint32_t r : rows) scratch.emplace_back(features(r, feature), r);
    std::sort(scratch.begin(), scratch.end());

    double gl = 0.0, hl = 0.0;
    for (std::size_t i = 0; i + 1 < scratch.size(); ++i) {
        gl += grad[scratch[i].second];
        hl += hess[scratch[i].second];
        const double lo = scratch[i].first, hi = scratch[i + 1].first;
        if (!(lo < hi)) continue;
        const float thr = static_cast<float>(0.5 * (lo + hi));
        // the float threshold must actually fall in the gap, otherwise the
        // realized partition would differ from the scanned one
        if (!(static_cast<double>(thr) > lo && static_cast<double>(thr) <= hi)) continue;
        const double gain = split_gain(gl, hl, total_g - gl, total_h - hl, lambda);
        SplitCandidate cand{true, gain, static_cast<std::uint32_t>(feature), thr};
        if (cand.better_than(best)) best = cand;
    }
    return best;
}

struct TreeTrainer {
    const Matrix& features;
    const FeatureBins* bins; // null in exact mode
    const GbdtConfig& config;
    int threads = 1;

    Tree build(std::span<const double> grad, std::span<const double> hess,
               std::vector<std::uint32_t>& rows, std::vector<double>& margin_out) {
        Tree tree;
        struct Work {
            std::size_t node;
            std::uint32_t begin, end;
            std::size_t depth;
        };
        std::vector<Work> queue;
        tree.nodes.emplace_back();
        queue.push_back({0, 0, static_cast<std::uint32_t>(rows.size()), 0});
        std::vector<std::uint32_t> scratch_rows(rows.size());
        std::vector<std::pair<double, std::uint32_t>> scratch_sort;

        while (!queue.empty()) {
            const Work w = queue.back();
            queue.pop_back();
            std::span<const std::uint32_t> node_rows(rows.data() + w.begin, w.end - w.begin);

            double total_g = 0.0, total_h = 0.0;
            for (std::uint32_t r : node_rows) {
                total_g += grad[r];
                total_h += hess[r];
            }

            SplitCandidate best;
            if (w.depth < config.max_depth && node_rows.size() >= 2) {
                const std::size_t d = features.cols();
                std::vector<SplitCandidate> per_feature(d);
                parallel_for(d, threads, [&](std::size_t f) {
                    if (bins) {
                        per_feature[f] = best_histogram_split(*bins, f, node_rows, grad, hess,
                                                              total_g, total_h, config.reg_lambda);
                    } else {
                        std::vector<std::pair<double, std::uint32_t>> local;
                        per_feature[f] = best_exact_split(features, f, node_rows, grad, hess,
                                                          total_g, total_h, config.reg_lambda,
                                                          local);
                    }
                });
                for (const SplitCandidate& c : per_feature)
                    if (c.better_than(best)) best = c;
                if (best.valid && !(best.gain > 1e-12)) best.valid = false;
            }

            if (!best.valid) {
                const double leaf = -total_g / (total_h + config.reg_lambda);
                tree.nodes[w.node].feature = kLeafMarker;
                tree.nodes[w.node].value = static_cast<float>(config.learning_rate * leaf);
                for (std::uint32_t r : node_rows)
                    margin_out[r] += static_cast<double>(tree.nodes[w.node].value);
                continue;
            }

            // stable partition on x < threshold keeps in-node row order
            const double thr = static_cast<double>(best.threshold);
            std::uint32_t n_left = 0;
            for (std::uint32_t i = w.begin; i < w.end; ++i)
                if (features(rows[i], best.feature) < thr) scratch_rows[n_left++] = rows[i];
            std::uint32_t n_right = n_left;
            for (std::uint32_t i = w.begin; i < w.end; ++i)
                if (!(features(rows[i], best.feature) < thr)) scratch_rows[n_right++] = rows[i];
            std::copy(scratch_rows.begin(), scratch_rows.begin() + (w.end - w.begin),
                      rows.begin() + w.begin);

            const std::size_t left_id = tree.nodes.size();
            tree.nodes.emplace_back();
            const std::size_t right_id = tree.nodes.size();
            tree.nodes.emplace_back();
            tree.nodes[w.node].feature = best.feature;
            tree.nodes[w.node].threshold = best.threshold;
            tree.nodes[w.node].left = static_cast<std::int32_t>(left_id);
            tree.nodes[w.node].right = static_cast<std::int32_t>(right_id);

            queue.push_back({right_id, w.begin + n_left, w.end, w.depth + 1});
            queue.push_back({left_id, w.begin, w.begin + n_left, w.depth + 1});
        }
        return tree;
    }
};

} // namespace detail

/// Trains the boosted ensemble with a softmax objective. Per-class
/// inverse-frequency sample weights mitigate label imbalance; tie-breaks
/// in split selection make training a deterministic function of the
/// inputs.
inline GbdtModel fit(const TrainSet& train, const GbdtConfig& config, int threads = 1) {
    config.validate();
    const std::size_t t = train.features.rows();
    const std::size_t d = train.features.cols();
    const std::size_t c = config.num_classes;
    if (t == 0) throw ArgumentError("fit: empty training set");
    if (!train.features.all_finite()) throw StateError("fit: non-finite feature value");
    if (train.labels.size() != t) throw ArgumentError("fit: label count != row count");
    if (!train.weights.empty() && train.weights.size() != t)
        throw ArgumentError("fit: weight count != row count");

    std::vector<std::size_t> class_count(c, 0);
    for (std::uint8_t l : train.labels) {
        if (l >= c) throw ArgumentError("fit: label out of range");
        ++class_count[l];
    }
    if (!config.allow_missing_classes)
        for (std::size_t k = 0; k < c; ++k)
            if (class_count[k] == 0)
                throw ArgumentError("fit: class " + std::to_string(k) +
                                    " has no samples (set allow_missing_classes to permit)");

    std::vector<double> class_weights(c, 1.0);
    if (config.class_weighting)
        for (std::size_t k = 0; k < c; ++k)
            if (class_count[k] > 0)
                class_weights[k] = static_cast<double>(t) /
                                   (static_cast<double>(c) * static_cast<double>(class_count[k]));

    std::vector<double> sample_weight(t);
    for (std::size_t i = 0; i < t; ++i)
        sample_weight[i] =
            class_weights[train.labels[i]] * (train.weights.empty() ? 1.0 : train.weights[i]);

    detail::FeatureBins bins;
    if (!config.exact_split) bins = detail::build_bins(train.features, config.histogram_bins);
    detail::TreeTrainer trainer{train.features, config.exact_split ? nullptr : &bins, config,
                                threads};

    std::vector<double> margins(t * c, 0.0); // row-major F values
    std::vector<double> prob(t * c);
    std::vector<double> grad(t), hess(t);
    std::vector<std::uint32_t> rows(t);

    GbdtModel model(c, d, config.max_depth, config.learning_rate, class_weights, {});

    const auto compute_prob_and_loss = [&]() {
        double loss = 0.0, weight_total = 0.0;
        for (std::size_t i = 0; i < t; ++i) {
            const double* f = &margins[i * c];
            double top = f[0];
            for (std::size_t k = 1; k < c; ++k) top = std::max(top, f[k]);
            double sum = 0.0;
            for (std::size_t k = 0; k < c; ++k) {
                prob[i * c + k] = std::exp(f[k] - top);
                sum += prob[i * c + k];
            }
            for (std::size_t k = 0; k < c; ++k) prob[i * c + k] /= sum;
            loss -= sample_weight[i] *
                    std::log(std::max(prob[i * c + train.labels[i]], 1e-15));
            weight_total += sample_weight[i];
        }
        return loss / weight_total;
    };

    model.training_loss_.push_back(compute_prob_and_loss());
    std::vector<double> margin_delta(t);
    for (std::size_t round = 0; round < config.rounds(); ++round) {
        for (std::size_t k = 0; k < c; ++k) {
            for (std::size_t i = 0; i < t; ++i) {
                const double p = prob[i * c + k];
                const double y = train.labels[i] == k ? 1.0 : 0.0;
                grad[i] = sample_weight[i] * (p - y);
                hess[i] = sample_weight[i] * std::max(2.0 * p * (1.0 - p), 1e-16);
            }
            for (std::size_t i = 0; i < t; ++i) rows[i] = static_cast<std::uint32_t>(i);
            std::fill(margin_delta.begin(), margin_delta.end(), 0.0);
            Tree tree = trainer.build(grad, hess, rows, margin_delta);
            for (std::size_t i = 0; i < t; ++i) margins[i * c + k] += margin_delta[i];
            model.trees_.push_back(std::move(tree));
        }
        model.training_loss_.push_back(compute_prob_and_loss());
    }
    return model;
}

/// Parameter accounting per the 2-per-internal-node, 1-per-leaf rule.
inline std::size_t count_parameters(const GbdtModel& model) { return model.count_parameters(); }

} // namespace greenseg

#endif // GREENSEG_GBDT_HPP
