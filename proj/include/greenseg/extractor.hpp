#ifndef GREENSEG_EXTRACTOR_HPP
#define GREENSEG_EXTRACTOR_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "greenseg/error.hpp"
#include "greenseg/feature_io.hpp"
#include "greenseg/kdtree.hpp"
#include "greenseg/matrix.hpp"
#include "greenseg/parallel.hpp"
#include "greenseg/point_cloud.hpp"
#include "greenseg/random.hpp"
#include "greenseg/sampling.hpp"

namespace greenseg {

inline constexpr std::size_t kPositionalCodeDim = 10;

struct HopConfig {
    std::size_t num_hops = 4;
    std::size_t k_neighbors = 64;
    std::vector<double> sample_ratios = {0.25, 0.25, 0.5, 0.5};
    std::size_t interp_neighbors = 3;
    std::uint64_t seed = 0;

    void validate() const {
        if (num_hops == 0) throw ArgumentError("HopConfig: num_hops must be >= 1");
        if (k_neighbors == 0) throw ArgumentError("HopConfig: k_neighbors must be >= 1");
        if (interp_neighbors == 0) throw ArgumentError("HopConfig: interp_neighbors must be >= 1");
        if (sample_ratios.size() != num_hops)
            throw ArgumentError("HopConfig: need one sample ratio per hop");
        for (double r : sample_ratios)
            if (!(r > 0.0) || r > 1.0) throw ArgumentError("HopConfig: ratios must be in (0, 1]");
    }
};

/// Relative point positional code for a (center, neighbor) pair:
/// center (3) + neighbor (3) + (center - neighbor) (3) + Euclidean
/// distance (1).
inline std::array<double, kPositionalCodeDim> positional_encode(const Vec3& center,
                                                                const Vec3& neighbor) {
    const Vec3 diff = center - neighbor;
    return {center.x,   center.y,   center.z, neighbor.x, neighbor.y,
            neighbor.z, diff.x,     diff.y,   diff.z,     norm(diff)};
}

/// The two scalars of per-hop point feature standardization; the
/// extractor's only stored parameters.
struct HopStats {
    double mean = 0.0;
    double stddev = 1.0;
};

struct ExtractorParams {
    std::vector<HopStats> hops;

    std::size_t parameter_count() const { return 2 * hops.size(); }

    // key/value text, one "hop<i>.mean" / "hop<i>.std" pair per hop
    void save(const std::filesystem::path& path) const {
        std::ofstream out(path);
        if (!out) throw IoError("cannot write '" + path.string() + "'");
        char buf[96];
        out << "hops " << hops.size() << "\n";
        for (std::size_t h = 0; h < hops.size(); ++h) {
            std::snprintf(buf, sizeof(buf), "hop%zu.mean %.17g\n", h + 1, hops[h].mean);
            out << buf;
            std::snprintf(buf, sizeof(buf), "hop%zu.std %.17g\n", h + 1, hops[h].stddev);
            out << buf;
        }
        if (!out) throw IoError("write failed for '" + path.string() + "'");
    }

    static ExtractorParams load(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open '" + path.string() + "'");
        std::string key;
        std::size_t n = 0;
        if (!(in >> key >> n) || key != "hops")
            throw FormatError("'" + path.string() + "': expected 'hops <n>' header");
        ExtractorParams params;
        params.hops.resize(n);
        double value = 0.0;
        while (in >> key >> value) {
            if (key.size() < 5 || key.compare(0, 3, "hop") != 0)
                throw FormatError("'" + path.string() + "': bad key '" + key + "'");
            const std::size_t dot = key.find('.');
            if (dot == std::string::npos)
                throw FormatError("'" + path.string() + "': bad key '" + key + "'");
            const std::size_t hop = std::stoul(key.substr(3, dot - 3));
            if (hop == 0 || hop > n) throw FormatError("'" + path.string() + "': hop out of range");
            const std::string field = key.substr(dot + 1);
            if (field == "mean") params.hops[hop - 1].mean = value;
            else if (field == "std") params.hops[hop - 1].stddev = value;
            else throw FormatError("'" + path.string() + "': bad field '" + field + "'");
        }
        return params;
    }
};

/// One encoder level: which previous-level points were kept, where they
/// are, and their pooled (standardized) features.
struct HopLevel {
    std::vector<std::uint32_t> sampled; // indices into the previous level
    std::vector<Vec3> positions;
    Matrix features;
    HopStats stats;
};

struct HopPyramid {
    std::vector<Vec3> base_positions;
    Matrix base_features; // N x 21 input attributes
    std::vector<HopLevel> hops;
};

namespace detail {

struct RunningStats {
    std::size_t count = 0;
    double sum = 0.0;
    double sum_sq = 0.0;

    void add(const Matrix& m) {
        count += m.data().size();
        for (double v : m.data()) {
            sum += v;
            sum_sq += v * v;
        }
    }
    HopStats finish() const {
        HopStats s;
        if (count == 0) return s;
        s.mean = sum / static_cast<double>(count);
        const double var = std::max(0.0, sum_sq / static_cast<double>(count) - s.mean * s.mean);
        s.stddev = std::max(std::sqrt(var), 1e-8); // guard constant features
        return s;
    }
};

inline void standardize(Matrix& m, const HopStats& stats) {
    const double inv = 1.0 / stats.stddev;
    for (double& v : m.data()) v = (v - stats.mean) * inv;
}

} // namespace detail

/// Gathers each center's k nearest neighbors over the full input level,
/// widens every neighbor row with its positional code, and max-pools
/// component-wise. No standardization; row r corresponds to centers[r].
inline Matrix pool_at_centers(std::span<const Vec3> points, const Matrix& feats,
                              std::span<const std::uint32_t> centers, std::size_t k,
                              const KdTree& tree, int threads = 1) {
    if (points.empty()) throw StateError("pool_at_centers: empty input");
    if (feats.rows() != points.size())
        throw StateError("pool_at_centers: feature rows != point count");

    const std::size_t d_in = feats.cols();
    const std::size_t d_out = d_in + kPositionalCodeDim;
    Matrix pooled(centers.size(), d_out);

    parallel_for(centers.size(), threads, [&](std::size_t c) {
        const Vec3& center = points[centers[c]];
        std::vector<std::uint32_t> idx;
        std::vector<double> sq;
        tree.knn(center, k, idx, sq);

        auto out = pooled.row(c);
        bool first = true;
        for (std::uint32_t j : idx) {
            const auto nf = feats.row(j);
            const auto code = positional_encode(center, points[j]);
            if (first) {
                for (std::size_t t = 0; t < d_in; ++t) out[t] = nf[t];
                for (std::size_t t = 0; t < kPositionalCodeDim; ++t) out[d_in + t] = code[t];
                first = false;
            } else {
                for (std::size_t t = 0; t < d_in; ++t) out[t] = std::max(out[t], nf[t]);
                for (std::size_t t = 0; t < kPositionalCodeDim; ++t)
                    out[d_in + t] = std::max(out[d_in + t], code[t]);
            }
        }
    });
    return pooled;
}

/// One full encoder hop: random-sample centers, pool over the previous
/// level, then standardize by one global scalar mean/std. With `fixed`
/// null the stats are computed from the pooled matrix itself (training on
/// one unit); otherwise the stored values are applied.
inline HopLevel encoder_hop(std::span<const Vec3> points, const Matrix& feats,
                            const HopConfig& config, std::size_t hop_index,
                            const HopStats* fixed = nullptr, int threads = 1) {
    config.validate();
    if (points.empty()) throw StateError("encoder_hop: empty input");
    if (hop_index >= config.num_hops) throw ArgumentError("encoder_hop: hop index out of range");

    HopLevel level;
    level.sampled = random_sample(
        points.size(), {config.sample_ratios[hop_index], mix_seed(config.seed, hop_index)});
    const KdTree tree(std::vector<Vec3>(points.begin(), points.end()));
    level.features = pool_at_centers(points, feats, level.sampled, config.k_neighbors, tree, threads);
    level.positions.reserve(level.sampled.size());
    for (std::uint32_t i : level.sampled) level.positions.push_back(points[i]);

    if (fixed) {
        level.stats = *fixed;
    } else {
        detail::RunningStats acc;
        acc.add(level.features);
        level.stats = acc.finish();
    }
    detail::standardize(level.features, level.stats);
    return level;
}

namespace detail {

inline HopPyramid make_base(std::span<const Vec3> positions, const Matrix& attributes) {
    if (positions.empty()) throw StateError("encode: empty unit");
    if (attributes.rows() != positions.size())
        throw StateError("encode: attribute rows != point count");
    if (!attributes.all_finite()) throw StateError("encode: non-finite attribute");
    HopPyramid p;
    p.base_positions.assign(positions.begin(), positions.end());
    p.base_features = attributes;
    return p;
}

} // namespace detail

/// Chains the encoder hops over one unit. With `fixed` null, each hop's
/// standardization stats come from that hop's own pooled matrix and are
/// reported through `params_out`; with `fixed` set (test time) the stored
/// stats are applied unchanged.
inline HopPyramid encode(std::span<const Vec3> positions, const Matrix& attributes,
                         const HopConfig& config, const ExtractorParams* fixed = nullptr,
                         ExtractorParams* params_out = nullptr, int threads = 1) {
    config.validate();
    if (fixed && fixed->hops.size() != config.num_hops)
        throw StateError("encode: stored params do not match hop count");

    HopPyramid pyramid = detail::make_base(positions, attributes);
    if (params_out) params_out->hops.clear();

    for (std::size_t h = 0; h < config.num_hops; ++h) {
        std::span<const Vec3> pts =
            h == 0 ? std::span<const Vec3>(pyramid.base_positions) : pyramid.hops[h - 1].positions;
        const Matrix& feats = h == 0 ? pyramid.base_features : pyramid.hops[h - 1].features;
        pyramid.hops.push_back(
            encoder_hop(pts, feats, config, h, fixed ? &fixed->hops[h] : nullptr, threads));
        if (params_out) params_out->hops.push_back(pyramid.hops.back().stats);
    }
    return pyramid;
}

inline HopPyramid encode(const PointCloud& unit, const HopConfig& config,
                         const ExtractorParams* fixed = nullptr,
                         ExtractorParams* params_out = nullptr, int threads = 1) {
    if (!unit.has_attributes()) throw StateError("encode: unit has no attributes");
    return encode(unit.positions, unit.attributes, config, fixed, params_out, threads);
}

/// Encodes a batch of training units with shared standardization: each
/// hop's mean/std are accumulated over the pooled matrices of all units
/// (in unit order, independent of threading) before any unit is
/// standardized, so train and test time use the same 2 scalars per hop.
inline std::pair<std::vector<HopPyramid>, ExtractorParams> encode_training(
    std::span<const PointCloud> units, const HopConfig& config, int threads = 1) {
    config.validate();
    if (units.empty()) throw ArgumentError("encode_training: no units");

    std::vector<HopPyramid> pyramids(units.size());
    for (std::size_t u = 0; u < units.size(); ++u) {
        if (!units[u].has_attributes())
            throw StateError("encode_training: unit '" + units[u].unit_id + "' has no attributes");
        pyramids[u] = detail::make_base(units[u].positions, units[u].attributes);
    }

    ExtractorParams params;
    for (std::size_t h = 0; h < config.num_hops; ++h) {
        std::vector<detail::RunningStats> partial(units.size());
        parallel_for(units.size(), threads, [&](std::size_t u) {
            HopPyramid& p = pyramids[u];
            std::span<const Vec3> pts =
                h == 0 ? std::span<const Vec3>(p.base_positions) : p.hops[h - 1].positions;
            const Matrix& feats = h == 0 ? p.base_features : p.hops[h - 1].features;

            HopLevel level;
            level.sampled = random_sample(
                pts.size(), {config.sample_ratios[h], mix_seed(config.seed, h)});
            const KdTree tree(std::vector<Vec3>(pts.begin(), pts.end()));
            level.features = pool_at_centers(pts, feats, level.sampled, config.k_neighbors, tree);
            level.positions.reserve(level.sampled.size());
            for (std::uint32_t i : level.sampled) level.positions.push_back(pts[i]);

            partial[u].add(level.features);
            p.hops.push_back(std::move(level));
        });

        detail::RunningStats total;
        for (const auto& s : partial) {
            total.count += s.count;
            total.sum += s.sum;
            total.sum_sq += s.sum_sq;
        }
        const HopStats stats = total.finish();
        params.hops.push_back(stats);
        parallel_for(units.size(), threads, [&](std::size_t u) {
            pyramids[u].hops[h].stats = stats;
            detail::standardize(pyramids[u].hops[h].features, stats);
        });
    }
    return {std::move(pyramids), std::move(params)};
}

namespace detail {

// Inverse-distance-weighted interpolation of coarse features onto fine
// positions; an exact positional match copies that coarse row bit-exactly.
inline Matrix interpolate(std::span<const Vec3> coarse_positions, const Matrix& coarse_features,
                          std::span<const Vec3> fine_positions, std::size_t neighbors,
                          int threads = 1) {
    const KdTree tree(std::vector<Vec3>(coarse_positions.begin(), coarse_positions.end()));
    const std::size_t m = std::min(neighbors, coarse_positions.size());
    const std::size_t d = coarse_features.cols();
    Matrix out(fine_positions.size(), d);

    parallel_for(fine_positions.size(), threads, [&](std::size_t i) {
        std::vector<std::uint32_t> idx;
        std::vector<double> sq;
        tree.knn(fine_positions[i], m, idx, sq);
        auto row = out.row(i);

        if (sq[0] == 0.0) {
            const auto src = coarse_features.row(idx[0]);
            for (std::size_t c = 0; c < d; ++c) row[c] = src[c];
            return;
        }
        double weight_sum = 0.0;
        std::vector<double> weights(m);
        for (std::size_t j = 0; j < m; ++j) {
            weights[j] = 1.0 / std::sqrt(sq[j]);
            weight_sum += weights[j];
        }
        for (std::size_t j = 0; j < m; ++j) {
            const double wj = weights[j] / weight_sum;
            const auto src = coarse_features.row(idx[j]);
            for (std::size_t c = 0; c < d; ++c) row[c] += wj * src[c];
        }
    });
    return out;
}

} // namespace detail

/// Decoder: walks the pyramid from the coarsest hop back to full
/// resolution, interpolating with inverse-distance weights over the
/// interp_neighbors nearest coarse points and concatenating each level's
/// own features, ending with the 21-D input attributes. Output is one row
/// per original unit point.
inline Matrix decode(const HopPyramid& pyramid, std::span<const Vec3> unit_positions,
                     const HopConfig& config, int threads = 1) {
    config.validate();
    if (pyramid.hops.size() != config.num_hops)
        throw StateError("decode: pyramid hop count does not match config");
    if (unit_positions.size() != pyramid.base_positions.size())
        throw StateError("decode: position count does not match the encoded unit");
    for (std::size_t i = 0; i < unit_positions.size(); ++i)
        if (!(unit_positions[i] == pyramid.base_positions[i]))
            throw StateError("decode: positions differ from the encoded unit");

    Matrix combined = pyramid.hops.back().features;
    for (std::size_t level = config.num_hops; level-- > 0;) {
        std::span<const Vec3> coarse = pyramid.hops[level].positions;
        std::span<const Vec3> fine =
            level == 0 ? std::span<const Vec3>(pyramid.base_positions)
                       : pyramid.hops[level - 1].positions;
        const Matrix& own = level == 0 ? pyramid.base_features : pyramid.hops[level - 1].features;

        Matrix interpolated =
            detail::interpolate(coarse, combined, fine, config.interp_neighbors, threads);
        Matrix next(fine.size(), interpolated.cols() + own.cols());
        for (std::size_t i = 0; i < fine.size(); ++i) {
            auto dst = next.row(i);
            const auto a = interpolated.row(i);
            const auto b = own.row(i);
            std::size_t c = 0;
            for (double v : a) dst[c++] = v;
            for (double v : b) dst[c++] = v;
        }
        combined = std::move(next);
    }
    return combined;
}

inline Matrix decode(const HopPyramid& pyramid, const HopConfig& config, int threads = 1) {
    return decode(pyramid, pyramid.base_positions, config, threads);
}

/// Rounds every entry through the given storage precision.
inline void quantize_features(Matrix& features, Precision precision) {
    if (!features.all_finite()) throw StateError("quantize_features: non-finite value");
    if (precision == Precision::f32) {
        for (double& v : features.data()) v = round_to_f32(v);
    } else {
        for (double& v : features.data()) v = round_to_f16(v);
    }
}

} // namespace greenseg

#endif // GREENSEG_EXTRACTOR_HPP
