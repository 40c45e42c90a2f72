#ifndef GREENSEG_PREPROCESS_HPP
#define GREENSEG_PREPROCESS_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "greenseg/error.hpp"
#include "greenseg/kdtree.hpp"
#include "greenseg/point_cloud.hpp"
#include "greenseg/random.hpp"
#include "greenseg/sampling.hpp"
#include "greenseg/voxel.hpp"

namespace greenseg {

/// Room style: one unit per room, holding all of the room's
/// voxel-downsampled points. Unit sizes vary freely.
inline UnitSet make_room_units(const std::vector<PointCloud>& rooms, double grid_size,
                               std::uint64_t seed) {
    if (rooms.empty()) throw ArgumentError("make_room_units: no rooms");
    UnitSet set;
    set.style = Style::room;
    set.units.reserve(rooms.size());
    for (std::size_t r = 0; r < rooms.size(); ++r)
        set.units.push_back(voxel_downsample(rooms[r], grid_size, mix_seed(seed, r)));
    return set;
}

/// Block style: the XY plane is partitioned into block_size cells (Z is
/// kept whole) and every nonempty block is resampled to exactly
/// points_per_unit rows, drawing with replacement when the block holds
/// fewer points.
inline UnitSet make_block_units(const std::vector<PointCloud>& rooms, double block_size = 1.0,
                                std::size_t points_per_unit = 4096, std::uint64_t seed = 0) {
    if (rooms.empty()) throw ArgumentError("make_block_units: no rooms");
    if (!(block_size > 0.0)) throw ArgumentError("make_block_units: block size must be positive");
    if (points_per_unit == 0) throw ArgumentError("make_block_units: points_per_unit must be positive");

    UnitSet set;
    set.style = Style::block;
    for (std::size_t r = 0; r < rooms.size(); ++r) {
        const PointCloud& room = rooms[r];
        room.validate();

        double min_x = room.positions[0].x, min_y = room.positions[0].y;
        for (const Vec3& p : room.positions) {
            min_x = std::min(min_x, p.x);
            min_y = std::min(min_y, p.y);
        }

        // Every point lands in exactly one block.
        std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::uint32_t>> blocks;
        for (std::size_t i = 0; i < room.size(); ++i) {
            const std::int64_t bx =
                static_cast<std::int64_t>(std::floor((room.positions[i].x - min_x) / block_size));
            const std::int64_t by =
                static_cast<std::int64_t>(std::floor((room.positions[i].y - min_y) / block_size));
            blocks[{bx, by}].push_back(static_cast<std::uint32_t>(i));
        }

        std::size_t block_index = 0;
        for (const auto& [key, members] : blocks) {
            Rng rng(mix_seed(mix_seed(seed, r), block_index++));
            std::vector<std::uint32_t> rows;
            rows.reserve(points_per_unit);
            if (members.size() >= points_per_unit) {
                std::vector<std::uint32_t> pool = members;
                for (std::size_t i = 0; i < points_per_unit; ++i) {
                    const std::size_t j = i + rng.uniform_index(pool.size() - i);
                    std::swap(pool[i], pool[j]);
                    rows.push_back(pool[i]);
                }
            } else {
                for (std::size_t i = 0; i < points_per_unit; ++i)
                    rows.push_back(members[rng.uniform_index(members.size())]);
            }

            PointCloud unit;
            unit.unit_id = room.unit_id + "_b" + std::to_string(key.first) + "_" +
                           std::to_string(key.second);
            unit.positions.reserve(rows.size());
            unit.colors.reserve(rows.size());
            if (room.has_labels()) unit.labels.reserve(rows.size());
            for (std::uint32_t i : rows) {
                unit.positions.push_back(room.positions[i]);
                unit.colors.push_back(room.colors[i]);
                if (room.has_labels()) unit.labels.push_back(room.labels[i]);
            }
            set.units.push_back(std::move(unit));
        }
    }
    return set;
}

struct ViewParams {
    std::size_t unit_size = 40960;
    std::size_t target_units = 1;
    double grid_size = 0.04;
    std::uint64_t seed = 0;
    // Possibility increment for a selected point at distance d from the
    // reference: update_base + (1 - d/d_max)^2, with d_max the unit's max
    // distance. The base keeps every updated score above any untouched
    // initial score (which is uniform in [0,1)), so the next reference is
    // always an untouched point while one remains.
    double update_base = 1.0;
};

inline double view_possibility_update(double d, double d_max, double base = 1.0) {
    if (!(d_max > 0.0)) return base + 1.0; // degenerate unit, all at the reference
    const double t = 1.0 - d / d_max;
    return base + t * t;
}

/// View style: rooms are voxel-downsampled, every point gets a random
/// possibility score, and units are formed by repeatedly taking the
/// unit_size nearest neighbors of the globally least-possible point within
/// its room, then raising the selected points' scores by an amount that
/// decreases with distance to the reference. The reference point is always
/// row 0 of its unit. Rooms smaller than unit_size are padded by
/// repetition.
inline UnitSet make_view_units(const std::vector<PointCloud>& rooms, const ViewParams& params) {
    if (rooms.empty()) throw ArgumentError("make_view_units: no rooms");
    if (params.target_units < 1) throw ArgumentError("make_view_units: target_units must be >= 1");
    if (params.unit_size < 1) throw ArgumentError("make_view_units: unit_size must be >= 1");

    std::vector<PointCloud> sampled;
    sampled.reserve(rooms.size());
    for (std::size_t r = 0; r < rooms.size(); ++r)
        sampled.push_back(voxel_downsample(rooms[r], params.grid_size, mix_seed(params.seed, r)));

    std::vector<KdTree> trees;
    trees.reserve(sampled.size());
    for (const PointCloud& room : sampled) trees.emplace_back(room.positions);

    std::vector<std::vector<double>> possibility(sampled.size());
    Rng init_rng(mix_seed(params.seed, 0x706f7373u)); // one stream, room-major order
    for (std::size_t r = 0; r < sampled.size(); ++r) {
        possibility[r].resize(sampled[r].size());
        for (double& v : possibility[r]) v = init_rng.uniform01();
    }

    UnitSet set;
    set.style = Style::view;
    for (std::size_t t = 0; t < params.target_units; ++t) {
        std::size_t ref_room = 0, ref_point = 0;
        double ref_score = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < possibility.size(); ++r)
            for (std::size_t i = 0; i < possibility[r].size(); ++i)
                if (possibility[r][i] < ref_score) {
                    ref_score = possibility[r][i];
                    ref_room = r;
                    ref_point = i;
                }

        const PointCloud& room = sampled[ref_room];
        std::vector<std::uint32_t> idx;
        std::vector<double> sq;
        trees[ref_room].knn(room.positions[ref_point], params.unit_size, idx, sq);

        const std::size_t distinct = std::min(params.unit_size, room.size());
        double d_max = 0.0;
        for (std::size_t i = 0; i < distinct; ++i) d_max = std::max(d_max, std::sqrt(sq[i]));
        for (std::size_t i = 0; i < distinct; ++i)
            possibility[ref_room][idx[i]] +=
                view_possibility_update(std::sqrt(sq[i]), d_max, params.update_base);

        PointCloud unit;
        unit.unit_id = room.unit_id + "_v" + std::to_string(t);
        unit.positions.reserve(idx.size());
        unit.colors.reserve(idx.size());
        if (room.has_labels()) unit.labels.reserve(idx.size());
        for (std::uint32_t i : idx) {
            unit.positions.push_back(room.positions[i]);
            unit.colors.push_back(room.colors[i]);
            if (room.has_labels()) unit.labels.push_back(room.labels[i]);
        }
        set.units.push_back(std::move(unit));
    }
    return set;
}

struct DatasetStats {
    std::size_t unit_count = 0;
    std::size_t total_points = 0;
    std::size_t min_unit_size = 0;
    std::size_t max_unit_size = 0;
    double mean_unit_size = 0.0;
};

inline DatasetStats dataset_stats(const UnitSet& set) {
    if (set.units.empty()) throw ArgumentError("dataset_stats: empty unit set");
    DatasetStats s;
    s.unit_count = set.units.size();
    s.min_unit_size = std::numeric_limits<std::size_t>::max();
    for (const PointCloud& u : set.units) {
        s.total_points += u.size();
        s.min_unit_size = std::min(s.min_unit_size, u.size());
        s.max_unit_size = std::max(s.max_unit_size, u.size());
    }
    s.mean_unit_size = static_cast<double>(s.total_points) / static_cast<double>(s.unit_count);
    return s;
}

} // namespace greenseg

#endif // GREENSEG_PREPROCESS_HPP
