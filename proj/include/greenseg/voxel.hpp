#ifndef GREENSEG_VOXEL_HPP
#define GREENSEG_VOXEL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "greenseg/error.hpp"
#include "greenseg/point_cloud.hpp"
#include "greenseg/random.hpp"

namespace greenseg {

namespace detail {

// 21 bits per axis; keys are non-negative because the grid origin is the
// bounding-box min corner.
inline constexpr std::uint64_t kVoxelAxisBits = 21;
inline constexpr std::uint64_t kVoxelAxisMax = (1ULL << kVoxelAxisBits) - 1;

inline std::uint64_t voxel_key(const Vec3& p, const Vec3& origin, double grid_size) {
    std::uint64_t k[3];
    for (int a = 0; a < 3; ++a) {
        const double cell = std::floor((p[a] - origin[a]) / grid_size);
        if (cell < 0.0 || cell > static_cast<double>(kVoxelAxisMax))
            throw ArgumentError("voxel_downsample: grid too fine for the cloud extent");
        k[a] = static_cast<std::uint64_t>(cell);
    }
    return (k[0] << (2 * kVoxelAxisBits)) | (k[1] << kVoxelAxisBits) | k[2];
}

} // namespace detail

/// Keeps one uniformly chosen original point per occupied voxel (reservoir
/// choice over the input scan order, so the result is a pure function of
/// (cloud, grid_size, seed)). Output rows are ordered by ascending voxel
/// key; attributes are dropped.
inline PointCloud voxel_downsample(const PointCloud& cloud, double grid_size, std::uint64_t seed) {
    if (!(grid_size > 0.0)) throw ArgumentError("voxel_downsample: grid size must be positive");
    cloud.validate();

    Vec3 origin = cloud.positions[0];
    for (const Vec3& p : cloud.positions) {
        origin.x = std::min(origin.x, p.x);
        origin.y = std::min(origin.y, p.y);
        origin.z = std::min(origin.z, p.z);
    }

    struct Slot {
        std::uint32_t representative;
        std::uint32_t count;
    };
    std::unordered_map<std::uint64_t, Slot> voxels;
    voxels.reserve(cloud.size());

    Rng rng(seed);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const std::uint64_t key = detail::voxel_key(cloud.positions[i], origin, grid_size);
        auto [it, inserted] = voxels.try_emplace(key, Slot{static_cast<std::uint32_t>(i), 1});
        if (!inserted) {
            Slot& s = it->second;
            ++s.count;
            if (rng.uniform_index(s.count) == 0) s.representative = static_cast<std::uint32_t>(i);
        }
    }

    std::vector<std::pair<std::uint64_t, std::uint32_t>> ordered;
    ordered.reserve(voxels.size());
    for (const auto& [key, slot] : voxels) ordered.emplace_back(key, slot.representative);
    std::sort(ordered.begin(), ordered.end());

    PointCloud out;
    out.unit_id = cloud.unit_id;
    out.positions.reserve(ordered.size());
    out.colors.reserve(ordered.size());
    if (cloud.has_labels()) out.labels.reserve(ordered.size());
    for (const auto& [key, rep] : ordered) {
        out.positions.push_back(cloud.positions[rep]);
        out.colors.push_back(cloud.colors[rep]);
        if (cloud.has_labels()) out.labels.push_back(cloud.labels[rep]);
    }
    return out;
}

} // namespace greenseg

#endif // GREENSEG_VOXEL_HPP
