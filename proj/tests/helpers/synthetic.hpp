// Synthetic labeled indoor scenes: axis-aligned rooms made of planar
// primitives (floor, ceiling, four walls, box tables) with per-class base
// colors plus noise. Deterministic for a given seed.
#ifndef GREENSEG_TESTS_SYNTHETIC_HPP
#define GREENSEG_TESTS_SYNTHETIC_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "greenseg/dataset.hpp"
#include "greenseg/point_cloud.hpp"
#include "greenseg/random.hpp"

namespace synthetic {

using greenseg::PointCloud;
using greenseg::Rgb8;
using greenseg::Rng;
using greenseg::Vec3;

struct SceneParams {
    std::size_t rooms = 20;
    double density = 32.0; // points per square meter of surface
    double color_noise = 0.06;
    double jitter = 0.004; // off-plane jitter in meters
    std::uint64_t seed = 20240101;
};

namespace detail {

inline constexpr std::uint8_t kCeiling = 0, kFloor = 1, kWall = 2, kTable = 7;

inline Rgb8 noisy_color(const std::array<double, 3>& base, double noise, Rng& rng) {
    Rgb8 c;
    std::uint8_t* ch[3] = {&c.r, &c.g, &c.b};
    for (int i = 0; i < 3; ++i) {
        const double v = std::clamp(base[i] + rng.uniform(-noise, noise), 0.0, 1.0);
        *ch[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
    }
    return c;
}

// Samples a planar rectangle origin + s*u + t*v with off-plane jitter
// along w.
inline void sample_patch(PointCloud& cloud, const Vec3& origin, const Vec3& u, const Vec3& v,
                         const Vec3& w, double area_density, double jitter,
                         const std::array<double, 3>& color, double color_noise,
                         std::uint8_t label, Rng& rng) {
    const double area = greenseg::norm(u) * greenseg::norm(v);
    const std::size_t count = std::max<std::size_t>(8, static_cast<std::size_t>(
                                                           std::llround(area * area_density)));
    for (std::size_t i = 0; i < count; ++i) {
        const double s = rng.uniform01(), t = rng.uniform01();
        const double off = rng.uniform(-jitter, jitter);
        cloud.positions.push_back(origin + u * s + v * t + w * off);
        cloud.colors.push_back(noisy_color(color, color_noise, rng));
        cloud.labels.push_back(label);
    }
}

} // namespace detail

inline PointCloud generate_room(std::size_t index, const SceneParams& params) {
    Rng rng(greenseg::mix_seed(params.seed, index));
    const double w = rng.uniform(3.5, 5.5);
    const double l = rng.uniform(4.0, 6.0);
    const double h = rng.uniform(2.6, 3.4);

    PointCloud room;
    room.unit_id = "synth_" + std::to_string(index);

    const std::array<double, 3> floor_color = {0.45, 0.40, 0.33};
    const std::array<double, 3> ceiling_color = {0.88, 0.88, 0.86};
    const std::array<double, 3> wall_color = {0.72, 0.66, 0.55};
    const std::array<double, 3> table_color = {0.34, 0.20, 0.10};

    using detail::sample_patch;
    const Vec3 ex{1, 0, 0}, ey{0, 1, 0}, ez{0, 0, 1};
    sample_patch(room, {0, 0, 0}, ex * w, ey * l, ez, params.density, params.jitter, floor_color,
                 params.color_noise, detail::kFloor, rng);
    sample_patch(room, {0, 0, h}, ex * w, ey * l, ez, params.density, params.jitter,
                 ceiling_color, params.color_noise, detail::kCeiling, rng);
    sample_patch(room, {0, 0, 0}, ey * l, ez * h, ex, params.density, params.jitter, wall_color,
                 params.color_noise, detail::kWall, rng);
    sample_patch(room, {w, 0, 0}, ey * l, ez * h, ex, params.density, params.jitter, wall_color,
                 params.color_noise, detail::kWall, rng);
    sample_patch(room, {0, 0, 0}, ex * w, ez * h, ey, params.density, params.jitter, wall_color,
                 params.color_noise, detail::kWall, rng);
    sample_patch(room, {0, l, 0}, ex * w, ez * h, ey, params.density, params.jitter, wall_color,
                 params.color_noise, detail::kWall, rng);

    const std::size_t tables = 1 + rng.uniform_index(2);
    for (std::size_t t = 0; t < tables; ++t) {
        const double hx = rng.uniform(0.4, 0.7), hy = rng.uniform(0.4, 0.7);
        const double cx = rng.uniform(0.9 + hx, w - 0.9 - hx);
        const double cy = rng.uniform(0.9 + hy, l - 0.9 - hy);
        const double top = rng.uniform(0.65, 0.8);
        const Vec3 corner{cx - hx, cy - hy, 0.0};
        sample_patch(room, {corner.x, corner.y, top}, ex * (2 * hx), ey * (2 * hy), ez,
                     params.density, params.jitter, table_color, params.color_noise,
                     detail::kTable, rng);
        sample_patch(room, corner, ey * (2 * hy), ez * top, ex, params.density, params.jitter,
                     table_color, params.color_noise, detail::kTable, rng);
        sample_patch(room, {cx + hx, cy - hy, 0.0}, ey * (2 * hy), ez * top, ex, params.density,
                     params.jitter, table_color, params.color_noise, detail::kTable, rng);
        sample_patch(room, corner, ex * (2 * hx), ez * top, ey, params.density, params.jitter,
                     table_color, params.color_noise, detail::kTable, rng);
        sample_patch(room, {cx - hx, cy + hy, 0.0}, ex * (2 * hx), ez * top, ey, params.density,
                     params.jitter, table_color, params.color_noise, detail::kTable, rng);
    }
    return room;
}

/// Rooms spread over areas 1..6: the last fifth of the rooms land in area
/// 6, so holding out area 6 yields an 15/5-style split for 20 rooms.
inline std::vector<greenseg::AreaRoom> generate_scene(const SceneParams& params) {
    std::vector<greenseg::AreaRoom> rooms;
    const std::size_t held_out = std::max<std::size_t>(1, params.rooms / 4);
    const std::size_t train_rooms = params.rooms - held_out;
    for (std::size_t i = 0; i < params.rooms; ++i) {
        const int area = i < train_rooms ? static_cast<int>(1 + i % 5) : 6;
        rooms.push_back({area, generate_room(i, params)});
    }
    return rooms;
}

} // namespace synthetic

#endif // GREENSEG_TESTS_SYNTHETIC_HPP
