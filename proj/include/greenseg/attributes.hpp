#ifndef GREENSEG_ATTRIBUTES_HPP
#define GREENSEG_ATTRIBUTES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "greenseg/error.hpp"
#include "greenseg/kdtree.hpp"
#include "greenseg/matrix.hpp"
#include "greenseg/parallel.hpp"
#include "greenseg/point_cloud.hpp"

namespace greenseg {

struct SymEig3 {
    std::array<double, 3> values;  // descending, clamped to >= 0 by callers as needed
    std::array<Vec3, 3> vectors;   // orthonormal, vectors[i] pairs with values[i]
};

/// Cyclic Jacobi eigendecomposition of a symmetric 3x3 matrix given as
/// (a00, a01, a02, a11, a12, a22). Converges in a handful of sweeps.
inline SymEig3 symmetric_eigen3(double a00, double a01, double a02, double a11, double a12,
                                double a22) {
    double a[3][3] = {{a00, a01, a02}, {a01, a11, a12}, {a02, a12, a22}};
    double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    for (int sweep = 0; sweep < 64; ++sweep) {
        const double off =
            a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        if (off < 1e-60) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < 3; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (int k = 0; k < 3; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::array<int, 3> order = {0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int i, int j) { return a[i][i] > a[j][j]; });

    SymEig3 out;
    for (int i = 0; i < 3; ++i) {
        out.values[i] = a[order[i]][order[i]];
        out.vectors[i] = {v[0][order[i]], v[1][order[i]], v[2][order[i]]};
    }
    return out;
}

inline constexpr std::size_t kGeomFeatureCount = 6;
inline constexpr std::size_t kAttributeDim = 21;

namespace detail {

inline Vec3 canonical_normal(Vec3 n) {
    const double len = norm(n);
    if (len > 0.0) n = n * (1.0 / len);
    // canonical orientation: z >= 0, ties broken toward y >= 0 then x >= 0
    bool flip = n.z < 0.0;
    if (n.z == 0.0) {
        flip = n.y < 0.0;
        if (n.y == 0.0) flip = n.x < 0.0;
    }
    if (flip) n = n * -1.0;
    return n;
}

inline std::array<double, kGeomFeatureCount> eigen_features(double l1, double l2, double l3) {
    l1 = std::max(l1, 0.0);
    l2 = std::max(l2, 0.0);
    l3 = std::max(l3, 0.0);
    std::array<double, kGeomFeatureCount> f{};
    if (l1 >= 1e-12) {
        f[0] = (l1 - l2) / l1; // linearity
        f[1] = (l2 - l3) / l1; // planarity
        f[2] = l3 / l1;        // sphericity
        f[4] = (l1 - l3) / l1; // anisotropy
    }
    f[3] = std::cbrt(l1 * l2 * l3); // omnivariance
    const double sum = l1 + l2 + l3;
    if (sum >= 1e-12) f[5] = l3 / sum; // surface variation
    return f;
}

} // namespace detail

/// Per-point surface normals and the six eigenvalue features (linearity,
/// planarity, sphericity, omnivariance, anisotropy, surface variation),
/// computed from the covariance of each point's k_local nearest neighbors.
inline std::pair<std::vector<Vec3>, Matrix> compute_normals_and_geom(const PointCloud& cloud,
                                                                     std::size_t k_local = 16,
                                                                     int threads = 1) {
    cloud.validate();
    const std::size_t n = cloud.size();
    if (n < 3) throw StateError("compute_normals_and_geom: need at least 3 points");

    const KdTree tree(cloud.positions);
    const std::size_t k = std::min(k_local, n);

    std::vector<Vec3> normals(n);
    Matrix geom(n, kGeomFeatureCount);
    parallel_for(n, threads, [&](std::size_t i) {
        std::vector<std::uint32_t> idx;
        std::vector<double> sq;
        tree.knn(cloud.positions[i], k, idx, sq);

        Vec3 mean{0, 0, 0};
        for (std::uint32_t j : idx) mean = mean + cloud.positions[j];
        mean = mean * (1.0 / static_cast<double>(k));

        double c00 = 0, c01 = 0, c02 = 0, c11 = 0, c12 = 0, c22 = 0;
        for (std::uint32_t j : idx) {
            const Vec3 d = cloud.positions[j] - mean;
            c00 += d.x * d.x;
            c01 += d.x * d.y;
            c02 += d.x * d.z;
            c11 += d.y * d.y;
            c12 += d.y * d.z;
            c22 += d.z * d.z;
        }
        const double inv = 1.0 / static_cast<double>(k);
        const SymEig3 eig =
            symmetric_eigen3(c00 * inv, c01 * inv, c02 * inv, c11 * inv, c12 * inv, c22 * inv);

        normals[i] = detail::canonical_normal(eig.vectors[2]);
        const auto f = detail::eigen_features(eig.values[0], eig.values[1], eig.values[2]);
        for (std::size_t c = 0; c < kGeomFeatureCount; ++c) geom(i, c) = f[c];
    });
    return {std::move(normals), std::move(geom)};
}

/// Standard hexcone RGB -> HSV with h scaled to [0, 1).
inline std::array<double, 3> rgb_to_hsv(const std::array<double, 3>& rgb) {
    for (double c : rgb)
        if (!(c >= 0.0 && c <= 1.0)) throw ArgumentError("rgb_to_hsv: component outside [0, 1]");
    const double r = rgb[0], g = rgb[1], b = rgb[2];
    const double v = std::max({r, g, b});
    const double delta = v - std::min({r, g, b});
    const double s = v > 0.0 ? delta / v : 0.0;
    double h = 0.0;
    if (delta > 0.0) {
        if (v == r) h = (g - b) / delta;
        else if (v == g) h = 2.0 + (b - r) / delta;
        else h = 4.0 + (r - g) / delta;
        h /= 6.0;
        if (h < 0.0) h += 1.0;
        if (h >= 1.0) h -= 1.0;
    }
    return {h, s, v};
}

/// Per-unit min-max normalization of each coordinate to [0, 1]; a constant
/// coordinate maps to 0.
inline std::vector<Vec3> normalize_xyz(const PointCloud& cloud) {
    if (cloud.positions.empty()) throw StateError("normalize_xyz: empty unit");
    Vec3 lo = cloud.positions[0], hi = cloud.positions[0];
    for (const Vec3& p : cloud.positions) {
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], p[a]);
            hi[a] = std::max(hi[a], p[a]);
        }
    }
    std::vector<Vec3> out(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i)
        for (int a = 0; a < 3; ++a) {
            const double span = hi[a] - lo[a];
            out[i][a] = span > 0.0 ? (cloud.positions[i][a] - lo[a]) / span : 0.0;
        }
    return out;
}

/// Assembles the 21-D input attribute vector per point, in fixed column
/// order: xyz(3), rgb(3), normalized xyz(3), normal(3), eigenvalue
/// features(6), hsv(3).
inline PointCloud build_attributes(const PointCloud& cloud, std::size_t k_local = 16,
                                   int threads = 1) {
    cloud.validate();
    auto [normals, geom] = compute_normals_and_geom(cloud, k_local, threads);
    const std::vector<Vec3> norm_xyz = normalize_xyz(cloud);

    PointCloud out = cloud;
    out.attributes = Matrix(cloud.size(), kAttributeDim);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        auto row = out.attributes.row(i);
        const Vec3& p = cloud.positions[i];
        row[0] = p.x;
        row[1] = p.y;
        row[2] = p.z;
        const std::array<double, 3> rgb = {cloud.colors[i].r / 255.0, cloud.colors[i].g / 255.0,
                                           cloud.colors[i].b / 255.0};
        row[3] = rgb[0];
        row[4] = rgb[1];
        row[5] = rgb[2];
        row[6] = norm_xyz[i].x;
        row[7] = norm_xyz[i].y;
        row[8] = norm_xyz[i].z;
        row[9] = normals[i].x;
        row[10] = normals[i].y;
        row[11] = normals[i].z;
        for (std::size_t c = 0; c < kGeomFeatureCount; ++c) row[12 + c] = geom(i, c);
        const std::array<double, 3> hsv = rgb_to_hsv(rgb);
        row[18] = hsv[0];
        row[19] = hsv[1];
        row[20] = hsv[2];
    }
    return out;
}

} // namespace greenseg

#endif // GREENSEG_ATTRIBUTES_HPP
