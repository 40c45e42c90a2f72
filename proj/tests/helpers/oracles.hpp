// Independent reference implementations used to check the library: brute
// force where the library uses trees, closed-form eigenvalues where the
// library iterates, and set arithmetic where the library uses confusion
// matrices. Nothing here shares code with the implementation paths it
// verifies.
#ifndef GREENSEG_TESTS_ORACLES_HPP
#define GREENSEG_TESTS_ORACLES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "greenseg/matrix.hpp"
#include "greenseg/point_cloud.hpp"

namespace oracle {

using greenseg::Matrix;
using greenseg::Vec3;

struct KnnResult {
    std::vector<std::uint32_t> indices;
    std::vector<double> sq_dists;
};

/// O(N^2) exact KNN with the same tie-break (lower index first) and
/// padding (repeat farthest) conventions as the library contract.
inline KnnResult brute_force_knn(std::span<const Vec3> points, const Vec3& query, std::size_t k) {
    std::vector<std::pair<double, std::uint32_t>> all(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double dx = query.x - points[i].x;
        const double dy = query.y - points[i].y;
        const double dz = query.z - points[i].z;
        all[i] = {dx * dx + dy * dy + dz * dz, static_cast<std::uint32_t>(i)};
    }
    std::sort(all.begin(), all.end());
    const std::size_t keep = std::min(k, points.size());
    KnnResult r;
    r.indices.resize(k);
    r.sq_dists.resize(k);
    for (std::size_t i = 0; i < keep; ++i) {
        r.indices[i] = all[i].second;
        r.sq_dists[i] = all[i].first;
    }
    for (std::size_t i = keep; i < k; ++i) {
        r.indices[i] = all[keep - 1].second;
        r.sq_dists[i] = all[keep - 1].first;
    }
    return r;
}

/// Closed-form (trigonometric) eigenvalues of a symmetric 3x3 matrix,
/// descending. Independent of the Jacobi iteration in the library.
inline std::array<double, 3> eigenvalues_closed_form(double a00, double a01, double a02,
                                                     double a11, double a12, double a22) {
    const double p1 = a01 * a01 + a02 * a02 + a12 * a12;
    if (p1 == 0.0) {
        std::array<double, 3> v = {a00, a11, a22};
        std::sort(v.begin(), v.end(), std::greater<>());
        return v;
    }
    const double q = (a00 + a11 + a22) / 3.0;
    const double p2 = (a00 - q) * (a00 - q) + (a11 - q) * (a11 - q) + (a22 - q) * (a22 - q) +
                      2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    const double b00 = (a00 - q) / p, b01 = a01 / p, b02 = a02 / p;
    const double b11 = (a11 - q) / p, b12 = a12 / p, b22 = (a22 - q) / p;
    const double det_b = b00 * (b11 * b22 - b12 * b12) - b01 * (b01 * b22 - b12 * b02) +
                         b02 * (b01 * b12 - b11 * b02);
    const double r = std::clamp(det_b / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double l1 = q + 2.0 * p * std::cos(phi);
    const double l3 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    return {l1, 3.0 * q - l1 - l3, l3};
}

/// Eigenvector for a known eigenvalue via the cross product of two rows of
/// (A - lambda I); picks the most independent row pair.
inline Vec3 eigenvector_for(double a00, double a01, double a02, double a11, double a12,
                            double a22, double lambda) {
    const Vec3 r0{a00 - lambda, a01, a02};
    const Vec3 r1{a01, a11 - lambda, a12};
    const Vec3 r2{a02, a12, a22 - lambda};
    const Vec3 c01 = greenseg::cross(r0, r1);
    const Vec3 c02 = greenseg::cross(r0, r2);
    const Vec3 c12 = greenseg::cross(r1, r2);
    Vec3 best = c01;
    if (greenseg::dot(c02, c02) > greenseg::dot(best, best)) best = c02;
    if (greenseg::dot(c12, c12) > greenseg::dot(best, best)) best = c12;
    const double len = greenseg::norm(best);
    return len > 0.0 ? best * (1.0 / len) : Vec3{0, 0, 1};
}

/// Brute-force inverse-distance-weighted interpolation over the m nearest
/// coarse points (zero distance copies that coarse row).
inline std::vector<double> idw_interpolate(std::span<const Vec3> coarse_positions,
                                           const Matrix& coarse_features, const Vec3& query,
                                           std::size_t m) {
    const KnnResult nn = brute_force_knn(coarse_positions, query, m);
    const std::size_t keep = std::min(m, coarse_positions.size());
    std::vector<double> out(coarse_features.cols(), 0.0);
    if (nn.sq_dists[0] == 0.0) {
        const auto row = coarse_features.row(nn.indices[0]);
        return {row.begin(), row.end()};
    }
    double wsum = 0.0;
    std::vector<double> w(keep);
    for (std::size_t j = 0; j < keep; ++j) {
        w[j] = 1.0 / std::sqrt(nn.sq_dists[j]);
        wsum += w[j];
    }
    for (std::size_t j = 0; j < keep; ++j) {
        const auto row = coarse_features.row(nn.indices[j]);
        for (std::size_t c = 0; c < out.size(); ++c) out[c] += (w[j] / wsum) * row[c];
    }
    return out;
}

struct IouResult {
    std::vector<double> per_class;
    double miou = 0.0;         // zero-union classes count as 0
    double miou_present = 0.0; // classes with nonzero union only
    double oa = 0.0;
};

/// Set-based IoU computed directly from the raw label lists.
inline IouResult set_iou(std::span<const std::uint8_t> truth, std::span<const std::uint8_t> pred,
                         std::size_t num_classes) {
    IouResult r;
    r.per_class.assign(num_classes, 0.0);
    std::size_t matches = 0;
    std::size_t present = 0;
    double present_sum = 0.0;
    for (std::size_t c = 0; c < num_classes; ++c) {
        std::size_t inter = 0, uni = 0;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            const bool t = truth[i] == c, p = pred[i] == c;
            inter += t && p;
            uni += t || p;
        }
        if (uni > 0) {
            r.per_class[c] = static_cast<double>(inter) / static_cast<double>(uni);
            present_sum += r.per_class[c];
            ++present;
        }
        r.miou += r.per_class[c];
    }
    for (std::size_t i = 0; i < truth.size(); ++i) matches += truth[i] == pred[i];
    r.miou /= static_cast<double>(num_classes);
    r.miou_present = present > 0 ? present_sum / static_cast<double>(present) : 0.0;
    r.oa = truth.empty() ? 0.0 : static_cast<double>(matches) / static_cast<double>(truth.size());
    return r;
}

/// Inverse of the hexcone conversion, for round-trip checks.
inline std::array<double, 3> hsv_to_rgb(const std::array<double, 3>& hsv) {
    const double h = hsv[0] * 6.0, s = hsv[1], v = hsv[2];
    const int sector = static_cast<int>(std::floor(h)) % 6;
    const double f = h - std::floor(h);
    const double p = v * (1.0 - s);
    const double q = v * (1.0 - s * f);
    const double t = v * (1.0 - s * (1.0 - f));
    switch (sector) {
        case 0: return {v, t, p};
        case 1: return {q, v, p};
        case 2: return {p, v, t};
        case 3: return {p, q, v};
        case 4: return {t, p, v};
        default: return {v, p, q};
    }
}

} // namespace oracle

#endif // GREENSEG_TESTS_ORACLES_HPP
