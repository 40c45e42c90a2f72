#ifndef GREENSEG_POINT_CLOUD_HPP
#define GREENSEG_POINT_CLOUD_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "greenseg/error.hpp"
#include "greenseg/matrix.hpp"

namespace greenseg {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double& operator[](std::size_t i) { return i == 0 ? x : (i == 1 ? y : z); }
    double operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }

    friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator*(const Vec3& a, double s) { return {a.x * s, a.y * s, a.z * s}; }
    friend bool operator==(const Vec3&, const Vec3&) = default;

    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double squared_distance(const Vec3& a, const Vec3& b) {
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return dx * dx + dy * dy + dz * dz;
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

struct Rgb8 {
    std::uint8_t r = 0, g = 0, b = 0;
    friend bool operator==(const Rgb8&, const Rgb8&) = default;
};

enum class Style { block, view, room };
enum class Split { train, test };

inline std::string_view style_name(Style s) {
    switch (s) {
        case Style::block: return "block";
        case Style::view: return "view";
        default: return "room";
    }
}

/// The canonical 13-class table. Label ids are indices into this order and
/// are identical across train/test/eval.
class ClassTable {
public:
    static constexpr std::size_t size() { return 13; }

    static const std::array<std::string_view, 13>& names() {
        static const std::array<std::string_view, 13> n = {
            "ceiling", "floor",  "wall", "beam",     "column", "window", "door",
            "table",   "chair",  "sofa", "bookcase", "board",  "clutter"};
        return n;
    }

    static std::string_view name_of(std::size_t id) {
        if (id >= size()) throw ArgumentError("class id out of range: " + std::to_string(id));
        return names()[id];
    }

    static std::optional<std::uint8_t> id_of(std::string_view name) {
        const auto& n = names();
        for (std::size_t i = 0; i < n.size(); ++i)
            if (n[i] == name) return static_cast<std::uint8_t>(i);
        return std::nullopt;
    }
};

inline constexpr std::uint8_t kNumClasses = 13;

/// Columnar store for one unit: positions (meters), RGB colors, optional
/// class labels, optional per-point attribute matrix. All columns share the
/// same row count.
struct PointCloud {
    std::vector<Vec3> positions;
    std::vector<Rgb8> colors;
    std::vector<std::uint8_t> labels; // empty or size N, values in [0, 12]
    Matrix attributes;                // empty or N x D
    std::string unit_id;

    std::size_t size() const { return positions.size(); }
    bool has_labels() const { return !labels.empty(); }
    bool has_attributes() const { return !attributes.empty(); }

    void validate() const {
        const std::size_t n = positions.size();
        if (n == 0) throw StateError("point cloud '" + unit_id + "' is empty");
        if (colors.size() != n)
            throw StateError("point cloud '" + unit_id + "': color count != position count");
        if (!labels.empty()) {
            if (labels.size() != n)
                throw StateError("point cloud '" + unit_id + "': label count != position count");
            for (std::uint8_t l : labels)
                if (l >= kNumClasses)
                    throw StateError("point cloud '" + unit_id + "': label out of range");
        }
        if (!attributes.empty()) {
            if (attributes.rows() != n)
                throw StateError("point cloud '" + unit_id + "': attribute rows != position count");
            if (!attributes.all_finite())
                throw StateError("point cloud '" + unit_id + "': non-finite attribute value");
        }
        for (const Vec3& p : positions)
            if (!p.finite()) throw StateError("point cloud '" + unit_id + "': non-finite position");
    }
};

/// Ordered collection of units with provenance.
struct UnitSet {
    std::vector<PointCloud> units;
    Style style = Style::room;
    Split split = Split::train;
    int fold = 0; // held-out area index, 1-6

    std::size_t size() const { return units.size(); }
};

} // namespace greenseg

#endif // GREENSEG_POINT_CLOUD_HPP
