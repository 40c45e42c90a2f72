#ifndef GREENSEG_ROOM_IO_HPP
#define GREENSEG_ROOM_IO_HPP

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "greenseg/error.hpp"
#include "greenseg/point_cloud.hpp"

namespace greenseg {

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) fields.push_back(line.substr(i, j - i));
        i = j;
    }
    return fields;
}

inline double parse_double(std::string_view s, std::size_t line_no, const char* what) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ParseError("line " + std::to_string(line_no) + ": bad " + what + " '" + std::string(s) + "'");
    return v;
}

inline long parse_long(std::string_view s, std::size_t line_no, const char* what) {
    long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ParseError("line " + std::to_string(line_no) + ": bad " + what + " '" + std::string(s) + "'");
    return v;
}

} // namespace detail

/// Reads a room dump in the plain ASCII format "x y z r g b [label]", one
/// point per line. Labels must be present on every line or on none.
inline PointCloud read_room_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");

    PointCloud cloud;
    cloud.unit_id = path.stem().string();

    std::string line;
    std::size_t line_no = 0;
    int expected_fields = 0; // 6 or 7, fixed by the first data line
    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = detail::split_fields(line);
        if (fields.empty()) continue;
        if (fields.size() != 6 && fields.size() != 7)
            throw ParseError("line " + std::to_string(line_no) + ": expected 6 or 7 fields, got " +
                             std::to_string(fields.size()));
        if (expected_fields == 0)
            expected_fields = static_cast<int>(fields.size());
        else if (static_cast<int>(fields.size()) != expected_fields)
            throw ParseError("line " + std::to_string(line_no) + ": mixed field counts (" +
                             std::to_string(fields.size()) + " vs " + std::to_string(expected_fields) + ")");

        Vec3 p{detail::parse_double(fields[0], line_no, "coordinate"),
               detail::parse_double(fields[1], line_no, "coordinate"),
               detail::parse_double(fields[2], line_no, "coordinate")};
        if (!p.finite()) throw ParseError("line " + std::to_string(line_no) + ": non-finite coordinate");

        Rgb8 c;
        std::uint8_t* channels[3] = {&c.r, &c.g, &c.b};
        for (int k = 0; k < 3; ++k) {
            const long v = detail::parse_long(fields[3 + k], line_no, "color");
            if (v < 0 || v > 255)
                throw ParseError("line " + std::to_string(line_no) + ": color outside 0-255");
            *channels[k] = static_cast<std::uint8_t>(v);
        }

        cloud.positions.push_back(p);
        cloud.colors.push_back(c);
        if (expected_fields == 7) {
            const long l = detail::parse_long(fields[6], line_no, "label");
            if (l < 0 || l >= kNumClasses)
                throw ParseError("line " + std::to_string(line_no) + ": label outside 0-12");
            cloud.labels.push_back(static_cast<std::uint8_t>(l));
        }
    }
    if (cloud.positions.empty())
        throw Error("empty input: '" + path.string() + "' has no points");
    return cloud;
}

/// Writes the same ASCII format back. Coordinates use max_digits10 so a
/// write/read round trip is exact.
inline void write_room_file(const PointCloud& cloud, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    char buf[160];
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Vec3& p = cloud.positions[i];
        const Rgb8& c = cloud.colors[i];
        int n = std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %d %d %d", p.x, p.y, p.z,
                              int(c.r), int(c.g), int(c.b));
        if (cloud.has_labels())
            n += std::snprintf(buf + n, sizeof(buf) - n, " %d", int(cloud.labels[i]));
        buf[n++] = '\n';
        out.write(buf, n);
    }
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

} // namespace greenseg

#endif // GREENSEG_ROOM_IO_HPP
