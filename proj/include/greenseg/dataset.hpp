#ifndef GREENSEG_DATASET_HPP
#define GREENSEG_DATASET_HPP

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "greenseg/error.hpp"
#include "greenseg/point_cloud.hpp"
#include "greenseg/room_io.hpp"

namespace greenseg {

/// Sorted regular files with the given extension directly inside `dir`.
inline std::vector<std::filesystem::path> list_files(const std::filesystem::path& dir,
                                                     std::string_view extension) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw IoError("'" + dir.string() + "' is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == extension)
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

struct AreaRoom {
    int area = 0;
    PointCloud room;
};

/// Loads labeled room files from an Area_<n>/ directory tree (the layout
/// `convert` produces). Room ids are prefixed with their area so they
/// stay unique across areas.
inline std::vector<AreaRoom> load_area_rooms(const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(root)) throw IoError("'" + root.string() + "' is not a directory");

    std::vector<fs::path> areas;
    for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory() && entry.path().filename().string().rfind("Area_", 0) == 0)
            areas.push_back(entry.path());
    std::sort(areas.begin(), areas.end());
    if (areas.empty()) throw IoError("'" + root.string() + "' contains no Area_* directories");

    std::vector<AreaRoom> rooms;
    for (const fs::path& area : areas) {
        const std::string digits = area.filename().string().substr(5);
        int area_id = 0;
        const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), area_id);
        if (res.ec != std::errc())
            throw ParseError("cannot parse area index from '" + area.string() + "'");
        for (const fs::path& file : list_files(area, ".txt")) {
            PointCloud room = read_room_file(file);
            room.unit_id = area.filename().string() + "_" + room.unit_id;
            rooms.push_back({area_id, std::move(room)});
        }
    }
    return rooms;
}

/// One class id per line.
inline void write_labels_file(std::span<const std::uint8_t> labels,
                              const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    for (std::uint8_t l : labels) out << int(l) << '\n';
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline std::vector<std::uint8_t> read_labels_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::vector<std::uint8_t> labels;
    long v = 0;
    std::size_t line_no = 0;
    while (in >> v) {
        ++line_no;
        if (v < 0 || v >= kNumClasses)
            throw ParseError("line " + std::to_string(line_no) + ": label outside 0-12");
        labels.push_back(static_cast<std::uint8_t>(v));
    }
    if (labels.empty()) throw Error("empty input: '" + path.string() + "' has no labels");
    return labels;
}

} // namespace greenseg

#endif // GREENSEG_DATASET_HPP
