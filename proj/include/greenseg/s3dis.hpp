#ifndef GREENSEG_S3DIS_HPP
#define GREENSEG_S3DIS_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "greenseg/error.hpp"
#include "greenseg/point_cloud.hpp"
#include "greenseg/room_io.hpp"

namespace greenseg {

namespace detail {

// "ceiling_1.txt" -> "ceiling"; names outside the class table (stairs and
// similar) fall back to clutter.
inline std::uint8_t label_from_object_name(const std::string& stem) {
    const std::size_t underscore = stem.rfind('_');
    const std::string name = underscore == std::string::npos ? stem : stem.substr(0, underscore);
    if (auto id = ClassTable::id_of(name)) return *id;
    return static_cast<std::uint8_t>(ClassTable::size() - 1); // clutter
}

} // namespace detail

/// Converts the S3DIS per-object Annotations layout into labeled room
/// files: for every <root>/Area_*/<room>/Annotations/<object>.txt the
/// object's points are appended to the room with the label derived from
/// the object file name, and the room is written to
/// <out>/Area_*/<room>.txt in the 7-field format. Returns the number of
/// rooms written.
inline std::size_t convert_s3dis(const std::filesystem::path& root,
                                 const std::filesystem::path& out) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(root)) throw IoError("'" + root.string() + "' is not a directory");

    std::vector<fs::path> areas;
    for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory() && entry.path().filename().string().rfind("Area_", 0) == 0)
            areas.push_back(entry.path());
    std::sort(areas.begin(), areas.end());
    if (areas.empty()) throw IoError("'" + root.string() + "' contains no Area_* directories");

    std::size_t rooms_written = 0;
    for (const fs::path& area : areas) {
        std::vector<fs::path> rooms;
        for (const auto& entry : fs::directory_iterator(area))
            if (entry.is_directory()) rooms.push_back(entry.path());
        std::sort(rooms.begin(), rooms.end());

        const fs::path out_area = out / area.filename();
        fs::create_directories(out_area);

        for (const fs::path& room : rooms) {
            const fs::path annotations = room / "Annotations";
            if (!fs::is_directory(annotations)) continue;

            std::vector<fs::path> objects;
            for (const auto& entry : fs::directory_iterator(annotations))
                if (entry.is_regular_file() && entry.path().extension() == ".txt")
                    objects.push_back(entry.path());
            std::sort(objects.begin(), objects.end());
            if (objects.empty()) continue;

            PointCloud cloud;
            cloud.unit_id = room.filename().string();
            for (const fs::path& object : objects) {
                PointCloud part = read_room_file(object);
                if (part.has_labels())
                    throw ParseError("'" + object.string() +
                                     "': annotation files must have 6 fields");
                const std::uint8_t label = detail::label_from_object_name(object.stem().string());
                cloud.positions.insert(cloud.positions.end(), part.positions.begin(),
                                       part.positions.end());
                cloud.colors.insert(cloud.colors.end(), part.colors.begin(), part.colors.end());
                cloud.labels.insert(cloud.labels.end(), part.size(), label);
            }
            write_room_file(cloud, out_area / (room.filename().string() + ".txt"));
            ++rooms_written;
        }
    }
    return rooms_written;
}

} // namespace greenseg

#endif // GREENSEG_S3DIS_HPP
