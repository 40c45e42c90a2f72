#ifndef GREENSEG_FEATURE_IO_HPP
#define GREENSEG_FEATURE_IO_HPP

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

#include "greenseg/error.hpp"
#include "greenseg/half.hpp"
#include "greenseg/matrix.hpp"
#include "greenseg/point_cloud.hpp"

namespace greenseg {

enum class Precision : std::uint8_t { f32 = 0, f16 = 1 };

inline std::string_view precision_name(Precision p) { return p == Precision::f32 ? "f32" : "f16"; }

// GSIPFEAT binary layout (little endian):
//   8 bytes magic "GSIPFEAT"
//   u32 version = 1
//   u32 N, u32 D
//   u8 dtype (0 = f32, 1 = f16)
//   N*D row-major values at the stated width
inline constexpr char kFeatureMagic[8] = {'G', 'S', 'I', 'P', 'F', 'E', 'A', 'T'};
inline constexpr std::uint32_t kFeatureVersion = 1;

/// Writes an attribute/feature matrix. Values are rounded to the target
/// precision; a subsequent read returns exactly those rounded values.
inline void write_feature_file(const Matrix& features, Precision precision,
                               const std::filesystem::path& path) {
    if (features.empty()) throw StateError("write_feature_file: empty feature matrix");
    if (!features.all_finite()) throw StateError("write_feature_file: non-finite feature value");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");

    const std::uint32_t n = static_cast<std::uint32_t>(features.rows());
    const std::uint32_t d = static_cast<std::uint32_t>(features.cols());
    const std::uint8_t dtype = static_cast<std::uint8_t>(precision);

    out.write(kFeatureMagic, 8);
    out.write(reinterpret_cast<const char*>(&kFeatureVersion), 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&d), 4);
    out.write(reinterpret_cast<const char*>(&dtype), 1);

    const std::vector<double>& values = features.data();
    if (precision == Precision::f32) {
        std::vector<float> buf(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) buf[i] = static_cast<float>(values[i]);
        out.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<std::streamsize>(buf.size() * 4));
    } else {
        std::vector<std::uint16_t> buf(values.size());
        for (std::size_t i = 0; i < values.size(); ++i)
            buf[i] = float_to_half(static_cast<float>(values[i]));
        out.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<std::streamsize>(buf.size() * 2));
    }
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline void write_feature_file(const PointCloud& cloud, Precision precision,
                               const std::filesystem::path& path) {
    if (!cloud.has_attributes())
        throw StateError("write_feature_file: cloud '" + cloud.unit_id + "' has no attributes");
    write_feature_file(cloud.attributes, precision, path);
}

/// Reads a GSIPFEAT file back into a matrix (exact inverse of write at the
/// stored precision).
inline Matrix read_feature_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");

    char magic[8];
    std::uint32_t version = 0, n = 0, d = 0;
    std::uint8_t dtype = 0xff;
    in.read(magic, 8);
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&d), 4);
    in.read(reinterpret_cast<char*>(&dtype), 1);
    if (!in || std::memcmp(magic, kFeatureMagic, 8) != 0)
        throw FormatError("'" + path.string() + "': bad magic");
    if (version != kFeatureVersion)
        throw FormatError("'" + path.string() + "': unsupported version " + std::to_string(version));
    if (dtype > 1)
        throw FormatError("'" + path.string() + "': unknown dtype " + std::to_string(dtype));

    const std::size_t count = static_cast<std::size_t>(n) * d;
    Matrix features(n, d);
    if (dtype == 0) {
        std::vector<float> buf(count);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(count * 4));
        if (!in || static_cast<std::size_t>(in.gcount()) != count * 4)
            throw FormatError("'" + path.string() + "': truncated payload");
        for (std::size_t i = 0; i < count; ++i) features.data()[i] = static_cast<double>(buf[i]);
    } else {
        std::vector<std::uint16_t> buf(count);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(count * 2));
        if (!in || static_cast<std::size_t>(in.gcount()) != count * 2)
            throw FormatError("'" + path.string() + "': truncated payload");
        for (std::size_t i = 0; i < count; ++i)
            features.data()[i] = static_cast<double>(half_to_float(buf[i]));
    }
    return features;
}

} // namespace greenseg

#endif // GREENSEG_FEATURE_IO_HPP
