#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "greenseg/feature_io.hpp"
#include "greenseg/half.hpp"
#include "greenseg/point_cloud.hpp"
#include "greenseg/random.hpp"
#include "greenseg/room_io.hpp"
#include "helpers/temp_dir.hpp"

using namespace greenseg;

namespace {

std::filesystem::path write_text(const testutil::TempDir& dir, const std::string& name,
                                 const std::string& content) {
    const auto path = dir / name;
    std::ofstream out(path);
    out << content;
    return path;
}

} // namespace

TEST_CASE("class table is the canonical 13-class order") {
    REQUIRE(ClassTable::size() == 13);
    CHECK(ClassTable::name_of(0) == "ceiling");
    CHECK(ClassTable::name_of(1) == "floor");
    CHECK(ClassTable::name_of(2) == "wall");
    CHECK(ClassTable::name_of(7) == "table");
    CHECK(ClassTable::name_of(12) == "clutter");
    CHECK(ClassTable::id_of("sofa") == std::uint8_t{9});
    CHECK_FALSE(ClassTable::id_of("stairs").has_value());
}

TEST_CASE("read_room_file parses labeled lines") {
    testutil::TempDir dir("roomio");
    const auto path = write_text(dir, "unit.txt", "1.0 2.0 3.0 255 0 0 2\n");
    const PointCloud cloud = read_room_file(path);
    REQUIRE(cloud.size() == 1);
    CHECK(cloud.positions[0] == Vec3{1.0, 2.0, 3.0});
    CHECK(cloud.colors[0] == Rgb8{255, 0, 0});
    REQUIRE(cloud.has_labels());
    CHECK(cloud.labels[0] == 2);
    CHECK(cloud.unit_id == "unit");
}

TEST_CASE("read_room_file preserves point order and count") {
    testutil::TempDir dir("roomio");
    const auto path = write_text(dir, "three.txt",
                                 "0 0 0 1 2 3\n"
                                 "1 0 0 4 5 6\n"
                                 "2 0 0 7 8 9\n");
    const PointCloud cloud = read_room_file(path);
    REQUIRE(cloud.size() == 3);
    CHECK_FALSE(cloud.has_labels());
    CHECK(cloud.positions[0].x == 0.0);
    CHECK(cloud.positions[1].x == 1.0);
    CHECK(cloud.positions[2].x == 2.0);
    CHECK(cloud.colors[2] == Rgb8{7, 8, 9});
}

TEST_CASE("read_room_file rejects malformed input naming the line") {
    testutil::TempDir dir("roomio");

    SECTION("mixed 6 and 7 field lines") {
        const auto path = write_text(dir, "mixed.txt", "0 0 0 1 2 3 4\n1 1 1 5 6 7\n");
        CHECK_THROWS_MATCHES(read_room_file(path), ParseError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("line 2")));
    }
    SECTION("wrong field count") {
        const auto path = write_text(dir, "short.txt", "0 0 0 1 2\n");
        CHECK_THROWS_AS(read_room_file(path), ParseError);
    }
    SECTION("unparsable number") {
        const auto path = write_text(dir, "nan.txt", "0 zero 0 1 2 3\n");
        CHECK_THROWS_MATCHES(read_room_file(path), ParseError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("line 1")));
    }
    SECTION("color out of range") {
        const auto path = write_text(dir, "color.txt", "0 0 0 256 0 0\n");
        CHECK_THROWS_AS(read_room_file(path), ParseError);
    }
    SECTION("label out of range") {
        const auto path = write_text(dir, "label.txt", "0 0 0 1 2 3 13\n");
        CHECK_THROWS_AS(read_room_file(path), ParseError);
    }
    SECTION("empty file") {
        const auto path = write_text(dir, "empty.txt", "");
        CHECK_THROWS_MATCHES(read_room_file(path), Error,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("empty input")));
    }
}

TEST_CASE("room file write/read round trip") {
    testutil::TempDir dir("roomio");
    PointCloud cloud;
    cloud.unit_id = "rt";
    Rng rng(7);
    for (int i = 0; i < 64; ++i) {
        cloud.positions.push_back(Vec3{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(0, 2.5)});
        cloud.colors.push_back(Rgb8{static_cast<std::uint8_t>(rng.uniform_index(256)),
                                    static_cast<std::uint8_t>(rng.uniform_index(256)),
                                    static_cast<std::uint8_t>(rng.uniform_index(256))});
        cloud.labels.push_back(static_cast<std::uint8_t>(rng.uniform_index(13)));
    }
    const auto path = dir / "rt.txt";
    write_room_file(cloud, path);
    const PointCloud back = read_room_file(path);
    REQUIRE(back.size() == cloud.size());
    CHECK(back.positions == cloud.positions);
    CHECK(back.colors == cloud.colors);
    CHECK(back.labels == cloud.labels);
}

TEST_CASE("feature file header layout gives the documented size") {
    testutil::TempDir dir("featio");
    Matrix m(2, 3);
    for (std::size_t i = 0; i < 6; ++i) m.data()[i] = static_cast<double>(i) + 0.5;
    const auto path = dir / "m.feat";
    write_feature_file(m, Precision::f32, path);
    CHECK(std::filesystem::file_size(path) == 8 + 4 + 4 + 4 + 1 + 24);
}

TEST_CASE("feature file round trips exactly at the stored precision") {
    testutil::TempDir dir("featio");
    Rng rng(99);
    for (int iter = 0; iter < 25; ++iter) {
        const std::size_t n = 1 + rng.uniform_index(40);
        const std::size_t d = 1 + rng.uniform_index(12);
        Matrix m(n, d);
        for (double& v : m.data()) v = rng.uniform(-50.0, 50.0);

        const auto f32_path = dir / "a.feat";
        write_feature_file(m, Precision::f32, f32_path);
        const Matrix back32 = read_feature_file(f32_path);
        REQUIRE(back32.rows() == n);
        REQUIRE(back32.cols() == d);
        for (std::size_t i = 0; i < n * d; ++i)
            CHECK(back32.data()[i] == round_to_f32(m.data()[i]));

        const auto f16_path = dir / "b.feat";
        write_feature_file(m, Precision::f16, f16_path);
        const Matrix back16 = read_feature_file(f16_path);
        for (std::size_t i = 0; i < n * d; ++i)
            CHECK(back16.data()[i] == round_to_f16(m.data()[i]));
    }
}

TEST_CASE("feature file rejects bad input") {
    testutil::TempDir dir("featio");
    Matrix m(2, 2, 1.0);

    SECTION("NaN in attributes is a state error") {
        m(0, 1) = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(write_feature_file(m, Precision::f32, dir / "bad.feat"), StateError);
    }
    SECTION("attributes absent is a state error") {
        PointCloud cloud;
        cloud.positions = {{0, 0, 0}};
        cloud.colors = {{0, 0, 0}};
        CHECK_THROWS_AS(write_feature_file(cloud, Precision::f32, dir / "bad.feat"), StateError);
    }
    SECTION("truncated payload") {
        const auto path = dir / "trunc.feat";
        write_feature_file(m, Precision::f32, path);
        std::filesystem::resize_file(path, std::filesystem::file_size(path) - 5);
        CHECK_THROWS_AS(read_feature_file(path), FormatError);
    }
    SECTION("bad magic") {
        const auto path = dir / "magic.feat";
        std::ofstream out(path, std::ios::binary);
        out << "NOTAFILExxxxxxxxxxxxxxxxxxxx";
        out.close();
        CHECK_THROWS_AS(read_feature_file(path), FormatError);
    }
    SECTION("unknown dtype byte") {
        const auto path = dir / "dtype.feat";
        write_feature_file(m, Precision::f32, path);
        std::fstream fix(path, std::ios::in | std::ios::out | std::ios::binary);
        fix.seekp(8 + 4 + 4 + 4);
        const char dtype = 7;
        fix.write(&dtype, 1);
        fix.close();
        CHECK_THROWS_AS(read_feature_file(path), FormatError);
    }
    SECTION("bad version") {
        const auto path = dir / "ver.feat";
        write_feature_file(m, Precision::f32, path);
        std::fstream fix(path, std::ios::in | std::ios::out | std::ios::binary);
        fix.seekp(8);
        const std::uint32_t version = 9;
        fix.write(reinterpret_cast<const char*>(&version), 4);
        fix.close();
        CHECK_THROWS_AS(read_feature_file(path), FormatError);
    }
}

TEST_CASE("half float conversion") {
    SECTION("half -> float -> half is the identity for every bit pattern") {
        for (std::uint32_t bits = 0; bits <= 0xffff; ++bits) {
            const auto h = static_cast<std::uint16_t>(bits);
            const float f = half_to_float(h);
            if (std::isnan(f)) {
                CHECK(std::isnan(half_to_float(float_to_half(f))));
            } else {
                CHECK(float_to_half(f) == h);
            }
        }
    }
    SECTION("values just above one round down to one") {
        CHECK(round_to_f16(1.0000001) == 1.0);
        CHECK(round_to_f32(1.0) == 1.0);
    }
    SECTION("overflow saturates to infinity") {
        CHECK(std::isinf(half_to_float(float_to_half(1.0e6f))));
    }
}

TEST_CASE("point cloud invariants are enforced") {
    PointCloud cloud;
    cloud.unit_id = "bad";
    SECTION("empty cloud") { CHECK_THROWS_AS(cloud.validate(), StateError); }
    SECTION("mismatched columns") {
        cloud.positions = {{0, 0, 0}, {1, 1, 1}};
        cloud.colors = {{0, 0, 0}};
        CHECK_THROWS_AS(cloud.validate(), StateError);
    }
    SECTION("non-finite attribute") {
        cloud.positions = {{0, 0, 0}};
        cloud.colors = {{0, 0, 0}};
        cloud.attributes = Matrix(1, 2, 0.0);
        cloud.attributes(0, 1) = std::numeric_limits<double>::infinity();
        CHECK_THROWS_AS(cloud.validate(), StateError);
    }
}
