#include <gtest/gtest.h>

#include <bit>
#include <cstring>
#include <filesystem>
#include <sstream>

#include "hip/errors.hpp"
#include "hip/field_io.hpp"
#include "hip/presets.hpp"

using namespace hip;

TEST(FieldIo, StreamRoundTripIsBitwise) {
    const Grid g(10);
    ScalarField f = presets::random_sine_series(g, 4, 9);
    f(3, 0) = -0.0;
    f(0, 0) = 1e-310;  // subnormal
    std::stringstream s;
    write_field(s, f);
    const ScalarField back = read_field(s);
    ASSERT_EQ(back.grid(), g);
    EXPECT_EQ(std::memcmp(back.values().data(), f.values().data(), f.size() * sizeof(double)), 0);
}

TEST(FieldIo, LayoutIsHeaderThenLittleEndian) {
    const Grid g(8);
    ScalarField f(g);
    f[0] = 1.0;
    std::stringstream s;
    write_field(s, f);
    const std::string bytes = s.str();
    const std::string header = "hipfield 1 8\n";
    ASSERT_EQ(bytes.substr(0, header.size()), header);
    ASSERT_EQ(bytes.size(), header.size() + 81 * 8);
    // 1.0 = 0x3FF0000000000000, least significant byte first.
    EXPECT_EQ(static_cast<unsigned char>(bytes[header.size() + 7]), 0x3F);
    EXPECT_EQ(static_cast<unsigned char>(bytes[header.size() + 6]), 0xF0);
    EXPECT_EQ(static_cast<unsigned char>(bytes[header.size()]), 0x00);
}

TEST(FieldIo, RejectsMalformedInput) {
    std::stringstream bad_magic("hipfeld 1 8\n");
    EXPECT_THROW(read_field(bad_magic), DomainError);
    std::stringstream bad_version("hipfield 2 8\n");
    EXPECT_THROW(read_field(bad_version), DomainError);
    std::stringstream truncated("hipfield 1 8\n\x01\x02");
    EXPECT_THROW(read_field(truncated), DomainError);
}

TEST(FieldIo, FileRoundTrip) {
    const auto path = std::filesystem::temp_directory_path() / "hip_field_io_test.hipfield";
    const ScalarField f = presets::bump_sigma(Grid(16)).field();
    save_field(path, f);
    const ScalarField back = load_field(path);
    std::filesystem::remove(path);
    EXPECT_EQ(std::memcmp(back.values().data(), f.values().data(), f.size() * sizeof(double)), 0);
    EXPECT_THROW(load_field(path), DomainError);
}
