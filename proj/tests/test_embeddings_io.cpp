#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "prdkit/embeddings_io.hpp"
#include "prdkit/rng.hpp"

using namespace prdkit;

namespace {

namespace fs = std::filesystem;

std::string temp_path(const std::string& name) {
    return (fs::temp_directory_path() / name).string();
}

SampleSet random_floats(std::size_t n, std::size_t d, std::uint64_t seed) {
    // float32-representable values so raw round-trips are bitwise
    RngStream rng(seed, 0);
    SampleSet s;
    s.label = "rand";
    s.points = Matrix(n, d);
    for (auto& v : s.points.data) v = static_cast<double>(static_cast<float>(rng.normal()));
    return s;
}

}  // namespace

TEST(CsvEmbeddings, ParsesPlainAndHeadered) {
    const std::string path = temp_path("prdkit_io.csv");
    {
        std::ofstream out(path);
        out << "1.0,2.0\n3.0,4.0\n";
    }
    const SampleSet s = read_embeddings(path);
    ASSERT_EQ(s.size(), 2u);
    ASSERT_EQ(s.dim(), 2u);
    EXPECT_EQ(s.points.at(0, 0), 1.0);
    EXPECT_EQ(s.points.at(1, 1), 4.0);
    {
        std::ofstream out(path);
        out << "dim_a,dim_b\n1.5,2.5\n";
    }
    const SampleSet h = read_embeddings(path);
    ASSERT_EQ(h.size(), 1u);
    EXPECT_EQ(h.points.at(0, 1), 2.5);
    fs::remove(path);
}

TEST(CsvEmbeddings, ErrorsNameTheRow) {
    const std::string path = temp_path("prdkit_io_bad.csv");
    {
        std::ofstream out(path);
        out << "1.0,2.0\n3.0,oops\n";
    }
    try {
        read_embeddings(path);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
    }
    {
        std::ofstream out(path);
        out << "1.0,2.0\n3.0\n";
    }
    EXPECT_THROW(read_embeddings(path), ParseError);
    {
        std::ofstream out(path);
        out << "1.0,inf\n";
    }
    EXPECT_THROW(read_embeddings(path), ParseError);  // non-finite rejected
    fs::remove(path);
}

TEST(CsvEmbeddings, RoundTripWithinPrintPrecision) {
    RngStream rng(4, 0);
    SampleSet s;
    s.points = Matrix(6, 3);
    for (auto& v : s.points.data) v = rng.normal() * 1e3;
    const std::string path = temp_path("prdkit_io_rt.csv");
    write_embeddings(s, path);
    const SampleSet back = read_embeddings(path);
    ASSERT_EQ(back.size(), s.size());
    for (std::size_t i = 0; i < s.points.data.size(); ++i)
        ASSERT_EQ(back.points.data[i], s.points.data[i]);  // %.17g round-trips doubles
    fs::remove(path);
}

TEST(NpyEmbeddings, RoundTripBitwise) {
    RngStream rng(9, 0);
    SampleSet s;
    s.label = "npy";
    s.points = Matrix(7, 5);
    for (auto& v : s.points.data) v = rng.normal();
    const std::string path = temp_path("prdkit_io.npy");
    write_embeddings(s, path);
    const SampleSet back = read_embeddings(path);
    ASSERT_EQ(back.size(), 7u);
    ASSERT_EQ(back.dim(), 5u);
    EXPECT_EQ(back.points.data, s.points.data);
    fs::remove(path);
}

TEST(NpyEmbeddings, ReadsFloat32Payload) {
    // hand-built v1.0 header with '<f4'
    const std::string path = temp_path("prdkit_io_f4.npy");
    {
        std::string dict = "{'descr': '<f4', 'fortran_order': False, 'shape': (2, 2), }";
        const std::size_t unpadded = 10 + dict.size() + 1;
        dict.append((64 - unpadded % 64) % 64, ' ');
        dict.push_back('\n');
        std::ofstream out(path, std::ios::binary);
        out.write("\x93NUMPY", 6);
        const unsigned char ver[2] = {1, 0};
        out.write(reinterpret_cast<const char*>(ver), 2);
        const std::uint16_t len = static_cast<std::uint16_t>(dict.size());
        const unsigned char lenb[2] = {static_cast<unsigned char>(len & 0xff),
                                       static_cast<unsigned char>(len >> 8)};
        out.write(reinterpret_cast<const char*>(lenb), 2);
        out << dict;
        const float payload[4] = {1.5f, -2.25f, 3.0f, 0.125f};
        out.write(reinterpret_cast<const char*>(payload), sizeof(payload));
    }
    const SampleSet s = read_embeddings(path);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s.points.at(0, 0), 1.5);
    EXPECT_EQ(s.points.at(0, 1), -2.25);
    EXPECT_EQ(s.points.at(1, 1), 0.125);
    fs::remove(path);
}

TEST(NpyEmbeddings, RejectsBadHeaders) {
    const std::string path = temp_path("prdkit_io_bad.npy");
    {
        std::ofstream out(path, std::ios::binary);
        out << "NOTNUMPY.....";
    }
    EXPECT_THROW(read_embeddings(path), ParseError);
    {
        // 1-D shape is rejected
        std::string dict = "{'descr': '<f8', 'fortran_order': False, 'shape': (4,), }";
        dict.push_back('\n');
        std::ofstream out(path, std::ios::binary);
        out.write("\x93NUMPY", 6);
        const unsigned char ver[2] = {1, 0};
        out.write(reinterpret_cast<const char*>(ver), 2);
        const std::uint16_t len = static_cast<std::uint16_t>(dict.size());
        const unsigned char lenb[2] = {static_cast<unsigned char>(len & 0xff),
                                       static_cast<unsigned char>(len >> 8)};
        out.write(reinterpret_cast<const char*>(lenb), 2);
        out << dict;
        const double payload[4] = {1, 2, 3, 4};
        out.write(reinterpret_cast<const char*>(payload), sizeof(payload));
    }
    EXPECT_THROW(read_embeddings(path), ParseError);
    fs::remove(path);
}

TEST(RawEmbeddings, RoundTripBitwise) {
    const SampleSet s = random_floats(5, 3, 77);
    const std::string path = temp_path("prdkit_io.raw");
    write_embeddings(s, path);
    const SampleSet back = read_embeddings(path);
    EXPECT_EQ(back.points.data, s.points.data);
    fs::remove(path);
    fs::remove(path + ".json");
}

TEST(RawEmbeddings, SizeMismatchNamesBytes) {
    const std::string path = temp_path("prdkit_io_short.raw");
    {
        std::ofstream out(path, std::ios::binary);
        const char bytes[20] = {};
        out.write(bytes, 20);
        std::ofstream side(path + ".json");
        side << "{\"n\":2,\"d\":3}";
    }
    try {
        read_embeddings(path);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("20 bytes"), std::string::npos);
        EXPECT_NE(msg.find("24"), std::string::npos);
    }
    fs::remove(path);
    fs::remove(path + ".json");
}

TEST(RawEmbeddings, MissingSidecarRejected) {
    const std::string path = temp_path("prdkit_io_nosidecar.raw");
    {
        std::ofstream out(path, std::ios::binary);
        const char bytes[12] = {};
        out.write(bytes, 12);
    }
    EXPECT_THROW(read_embeddings(path), ParseError);
    fs::remove(path);
}

TEST(Embeddings, AllFormatsCarryIdentityMatrix) {
    SampleSet eye;
    eye.label = "eye";
    eye.points = Matrix::identity(4);
    for (const char* name : {"prdkit_eye.csv", "prdkit_eye.npy", "prdkit_eye.raw"}) {
        const std::string path = temp_path(name);
        write_embeddings(eye, path);
        const SampleSet back = read_embeddings(path);
        ASSERT_EQ(back.points.data, eye.points.data) << name;
        fs::remove(path);
        fs::remove(path + ".json");
    }
}

TEST(Embeddings, EmptySetRejectedOnWrite) {
    SampleSet empty;
    empty.label = "empty";
    EXPECT_THROW(write_embeddings(empty, temp_path("prdkit_empty.csv")), std::invalid_argument);
}
