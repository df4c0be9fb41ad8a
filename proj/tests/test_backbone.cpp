#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "fightdet/feature_io.hpp"
#include "fightdet/toy_extractor.hpp"

using namespace fightdet;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("fightdet_fb_" + std::to_string(std::rand()) + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("builtin backbone tap points") {
    auto specs = builtin_backbones();
    REQUIRE(specs.size() >= 4);

    auto vgg = find_backbone("vgg16-fc2");
    CHECK(vgg.input_size == 224);
    CHECK(vgg.feature_dim == 4096);

    auto xcp = find_backbone("xception-gap");
    CHECK(xcp.input_size == 299);
    CHECK(xcp.feature_dim == 2048);

    auto fcnn = find_backbone("fight-cnn-fc1");
    CHECK(fcnn.input_size == 299);
    CHECK(fcnn.feature_dim == 1024); // configurable default
    CHECK(find_backbone("fight-cnn-fc1", 512).feature_dim == 512);

    auto toy = find_backbone("toy-8x8");
    CHECK(toy.feature_dim == 64);

    CHECK_THROWS_AS(find_backbone("resnet50"), ConfigError);
}

TEST_CASE("fvs1 round trip is bit exact") {
    TempDir tmp;
    SeededRng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        FeatureSequence seq;
        seq.matrix = Tensor2(1 + int(rng.next_below(12)), 1 + int(rng.next_below(80)));
        for (auto& v : seq.matrix.v) v = float(rng.uniform(-100.0, 100.0));
        const std::string path = (tmp.path / ("f" + std::to_string(trial) + ".fvs1")).string();
        write_features(seq, path);
        FeatureSequence back = read_features(path);
        REQUIRE(back.matrix.rows == seq.matrix.rows);
        REQUIRE(back.matrix.cols == seq.matrix.cols);
        REQUIRE(back.matrix.v == seq.matrix.v);
    }
}

TEST_CASE("fvs1 file size is 16 + k*d*4") {
    TempDir tmp;
    FeatureSequence seq;
    seq.matrix = Tensor2(5, 2048);
    const std::string path = (tmp.path / "size.fvs1").string();
    write_features(seq, path);
    CHECK(fs::file_size(path) == 16 + 5 * 2048 * 4);
}

TEST_CASE("fvs1 rejects truncation, bad magic, bad version, nan") {
    TempDir tmp;
    FeatureSequence seq;
    seq.matrix = Tensor2(3, 4);
    for (std::size_t i = 0; i < seq.matrix.size(); ++i) seq.matrix.v[i] = float(i);
    const std::string path = (tmp.path / "base.fvs1").string();
    write_features(seq, path);

    // truncated: drop the last 5 bytes
    {
        std::ifstream in(path, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(in)), {});
        std::ofstream out((tmp.path / "trunc.fvs1").string(), std::ios::binary);
        out.write(bytes.data(), std::streamsize(bytes.size() - 5));
    }
    CHECK_THROWS_AS(read_features((tmp.path / "trunc.fvs1").string()), FormatError);

    {
        std::ofstream out((tmp.path / "magic.fvs1").string(), std::ios::binary);
        out.write("NOPE", 4);
    }
    CHECK_THROWS_AS(read_features((tmp.path / "magic.fvs1").string()), FormatError);

    {
        std::ifstream in(path, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(in)), {});
        bytes[4] = 2; // version
        std::ofstream out((tmp.path / "ver.fvs1").string(), std::ios::binary);
        out.write(bytes.data(), std::streamsize(bytes.size()));
    }
    CHECK_THROWS_AS(read_features((tmp.path / "ver.fvs1").string()), FormatError);

    FeatureSequence bad = seq;
    bad.matrix(0, 0) = std::nanf("");
    CHECK_THROWS_AS(write_features(bad, (tmp.path / "nan.fvs1").string()), NumericError);
}

TEST_CASE("toy extractor zero input and determinism") {
    SampledClip clip;
    clip.source_id = "black";
    clip.frames.push_back(Frame(16, 16, 3)); // all zeros
    clip.frames.push_back(Frame(16, 16, 3));
    FeatureSequence f = toy_extract(clip, 32, 7);
    CHECK(f.matrix.rows == 2);
    CHECK(f.matrix.cols == 32);
    for (float v : f.matrix.v) CHECK(v == 0.0f);

    // identical frames give identical rows
    SampledClip mixed;
    Frame a(12, 10, 3);
    for (std::size_t i = 0; i < a.pixels.size(); ++i) a.pixels[i] = std::uint8_t(i % 251);
    mixed.frames = {a, a};
    FeatureSequence g = toy_extract(mixed, 16, 3);
    for (int j = 0; j < 16; ++j) CHECK(g.matrix(0, j) == g.matrix(1, j));

    FeatureSequence h = toy_extract(mixed, 16, 3);
    CHECK(h.matrix.v == g.matrix.v);
}

TEST_CASE("toy extractor matches the block-mean oracle on a checkerboard") {
    // 16x16 checkerboard of 2x2 source pixels per 8x8 cell
    Frame f(16, 16, 3);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x) {
            std::uint8_t v = ((x / 2 + y / 2) % 2) ? 255 : 0;
            f.at(x, y, 0) = f.at(x, y, 1) = f.at(x, y, 2) = v;
        }
    SampledClip clip;
    clip.frames = {f};

    // independent block means: each 8x8 cell covers one solid 2x2 block
    std::vector<double> cells(64);
    for (int gy = 0; gy < 8; ++gy)
        for (int gx = 0; gx < 8; ++gx) cells[std::size_t(gy * 8 + gx)] = ((gx + gy) % 2) ? 1.0 : 0.0;

    const int d = 5;
    const std::uint64_t seed = 99;
    Tensor2 proj = toy_projection(d, seed);
    FeatureSequence got = toy_extract(clip, d, seed);
    for (int j = 0; j < d; ++j) {
        double want = 0.0;
        for (int c = 0; c < 64; ++c) want += cells[std::size_t(c)] * double(proj(c, j));
        CHECK(std::fabs(double(got.matrix(0, j)) - want) < 1e-6);
    }
}

TEST_CASE("toy extractor permutes rows with the frames") {
    SeededRng rng(41);
    SampledClip clip;
    for (int i = 0; i < 4; ++i) {
        Frame f(9, 9, 3);
        for (auto& p : f.pixels) p = std::uint8_t(rng.next_below(256));
        clip.frames.push_back(f);
    }
    FeatureSequence base = toy_extract(clip, 10, 5);

    SampledClip shuffled;
    const int perm[4] = {2, 0, 3, 1};
    for (int i : perm) shuffled.frames.push_back(clip.frames[std::size_t(i)]);
    FeatureSequence permuted = toy_extract(shuffled, 10, 5);

    for (int r = 0; r < 4; ++r)
        for (int j = 0; j < 10; ++j) REQUIRE(permuted.matrix(r, j) == base.matrix(perm[r], j));
}

TEST_CASE("toy extractor handles frames smaller than the pooling grid") {
    SampledClip clip;
    Frame tiny(3, 2, 3);
    for (auto& p : tiny.pixels) p = 100;
    clip.frames = {tiny};
    FeatureSequence f = toy_extract(clip, 8, 1);
    CHECK(all_finite(f.matrix));
}

TEST_CASE("feature_normalize modes") {
    FeatureSequence seq;
    seq.matrix = Tensor2(3, 2);
    seq.matrix(0, 0) = 3;
    seq.matrix(0, 1) = 4;
    seq.matrix(1, 0) = 0;
    seq.matrix(1, 1) = 0;
    seq.matrix(2, 0) = -1;
    seq.matrix(2, 1) = 0;

    FeatureSequence none = feature_normalize(seq, NormalizeMode::none);
    CHECK(none.matrix.v == seq.matrix.v);

    FeatureSequence l2 = feature_normalize(seq, NormalizeMode::l2_per_frame);
    CHECK(l2.matrix(0, 0) == doctest::Approx(0.6));
    CHECK(l2.matrix(0, 1) == doctest::Approx(0.8));
    CHECK(l2.matrix(1, 0) == 0.0f); // zero row untouched, no NaN
    CHECK(l2.matrix(1, 1) == 0.0f);
    CHECK(l2.matrix(2, 0) == doctest::Approx(-1.0));

    CHECK(parse_normalize_mode("l2") == NormalizeMode::l2_per_frame);
    CHECK_THROWS_AS(parse_normalize_mode("zscore"), ParamError);
}
