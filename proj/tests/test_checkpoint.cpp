#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "fightdet/checkpoint.hpp"

using namespace fightdet;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("fightdet_ck_" + std::to_string(std::rand()) + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

ModelConfig sample_config() {
    ModelConfig cfg;
    cfg.variant = Variant::bilstm_attn;
    cfg.input_dim = 6;
    cfg.hidden_size = 4;
    cfg.frames = 5;
    cfg.dropout_rate = 0.5;
    cfg.seed = 31337;
    return cfg;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), {});
}

} // namespace

TEST_CASE("fmd1 round trip restores config and parameters bit-exactly") {
    TempDir tmp;
    ModelConfig cfg = sample_config();
    ParamStore ps = init_params<float>(cfg);
    const std::string path = (tmp.path / "model.fmd1").string();
    save_checkpoint(path, cfg, ps);

    Checkpoint back = load_checkpoint(path);
    CHECK(back.config.variant == cfg.variant);
    CHECK(back.config.input_dim == cfg.input_dim);
    CHECK(back.config.hidden_size == cfg.hidden_size);
    CHECK(back.config.frames == cfg.frames);
    CHECK(back.config.dropout_rate == cfg.dropout_rate);
    CHECK(back.config.seed == cfg.seed);
    REQUIRE(back.params.count() == ps.count());
    for (std::size_t e = 0; e < ps.count(); ++e) {
        CHECK(back.params.entries()[e].name == ps.entries()[e].name);
        CHECK(back.params.entries()[e].value.v == ps.entries()[e].value.v);
    }
}

TEST_CASE("fmd1 writes are byte-identical for identical inputs") {
    TempDir tmp;
    ModelConfig cfg = sample_config();
    ParamStore ps = init_params<float>(cfg);
    const std::string a = (tmp.path / "a.fmd1").string();
    const std::string b = (tmp.path / "b.fmd1").string();
    save_checkpoint(a, cfg, ps);
    save_checkpoint(b, cfg, ps);
    CHECK(slurp(a) == slurp(b));
}

TEST_CASE("fmd1 rejects truncation, bad magic, config tampering") {
    TempDir tmp;
    ModelConfig cfg = sample_config();
    cfg.variant = Variant::lstm; // smaller file
    ParamStore ps = init_params<float>(cfg);
    const std::string path = (tmp.path / "base.fmd1").string();
    save_checkpoint(path, cfg, ps);
    const std::string bytes = slurp(path);

    auto write_bytes = [&](const std::string& name, const std::string& data) {
        std::ofstream out((tmp.path / name).string(), std::ios::binary);
        out.write(data.data(), std::streamsize(data.size()));
        return (tmp.path / name).string();
    };

    CHECK_THROWS_AS(load_checkpoint(write_bytes("t1.fmd1", bytes.substr(0, bytes.size() - 3))),
                    FormatError);
    CHECK_THROWS_AS(load_checkpoint(write_bytes("t2.fmd1", bytes.substr(0, 10))), FormatError);

    std::string bad_magic = bytes;
    bad_magic[0] = 'X';
    CHECK_THROWS_AS(load_checkpoint(write_bytes("t3.fmd1", bad_magic)), FormatError);

    std::string bad_version = bytes;
    bad_version[4] = 9;
    CHECK_THROWS_AS(load_checkpoint(write_bytes("t4.fmd1", bad_version)), FormatError);

    CHECK_THROWS_AS(load_checkpoint((tmp.path / "missing.fmd1").string()), FormatError);
}

TEST_CASE("fmd1 config record validation") {
    TempDir tmp;
    // parameters from one variant with the config of another must not load
    ModelConfig lstm_cfg = sample_config();
    lstm_cfg.variant = Variant::lstm;
    ParamStore lstm_ps = init_params<float>(lstm_cfg);
    ModelConfig mismatched = lstm_cfg;
    mismatched.variant = Variant::bilstm;
    CHECK_THROWS_AS(save_checkpoint((tmp.path / "x.fmd1").string(), mismatched, lstm_ps),
                    ConfigError);
}

TEST_CASE("loaded checkpoints predict identically to the saved model") {
    TempDir tmp;
    ModelConfig cfg = sample_config();
    ParamStore ps = init_params<float>(cfg);
    SeededRng rng(5);
    Tensor2 X(cfg.frames, cfg.input_dim);
    for (auto& v : X.v) v = float(rng.uniform(-1, 1));

    Tensor2 before = model_forward(X, cfg, ps);
    const std::string path = (tmp.path / "m.fmd1").string();
    save_checkpoint(path, cfg, ps);
    Checkpoint back = load_checkpoint(path);
    Tensor2 after = model_forward(X, back.config, back.params);
    CHECK(before.v == after.v);
}
