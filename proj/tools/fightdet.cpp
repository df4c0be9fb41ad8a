// fightdet: frame sampling, feature extraction/ingestion, training,
// evaluation, the experiment grid, and single-clip prediction.
//
// Exit codes: 0 success, 1 usage, 2 input/data, 3 numeric divergence.
// stdout carries machine-parseable results only; diagnostics go to stderr.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "fightdet/fightdet.hpp"

namespace fs = std::filesystem;
using namespace fightdet;

namespace {

struct CommonModelFlags {
    std::string backbone = "toy-8x8";
    std::string classifier = "bilstm_attn";
    int frames = 10;
    int epochs = 20;
    int batch = 0; // 0 = per-backbone default
    std::uint64_t seed = 0;
    double lr = 1e-3;
    std::string optimizer = "adam";
    int hidden = 128;
    double dropout = 0.5;
    double split = 0.8;
    std::uint64_t toy_seed = kToyDefaultSeed;
    std::string normalize = "none";
    int fight_cnn_dim = 1024;
    int toy_dim = 64;
};

void add_backbone_flag(CLI::App* cmd, CommonModelFlags& f) {
    cmd->add_option("--backbone", f.backbone, "Feature backbone")
        ->check(CLI::IsMember({"vgg16-fc2", "xception-gap", "fight-cnn-fc1", "toy-8x8"}));
}

void add_feature_flags(CLI::App* cmd, CommonModelFlags& f) {
    cmd->add_option("--toy-seed", f.toy_seed, "Projection seed of the toy extractor");
    cmd->add_option("--normalize", f.normalize, "Feature normalization")
        ->check(CLI::IsMember({"none", "l2"}));
    cmd->add_option("--fight-cnn-dim", f.fight_cnn_dim, "fight-cnn-fc1 feature width")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--toy-dim", f.toy_dim, "toy-8x8 feature width")->check(CLI::PositiveNumber);
}

void add_training_flags(CLI::App* cmd, CommonModelFlags& f) {
    cmd->add_option("--epochs", f.epochs, "Training epochs")->check(CLI::PositiveNumber);
    cmd->add_option("--batch", f.batch, "Batch size (0 = per-backbone default)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", f.seed, "Run seed");
    cmd->add_option("--lr", f.lr, "Learning rate");
    cmd->add_option("--optimizer", f.optimizer, "Optimizer")
        ->check(CLI::IsMember({"adam", "sgd"}));
    cmd->add_option("--hidden", f.hidden, "LSTM hidden size")->check(CLI::PositiveNumber);
    cmd->add_option("--dropout", f.dropout, "Dropout rate");
    cmd->add_option("--split", f.split, "Training fraction of the 80/20 split");
    add_feature_flags(cmd, f);
}

TrainConfig to_train_config(const CommonModelFlags& f) {
    TrainConfig cfg;
    cfg.epochs = f.epochs;
    cfg.batch_size = f.batch;
    cfg.learning_rate = f.lr;
    cfg.optimizer = parse_optimizer(f.optimizer);
    cfg.seed = f.seed;
    cfg.split_fraction = f.split;
    cfg.frames = f.frames;
    return cfg;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out)
        throw FormatError("cannot write '" + path + "'");
    out << text;
    if (!out)
        throw FormatError("short write to '" + path + "'");
}

void cmd_sample(const std::string& in_dir, int frames, int size, const std::string& out_dir) {
    FrameSequence seq = load_frame_dir(in_dir);
    SampledClip clip = sample_clip(seq, frames);
    fs::create_directories(out_dir);
    int written = 0;
    for (std::size_t i = 0; i < clip.frames.size(); ++i) {
        Frame resized = bicubic_resize(clip.frames[i], size, size);
        char name[32];
        std::snprintf(name, sizeof name, "frame_%06d.ppm", clip.indices[i]);
        write_ppm(resized, (fs::path(out_dir) / name).string());
        ++written;
    }
    std::printf("frames_written\t%d\n", written);
}

void cmd_extract(const std::string& in_dir, const CommonModelFlags& f, const std::string& out) {
    SampledClip clip = sample_clip(load_frame_dir(in_dir), f.frames);
    FeatureSequence seq = toy_extract(clip, f.toy_dim, f.toy_seed);
    seq = feature_normalize(seq, parse_normalize_mode(f.normalize));
    write_features(seq, out);
    std::printf("features\t%d\t%d\n", seq.matrix.rows, seq.matrix.cols);
}

void cmd_import_features(const std::string& in, const CommonModelFlags& f, int frames_expect,
                         const std::string& out) {
    FeatureSequence seq = read_features(in);
    const BackboneSpec spec = find_backbone(f.backbone, f.fight_cnn_dim, f.toy_dim);
    if (seq.matrix.cols != spec.feature_dim)
        throw DataError("'" + in + "': feature dim " + std::to_string(seq.matrix.cols) +
                        " does not match " + spec.name + " dim " +
                        std::to_string(spec.feature_dim));
    if (frames_expect > 0 && seq.matrix.rows != frames_expect)
        throw DataError("'" + in + "': " + std::to_string(seq.matrix.rows) +
                        " frames, expected " + std::to_string(frames_expect));
    seq.backbone = spec.name;
    if (!out.empty()) {
        seq = feature_normalize(seq, parse_normalize_mode(f.normalize));
        write_features(seq, out);
    }
    std::printf("ok\t%d\t%d\n", seq.matrix.rows, seq.matrix.cols);
}

void cmd_train(const std::string& manifest_path, const CommonModelFlags& f,
               const std::string& out) {
    const BackboneSpec spec = find_backbone(f.backbone, f.fight_cnn_dim, f.toy_dim);
    TrainConfig cfg = to_train_config(f);
    if (cfg.batch_size == 0) cfg.batch_size = default_batch_size(spec.name);
    validate_train_config(cfg);

    DatasetManifest manifest = read_manifest(manifest_path);
    SplitResult split = split_dataset(manifest, cfg.split_fraction, cfg.seed);
    for (const auto& w : split.warnings) std::cerr << "warning: " << w << "\n";

    FeatureLoadOptions load;
    load.backbone = spec.name;
    load.frames = cfg.frames;
    load.dim = spec.feature_dim;
    load.toy_seed = f.toy_seed;
    load.normalize = parse_normalize_mode(f.normalize);

    LoadedDataset train_set = load_dataset(split.train, load);
    LoadedDataset test_set = load_dataset(split.test, load);

    ModelConfig model;
    model.variant = parse_variant(f.classifier);
    model.input_dim = spec.feature_dim;
    model.hidden_size = f.hidden;
    model.frames = cfg.frames;
    model.dropout_rate = f.dropout;
    model.seed = cfg.seed;

    TrainResult result = train_model(model, train_set, cfg);
    if (!out.empty()) save_checkpoint(out, model, result.params);

    MetricsReport train_report = evaluate_model(model, result.params, train_set);
    MetricsReport test_report = evaluate_model(model, result.params, test_set);
    std::printf("final_loss\t%.6f\n", result.loss_history.back());
    std::printf("train_accuracy\t%.6f\n", train_report.accuracy);
    std::printf("accuracy\t%.6f\n", test_report.accuracy);
}

void cmd_eval(const std::string& model_path, const std::string& manifest_path,
              const CommonModelFlags& f) {
    Checkpoint ckpt = load_checkpoint(model_path);
    DatasetManifest manifest = read_manifest(manifest_path);
    FeatureLoadOptions load;
    load.backbone = "toy-8x8"; // directory sources always go through the toy extractor
    load.frames = ckpt.config.frames;
    load.dim = ckpt.config.input_dim;
    load.toy_seed = f.toy_seed;
    load.normalize = parse_normalize_mode(f.normalize);

    LoadedDataset data = load_dataset(manifest, load);
    MetricsReport report = evaluate_model(ckpt.config, ckpt.params, data);
    std::printf("accuracy\t%.6f\n", report.accuracy);
    std::printf("confusion\t%lld\t%lld\t%lld\t%lld\n", (long long)report.confusion[0][0],
                (long long)report.confusion[0][1], (long long)report.confusion[1][0],
                (long long)report.confusion[1][1]);
}

void cmd_grid(const std::string& manifest_path, const std::vector<std::string>& backbones,
              const std::vector<std::string>& classifiers, const std::vector<int>& frames,
              const CommonModelFlags& f, const std::string& out, bool text) {
    GridSpec grid;
    grid.backbones = backbones;
    for (const auto& c : classifiers) grid.classifiers.push_back(parse_variant(c));
    grid.frame_counts = frames;
    validate_grid(grid);

    GridOptions opt;
    opt.hidden_size = f.hidden;
    opt.dropout_rate = f.dropout;
    opt.toy_seed = f.toy_seed;
    opt.normalize = parse_normalize_mode(f.normalize);
    opt.fight_cnn_dim = f.fight_cnn_dim;
    opt.toy_dim = f.toy_dim;

    DatasetManifest manifest = read_manifest(manifest_path);
    std::vector<std::string> warnings;
    ResultTable table = run_grid(grid, manifest, to_train_config(f), opt, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

    const std::string tsv = emit_table_tsv(table);
    std::fputs(tsv.c_str(), stdout);
    if (text) std::fputs(render_table_text(table).c_str(), stderr);
    if (!out.empty()) write_text_file(out, tsv);
}

void cmd_predict(const std::string& model_path, const std::string& input,
                 const CommonModelFlags& f) {
    Checkpoint ckpt = load_checkpoint(model_path);
    FeatureSequence seq;
    if (input.size() > 5 && input.substr(input.size() - 5) == ".fvs1") {
        seq = read_features(input);
    } else {
        SampledClip clip = sample_clip(load_frame_dir(input), ckpt.config.frames);
        seq = toy_extract(clip, ckpt.config.input_dim, f.toy_seed);
    }
    seq = feature_normalize(seq, parse_normalize_mode(f.normalize));
    Tensor2 prob = model_forward(seq.matrix, ckpt.config, ckpt.params);
    const int pred = predict_class(prob);
    std::printf("%s\t%.6f\n", index_to_label(pred), double(prob(0, pred)));
}

void cmd_cut(const std::string& in_dir, double fps, double start, double duration,
             const std::string& out_dir) {
    FrameSequence seq = load_frame_dir(in_dir);
    seq.fps = fps;
    FrameSequence cut = cut_clip(seq, start, duration);
    fs::create_directories(out_dir);
    for (std::size_t i = 0; i < cut.frames.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%06zu.ppm", i);
        write_ppm(cut.frames[i], (fs::path(out_dir) / name).string());
    }
    std::printf("frames_written\t%zu\n", cut.frames.size());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fight detection from sampled video frames"};
    app.require_subcommand(1);
    app.set_config("--config");

    // sample
    auto* sample = app.add_subcommand("sample", "Uniformly sample and resize frames");
    std::string sample_in, sample_out;
    int sample_frames = 10, sample_size = 0;
    sample->add_option("--in", sample_in, "Input frame directory")->required();
    sample->add_option("--frames", sample_frames, "Frames to keep")
        ->check(CLI::IsMember({5, 10}));
    sample->add_option("--size", sample_size, "Square output size")
        ->required()
        ->check(CLI::PositiveNumber);
    sample->add_option("--out", sample_out, "Output directory")->required();

    // extract
    auto* extract = app.add_subcommand("extract", "Toy-extract features from a frame directory");
    std::string extract_in, extract_out;
    CommonModelFlags extract_flags;
    extract->add_option("--in", extract_in, "Input frame directory")->required();
    extract->add_option("--frames", extract_flags.frames, "Frames to keep")
        ->check(CLI::IsMember({5, 10}));
    add_feature_flags(extract, extract_flags);
    extract->add_option("--out", extract_out, "Output .fvs1 path")->required();

    // import-features
    auto* import_cmd = app.add_subcommand("import-features", "Validate externally computed FVS1 features");
    std::string import_in, import_out;
    int import_frames = 0;
    CommonModelFlags import_flags;
    import_cmd->add_option("--in", import_in, "Input .fvs1 path")->required();
    import_cmd->add_option("--expect-frames", import_frames, "Require this frame count");
    add_backbone_flag(import_cmd, import_flags);
    add_feature_flags(import_cmd, import_flags);
    import_cmd->add_option("--out", import_out, "Validated copy destination");

    // train
    auto* train = app.add_subcommand("train", "Train a classifier on a manifest");
    std::string train_manifest, train_out;
    CommonModelFlags train_flags;
    train->add_option("--manifest", train_manifest, "Dataset manifest TSV")->required();
    add_backbone_flag(train, train_flags);
    train->add_option("--classifier", train_flags.classifier, "Classifier variant")
        ->check(CLI::IsMember({"lstm", "bilstm", "bilstm_attn"}));
    train->add_option("--frames", train_flags.frames, "Frames per clip")
        ->check(CLI::IsMember({5, 10}));
    add_training_flags(train, train_flags);
    train->add_option("--out", train_out, "Checkpoint destination (.fmd1)");

    // eval
    auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on a manifest");
    std::string eval_model, eval_manifest;
    CommonModelFlags eval_flags;
    eval->add_option("--model", eval_model, "Checkpoint (.fmd1)")->required();
    eval->add_option("--manifest", eval_manifest, "Dataset manifest TSV")->required();
    eval->add_option("--toy-seed", eval_flags.toy_seed, "Projection seed of the toy extractor");
    eval->add_option("--normalize", eval_flags.normalize, "Feature normalization")
        ->check(CLI::IsMember({"none", "l2"}));

    // grid
    auto* grid = app.add_subcommand("grid", "Run the experiment grid");
    std::string grid_manifest, grid_out;
    std::vector<std::string> grid_backbones{"toy-8x8"};
    std::vector<std::string> grid_classifiers{"lstm", "bilstm", "bilstm_attn"};
    std::vector<int> grid_frames{10, 5};
    bool grid_text = false;
    CommonModelFlags grid_flags;
    grid->add_option("--manifest", grid_manifest, "Dataset manifest TSV")->required();
    grid->add_option("--backbones", grid_backbones, "Backbone axis")->delimiter(',');
    grid->add_option("--classifiers", grid_classifiers, "Classifier axis")->delimiter(',');
    grid->add_option("--grid-frames", grid_frames, "Frame-count axis")->delimiter(',');
    add_training_flags(grid, grid_flags);
    grid->add_option("--out", grid_out, "Write the TSV table here too");
    grid->add_flag("--text", grid_text, "Also render an aligned table to stderr");

    // predict
    auto* predict = app.add_subcommand("predict", "Classify one clip or feature file");
    std::string predict_model, predict_in;
    CommonModelFlags predict_flags;
    predict->add_option("--model", predict_model, "Checkpoint (.fmd1)")->required();
    predict->add_option("--in", predict_in, "Frame directory or .fvs1 file")->required();
    predict->add_option("--toy-seed", predict_flags.toy_seed,
                        "Projection seed of the toy extractor");
    predict->add_option("--normalize", predict_flags.normalize, "Feature normalization")
        ->check(CLI::IsMember({"none", "l2"}));

    // cut
    auto* cut = app.add_subcommand("cut", "Cut a 2-second clip from a frame directory");
    std::string cut_in, cut_out;
    double cut_fps = 0.0, cut_start = 0.0, cut_duration = 2.0;
    cut->add_option("--in", cut_in, "Input frame directory")->required();
    cut->add_option("--fps", cut_fps, "Source frame rate")->required()->check(CLI::PositiveNumber);
    cut->add_option("--start", cut_start, "Cut start in seconds");
    cut->add_option("--duration", cut_duration, "Cut length in seconds");
    cut->add_option("--out", cut_out, "Output directory")->required();

    try {
        app.parse(argc, argv);
        if (sample->parsed())
            cmd_sample(sample_in, sample_frames, sample_size, sample_out);
        else if (extract->parsed())
            cmd_extract(extract_in, extract_flags, extract_out);
        else if (import_cmd->parsed())
            cmd_import_features(import_in, import_flags, import_frames, import_out);
        else if (train->parsed())
            cmd_train(train_manifest, train_flags, train_out);
        else if (eval->parsed())
            cmd_eval(eval_model, eval_manifest, eval_flags);
        else if (grid->parsed())
            cmd_grid(grid_manifest, grid_backbones, grid_classifiers, grid_frames, grid_flags,
                     grid_out, grid_text);
        else if (predict->parsed())
            cmd_predict(predict_model, predict_in, predict_flags);
        else if (cut->parsed())
            cmd_cut(cut_in, cut_fps, cut_start, cut_duration, cut_out);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ParamError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
