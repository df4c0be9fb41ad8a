#pragma once

#include <filesystem>
#include <numeric>

#include "fightdet/feature_io.hpp"
#include "fightdet/manifest.hpp"
#include "fightdet/model.hpp"
#include "fightdet/ppm.hpp"
#include "fightdet/toy_extractor.hpp"

namespace fightdet {

enum class Optimizer { sgd, adam };

inline Optimizer parse_optimizer(const std::string& s) {
    if (s == "sgd") return Optimizer::sgd;
    if (s == "adam") return Optimizer::adam;
    throw ParamError("unknown optimizer '" + s + "'");
}

// Defaults follow the experiment protocol: 20 epochs, 80/20 split, 10
// frames. batch_size 0 resolves per backbone (10 for fight-cnn-fc1
// features, 100 otherwise).
struct TrainConfig {
    int epochs = 20;
    int batch_size = 0;
    double learning_rate = 1e-3;
    Optimizer optimizer = Optimizer::adam;
    std::uint64_t seed = 0;
    double split_fraction = 0.8;
    int frames = 10;
};

inline int default_batch_size(const std::string& backbone) {
    return backbone == "fight-cnn-fc1" ? 10 : 100;
}

inline void validate_train_config(const TrainConfig& cfg) {
    if (cfg.epochs < 1)
        throw ConfigError("train config: epochs must be >= 1");
    if (cfg.batch_size < 0)
        throw ConfigError("train config: batch size must be >= 1 (or 0 for per-backbone default)");
    if (!(cfg.split_fraction > 0.0 && cfg.split_fraction < 1.0))
        throw ConfigError("train config: split fraction must be in (0,1)");
    if (cfg.frames != 5 && cfg.frames != 10)
        throw ConfigError("train config: frames must be 5 or 10");
}

struct SplitResult {
    DatasetManifest train;
    DatasetManifest test;
    std::vector<std::string> warnings;
};

// Stratified split: each class shuffled and cut at floor(fraction * n)
// independently; train and test are disjoint and exhaustive.
inline SplitResult split_dataset(const DatasetManifest& manifest, double fraction,
                                 std::uint64_t seed) {
    if (manifest.items.empty())
        throw DataError("split_dataset: empty manifest");
    if (!(fraction > 0.0 && fraction < 1.0))
        throw ParamError("split_dataset: fraction must be in (0,1)");
    SplitResult result;
    SeededRng rng(seed);
    for (const char* label : {"fight", "nonfight"}) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < manifest.items.size(); ++i)
            if (manifest.items[i].label == label) idx.push_back(i);
        if (idx.empty()) {
            result.warnings.push_back(std::string("class '") + label + "' has no samples");
            continue;
        }
        for (std::size_t i = idx.size() - 1; i > 0; --i)
            std::swap(idx[i], idx[std::size_t(rng.next_below(std::uint64_t(i + 1)))]);
        const std::size_t train_n = std::size_t(fraction * double(idx.size()));
        if (train_n == 0)
            result.warnings.push_back(std::string("class '") + label +
                                      "' has an empty training share; all samples go to test");
        for (std::size_t i = 0; i < idx.size(); ++i) {
            (i < train_n ? result.train : result.test).items.push_back(manifest.items[idx[i]]);
        }
    }
    return result;
}

// One classifier-ready sample: label index plus the k x d feature matrix.
struct Sample {
    std::string id;
    int label = 0;
    Tensor2 features;
};
using LoadedDataset = std::vector<Sample>;

struct FeatureLoadOptions {
    std::string backbone = "toy-8x8";
    int frames = 10;
    int dim = 64;
    std::uint64_t toy_seed = kToyDefaultSeed;
    NormalizeMode normalize = NormalizeMode::none;
};

// FVS1 sources are read and shape-checked; directory sources go through
// uniform sampling and the toy extractor (toy backbone only).
inline Sample load_sample(const ManifestItem& item, const FeatureLoadOptions& opt) {
    Sample s;
    s.id = item.id;
    s.label = label_to_index(item.label);
    FeatureSequence seq;
    if (item.source.size() > 5 && item.source.substr(item.source.size() - 5) == ".fvs1") {
        seq = read_features(item.source);
    } else if (std::filesystem::is_directory(item.source)) {
        if (opt.backbone != "toy-8x8")
            throw DataError("sample '" + item.id + "': frame-directory sources require the "
                            "toy-8x8 backbone; export FVS1 features for " + opt.backbone);
        SampledClip clip = sample_clip(load_frame_dir(item.source), opt.frames);
        seq = toy_extract(clip, opt.dim, opt.toy_seed);
    } else {
        throw DataError("sample '" + item.id + "': source '" + item.source +
                        "' is neither an .fvs1 file nor a frame directory");
    }
    seq = feature_normalize(seq, opt.normalize);
    if (seq.matrix.rows != opt.frames || seq.matrix.cols != opt.dim)
        throw DataError("sample '" + item.id + "': features are " + seq.matrix.shape_str() +
                        ", expected " + std::to_string(opt.frames) + "x" +
                        std::to_string(opt.dim));
    s.features = std::move(seq.matrix);
    return s;
}

inline LoadedDataset load_dataset(const DatasetManifest& manifest,
                                  const FeatureLoadOptions& opt) {
    LoadedDataset data;
    data.reserve(manifest.items.size());
    for (const auto& item : manifest.items) data.push_back(load_sample(item, opt));
    return data;
}

inline Tensor2 one_hot(int label) {
    Tensor2 t(1, kNumClasses);
    t(0, label) = 1.0f;
    return t;
}

// Adam moments / step counter, keyed by entry order.
struct OptimizerState {
    std::vector<Tensor2> m, v;
    std::int64_t step = 0;
};

inline void optimizer_step(ParamStore& params, OptimizerState& state, const TrainConfig& cfg) {
    const auto& entries = params.entries();
    if (cfg.optimizer == Optimizer::adam && state.m.empty()) {
        for (const auto& e : entries) {
            state.m.emplace_back(e.value.rows, e.value.cols);
            state.v.emplace_back(e.value.rows, e.value.cols);
        }
    }
    const float lr = float(cfg.learning_rate);
    if (cfg.optimizer == Optimizer::sgd) {
        for (auto& e : params.entries())
            for (std::size_t i = 0; i < e.value.size(); ++i) {
                e.value.v[i] -= lr * e.grad.v[i];
                if (!std::isfinite(e.value.v[i]))
                    throw NumericError("sgd update diverged in '" + e.name + "'");
            }
        return;
    }
    constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    ++state.step;
    const double bc1 = 1.0 - std::pow(beta1, double(state.step));
    const double bc2 = 1.0 - std::pow(beta2, double(state.step));
    for (std::size_t e = 0; e < entries.size(); ++e) {
        auto& entry = params.entries()[e];
        Tensor2& m = state.m[e];
        Tensor2& v = state.v[e];
        for (std::size_t i = 0; i < entry.value.size(); ++i) {
            const double g = double(entry.grad.v[i]);
            const double mn = beta1 * double(m.v[i]) + (1.0 - beta1) * g;
            const double vn = beta2 * double(v.v[i]) + (1.0 - beta2) * g * g;
            m.v[i] = float(mn);
            v.v[i] = float(vn);
            const double update =
                double(cfg.learning_rate) * (mn / bc1) / (std::sqrt(vn / bc2) + eps);
            entry.value.v[i] = float(double(entry.value.v[i]) - update);
            if (!std::isfinite(entry.value.v[i]))
                throw NumericError("adam update diverged in '" + entry.name + "'");
        }
    }
}

struct TrainResult {
    ParamStore params;
    std::vector<double> loss_history; // mean per-sample training loss per epoch
};

// Mini-batch training: per epoch, shuffle by seed, average per-sample
// gradients over each batch, apply one optimizer step. Deterministic for a
// fixed (dataset, config, seed).
inline TrainResult train_model(const ModelConfig& model_cfg, const LoadedDataset& train_set,
                               const TrainConfig& cfg) {
    validate_config(model_cfg);
    validate_train_config(cfg);
    if (train_set.empty())
        throw DataError("train_model: empty training set");
    for (const auto& s : train_set)
        if (s.features.rows != model_cfg.frames || s.features.cols != model_cfg.input_dim)
            throw DataError("sample '" + s.id + "': features are " + s.features.shape_str() +
                            ", expected " + std::to_string(model_cfg.frames) + "x" +
                            std::to_string(model_cfg.input_dim));
    const int batch = cfg.batch_size > 0 ? cfg.batch_size : 100;

    TrainResult result;
    result.params = init_params<float>(model_cfg);
    SeededRng rng = SeededRng(cfg.seed).split(1); // init stream stays untouched
    OptimizerState opt;

    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), std::size_t(0));

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = order.size() - 1; i > 0; --i)
            std::swap(order[i], order[std::size_t(rng.next_below(std::uint64_t(i + 1)))]);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += std::size_t(batch)) {
            const std::size_t end = std::min(order.size(), start + std::size_t(batch));
            result.params.zero_grads();
            for (std::size_t i = start; i < end; ++i) {
                const Sample& s = train_set[order[i]];
                const float loss = model_backward(s.features, model_cfg, result.params,
                                                  one_hot(s.label), true, &rng);
                if (!std::isfinite(loss))
                    throw NumericError("training diverged at epoch " + std::to_string(epoch) +
                                       " on sample '" + s.id + "'");
                epoch_loss += double(loss);
            }
            const float inv_batch = 1.0f / float(end - start);
            for (auto& e : result.params.entries())
                for (auto& g : e.grad.v) g *= inv_batch;
            optimizer_step(result.params, opt, cfg);
        }
        epoch_loss /= double(train_set.size());
        if (!std::isfinite(epoch_loss))
            throw NumericError("training diverged at epoch " + std::to_string(epoch));
        result.loss_history.push_back(epoch_loss);
    }
    return result;
}

struct MetricsReport {
    double accuracy = 0.0;
    std::int64_t confusion[2][2] = {{0, 0}, {0, 0}}; // [true][predicted]
    std::int64_t total = 0;
    std::vector<double> loss_history;

    std::int64_t trace() const { return confusion[0][0] + confusion[1][1]; }
};

// Exact probability ties resolve to class 0 (nonfight).
inline int predict_class(const Tensor2& prob) {
    return prob(0, 1) > prob(0, 0) ? 1 : 0;
}

inline MetricsReport evaluate_model(const ModelConfig& model_cfg, const ParamStore& params,
                                    const LoadedDataset& test_set) {
    MetricsReport report;
    for (const auto& s : test_set) {
        Tensor2 prob = model_forward(s.features, model_cfg, params);
        const int pred = predict_class(prob);
        ++report.confusion[s.label][pred];
        ++report.total;
    }
    report.accuracy = report.total == 0 ? 0.0 : double(report.trace()) / double(report.total);
    return report;
}

} // namespace fightdet
