#pragma once

#include "fightdet/attention.hpp"
#include "fightdet/head.hpp"
#include "fightdet/lstm.hpp"

namespace fightdet {

enum class Variant { lstm, bilstm, bilstm_attn };

inline const char* variant_name(Variant v) {
    switch (v) {
        case Variant::lstm: return "lstm";
        case Variant::bilstm: return "bilstm";
        case Variant::bilstm_attn: return "bilstm_attn";
    }
    return "?";
}

inline Variant parse_variant(const std::string& s) {
    if (s == "lstm") return Variant::lstm;
    if (s == "bilstm") return Variant::bilstm;
    if (s == "bilstm_attn") return Variant::bilstm_attn;
    throw ConfigError("unknown classifier variant '" + s + "'");
}

struct ModelConfig {
    Variant variant = Variant::bilstm_attn;
    int input_dim = 0;
    int hidden_size = 128;
    int frames = 10;
    double dropout_rate = 0.5;
    std::uint64_t seed = 0;
};

inline void validate_config(const ModelConfig& cfg) {
    if (cfg.input_dim < 1 || cfg.hidden_size < 1 || cfg.frames < 1)
        throw ConfigError("model config: dims and frame count must be >= 1");
    if (cfg.dropout_rate < 0.0 || cfg.dropout_rate >= 1.0)
        throw ConfigError("model config: dropout rate must be in [0,1)");
}

inline bool has_attention(Variant v) { return v == Variant::bilstm_attn; }
inline bool has_backward_cell(Variant v) {
    return v == Variant::bilstm || v == Variant::bilstm_attn;
}
inline int head_input_dim(const ModelConfig& cfg) {
    return has_backward_cell(cfg.variant) ? 2 * cfg.hidden_size : cfg.hidden_size;
}

namespace detail {

template <typename Real>
void insert_cell_params(ParamStoreT<Real>& ps, const std::string& prefix, int d, int h,
                        SeededRng& rng) {
    for (const char* gate : {"Wi", "Wf", "Wo", "Wg"})
        ps.insert(prefix + "." + gate, glorot_init<Real>(d, h, rng));
    for (const char* gate : {"Ui", "Uf", "Uo", "Ug"})
        ps.insert(prefix + "." + gate, glorot_init<Real>(h, h, rng));
    for (const char* gate : {"bi", "bf", "bo", "bg"})
        ps.insert(prefix + "." + gate, MatT<Real>(1, h));
}

} // namespace detail

// Glorot weights, zero biases, drawn in insertion order from the config
// seed. The store holds exactly the entries the variant uses.
template <typename Real>
ParamStoreT<Real> init_params(const ModelConfig& cfg) {
    validate_config(cfg);
    SeededRng rng(cfg.seed);
    ParamStoreT<Real> ps;
    if (has_attention(cfg.variant))
        for (const char* w : {"Wq", "Wk", "Wv"})
            ps.insert(std::string("attn.") + w,
                      glorot_init<Real>(cfg.input_dim, cfg.input_dim, rng));
    detail::insert_cell_params(ps, "lstm_fwd", cfg.input_dim, cfg.hidden_size, rng);
    if (has_backward_cell(cfg.variant))
        detail::insert_cell_params(ps, "lstm_bwd", cfg.input_dim, cfg.hidden_size, rng);
    ps.insert("head.W1", glorot_init<Real>(head_input_dim(cfg), kHeadDense1, rng));
    ps.insert("head.b1", MatT<Real>(1, kHeadDense1));
    ps.insert("head.W2", glorot_init<Real>(kHeadDense1, kHeadDense2, rng));
    ps.insert("head.b2", MatT<Real>(1, kHeadDense2));
    ps.insert("head.W3", glorot_init<Real>(kHeadDense2, kNumClasses, rng));
    ps.insert("head.b3", MatT<Real>(1, kNumClasses));
    return ps;
}

// Exact-match check between a variant and a parameter set.
template <typename Real>
void validate_params(const ModelConfig& cfg, const ParamStoreT<Real>& ps) {
    ModelConfig ref = cfg;
    ParamStoreT<Real> expect = init_params<Real>(ref);
    if (expect.count() != ps.count())
        throw ConfigError(std::string("params do not match variant ") +
                          variant_name(cfg.variant) + ": expected " +
                          std::to_string(expect.count()) + " entries, got " +
                          std::to_string(ps.count()));
    for (std::size_t i = 0; i < ps.count(); ++i) {
        const auto& got = ps.entries()[i];
        const auto& want = expect.entries()[i];
        if (got.name != want.name || !got.value.same_shape(want.value))
            throw ConfigError("params do not match variant " +
                              std::string(variant_name(cfg.variant)) + " at entry '" +
                              got.name + "'");
    }
}

template <typename Real>
struct ModelCache {
    MatT<Real> input;
    AttentionCache<Real> attn;
    MatT<Real> attn_out;
    std::vector<LstmStepCache<Real>> fwd_steps, bwd_steps;
    MatT<Real> recur_out;  // pre-dropout summary vector
    MatT<Real> recur_mask; // dropout multipliers on the bilstm output
    HeadCache<Real> head;
};

// Forward pass: [attention ->] recurrent layer -> head. Returns the 1x2
// class probabilities. training enables the dropout placements (bilstm
// output and first head layer).
template <typename Real>
MatT<Real> model_forward(const MatT<Real>& X, const ModelConfig& cfg,
                         const ParamStoreT<Real>& ps, bool training = false,
                         SeededRng* rng = nullptr, ModelCache<Real>* cache = nullptr) {
    validate_config(cfg);
    if (X.rows != cfg.frames || X.cols != cfg.input_dim)
        throw DimensionError("model input " + X.shape_str() + " vs configured " +
                             std::to_string(cfg.frames) + "x" + std::to_string(cfg.input_dim));

    const MatT<Real>* recur_in = &X;
    MatT<Real> attn_out;
    if (has_attention(cfg.variant)) {
        attn_out = self_attention(X, bind_attention(ps), cache ? &cache->attn : nullptr);
        recur_in = &attn_out;
    }

    MatT<Real> summary;
    if (has_backward_cell(cfg.variant)) {
        summary = bilstm_forward(*recur_in, bind_cell(ps, "lstm_fwd"), bind_cell(ps, "lstm_bwd"),
                                 cache ? &cache->fwd_steps : nullptr,
                                 cache ? &cache->bwd_steps : nullptr);
    } else {
        summary = lstm_forward(*recur_in, bind_cell(ps, "lstm_fwd"),
                               cache ? &cache->fwd_steps : nullptr);
    }

    MatT<Real> mask(1, summary.cols);
    std::fill(mask.v.begin(), mask.v.end(), Real(1));
    if (has_backward_cell(cfg.variant) && training && cfg.dropout_rate > 0.0) {
        if (!rng)
            throw ParamError("model_forward: training-mode dropout needs an rng");
        const Real keep_scale = Real(1.0 / (1.0 - cfg.dropout_rate));
        for (auto& m : mask.v) m = rng->next_unit() < cfg.dropout_rate ? Real(0) : keep_scale;
    }
    MatT<Real> dropped = hadamard(summary, mask);

    MatT<Real> prob = head_forward(dropped, bind_head(ps), cfg.dropout_rate, rng, training,
                                   cache ? &cache->head : nullptr);
    if (cache) {
        cache->input = X;
        cache->attn_out = std::move(attn_out);
        cache->recur_out = std::move(summary);
        cache->recur_mask = std::move(mask);
    }
    return prob;
}

// Backward from a cached forward pass; adds parameter gradients into ps.
template <typename Real>
void model_backward_from_cache(const ModelCache<Real>& cache, const ModelConfig& cfg,
                               ParamStoreT<Real>& ps, const MatT<Real>& d_prob) {
    MatT<Real> d_summary = head_backward(cache.head, bind_head(ps), ps, d_prob);
    for (std::size_t i = 0; i < d_summary.size(); ++i) d_summary.v[i] *= cache.recur_mask.v[i];

    MatT<Real> d_recur_in;
    if (has_backward_cell(cfg.variant)) {
        const int h = cfg.hidden_size;
        MatT<Real> dh_f(1, h), dh_b(1, h);
        std::copy(d_summary.v.begin(), d_summary.v.begin() + h, dh_f.v.begin());
        std::copy(d_summary.v.begin() + h, d_summary.v.end(), dh_b.v.begin());
        MatT<Real> dX_f = lstm_backward(cache.fwd_steps, bind_cell(ps, "lstm_fwd"),
                                        bind_cell_grads(ps, "lstm_fwd"), dh_f);
        MatT<Real> dX_r = lstm_backward(cache.bwd_steps, bind_cell(ps, "lstm_bwd"),
                                        bind_cell_grads(ps, "lstm_bwd"), dh_b);
        d_recur_in = add(dX_f, reverse_rows(dX_r));
    } else {
        d_recur_in = lstm_backward(cache.fwd_steps, bind_cell(ps, "lstm_fwd"),
                                   bind_cell_grads(ps, "lstm_fwd"), d_summary);
    }
    if (has_attention(cfg.variant))
        attention_backward(cache.attn, cache.input, bind_attention(ps), ps, d_recur_in);
}

// Forward + backward for mse_loss(model_forward(X), target); gradients are
// added into ps (zero them first for a fresh gradient). Returns the loss.
template <typename Real>
Real model_backward(const MatT<Real>& X, const ModelConfig& cfg, ParamStoreT<Real>& ps,
                    const MatT<Real>& target, bool training = false,
                    SeededRng* rng = nullptr) {
    if (target.rows != 1 || target.cols != kNumClasses)
        throw DimensionError("model target " + target.shape_str() + " vs expected 1x" +
                             std::to_string(kNumClasses));
    ModelCache<Real> cache;
    MatT<Real> prob = model_forward(X, cfg, ps, training, rng, &cache);
    const Real loss = mse_loss(prob, target);
    // d mse / d p = 2 (p - y) / numel
    MatT<Real> d_prob(1, kNumClasses);
    for (int j = 0; j < kNumClasses; ++j)
        d_prob(0, j) = Real(2) * (prob(0, j) - target(0, j)) / Real(kNumClasses);
    model_backward_from_cache(cache, cfg, ps, d_prob);
    return loss;
}

} // namespace fightdet
