#pragma once

#include <vector>

#include "fightdet/param_store.hpp"

namespace fightdet {

// One LSTM cell: input weights W_* (d x h), recurrent weights U_* (h x h),
// biases b_* (1 x h), gate order i, f, o, g. Parameters live in a
// ParamStore under a prefix; the views below are bound per call.

template <typename Real>
struct LstmCellView {
    const MatT<Real>*Wi, *Wf, *Wo, *Wg;
    const MatT<Real>*Ui, *Uf, *Uo, *Ug;
    const MatT<Real>*bi, *bf, *bo, *bg;

    int input_dim() const { return Wi->rows; }
    int hidden_size() const { return Wi->cols; }
};

template <typename Real>
struct LstmCellGrads {
    MatT<Real>*Wi, *Wf, *Wo, *Wg;
    MatT<Real>*Ui, *Uf, *Uo, *Ug;
    MatT<Real>*bi, *bf, *bo, *bg;
};

template <typename Real>
LstmCellView<Real> bind_cell(const ParamStoreT<Real>& ps, const std::string& prefix) {
    if (prefix == "lstm_fwd") // avoids string building on the hot path
        return {&ps.value("lstm_fwd.Wi"), &ps.value("lstm_fwd.Wf"), &ps.value("lstm_fwd.Wo"),
                &ps.value("lstm_fwd.Wg"), &ps.value("lstm_fwd.Ui"), &ps.value("lstm_fwd.Uf"),
                &ps.value("lstm_fwd.Uo"), &ps.value("lstm_fwd.Ug"), &ps.value("lstm_fwd.bi"),
                &ps.value("lstm_fwd.bf"), &ps.value("lstm_fwd.bo"), &ps.value("lstm_fwd.bg")};
    if (prefix == "lstm_bwd")
        return {&ps.value("lstm_bwd.Wi"), &ps.value("lstm_bwd.Wf"), &ps.value("lstm_bwd.Wo"),
                &ps.value("lstm_bwd.Wg"), &ps.value("lstm_bwd.Ui"), &ps.value("lstm_bwd.Uf"),
                &ps.value("lstm_bwd.Uo"), &ps.value("lstm_bwd.Ug"), &ps.value("lstm_bwd.bi"),
                &ps.value("lstm_bwd.bf"), &ps.value("lstm_bwd.bo"), &ps.value("lstm_bwd.bg")};
    return {&ps.value(prefix + ".Wi"), &ps.value(prefix + ".Wf"), &ps.value(prefix + ".Wo"),
            &ps.value(prefix + ".Wg"), &ps.value(prefix + ".Ui"), &ps.value(prefix + ".Uf"),
            &ps.value(prefix + ".Uo"), &ps.value(prefix + ".Ug"), &ps.value(prefix + ".bi"),
            &ps.value(prefix + ".bf"), &ps.value(prefix + ".bo"), &ps.value(prefix + ".bg")};
}

template <typename Real>
LstmCellGrads<Real> bind_cell_grads(ParamStoreT<Real>& ps, const std::string& prefix) {
    return {&ps.grad(prefix + ".Wi"), &ps.grad(prefix + ".Wf"), &ps.grad(prefix + ".Wo"),
            &ps.grad(prefix + ".Wg"), &ps.grad(prefix + ".Ui"), &ps.grad(prefix + ".Uf"),
            &ps.grad(prefix + ".Uo"), &ps.grad(prefix + ".Ug"), &ps.grad(prefix + ".bi"),
            &ps.grad(prefix + ".bf"), &ps.grad(prefix + ".bo"), &ps.grad(prefix + ".bg")};
}

// Everything the backward pass needs from one timestep.
template <typename Real>
struct LstmStepCache {
    MatT<Real> x, h_prev, c_prev;
    MatT<Real> i, f, o, g, c, tanh_c;
};

template <typename Real>
struct LstmState {
    MatT<Real> h, c;
};

namespace detail {

template <typename Real>
void check_cell_shapes(const MatT<Real>& x, const MatT<Real>& h_prev, const MatT<Real>& c_prev,
                       const LstmCellView<Real>& p) {
    if (x.rows != 1 || x.cols != p.input_dim())
        throw DimensionError("lstm cell: input " + x.shape_str() + " vs weights " +
                             p.Wi->shape_str());
    if (h_prev.cols != p.hidden_size() || c_prev.cols != p.hidden_size())
        throw DimensionError("lstm cell: state " + h_prev.shape_str() + " vs hidden size " +
                             std::to_string(p.hidden_size()));
}

} // namespace detail

namespace detail {

// z = x W + h U + b fused into one 64-bit accumulation buffer.
template <typename Real>
void gate_preact(const Real* x, int d, const Real* h, int hs, const MatT<Real>& W,
                 const MatT<Real>& U, const MatT<Real>& b, std::vector<double>& acc) {
    const int n = W.cols;
    for (int j = 0; j < n; ++j) acc[std::size_t(j)] = double(b.v[std::size_t(j)]);
    for (int k = 0; k < d; ++k) detail::axpy_acc(acc.data(), W.row(k), double(x[k]), n);
    for (int k = 0; k < hs; ++k) detail::axpy_acc(acc.data(), U.row(k), double(h[k]), n);
}

// One timestep on raw rows; writes h and c in place.
template <typename Real>
void lstm_step(const Real* x, const LstmCellView<Real>& p, MatT<Real>& h_state,
               MatT<Real>& c_state, LstmStepCache<Real>* cache) {
    const int d = p.input_dim();
    const int h = p.hidden_size();
    const std::size_t uh = std::size_t(h);
    thread_local std::vector<double> zi, zf, zo, zg;
    zi.assign(uh, 0.0);
    zf.assign(uh, 0.0);
    zo.assign(uh, 0.0);
    zg.assign(uh, 0.0);
    const Real* hp = h_state.row(0);
    gate_preact(x, d, hp, h, *p.Wi, *p.Ui, *p.bi, zi);
    gate_preact(x, d, hp, h, *p.Wf, *p.Uf, *p.bf, zf);
    gate_preact(x, d, hp, h, *p.Wo, *p.Uo, *p.bo, zo);
    gate_preact(x, d, hp, h, *p.Wg, *p.Ug, *p.bg, zg);

    if (cache) {
        cache->x = MatT<Real>(1, d);
        std::copy(x, x + d, cache->x.v.begin());
        cache->h_prev = h_state;
        cache->c_prev = c_state;
        cache->i = MatT<Real>(1, h);
        cache->f = MatT<Real>(1, h);
        cache->o = MatT<Real>(1, h);
        cache->g = MatT<Real>(1, h);
        cache->c = MatT<Real>(1, h);
        cache->tanh_c = MatT<Real>(1, h);
    }
    for (int j = 0; j < h; ++j) {
        const Real gi = Real(1.0 / (1.0 + std::exp(-zi[std::size_t(j)])));
        const Real gf = Real(1.0 / (1.0 + std::exp(-zf[std::size_t(j)])));
        const Real go = Real(1.0 / (1.0 + std::exp(-zo[std::size_t(j)])));
        const Real gg = Real(std::tanh(zg[std::size_t(j)]));
        const Real c = gf * c_state(0, j) + gi * gg;
        const Real tc = Real(std::tanh(double(c)));
        if (cache) {
            cache->i(0, j) = gi;
            cache->f(0, j) = gf;
            cache->o(0, j) = go;
            cache->g(0, j) = gg;
            cache->c(0, j) = c;
            cache->tanh_c(0, j) = tc;
        }
        c_state(0, j) = c;
        h_state(0, j) = go * tc;
    }
}

} // namespace detail

// i = sig(xWi + hUi + bi), f = sig(xWf + hUf + bf), o = sig(xWo + hUo + bo),
// g = tanh(xWg + hUg + bg); c = f.c_prev + i.g; h = o.tanh(c)
template <typename Real>
LstmState<Real> lstm_cell_forward(const MatT<Real>& x, const MatT<Real>& h_prev,
                                  const MatT<Real>& c_prev, const LstmCellView<Real>& p,
                                  LstmStepCache<Real>* cache = nullptr) {
    detail::check_cell_shapes(x, h_prev, c_prev, p);
    MatT<Real> h = h_prev;
    MatT<Real> c = c_prev;
    detail::lstm_step(x.row(0), p, h, c, cache);
    return {std::move(h), std::move(c)};
}

// Runs the cell over the rows of X from a zero initial state and returns the
// final hidden state (1 x h). Fills per-step caches when given.
template <typename Real>
MatT<Real> lstm_forward(const MatT<Real>& X, const LstmCellView<Real>& p,
                        std::vector<LstmStepCache<Real>>* caches = nullptr) {
    if (X.rows < 1)
        throw DimensionError("lstm_forward: empty sequence");
    if (X.cols != p.input_dim())
        throw DimensionError("lstm_forward: input " + X.shape_str() + " vs weights " +
                             p.Wi->shape_str());
    const int h = p.hidden_size();
    MatT<Real> hs(1, h), cs(1, h);
    if (caches) caches->resize(std::size_t(X.rows));
    for (int t = 0; t < X.rows; ++t)
        detail::lstm_step(X.row(t), p, hs, cs, caches ? &(*caches)[std::size_t(t)] : nullptr);
    return hs;
}

// BPTT over cached steps. dh_final is dL/d(final h). Gradients are added
// into g. Returns dL/dX (k x d).
template <typename Real>
MatT<Real> lstm_backward(const std::vector<LstmStepCache<Real>>& steps,
                         const LstmCellView<Real>& p, const LstmCellGrads<Real>& g,
                         const MatT<Real>& dh_final) {
    const int k = int(steps.size());
    const int h = p.hidden_size();
    const int d = p.input_dim();
    MatT<Real> dX(k, d);
    MatT<Real> dh = dh_final;
    MatT<Real> dc(1, h);

    auto accumulate = [](MatT<Real>& dst, const MatT<Real>& src) {
        for (std::size_t i = 0; i < dst.size(); ++i) dst.v[i] += src.v[i];
    };

    for (int t = k - 1; t >= 0; --t) {
        const auto& s = steps[std::size_t(t)];
        // h = o . tanh(c)
        MatT<Real> do_pre(1, h), di_pre(1, h), df_pre(1, h), dg_pre(1, h);
        for (int j = 0; j < h; ++j) {
            const Real dhj = dh(0, j);
            const Real o = s.o(0, j), i = s.i(0, j), f = s.f(0, j), gg = s.g(0, j);
            const Real tc = s.tanh_c(0, j);
            do_pre(0, j) = dhj * tc * o * (Real(1) - o);
            const Real dcj = dc(0, j) + dhj * o * (Real(1) - tc * tc);
            df_pre(0, j) = dcj * s.c_prev(0, j) * f * (Real(1) - f);
            di_pre(0, j) = dcj * gg * i * (Real(1) - i);
            dg_pre(0, j) = dcj * i * (Real(1) - gg * gg);
            dc(0, j) = dcj * f; // flows to c_prev
        }

        MatT<Real> xT = transpose(s.x);
        MatT<Real> hT = transpose(s.h_prev);
        accumulate(*g.Wi, matmul(xT, di_pre));
        accumulate(*g.Wf, matmul(xT, df_pre));
        accumulate(*g.Wo, matmul(xT, do_pre));
        accumulate(*g.Wg, matmul(xT, dg_pre));
        accumulate(*g.Ui, matmul(hT, di_pre));
        accumulate(*g.Uf, matmul(hT, df_pre));
        accumulate(*g.Uo, matmul(hT, do_pre));
        accumulate(*g.Ug, matmul(hT, dg_pre));
        accumulate(*g.bi, di_pre);
        accumulate(*g.bf, df_pre);
        accumulate(*g.bo, do_pre);
        accumulate(*g.bg, dg_pre);

        MatT<Real> dx = matmul(di_pre, transpose(*p.Wi));
        accumulate(dx, matmul(df_pre, transpose(*p.Wf)));
        accumulate(dx, matmul(do_pre, transpose(*p.Wo)));
        accumulate(dx, matmul(dg_pre, transpose(*p.Wg)));
        std::copy(dx.v.begin(), dx.v.end(), dX.row(t));

        dh = matmul(di_pre, transpose(*p.Ui));
        accumulate(dh, matmul(df_pre, transpose(*p.Uf)));
        accumulate(dh, matmul(do_pre, transpose(*p.Uo)));
        accumulate(dh, matmul(dg_pre, transpose(*p.Ug)));
    }
    return dX;
}

// Forward pass on X concatenated with a forward pass on row-reversed X;
// endpoint states joined as [h_fwd | h_bwd] (1 x 2h).
template <typename Real>
MatT<Real> bilstm_forward(const MatT<Real>& X, const LstmCellView<Real>& fwd,
                          const LstmCellView<Real>& bwd,
                          std::vector<LstmStepCache<Real>>* fwd_caches = nullptr,
                          std::vector<LstmStepCache<Real>>* bwd_caches = nullptr) {
    if (fwd.hidden_size() != bwd.hidden_size())
        throw DimensionError("bilstm: hidden sizes differ, " +
                             std::to_string(fwd.hidden_size()) + " vs " +
                             std::to_string(bwd.hidden_size()));
    MatT<Real> hf = lstm_forward(X, fwd, fwd_caches);
    MatT<Real> hb = lstm_forward(reverse_rows(X), bwd, bwd_caches);
    return concat_cols(hf, hb);
}

} // namespace fightdet
