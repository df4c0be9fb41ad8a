#pragma once

#include <cmath>

#include "fightdet/param_store.hpp"

namespace fightdet {

// Single-head scaled dot-product self-attention over the frame sequence:
// Q = XWq, K = XWk, V = XWv, A = softmax_row(QK^T / sqrt(d)), out = A V.
// No residual connection, no positional encoding.

template <typename Real>
struct AttentionView {
    const MatT<Real>*Wq, *Wk, *Wv;
    int dim() const { return Wq->rows; }
};

template <typename Real>
AttentionView<Real> bind_attention(const ParamStoreT<Real>& ps) {
    return {&ps.value("attn.Wq"), &ps.value("attn.Wk"), &ps.value("attn.Wv")};
}

template <typename Real>
struct AttentionCache {
    MatT<Real> Q, K, V, A, out;
};

template <typename Real>
MatT<Real> self_attention(const MatT<Real>& X, const AttentionView<Real>& p,
                          AttentionCache<Real>* cache = nullptr) {
    if (X.cols != p.dim())
        throw DimensionError("self_attention: input " + X.shape_str() + " vs weights " +
                             p.Wq->shape_str());
    MatT<Real> Q = matmul(X, *p.Wq);
    MatT<Real> K = matmul(X, *p.Wk);
    MatT<Real> V = matmul(X, *p.Wv);
    // S = Q K^T / sqrt(d), dotting rows directly
    const int k = X.rows, d = X.cols;
    const double inv_sqrt_d = 1.0 / std::sqrt(double(d));
    MatT<Real> S(k, k);
    for (int i = 0; i < k; ++i) {
        const Real* qi = Q.row(i);
        for (int j = 0; j < k; ++j) {
            const Real* kj = K.row(j);
            double acc = 0.0;
            for (int c = 0; c < d; ++c) acc += double(qi[c]) * double(kj[c]);
            S(i, j) = Real(acc * inv_sqrt_d);
        }
    }
    MatT<Real> A = softmax_row(S);
    MatT<Real> out = matmul(A, V);
    if (cache) {
        cache->Q = std::move(Q);
        cache->K = std::move(K);
        cache->V = std::move(V);
        cache->A = A;
        cache->out = out;
    }
    return out;
}

// Row-stochastic attention matrix alone (for inspection and tests).
template <typename Real>
MatT<Real> self_attention_weights(const MatT<Real>& X, const AttentionView<Real>& p) {
    AttentionCache<Real> cache;
    self_attention(X, p, &cache);
    return cache.A;
}

// Adds dWq/dWk/dWv into the store grads and returns dL/dX.
template <typename Real>
MatT<Real> attention_backward(const AttentionCache<Real>& cache, const MatT<Real>& X,
                              const AttentionView<Real>& p, ParamStoreT<Real>& ps,
                              const MatT<Real>& d_out) {
    const Real inv_sqrt_d = Real(1.0 / std::sqrt(double(X.cols)));

    MatT<Real> dV = matmul(transpose(cache.A), d_out);
    MatT<Real> dA = matmul(d_out, transpose(cache.V));

    // softmax rows: dS_i = A_i . (dA_i - <dA_i, A_i>)
    MatT<Real> dS(dA.rows, dA.cols);
    for (int i = 0; i < dA.rows; ++i) {
        Real dot = Real(0);
        for (int j = 0; j < dA.cols; ++j) dot += dA(i, j) * cache.A(i, j);
        for (int j = 0; j < dA.cols; ++j) dS(i, j) = cache.A(i, j) * (dA(i, j) - dot);
    }
    for (auto& s : dS.v) s *= inv_sqrt_d;

    MatT<Real> dQ = matmul(dS, cache.K);
    MatT<Real> dK = matmul(transpose(dS), cache.Q);

    MatT<Real> xT = transpose(X);
    auto accumulate = [](MatT<Real>& dst, const MatT<Real>& src) {
        for (std::size_t i = 0; i < dst.size(); ++i) dst.v[i] += src.v[i];
    };
    accumulate(ps.grad("attn.Wq"), matmul(xT, dQ));
    accumulate(ps.grad("attn.Wk"), matmul(xT, dK));
    accumulate(ps.grad("attn.Wv"), matmul(xT, dV));

    MatT<Real> dX = matmul(dQ, transpose(*p.Wq));
    accumulate(dX, matmul(dK, transpose(*p.Wk)));
    accumulate(dX, matmul(dV, transpose(*p.Wv)));
    return dX;
}

} // namespace fightdet
