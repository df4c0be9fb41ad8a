#pragma once

#include "fightdet/param_store.hpp"

namespace fightdet {

// Dense classification head: 1024 -> relu -> dropout -> 50 -> sigmoid ->
// 2 -> softmax. The mid-stack sigmoid is intentional.

inline constexpr int kHeadDense1 = 1024;
inline constexpr int kHeadDense2 = 50;
inline constexpr int kNumClasses = 2;

template <typename Real>
struct HeadView {
    const MatT<Real>*W1, *b1, *W2, *b2, *W3, *b3;
    int input_dim() const { return W1->rows; }
};

template <typename Real>
HeadView<Real> bind_head(const ParamStoreT<Real>& ps) {
    return {&ps.value("head.W1"), &ps.value("head.b1"), &ps.value("head.W2"),
            &ps.value("head.b2"), &ps.value("head.W3"), &ps.value("head.b3")};
}

template <typename Real>
struct HeadCache {
    MatT<Real> v_in, z1, a1, mask, a1d, a2, prob;
};

// mask holds the dropout multiplier per unit (0 or 1/(1-rate)); it is all
// ones outside training.
template <typename Real>
MatT<Real> head_forward(const MatT<Real>& v, const HeadView<Real>& p, double dropout_rate,
                        SeededRng* rng, bool training, HeadCache<Real>* cache = nullptr) {
    if (v.rows != 1 || v.cols != p.input_dim())
        throw DimensionError("head: input " + v.shape_str() + " vs W1 " + p.W1->shape_str());
    if (dropout_rate < 0.0 || dropout_rate >= 1.0)
        throw ParamError("head: dropout rate must be in [0,1)");

    MatT<Real> z1 = row_affine(v, *p.W1, *p.b1);
    MatT<Real> a1;
    if (cache) {
        a1 = relu(z1);
    } else {
        a1 = std::move(z1);
        for (auto& x : a1.v) x = x > Real(0) ? x : Real(0);
    }

    const bool masked = training && dropout_rate > 0.0;
    MatT<Real> mask, a1d;
    const MatT<Real>* a1_used = &a1;
    if (masked) {
        if (!rng)
            throw ParamError("head: training-mode dropout needs an rng");
        mask = MatT<Real>(1, a1.cols);
        const Real keep_scale = Real(1.0 / (1.0 - dropout_rate));
        for (auto& m : mask.v) m = rng->next_unit() < dropout_rate ? Real(0) : keep_scale;
        a1d = hadamard(a1, mask);
        a1_used = &a1d;
    }

    MatT<Real> a2 = sigmoid(row_affine(*a1_used, *p.W2, *p.b2));
    MatT<Real> prob = softmax_row(row_affine(a2, *p.W3, *p.b3));
    if (cache) {
        if (!masked) {
            mask = MatT<Real>(1, a1.cols);
            std::fill(mask.v.begin(), mask.v.end(), Real(1));
            a1d = a1;
        }
        cache->v_in = v;
        cache->z1 = std::move(z1);
        cache->a1 = std::move(a1);
        cache->mask = std::move(mask);
        cache->a1d = std::move(a1d);
        cache->a2 = std::move(a2);
        cache->prob = prob;
    }
    return prob;
}

// d_prob is dL/d(softmax output). Adds head gradients into the store and
// returns dL/d(head input).
template <typename Real>
MatT<Real> head_backward(const HeadCache<Real>& cache, const HeadView<Real>& p,
                         ParamStoreT<Real>& ps, const MatT<Real>& d_prob) {
    auto accumulate = [](MatT<Real>& dst, const MatT<Real>& src) {
        for (std::size_t i = 0; i < dst.size(); ++i) dst.v[i] += src.v[i];
    };

    // softmax jacobian: dz_j = p_j (dp_j - sum_i dp_i p_i)
    MatT<Real> dz3(1, kNumClasses);
    Real dot = Real(0);
    for (int j = 0; j < kNumClasses; ++j) dot += d_prob(0, j) * cache.prob(0, j);
    for (int j = 0; j < kNumClasses; ++j)
        dz3(0, j) = cache.prob(0, j) * (d_prob(0, j) - dot);

    accumulate(ps.grad("head.W3"), matmul(transpose(cache.a2), dz3));
    accumulate(ps.grad("head.b3"), dz3);

    MatT<Real> da2 = matmul(dz3, transpose(*p.W3));
    MatT<Real> dz2(1, da2.cols);
    for (int j = 0; j < da2.cols; ++j) {
        const Real s = cache.a2(0, j);
        dz2(0, j) = da2(0, j) * s * (Real(1) - s);
    }
    accumulate(ps.grad("head.W2"), matmul(transpose(cache.a1d), dz2));
    accumulate(ps.grad("head.b2"), dz2);

    MatT<Real> da1d = matmul(dz2, transpose(*p.W2));
    MatT<Real> dz1(1, da1d.cols);
    for (int j = 0; j < da1d.cols; ++j) {
        const Real through_mask = da1d(0, j) * cache.mask(0, j);
        dz1(0, j) = cache.z1(0, j) > Real(0) ? through_mask : Real(0);
    }
    accumulate(ps.grad("head.W1"), matmul(transpose(cache.v_in), dz1));
    accumulate(ps.grad("head.b1"), dz1);

    return matmul(dz1, transpose(*p.W1));
}

} // namespace fightdet
